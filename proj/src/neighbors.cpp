#include "bicvm/neighbors.hpp"

#include <algorithm>
#include <cmath>

#include "bicvm/error.hpp"

namespace bicvm {

double cosine_similarity(std::span<const double> a, std::span<const double> b) {
    if (a.size() != b.size()) throw ShapeError("cosine: length mismatch");
    double dot = 0.0, na = 0.0, nb = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) {
        dot += a[j] * b[j];
        na += a[j] * a[j];
        nb += b[j] * b[j];
    }
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot / (std::sqrt(na) * std::sqrt(nb));
}

std::vector<std::pair<WordId, double>> nearest_neighbors(std::span<const double> query,
                                                         const EmbeddingTable& table,
                                                         std::size_t top_k) {
    std::vector<std::pair<WordId, double>> scored;
    scored.reserve(table.rows());
    for (std::size_t id = 0; id < table.rows(); ++id) {
        scored.emplace_back(static_cast<WordId>(id),
                            cosine_similarity(query, table.row(static_cast<WordId>(id))));
    }
    const std::size_t k = std::min(top_k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + static_cast<std::ptrdiff_t>(k),
                      scored.end(), [](const auto& lhs, const auto& rhs) {
                          if (lhs.second != rhs.second) return lhs.second > rhs.second;
                          return lhs.first < rhs.first;
                      });
    scored.resize(k);
    return scored;
}

}  // namespace bicvm
