#pragma once

#include <span>
#include <utility>
#include <vector>

#include "bicvm/model.hpp"

namespace bicvm {

double cosine_similarity(std::span<const double> a, std::span<const double> b);

// Target-table rows ranked by cosine similarity to the query, descending,
// ties broken by word id.
std::vector<std::pair<WordId, double>> nearest_neighbors(std::span<const double> query,
                                                         const EmbeddingTable& table,
                                                         std::size_t top_k);

}  // namespace bicvm
