#include "bicvm/model.hpp"

#include <algorithm>

#include "bicvm/error.hpp"
#include "bicvm/rng.hpp"

namespace bicvm {

EmbeddingTable init_gaussian(const std::string& language_tag, std::size_t vocab_size,
                             std::size_t dim, double std_dev, std::uint64_t seed) {
    if (dim < 1) throw ConfigError("embedding dimensionality must be >= 1");
    if (std_dev <= 0.0) throw ConfigError("init std_dev must be > 0");
    EmbeddingTable table(language_tag, vocab_size, dim);
    Rng rng(seed);
    for (double& v : table.raw()) v = rng.gaussian(std_dev);
    return table;
}

void BiModel::add_table(EmbeddingTable table) {
    if (table.dim() != dim_) {
        throw ConfigError("table dimensionality " + std::to_string(table.dim()) +
                          " does not match model dimensionality " + std::to_string(dim_));
    }
    if (has(table.language_tag())) {
        throw ConfigError("duplicate language tag: " + table.language_tag());
    }
    tables_.push_back(std::move(table));
}

bool BiModel::has(const std::string& language_tag) const {
    return std::any_of(tables_.begin(), tables_.end(), [&](const EmbeddingTable& t) {
        return t.language_tag() == language_tag;
    });
}

EmbeddingTable& BiModel::table(const std::string& language_tag) {
    for (auto& t : tables_) {
        if (t.language_tag() == language_tag) return t;
    }
    throw ConfigError("no table for language: " + language_tag);
}

const EmbeddingTable& BiModel::table(const std::string& language_tag) const {
    for (const auto& t : tables_) {
        if (t.language_tag() == language_tag) return t;
    }
    throw ConfigError("no table for language: " + language_tag);
}

double BiModel::squared_norm() const {
    double total = 0.0;
    for (const auto& t : tables_) {
        for (double v : t.raw()) total += v * v;
    }
    return total;
}

std::vector<double> compose(const Sentence& sentence, const EmbeddingTable& table) {
    // Summing in id order makes the result bit-identical under any
    // reordering of the sentence, not just equal up to rounding.
    std::vector<WordId> ids(sentence.ids);
    std::sort(ids.begin(), ids.end());
    std::vector<double> root(table.dim(), 0.0);
    for (WordId id : ids) {
        if (id >= table.rows()) {
            throw ShapeError("word id " + std::to_string(id) +
                             " out of range for table of " +
                             std::to_string(table.rows()) + " rows");
        }
        const auto r = table.row(id);
        for (std::size_t j = 0; j < root.size(); ++j) root[j] += r[j];
    }
    return root;
}

void scatter_gradient(const Sentence& sentence, std::span<const double> root_grad,
                      GradBuffer& accumulator) {
    for (WordId id : sentence.ids) {
        auto [it, fresh] = accumulator.try_emplace(id);
        if (fresh) it->second.assign(root_grad.size(), 0.0);
        if (it->second.size() != root_grad.size()) {
            throw ShapeError("gradient accumulator dimensionality mismatch");
        }
        for (std::size_t j = 0; j < root_grad.size(); ++j) {
            it->second[j] += root_grad[j];
        }
    }
}

}  // namespace bicvm
