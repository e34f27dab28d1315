#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bicvm/corpus.hpp"

namespace bicvm {

// Dense row-major matrix of word vectors for one language. Parameters are
// held in double precision; the on-disk model format stores float32.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    EmbeddingTable(std::string language_tag, std::size_t vocab_size, std::size_t dim)
        : language_tag_(std::move(language_tag)),
          dim_(dim),
          data_(vocab_size * dim, 0.0) {}

    const std::string& language_tag() const { return language_tag_; }
    std::size_t dim() const { return dim_; }
    std::size_t rows() const { return dim_ == 0 ? 0 : data_.size() / dim_; }

    std::span<double> row(WordId id) {
        return {data_.data() + static_cast<std::size_t>(id) * dim_, dim_};
    }
    std::span<const double> row(WordId id) const {
        return {data_.data() + static_cast<std::size_t>(id) * dim_, dim_};
    }

    std::vector<double>& raw() { return data_; }
    const std::vector<double>& raw() const { return data_; }

private:
    std::string language_tag_;
    std::size_t dim_ = 0;
    std::vector<double> data_;
};

// Every entry i.i.d. zero-mean Gaussian; deterministic given seed.
EmbeddingTable init_gaussian(const std::string& language_tag, std::size_t vocab_size,
                             std::size_t dim, double std_dev, std::uint64_t seed);

// All tables share one embedding dimensionality; language tags are unique.
// Insertion order is preserved for deterministic serialization.
class BiModel {
public:
    BiModel() = default;
    explicit BiModel(std::size_t dim) : dim_(dim) {}

    std::size_t dim() const { return dim_; }
    std::size_t table_count() const { return tables_.size(); }

    void add_table(EmbeddingTable table);
    bool has(const std::string& language_tag) const;
    EmbeddingTable& table(const std::string& language_tag);
    const EmbeddingTable& table(const std::string& language_tag) const;

    const std::vector<EmbeddingTable>& tables() const { return tables_; }
    std::vector<EmbeddingTable>& tables() { return tables_; }

    double squared_norm() const;

private:
    std::size_t dim_ = 0;
    std::vector<EmbeddingTable> tables_;
};

// Elementwise sum of the embedding rows of all token occurrences.
std::vector<double> compose(const Sentence& sentence, const EmbeddingTable& table);

// Sparse per-update gradient buffer, keyed by word id. Ordered so that
// update application is deterministic.
using GradBuffer = std::map<WordId, std::vector<double>>;

// Adds root_grad into the accumulator slot of every token occurrence;
// for the additive composition the root Jacobian per word is the identity.
void scatter_gradient(const Sentence& sentence, std::span<const double> root_grad,
                      GradBuffer& accumulator);

}  // namespace bicvm
