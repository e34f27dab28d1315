#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "bicvm/corpus.hpp"
#include "bicvm/model.hpp"
#include "bicvm/rng.hpp"

namespace bicvm {

// Squared Euclidean distance between two sentence roots.
double e_dist(std::span<const double> a_root, std::span<const double> b_root);

// Hinge term max(0, margin + e_dist(a,b) - e_dist(a,n)). The margin
// generalizes the constant in the written hinge; the experiments use 50.
double e_noise(std::span<const double> a_root, std::span<const double> b_root,
               std::span<const double> n_root, double margin);

// Draws noise sentence indices uniformly (with replacement across draws)
// from a corpus side, rejecting the index aligned to the current pair.
class NoiseSampler {
public:
    NoiseSampler(std::uint64_t seed, std::size_t corpus_size)
        : rng_(seed), corpus_size_(corpus_size) {}

    // k draws, never returning excluded_pair_index. Throws ConfigError if
    // no valid noise exists (corpus of size <= 1 with k >= 1).
    std::vector<std::size_t> sample(std::size_t excluded_pair_index, std::size_t k);

private:
    Rng rng_;
    std::size_t corpus_size_;
};

// Gradient of the pair objective restricted to one (a, b) pair with its
// noise samples, sparse over touched word rows in each language.
struct PairGradient {
    double loss = 0.0;
    GradBuffer grad_a;  // rows of the source-language table
    GradBuffer grad_b;  // rows of the target-language table
};

// One outer summand of the training objective (regularizer excluded):
// loss = sum_i e_noise(a, b, n_i). For each active hinge the root-level
// gradients are
//   d/da = 2 (n - b),  d/db = 2 (b - a),  d/dn = 2 (a - n)
// scattered onto word rows; inactive hinges (including exact ties)
// contribute nothing.
PairGradient pair_loss_and_grad(const Sentence& a, const Sentence& b,
                                const std::vector<const Sentence*>& noise,
                                const EmbeddingTable& table_a,
                                const EmbeddingTable& table_b, double margin);

// Deterministic monitored loss: seeded-noise pair losses summed over the
// corpus plus the full (lambda/2) ||theta||^2 regularizer.
double corpus_loss(const ParallelCorpus& corpus, const BiModel& model, double margin,
                   std::size_t k, double lambda, std::uint64_t seed);

// Pair-loss sum only (no regularizer); lets multi-corpus monitoring add
// the regularizer once.
double corpus_pair_loss(const ParallelCorpus& corpus, const BiModel& model,
                        double margin, std::size_t k, std::uint64_t seed);

}  // namespace bicvm
