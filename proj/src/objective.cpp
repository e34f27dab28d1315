#include "bicvm/objective.hpp"

#include "bicvm/error.hpp"

namespace bicvm {

double e_dist(std::span<const double> a_root, std::span<const double> b_root) {
    if (a_root.size() != b_root.size()) {
        throw ShapeError("e_dist: root length mismatch (" +
                         std::to_string(a_root.size()) + " vs " +
                         std::to_string(b_root.size()) + ")");
    }
    double total = 0.0;
    for (std::size_t j = 0; j < a_root.size(); ++j) {
        const double diff = a_root[j] - b_root[j];
        total += diff * diff;
    }
    return total;
}

double e_noise(std::span<const double> a_root, std::span<const double> b_root,
               std::span<const double> n_root, double margin) {
    const double value = margin + e_dist(a_root, b_root) - e_dist(a_root, n_root);
    return value > 0.0 ? value : 0.0;
}

std::vector<std::size_t> NoiseSampler::sample(std::size_t excluded_pair_index,
                                              std::size_t k) {
    if (k == 0) return {};
    if (corpus_size_ < 2) {
        throw ConfigError("cannot sample noise from a corpus of size " +
                          std::to_string(corpus_size_));
    }
    std::vector<std::size_t> indices;
    indices.reserve(k);
    for (std::size_t i = 0; i < k; ++i) {
        std::size_t idx;
        do {
            idx = static_cast<std::size_t>(rng_.bounded(corpus_size_));
        } while (idx == excluded_pair_index);
        indices.push_back(idx);
    }
    return indices;
}

PairGradient pair_loss_and_grad(const Sentence& a, const Sentence& b,
                                const std::vector<const Sentence*>& noise,
                                const EmbeddingTable& table_a,
                                const EmbeddingTable& table_b, double margin) {
    const std::size_t d = table_a.dim();
    if (table_b.dim() != d) throw ShapeError("pair_loss_and_grad: table dim mismatch");

    const std::vector<double> a_root = compose(a, table_a);
    const std::vector<double> b_root = compose(b, table_b);
    const double dist_ab = e_dist(a_root, b_root);

    PairGradient result;
    std::vector<double> a_root_grad(d, 0.0);
    std::vector<double> b_root_grad(d, 0.0);
    std::vector<double> n_root_grad(d);
    std::size_t active = 0;

    for (const Sentence* n : noise) {
        const std::vector<double> n_root = compose(*n, table_b);
        const double hinge = margin + dist_ab - e_dist(a_root, n_root);
        if (hinge <= 0.0) continue;  // subgradient 0 at the boundary
        result.loss += hinge;
        ++active;
        for (std::size_t j = 0; j < d; ++j) {
            a_root_grad[j] += 2.0 * (n_root[j] - b_root[j]);
            n_root_grad[j] = 2.0 * (a_root[j] - n_root[j]);
        }
        scatter_gradient(*n, n_root_grad, result.grad_b);
    }

    if (active > 0) {
        for (std::size_t j = 0; j < d; ++j) {
            b_root_grad[j] = 2.0 * static_cast<double>(active) * (b_root[j] - a_root[j]);
        }
        scatter_gradient(a, a_root_grad, result.grad_a);
        scatter_gradient(b, b_root_grad, result.grad_b);
    }
    return result;
}

double corpus_pair_loss(const ParallelCorpus& corpus, const BiModel& model,
                        double margin, std::size_t k, std::uint64_t seed) {
    if (corpus.pairs.empty()) return 0.0;
    const EmbeddingTable& table_a = model.table(corpus.lang_a);
    const EmbeddingTable& table_b = model.table(corpus.lang_b);
    NoiseSampler sampler(seed, corpus.size());

    double total = 0.0;
    for (std::size_t p = 0; p < corpus.pairs.size(); ++p) {
        const auto& [a, b] = corpus.pairs[p];
        const auto a_root = compose(a, table_a);
        const auto b_root = compose(b, table_b);
        for (std::size_t idx : sampler.sample(p, k)) {
            const auto n_root = compose(corpus.pairs[idx].second, table_b);
            total += e_noise(a_root, b_root, n_root, margin);
        }
    }
    return total;
}

double corpus_loss(const ParallelCorpus& corpus, const BiModel& model, double margin,
                   std::size_t k, double lambda, std::uint64_t seed) {
    return corpus_pair_loss(corpus, model, margin, k, seed) +
           0.5 * lambda * model.squared_norm();
}

}  // namespace bicvm
