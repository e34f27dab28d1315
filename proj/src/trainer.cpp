#include "bicvm/trainer.hpp"

#include <chrono>
#include <cmath>
#include <map>

#include "bicvm/error.hpp"
#include "bicvm/objective.hpp"
#include "bicvm/rng.hpp"

namespace bicvm {

namespace {

// Sub-seed salts; every rng stream in training is derived from the one
// user seed through these.
constexpr std::uint64_t kInitSalt = 0x11;
constexpr std::uint64_t kShuffleSalt = 0x22;
constexpr std::uint64_t kNoiseSalt = 0x33;
constexpr std::uint64_t kMonitorSalt = 0x44;

std::uint64_t noise_seed(std::uint64_t seed, std::size_t epoch, std::size_t corpus_id,
                         bool reverse) {
    return mix_seed(mix_seed(mix_seed(seed, kNoiseSalt), epoch),
                    corpus_id * 2 + (reverse ? 1 : 0));
}

ParallelCorpus reversed(const ParallelCorpus& corpus) {
    ParallelCorpus rev;
    rev.lang_a = corpus.lang_b;
    rev.lang_b = corpus.lang_a;
    rev.vocab_size_a = corpus.vocab_size_b;
    rev.vocab_size_b = corpus.vocab_size_a;
    rev.pairs.reserve(corpus.pairs.size());
    for (const auto& [a, b] : corpus.pairs) rev.pairs.emplace_back(b, a);
    return rev;
}

}  // namespace

void TrainConfig::validate() const {
    if (dim < 1) throw ConfigError("dim must be >= 1");
    if (step_size <= 0.0) throw ConfigError("step_size must be > 0");
    if (lambda < 0.0) throw ConfigError("lambda must be >= 0");
    if (margin <= 0.0) throw ConfigError("margin must be > 0");
    if (init_std <= 0.0) throw ConfigError("init_std must be > 0");
}

AdaGradState::AdaGradState(const BiModel& model) : dim_(model.dim()) {
    accum_.reserve(model.table_count());
    for (const auto& table : model.tables()) {
        accum_.emplace_back(table.raw().size(), 0.0);
    }
}

std::span<double> AdaGradState::row(std::size_t table_index, WordId id) {
    return {accum_[table_index].data() + static_cast<std::size_t>(id) * dim_, dim_};
}

void adagrad_update(std::span<double> param_row, std::span<const double> grad,
                    std::span<double> g_row, double step_size, double epsilon) {
    if (param_row.size() != grad.size() || param_row.size() != g_row.size()) {
        throw ShapeError("adagrad_update: row length mismatch");
    }
    for (std::size_t j = 0; j < param_row.size(); ++j) {
        g_row[j] += grad[j] * grad[j];
        param_row[j] -= step_size * grad[j] / (std::sqrt(g_row[j]) + epsilon);
    }
}

std::vector<PairRef> epoch_schedule(const std::vector<ParallelCorpus>& corpora,
                                    std::size_t epoch_index, std::uint64_t seed) {
    std::vector<PairRef> refs;
    for (std::size_t c = 0; c < corpora.size(); ++c) {
        for (std::size_t p = 0; p < corpora[c].size(); ++p) refs.push_back({c, p});
    }
    Rng rng(mix_seed(mix_seed(seed, kShuffleSalt), epoch_index));
    rng.shuffle(refs);
    return refs;
}

BiModel init_model(const std::vector<ParallelCorpus>& corpora, const TrainConfig& config) {
    config.validate();
    if (corpora.empty()) throw ConfigError("training requires at least one corpus");

    // Languages in order of first appearance; a language seen in several
    // corpora (the pivot) gets exactly one table, so its vocabulary size
    // must agree everywhere.
    std::vector<std::pair<std::string, std::size_t>> languages;
    auto note = [&](const std::string& tag, std::size_t vocab_size) {
        for (auto& [seen_tag, seen_size] : languages) {
            if (seen_tag != tag) continue;
            if (seen_size != vocab_size) {
                throw ConfigError("language " + tag + " has inconsistent vocabulary sizes (" +
                                  std::to_string(seen_size) + " vs " +
                                  std::to_string(vocab_size) + ") across corpora");
            }
            return;
        }
        languages.emplace_back(tag, vocab_size);
    };
    for (const auto& corpus : corpora) {
        note(corpus.lang_a, corpus.vocab_size_a);
        note(corpus.lang_b, corpus.vocab_size_b);
    }

    BiModel model(config.dim);
    for (std::size_t t = 0; t < languages.size(); ++t) {
        model.add_table(init_gaussian(languages[t].first, languages[t].second, config.dim,
                                      config.init_std,
                                      mix_seed(mix_seed(config.seed, kInitSalt), t)));
    }
    return model;
}

double monitored_loss(const std::vector<ParallelCorpus>& corpora, const BiModel& model,
                      const TrainConfig& config) {
    double total = 0.0;
    for (std::size_t c = 0; c < corpora.size(); ++c) {
        total += corpus_pair_loss(corpora[c], model, config.margin, config.noise_count,
                                  mix_seed(mix_seed(config.seed, kMonitorSalt), c * 2));
        if (config.symmetric_noise) {
            total += corpus_pair_loss(reversed(corpora[c]), model, config.margin,
                                      config.noise_count,
                                      mix_seed(mix_seed(config.seed, kMonitorSalt), c * 2 + 1));
        }
    }
    return total + 0.5 * config.lambda * model.squared_norm();
}

namespace {

// Applies one pair gradient with lazy L2 on the touched rows, then the
// AdaGrad step. Rows of the pair's own words count as touched even when
// every hinge is inactive.
void apply_side(GradBuffer& grads, const Sentence& own_words, EmbeddingTable& table,
                AdaGradState& state, std::size_t table_index, const TrainConfig& config) {
    for (WordId id : own_words.ids) {
        auto [it, fresh] = grads.try_emplace(id);
        if (fresh) it->second.assign(table.dim(), 0.0);
    }
    std::vector<double> grad(table.dim());
    for (auto& [id, g] : grads) {
        auto param = table.row(id);
        for (std::size_t j = 0; j < grad.size(); ++j) {
            grad[j] = g[j] + config.lambda * param[j];
        }
        adagrad_update(param, grad, state.row(table_index, id), config.step_size,
                       config.adagrad_epsilon);
    }
}

}  // namespace

TrainResult train(const std::vector<ParallelCorpus>& corpora, const TrainConfig& config,
                  const EpochCallback& on_epoch) {
    config.validate();
    if (config.noise_count >= 1) {
        for (const auto& corpus : corpora) {
            if (corpus.size() < 2) {
                throw ConfigError("corpus " + corpus.lang_a + "-" + corpus.lang_b +
                                  " has fewer than 2 pairs; no noise can be sampled");
            }
        }
    }

    TrainResult result{init_model(corpora, config), {}};
    BiModel& model = result.model;
    AdaGradState state(model);

    // Per-corpus table indices, resolved once.
    struct CorpusTables {
        std::size_t a;
        std::size_t b;
    };
    std::vector<CorpusTables> table_of(corpora.size());
    auto index_of = [&](const std::string& tag) {
        for (std::size_t t = 0; t < model.table_count(); ++t) {
            if (model.tables()[t].language_tag() == tag) return t;
        }
        throw ConfigError("no table for language: " + tag);
    };
    for (std::size_t c = 0; c < corpora.size(); ++c) {
        table_of[c] = {index_of(corpora[c].lang_a), index_of(corpora[c].lang_b)};
    }

    std::vector<const Sentence*> noise;
    noise.reserve(config.noise_count);

    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        const auto start = std::chrono::steady_clock::now();

        std::vector<NoiseSampler> fwd_samplers;
        std::vector<NoiseSampler> rev_samplers;
        for (std::size_t c = 0; c < corpora.size(); ++c) {
            fwd_samplers.emplace_back(noise_seed(config.seed, epoch, c, false),
                                      corpora[c].size());
            rev_samplers.emplace_back(noise_seed(config.seed, epoch, c, true),
                                      corpora[c].size());
        }

        for (const PairRef& ref : epoch_schedule(corpora, epoch, config.seed)) {
            const ParallelCorpus& corpus = corpora[ref.corpus_id];
            const auto& [a, b] = corpus.pairs[ref.pair_index];
            auto& ta = model.tables()[table_of[ref.corpus_id].a];
            auto& tb = model.tables()[table_of[ref.corpus_id].b];

            noise.clear();
            for (std::size_t idx :
                 fwd_samplers[ref.corpus_id].sample(ref.pair_index, config.noise_count)) {
                noise.push_back(&corpus.pairs[idx].second);
            }
            PairGradient pg = pair_loss_and_grad(a, b, noise, ta, tb, config.margin);
            apply_side(pg.grad_a, a, ta, state, table_of[ref.corpus_id].a, config);
            apply_side(pg.grad_b, b, tb, state, table_of[ref.corpus_id].b, config);

            if (config.symmetric_noise) {
                noise.clear();
                for (std::size_t idx :
                     rev_samplers[ref.corpus_id].sample(ref.pair_index, config.noise_count)) {
                    noise.push_back(&corpus.pairs[idx].first);
                }
                PairGradient rg = pair_loss_and_grad(b, a, noise, tb, ta, config.margin);
                apply_side(rg.grad_a, b, tb, state, table_of[ref.corpus_id].b, config);
                apply_side(rg.grad_b, a, ta, state, table_of[ref.corpus_id].a, config);
            }
        }

        const double loss = monitored_loss(corpora, model, config);
        const double seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        result.log.push_back({epoch + 1, loss, seconds});
        if (on_epoch) on_epoch(result.log.back(), model);
    }
    return result;
}

}  // namespace bicvm
