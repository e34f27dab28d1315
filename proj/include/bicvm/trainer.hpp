#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "bicvm/corpus.hpp"
#include "bicvm/model.hpp"

namespace bicvm {

struct TrainConfig {
    std::size_t dim = 40;
    double step_size = 0.1;
    double lambda = 1.0;
    std::size_t noise_count = 50;
    double margin = 50.0;
    std::size_t epochs = 50;
    std::uint64_t seed = 1;
    double init_std = 0.1;
    bool symmetric_noise = false;
    double adagrad_epsilon = 1e-6;

    void validate() const;
};

// Accumulated squared gradients, one matrix per model table (same shapes).
class AdaGradState {
public:
    explicit AdaGradState(const BiModel& model);

    std::span<double> row(std::size_t table_index, WordId id);

private:
    std::size_t dim_;
    std::vector<std::vector<double>> accum_;
};

// Per coordinate: G += g^2; param -= eta * g / (sqrt(G) + eps).
void adagrad_update(std::span<double> param_row, std::span<const double> grad,
                    std::span<double> g_row, double step_size, double epsilon);

// Reference to one training pair in the multi-corpus union.
struct PairRef {
    std::size_t corpus_id;
    std::size_t pair_index;
    bool operator==(const PairRef&) const = default;
};

// Deterministic seeded shuffle of the union of all pairs, reshuffled each
// epoch.
std::vector<PairRef> epoch_schedule(const std::vector<ParallelCorpus>& corpora,
                                    std::size_t epoch_index, std::uint64_t seed);

struct EpochLog {
    std::size_t epoch;
    double monitored_loss;
    double seconds;
};

struct TrainResult {
    BiModel model;
    std::vector<EpochLog> log;
};

// Per-epoch callback: invoked after each epoch with its log entry and the
// current model (used for progress lines and checkpointing).
using EpochCallback =
    std::function<void(const EpochLog&, const BiModel&)>;

// Joint AdaGrad training over one or more corpora. Languages appearing in
// multiple corpora (the pivot) share one table. Single-threaded and
// bit-deterministic for fixed inputs and seed.
TrainResult train(const std::vector<ParallelCorpus>& corpora, const TrainConfig& config,
                  const EpochCallback& on_epoch = nullptr);

// Monitored loss for a model over a corpus set: seeded-noise pair losses
// plus the full regularizer, counting shared parameters once.
double monitored_loss(const std::vector<ParallelCorpus>& corpora, const BiModel& model,
                      const TrainConfig& config);

// Model with every table Gaussian-initialized and pivot languages shared;
// this is exactly what train() starts from (and returns when epochs == 0).
BiModel init_model(const std::vector<ParallelCorpus>& corpora, const TrainConfig& config);

}  // namespace bicvm
