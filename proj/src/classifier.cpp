#include "bicvm/classifier.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>

#include "bicvm/error.hpp"
#include "bicvm/rng.hpp"

namespace bicvm {

std::vector<double> doc_representation(const LabeledDocument& doc, const BiModel& model) {
    const EmbeddingTable& table = model.table(doc.language_tag);
    std::vector<double> mean(model.dim(), 0.0);
    std::size_t used = 0;
    for (const Sentence& s : doc.sentences) {
        if (s.empty()) continue;
        const auto root = compose(s, table);
        for (std::size_t j = 0; j < mean.size(); ++j) mean[j] += root[j];
        ++used;
    }
    if (used == 0) {
        throw DataError("document has no sentence with in-vocabulary tokens");
    }
    for (double& v : mean) v /= static_cast<double>(used);
    return mean;
}

PerceptronModel::PerceptronModel(std::size_t classes, std::size_t dim)
    : classes_(classes),
      cols_(dim + 1),
      weights_(classes * (dim + 1), 0.0),
      averaged_(classes * (dim + 1), 0.0) {}

PerceptronModel::PerceptronModel(std::size_t classes, std::size_t dim,
                                 std::vector<double> weights, std::vector<double> averaged)
    : classes_(classes),
      cols_(dim + 1),
      weights_(std::move(weights)),
      averaged_(std::move(averaged)) {
    if (weights_.size() != classes_ * cols_ || averaged_.size() != classes_ * cols_) {
        throw ShapeError("perceptron weight matrices have the wrong shape");
    }
}

std::size_t PerceptronModel::predict(std::span<const double> x, bool use_averaged) const {
    if (x.size() + 1 != cols_) {
        throw ShapeError("perceptron input has length " + std::to_string(x.size()) +
                         ", expected " + std::to_string(cols_ - 1));
    }
    const std::vector<double>& w = use_averaged ? averaged_ : weights_;
    std::size_t best = 0;
    double best_score = 0.0;
    for (std::size_t c = 0; c < classes_; ++c) {
        const double* row = w.data() + c * cols_;
        double score = row[cols_ - 1];  // bias
        for (std::size_t j = 0; j < x.size(); ++j) score += row[j] * x[j];
        if (c == 0 || score > best_score) {
            best = c;
            best_score = score;
        }
    }
    return best;
}

PerceptronModel perceptron_train(
    const std::vector<std::pair<std::vector<double>, std::size_t>>& examples,
    std::size_t classes, std::size_t epochs, std::uint64_t seed) {
    if (classes < 2) throw ConfigError("perceptron needs at least 2 classes");
    std::size_t dim = examples.empty() ? 0 : examples.front().first.size();
    for (const auto& [x, y] : examples) {
        if (x.size() != dim) throw ShapeError("perceptron examples have mixed lengths");
        if (y >= classes) {
            throw DataError("label " + std::to_string(y) + " out of range for " +
                            std::to_string(classes) + " classes");
        }
    }

    PerceptronModel model(classes, dim);
    const std::size_t cols = dim + 1;

    // Lazy averaging: with delta_t the update applied at presentation t
    // (1-based), mean over snapshots w_1..w_T is w_T - sum_t (t-1) delta_t / T.
    std::vector<double> weighted_deltas(model.weights_.size(), 0.0);
    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), 0);

    std::uint64_t t = 0;
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        Rng rng(mix_seed(seed, epoch));
        rng.shuffle(order);
        for (std::size_t idx : order) {
            const auto& [x, y] = examples[idx];
            ++t;
            const std::size_t guess = model.predict(x, /*use_averaged=*/false);
            if (guess == y) continue;
            ++model.updates_;
            const double scale = static_cast<double>(t - 1);
            double* w_true = model.weights_.data() + y * cols;
            double* w_guess = model.weights_.data() + guess * cols;
            double* u_true = weighted_deltas.data() + y * cols;
            double* u_guess = weighted_deltas.data() + guess * cols;
            for (std::size_t j = 0; j < dim; ++j) {
                w_true[j] += x[j];
                w_guess[j] -= x[j];
                u_true[j] += scale * x[j];
                u_guess[j] -= scale * x[j];
            }
            w_true[dim] += 1.0;
            w_guess[dim] -= 1.0;
            u_true[dim] += scale;
            u_guess[dim] -= scale;
        }
    }

    if (t == 0) {
        model.averaged_ = model.weights_;
    } else {
        for (std::size_t i = 0; i < model.weights_.size(); ++i) {
            model.averaged_[i] = model.weights_[i] - weighted_deltas[i] / static_cast<double>(t);
        }
    }
    return model;
}

void save_label_map(const std::vector<std::string>& class_names, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open label map for writing: " + path);
    for (const auto& name : class_names) out << name << "\n";
    if (!out) throw DataError("write failed: " + path);
}

std::vector<std::string> load_label_map(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open label map: " + path);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) names.push_back(line);
    }
    if (names.size() < 2) throw DataError("label map needs at least 2 classes: " + path);
    return names;
}

DocumentSet load_documents(const std::string& doc_path, const std::string& label_map_path,
                           const Vocabulary& vocab) {
    DocumentSet set;
    set.class_names = load_label_map(label_map_path);

    std::ifstream in(doc_path, std::ios::binary);
    if (!in) throw DataError("cannot open document file: " + doc_path);

    auto class_id = [&](const std::string& name) -> std::size_t {
        for (std::size_t c = 0; c < set.class_names.size(); ++c) {
            if (set.class_names[c] == name) return c;
        }
        throw DataError("unknown class name in " + doc_path + ": " + name);
    };

    LabeledDocument current;
    bool in_block = false;
    auto flush = [&] {
        if (!in_block) return;
        if (current.sentences.empty()) {
            ++set.rejected;
        } else {
            set.docs.push_back(std::move(current));
        }
        current = {};
        in_block = false;
    };

    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) {
            flush();
            continue;
        }
        if (line.rfind("#label ", 0) == 0) {
            flush();
            current.language_tag = vocab.language_tag();
            current.label = class_id(line.substr(7));
            in_block = true;
            continue;
        }
        if (!in_block) {
            throw DataError("sentence outside a #label block in " + doc_path + ": " + line);
        }
        Sentence s = encode(normalize_line(line), vocab);
        if (!s.empty()) current.sentences.push_back(std::move(s));
    }
    flush();
    return set;
}

double majority_baseline(const std::vector<LabeledDocument>& docs, std::size_t classes) {
    if (docs.empty()) return 0.0;
    std::vector<std::size_t> counts(classes, 0);
    for (const auto& doc : docs) ++counts.at(doc.label);
    return static_cast<double>(*std::max_element(counts.begin(), counts.end())) /
           static_cast<double>(docs.size());
}

std::vector<CldcResult> evaluate_cldc(const DocumentSet& train_docs,
                                      const DocumentSet& test_docs, const BiModel& model,
                                      const std::vector<std::size_t>& sizes,
                                      std::size_t perceptron_epochs, std::uint64_t seed) {
    if (train_docs.class_names != test_docs.class_names) {
        throw DataError("train and test label sets differ");
    }
    const std::size_t classes = train_docs.class_names.size();

    std::vector<std::pair<std::vector<double>, std::size_t>> train_examples;
    train_examples.reserve(train_docs.docs.size());
    for (const auto& doc : train_docs.docs) {
        train_examples.emplace_back(doc_representation(doc, model), doc.label);
    }
    std::vector<std::pair<std::vector<double>, std::size_t>> test_examples;
    test_examples.reserve(test_docs.docs.size());
    for (const auto& doc : test_docs.docs) {
        test_examples.emplace_back(doc_representation(doc, model), doc.label);
    }
    const double baseline = majority_baseline(test_docs.docs, classes);

    std::vector<CldcResult> results;
    for (std::size_t size : sizes) {
        if (size == 0 || size > train_examples.size()) {
            throw DataError("training size " + std::to_string(size) +
                            " is outside [1, " + std::to_string(train_examples.size()) + "]");
        }
        std::vector<std::pair<std::vector<double>, std::size_t>> subset(
            train_examples.begin(), train_examples.begin() + static_cast<std::ptrdiff_t>(size));
        const PerceptronModel classifier =
            perceptron_train(subset, classes, perceptron_epochs, seed);

        std::size_t correct = 0;
        for (const auto& [x, y] : test_examples) {
            if (classifier.predict(x) == y) ++correct;
        }
        const double accuracy = test_examples.empty()
                                    ? 0.0
                                    : static_cast<double>(correct) /
                                          static_cast<double>(test_examples.size());
        results.push_back({size, accuracy, baseline});
    }
    return results;
}

}  // namespace bicvm
