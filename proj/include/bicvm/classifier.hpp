#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bicvm/corpus.hpp"
#include "bicvm/model.hpp"

namespace bicvm {

struct LabeledDocument {
    std::string language_tag;
    std::vector<Sentence> sentences;
    std::size_t label = 0;
};

struct DocumentSet {
    std::vector<LabeledDocument> docs;
    std::vector<std::string> class_names;  // class id = index
    std::size_t rejected = 0;  // documents with no in-vocabulary content
};

// Mean of the composed vectors of the document's sentences; sentences
// emptied by OOV-dropping are excluded from the mean. Throws DataError if
// nothing survives.
std::vector<double> doc_representation(const LabeledDocument& doc, const BiModel& model);

// Multiclass averaged perceptron with a bias column (features augmented by
// a constant 1). averaged weights are the mean of the weight matrix after
// every example presentation, maintained lazily.
class PerceptronModel {
public:
    PerceptronModel() = default;
    PerceptronModel(std::size_t classes, std::size_t dim);
    // Explicit weights (row-major C x (dim+1)); raw and averaged.
    PerceptronModel(std::size_t classes, std::size_t dim, std::vector<double> weights,
                    std::vector<double> averaged);

    std::size_t classes() const { return classes_; }
    std::size_t feature_dim() const { return cols_ == 0 ? 0 : cols_ - 1; }

    // Ties break toward the lowest class id.
    std::size_t predict(std::span<const double> x, bool use_averaged = true) const;

    const std::vector<double>& weights() const { return weights_; }
    const std::vector<double>& averaged_weights() const { return averaged_; }
    std::uint64_t update_counter() const { return updates_; }

    friend PerceptronModel perceptron_train(
        const std::vector<std::pair<std::vector<double>, std::size_t>>& examples,
        std::size_t classes, std::size_t epochs, std::uint64_t seed);

private:
    std::size_t classes_ = 0;
    std::size_t cols_ = 0;  // feature dim + bias
    std::vector<double> weights_;
    std::vector<double> averaged_;
    std::uint64_t updates_ = 0;
};

PerceptronModel perceptron_train(
    const std::vector<std::pair<std::vector<double>, std::size_t>>& examples,
    std::size_t classes, std::size_t epochs, std::uint64_t seed);

// Labeled document file: blank-line-separated blocks, each starting with
// "#label <class-name>" followed by one sentence per line. The label map
// file lists one class name per line; line number = class id.
DocumentSet load_documents(const std::string& doc_path, const std::string& label_map_path,
                           const Vocabulary& vocab);
void save_label_map(const std::vector<std::string>& class_names, const std::string& path);
std::vector<std::string> load_label_map(const std::string& path);

struct CldcResult {
    std::size_t train_size;
    double accuracy;
    double majority_baseline;
};

// Trains on the first `size` train-language document vectors for each
// requested size and evaluates on every test-language document.
std::vector<CldcResult> evaluate_cldc(const DocumentSet& train_docs,
                                      const DocumentSet& test_docs, const BiModel& model,
                                      const std::vector<std::size_t>& sizes,
                                      std::size_t perceptron_epochs = 10,
                                      std::uint64_t seed = 1);

// Fraction held by the most frequent label among the given documents.
double majority_baseline(const std::vector<LabeledDocument>& docs, std::size_t classes);

}  // namespace bicvm
