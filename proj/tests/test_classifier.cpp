#include <doctest.h>

#include <algorithm>
#include <numeric>
#include <random>

#include "bicvm/classifier.hpp"
#include "bicvm/error.hpp"
#include "bicvm/rng.hpp"

using namespace bicvm;

namespace {

Sentence sent(std::vector<WordId> ids) { return Sentence{std::move(ids)}; }

BiModel identity_model(const std::string& tag, std::size_t n) {
    BiModel model(n);
    EmbeddingTable table(tag, n, n);
    for (std::size_t i = 0; i < n; ++i) table.row(static_cast<WordId>(i))[i] = 1.0;
    model.add_table(std::move(table));
    return model;
}

// Reference averaged perceptron: materializes the weight matrix after
// every presentation and averages the snapshots explicitly. Shares only
// the presentation order with the implementation under test.
std::vector<double> snapshot_averaged(
    const std::vector<std::pair<std::vector<double>, std::size_t>>& examples,
    std::size_t classes, std::size_t epochs, std::uint64_t seed) {
    const std::size_t dim = examples.empty() ? 0 : examples.front().first.size();
    const std::size_t cols = dim + 1;
    std::vector<double> w(classes * cols, 0.0);
    std::vector<double> snapshot_sum(classes * cols, 0.0);
    std::size_t t = 0;

    std::vector<std::size_t> order(examples.size());
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t epoch = 0; epoch < epochs; ++epoch) {
        Rng rng(mix_seed(seed, epoch));
        rng.shuffle(order);
        for (std::size_t idx : order) {
            const auto& [x, y] = examples[idx];
            std::size_t best = 0;
            double best_score = 0.0;
            for (std::size_t c = 0; c < classes; ++c) {
                double score = w[c * cols + dim];
                for (std::size_t j = 0; j < dim; ++j) score += w[c * cols + j] * x[j];
                if (c == 0 || score > best_score) {
                    best = c;
                    best_score = score;
                }
            }
            if (best != y) {
                for (std::size_t j = 0; j < dim; ++j) {
                    w[y * cols + j] += x[j];
                    w[best * cols + j] -= x[j];
                }
                w[y * cols + dim] += 1.0;
                w[best * cols + dim] -= 1.0;
            }
            for (std::size_t i = 0; i < w.size(); ++i) snapshot_sum[i] += w[i];
            ++t;
        }
    }
    if (t == 0) return w;
    for (double& v : snapshot_sum) v /= static_cast<double>(t);
    return snapshot_sum;
}

}  // namespace

TEST_CASE("doc_representation averages sentence roots") {
    const auto model = identity_model("xx", 3);

    LabeledDocument one{"xx", {sent({0})}, 0};
    CHECK(doc_representation(one, model) == std::vector<double>{1.0, 0.0, 0.0});

    LabeledDocument two{"xx", {sent({0}), sent({1, 2})}, 0};
    CHECK(doc_representation(two, model) == std::vector<double>{0.5, 0.5, 0.5});

    // a fully-OOV (empty after encoding) sentence is excluded from the mean
    LabeledDocument with_empty{"xx", {sent({0}), Sentence{}, sent({1})}, 0};
    CHECK(doc_representation(with_empty, model) == std::vector<double>{0.5, 0.5, 0.0});

    LabeledDocument all_empty{"xx", {Sentence{}, Sentence{}}, 0};
    CHECK_THROWS_AS(doc_representation(all_empty, model), DataError);
}

TEST_CASE("doc_representation is invariant to sentence order") {
    std::mt19937 rng(14);
    const auto model = identity_model("xx", 5);
    for (int trial = 0; trial < 200; ++trial) {
        LabeledDocument doc{"xx", {}, 0};
        const std::size_t n = 1 + rng() % 5;
        for (std::size_t s = 0; s < n; ++s) {
            std::vector<WordId> ids(1 + rng() % 4);
            for (auto& id : ids) id = rng() % 5;
            doc.sentences.push_back(sent(std::move(ids)));
        }
        LabeledDocument shuffled = doc;
        std::shuffle(shuffled.sentences.begin(), shuffled.sentences.end(), rng);
        CHECK(doc_representation(doc, model) == doc_representation(shuffled, model));
    }
}

TEST_CASE("perceptron on zero examples predicts by tie-break") {
    const auto model = perceptron_train({}, 3, 5, 1);
    CHECK(model.update_counter() == 0);
    CHECK(std::all_of(model.weights().begin(), model.weights().end(),
                      [](double v) { return v == 0.0; }));
    CHECK(model.predict(std::vector<double>{}, true) == 0);
    CHECK(model.predict(std::vector<double>{}, false) == 0);
}

TEST_CASE("perceptron separates two separable points") {
    const std::vector<std::pair<std::vector<double>, std::size_t>> examples = {
        {{1.0, 0.0}, 0}, {{0.0, 1.0}, 1}};
    const auto model = perceptron_train(examples, 2, 10, 3);
    for (const auto& [x, y] : examples) {
        CHECK(model.predict(x, false) == y);
    }
}

TEST_CASE("perceptron rejects out-of-range labels") {
    CHECK_THROWS_AS(perceptron_train({{{1.0}, 5}}, 2, 1, 1), DataError);
    CHECK_THROWS_AS(perceptron_train({{{1.0}, 0}}, 1, 1, 1), ConfigError);
}

TEST_CASE("lazy averaged weights equal explicit snapshot means") {
    std::mt19937 rng(15);
    std::uniform_real_distribution<double> dist(-2.0, 2.0);
    for (int trial = 0; trial < 50; ++trial) {
        std::vector<std::pair<std::vector<double>, std::size_t>> examples;
        const std::size_t classes = 2 + rng() % 2;
        for (int i = 0; i < 5; ++i) {
            examples.push_back({{dist(rng), dist(rng), dist(rng)}, rng() % classes});
        }
        const std::size_t epochs = 1 + rng() % 4;
        const std::uint64_t seed = rng();

        const auto model = perceptron_train(examples, classes, epochs, seed);
        const auto expected = snapshot_averaged(examples, classes, epochs, seed);
        REQUIRE(model.averaged_weights().size() == expected.size());
        for (std::size_t i = 0; i < expected.size(); ++i) {
            CHECK(model.averaged_weights()[i] == doctest::Approx(expected[i]).epsilon(1e-9));
        }
    }
}

TEST_CASE("predict agrees with a brute-force scorer and favors low ids on ties") {
    // zero weights -> class 0
    const PerceptronModel zeros(3, 2);
    CHECK(zeros.predict(std::vector<double>{1.0, -1.0}) == 0);

    // constructed dominance of class 2
    std::vector<double> w = {0, 0, 0, /**/ 0, 0, 0, /**/ 5, 5, 1};
    const PerceptronModel dominant(3, 2, w, w);
    CHECK(dominant.predict(std::vector<double>{1.0, 1.0}) == 2);

    std::mt19937 rng(16);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    for (int trial = 0; trial < 1000; ++trial) {
        const std::size_t classes = 2 + rng() % 3, dim = 1 + rng() % 4;
        std::vector<double> weights((dim + 1) * classes);
        for (auto& v : weights) v = dist(rng);
        const PerceptronModel model(classes, dim, weights, weights);
        std::vector<double> x(dim);
        for (auto& v : x) v = dist(rng);

        std::size_t best = 0;
        double best_score = -std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < classes; ++c) {
            double score = weights[c * (dim + 1) + dim];
            for (std::size_t j = 0; j < dim; ++j) score += weights[c * (dim + 1) + j] * x[j];
            if (score > best_score) {
                best = c;
                best_score = score;
            }
        }
        CHECK(model.predict(x) == best);

        // shifting every class row by a common vector keeps the argmax
        std::vector<double> shift(dim + 1);
        for (auto& v : shift) v = dist(rng);
        auto shifted = weights;
        for (std::size_t c = 0; c < classes; ++c) {
            for (std::size_t j = 0; j <= dim; ++j) shifted[c * (dim + 1) + j] += shift[j];
        }
        const PerceptronModel shifted_model(classes, dim, shifted, shifted);
        CHECK(shifted_model.predict(x) == model.predict(x));
    }
}

TEST_CASE("majority baseline matches a constructed 46.8% distribution") {
    std::vector<LabeledDocument> docs;
    for (int i = 0; i < 468; ++i) docs.push_back({"xx", {sent({0})}, 0});
    for (int i = 0; i < 266; ++i) docs.push_back({"xx", {sent({0})}, 1});
    for (int i = 0; i < 266; ++i) docs.push_back({"xx", {sent({0})}, 2});
    CHECK(majority_baseline(docs, 3) == doctest::Approx(0.468));
}

TEST_CASE("evaluate_cldc memorizes separable same-language data") {
    const auto model = identity_model("xx", 2);
    DocumentSet docs;
    docs.class_names = {"c0", "c1"};
    for (int i = 0; i < 10; ++i) {
        docs.docs.push_back({"xx", {sent({static_cast<WordId>(i % 2)})},
                             static_cast<std::size_t>(i % 2)});
    }
    const auto results = evaluate_cldc(docs, docs, model, {10});
    REQUIRE(results.size() == 1);
    CHECK(results[0].accuracy == 1.0);
    CHECK(results[0].majority_baseline == doctest::Approx(0.5));

    CHECK_THROWS_AS(evaluate_cldc(docs, docs, model, {0}), DataError);
    CHECK_THROWS_AS(evaluate_cldc(docs, docs, model, {11}), DataError);
}
