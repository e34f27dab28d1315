#include <chrono>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bicvm/classifier.hpp"
#include "bicvm/corpus.hpp"
#include "bicvm/error.hpp"
#include "bicvm/manifest.hpp"
#include "bicvm/model_io.hpp"
#include "bicvm/neighbors.hpp"
#include "bicvm/trainer.hpp"
#include "bicvm/vocabulary.hpp"

namespace {

using namespace bicvm;

std::vector<std::vector<std::string>> read_normalized_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open input file: " + path);
    std::vector<std::vector<std::string>> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(normalize_line(line));
    }
    return lines;
}

int run_vocab(const std::vector<std::string>& inputs, std::uint64_t min_count,
              const std::string& lang, const std::string& out) {
    std::vector<std::vector<std::string>> lines;
    for (const auto& path : inputs) {
        auto file_lines = read_normalized_lines(path);
        lines.insert(lines.end(), std::make_move_iterator(file_lines.begin()),
                     std::make_move_iterator(file_lines.end()));
    }
    const Vocabulary vocab = Vocabulary::build(lines, min_count, lang);
    vocab.save(out);
    std::cout << "wrote " << out << " (" << vocab.size() << " tokens)\n";
    return 0;
}

int run_train(const std::vector<std::string>& corpus_args, const TrainConfig& config,
              const std::string& out, const std::string& log_path,
              std::size_t checkpoint_every, std::size_t threads) {
    if (corpus_args.empty() || corpus_args.size() % 4 != 0) {
        throw ConfigError("--corpus expects groups of 4 paths: "
                          "<text_a> <text_b> <vocab_a> <vocab_b>");
    }
    if (threads != 1) {
        std::cerr << "note: parallel training is not implemented; running single-threaded\n";
    }

    const auto start = std::chrono::steady_clock::now();
    RunManifest manifest;
    std::vector<ParallelCorpus> corpora;
    for (std::size_t g = 0; g < corpus_args.size(); g += 4) {
        const Vocabulary vocab_a = Vocabulary::load(corpus_args[g + 2]);
        const Vocabulary vocab_b = Vocabulary::load(corpus_args[g + 3]);
        corpora.push_back(load_parallel(corpus_args[g], corpus_args[g + 1], vocab_a, vocab_b));
        std::cerr << "loaded " << corpora.back().lang_a << "-" << corpora.back().lang_b
                  << ": " << corpora.back().size() << " pairs, "
                  << corpora.back().removed_pairs << " removed\n";
        for (std::size_t i = 0; i < 4; ++i) manifest.add_input(corpus_args[g + i]);
    }

    std::ofstream log;
    if (!log_path.empty()) {
        log.open(log_path, std::ios::binary);
        if (!log) throw DataError("cannot open log file: " + log_path);
    }
    auto on_epoch = [&](const EpochLog& entry, const BiModel& model) {
        std::cout << "epoch " << entry.epoch << " loss " << entry.monitored_loss
                  << " seconds " << entry.seconds << "\n";
        if (log) {
            log << "epoch " << entry.epoch << " loss " << entry.monitored_loss
                << " seconds " << entry.seconds << "\n";
        }
        if (checkpoint_every > 0 && entry.epoch % checkpoint_every == 0 &&
            entry.epoch < config.epochs) {
            save_model(model, out + ".ckpt" + std::to_string(entry.epoch));
        }
    };

    const TrainResult result = train(corpora, config, on_epoch);
    save_model(result.model, out);

    manifest.set("command", std::string("train"));
    manifest.set("dim", static_cast<std::uint64_t>(config.dim));
    manifest.set("step_size", config.step_size);
    manifest.set("lambda", config.lambda);
    manifest.set("noise_count", static_cast<std::uint64_t>(config.noise_count));
    manifest.set("margin", config.margin);
    manifest.set("epochs", static_cast<std::uint64_t>(config.epochs));
    manifest.set("seed", config.seed);
    manifest.set("init_std", config.init_std);
    manifest.set("symmetric_noise", std::string(config.symmetric_noise ? "true" : "false"));
    manifest.add_artifact(out);
    manifest.set("seconds",
                 std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count());
    manifest.save(out + ".manifest");
    std::cout << "wrote " << out << "\n";
    return 0;
}

int run_export(const std::string& model_path, const std::string& lang,
               const std::string& vocab_path, const std::string& out) {
    const BiModel model = load_model(model_path);
    const Vocabulary vocab = Vocabulary::load(vocab_path);
    if (!model.has(lang)) throw DataError("model has no table for language: " + lang);
    export_embeddings(model.table(lang), vocab, out);
    std::cout << "wrote " << out << "\n";
    return 0;
}

int run_nn(const std::string& model_path, const std::string& query, const std::string& lang,
           const std::string& target_lang, const std::string& vocab_path,
           const std::string& target_vocab_path, std::size_t top_k) {
    const BiModel model = load_model(model_path);
    const Vocabulary vocab = Vocabulary::load(vocab_path);
    const Vocabulary target_vocab = Vocabulary::load(target_vocab_path);
    const auto id = vocab.lookup(query);
    if (!id) throw DataError("token not in " + lang + " vocabulary: " + query);

    const auto& neighbors =
        nearest_neighbors(model.table(lang).row(*id), model.table(target_lang), top_k);
    for (std::size_t r = 0; r < neighbors.size(); ++r) {
        std::cout << (r + 1) << " " << target_vocab.token(neighbors[r].first) << " "
                  << neighbors[r].second << "\n";
    }
    return 0;
}

int run_cldc(const std::string& model_path, const std::string& train_docs_path,
             const std::string& train_vocab_path, const std::string& test_docs_path,
             const std::string& test_vocab_path, const std::string& labels_path,
             const std::vector<std::size_t>& sizes, std::size_t perceptron_epochs,
             std::uint64_t seed, const std::string& out) {
    const BiModel model = load_model(model_path);
    const Vocabulary train_vocab = Vocabulary::load(train_vocab_path);
    const Vocabulary test_vocab = Vocabulary::load(test_vocab_path);
    const DocumentSet train_docs = load_documents(train_docs_path, labels_path, train_vocab);
    const DocumentSet test_docs = load_documents(test_docs_path, labels_path, test_vocab);
    if (train_docs.rejected + test_docs.rejected > 0) {
        std::cerr << "warning: rejected " << train_docs.rejected << " train and "
                  << test_docs.rejected << " test documents with no in-vocabulary content\n";
    }

    const auto results =
        evaluate_cldc(train_docs, test_docs, model, sizes, perceptron_epochs, seed);

    std::ofstream table(out, std::ios::binary);
    if (!table) throw DataError("cannot open report file: " + out);
    nlohmann::json records = nlohmann::json::array();
    for (const auto& r : results) {
        table << r.train_size << "\t" << r.accuracy << "\n";
        std::cout << r.train_size << "\t" << r.accuracy << "\n";
        records.push_back({{"size", r.train_size},
                           {"accuracy", r.accuracy},
                           {"majority_baseline", r.majority_baseline}});
    }
    std::ofstream json_out(out + ".json", std::ios::binary);
    json_out << records.dump(2) << "\n";
    std::cout << "majority baseline " << results.front().majority_baseline << "\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-lingual sentence-composition embeddings: training, export, "
                 "nearest neighbors and document-classification evaluation"};
    app.require_subcommand(1);

    // vocab
    auto* vocab_cmd = app.add_subcommand("vocab", "Build a vocabulary from text files");
    std::vector<std::string> vocab_inputs;
    std::uint64_t min_count = 1;
    std::string vocab_lang = "xx", vocab_out;
    vocab_cmd->add_option("--input", vocab_inputs, "input text files")->required();
    vocab_cmd->add_option("--min-count", min_count, "minimum token count");
    vocab_cmd->add_option("--lang", vocab_lang, "language tag")->required();
    vocab_cmd->add_option("--out", vocab_out, "output vocabulary file")->required();

    // train
    auto* train_cmd = app.add_subcommand("train", "Train embeddings on parallel corpora");
    std::vector<std::string> corpus_args;
    TrainConfig config;
    std::string train_out, train_log;
    std::size_t checkpoint_every = 0, threads = 1;
    train_cmd->add_option("--corpus", corpus_args,
                          "corpus group: <text_a> <text_b> <vocab_a> <vocab_b>; repeatable")
        ->required();
    train_cmd->add_option("--dim", config.dim, "embedding dimensionality");
    train_cmd->add_option("--step-size", config.step_size, "AdaGrad base step size");
    train_cmd->add_option("--lambda", config.lambda, "L2 regularization strength");
    train_cmd->add_option("--noise-count", config.noise_count, "noise samples per pair");
    train_cmd->add_option("--margin", config.margin, "hinge margin");
    train_cmd->add_option("--epochs", config.epochs, "training epochs");
    train_cmd->add_option("--seed", config.seed, "master seed");
    train_cmd->add_option("--init-std", config.init_std, "Gaussian init std deviation");
    train_cmd->add_flag("--symmetric-noise", config.symmetric_noise,
                        "also sample noise from the source side");
    train_cmd->add_option("--checkpoint-every", checkpoint_every,
                          "write a checkpoint every N epochs (0 = off)");
    train_cmd->add_option("--threads", threads, "worker threads (1 = deterministic)");
    train_cmd->add_option("--log", train_log, "per-epoch log file");
    train_cmd->add_option("--out", train_out, "output model file")->required();

    // export
    auto* export_cmd = app.add_subcommand("export", "Export one table as text vectors");
    std::string export_model, export_lang, export_vocab, export_out;
    export_cmd->add_option("--model", export_model)->required();
    export_cmd->add_option("--lang", export_lang)->required();
    export_cmd->add_option("--vocab", export_vocab)->required();
    export_cmd->add_option("--out", export_out)->required();

    // nn
    auto* nn_cmd = app.add_subcommand("nn", "Cross-lingual nearest-neighbor query");
    std::string nn_model, nn_query, nn_lang, nn_target, nn_vocab, nn_target_vocab;
    std::size_t top_k = 10;
    nn_cmd->add_option("--model", nn_model)->required();
    nn_cmd->add_option("--query", nn_query)->required();
    nn_cmd->add_option("--lang", nn_lang, "query language")->required();
    nn_cmd->add_option("--target-lang", nn_target)->required();
    nn_cmd->add_option("--vocab", nn_vocab, "query-language vocabulary")->required();
    nn_cmd->add_option("--target-vocab", nn_target_vocab)->required();
    nn_cmd->add_option("--top-k", top_k);

    // cldc
    auto* cldc_cmd = app.add_subcommand("cldc", "Cross-lingual document classification");
    std::string cldc_model, cldc_train, cldc_train_vocab, cldc_test, cldc_test_vocab;
    std::string cldc_labels, cldc_out;
    std::vector<std::size_t> cldc_sizes;
    std::size_t perceptron_epochs = 10;
    std::uint64_t cldc_seed = 1;
    cldc_cmd->add_option("--model", cldc_model)->required();
    cldc_cmd->add_option("--train-docs", cldc_train)->required();
    cldc_cmd->add_option("--train-vocab", cldc_train_vocab)->required();
    cldc_cmd->add_option("--test-docs", cldc_test)->required();
    cldc_cmd->add_option("--test-vocab", cldc_test_vocab)->required();
    cldc_cmd->add_option("--labels", cldc_labels, "label map file")->required();
    cldc_cmd->add_option("--sizes", cldc_sizes, "training sizes")->required();
    cldc_cmd->add_option("--perceptron-epochs", perceptron_epochs);
    cldc_cmd->add_option("--seed", cldc_seed);
    cldc_cmd->add_option("--out", cldc_out, "report file")->required();

    try {
        app.parse(argc, argv);
        if (*vocab_cmd) return run_vocab(vocab_inputs, min_count, vocab_lang, vocab_out);
        if (*train_cmd) {
            return run_train(corpus_args, config, train_out, train_log, checkpoint_every,
                             threads);
        }
        if (*export_cmd) return run_export(export_model, export_lang, export_vocab, export_out);
        if (*nn_cmd) {
            return run_nn(nn_model, nn_query, nn_lang, nn_target, nn_vocab, nn_target_vocab,
                          top_k);
        }
        if (*cldc_cmd) {
            return run_cldc(cldc_model, cldc_train, cldc_train_vocab, cldc_test,
                            cldc_test_vocab, cldc_labels, cldc_sizes, perceptron_epochs,
                            cldc_seed, cldc_out);
        }
        return 1;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    } catch (const bicvm::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    } catch (const bicvm::DataError& e) {
        std::cerr << "data error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 3;
    }
}
