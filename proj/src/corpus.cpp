#include "bicvm/corpus.hpp"

#include <fstream>

#include "bicvm/error.hpp"

namespace bicvm {

Sentence encode(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
    Sentence s;
    s.ids.reserve(tokens.size());
    for (const auto& token : tokens) {
        if (auto id = vocab.lookup(token)) s.ids.push_back(*id);
    }
    return s;
}

namespace {

std::vector<std::string> read_lines(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open corpus file: " + path);
    std::vector<std::string> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        lines.push_back(std::move(line));
    }
    return lines;
}

}  // namespace

ParallelCorpus load_parallel(const std::string& file_a, const std::string& file_b,
                             const Vocabulary& vocab_a, const Vocabulary& vocab_b) {
    const auto lines_a = read_lines(file_a);
    const auto lines_b = read_lines(file_b);
    if (lines_a.size() != lines_b.size()) {
        throw DataError("parallel files are not aligned: " + file_a + " has " +
                        std::to_string(lines_a.size()) + " lines, " + file_b +
                        " has " + std::to_string(lines_b.size()));
    }

    ParallelCorpus corpus;
    corpus.lang_a = vocab_a.language_tag();
    corpus.lang_b = vocab_b.language_tag();
    corpus.vocab_size_a = vocab_a.size();
    corpus.vocab_size_b = vocab_b.size();
    for (std::size_t i = 0; i < lines_a.size(); ++i) {
        Sentence a = encode(normalize_line(lines_a[i]), vocab_a);
        Sentence b = encode(normalize_line(lines_b[i]), vocab_b);
        if (a.empty() || b.empty()) {
            ++corpus.removed_pairs;
            continue;
        }
        corpus.pairs.emplace_back(std::move(a), std::move(b));
    }
    return corpus;
}

ParallelCorpus make_parallel(const std::string& lang_a, const std::string& lang_b,
                             std::size_t vocab_size_a, std::size_t vocab_size_b,
                             std::vector<std::pair<Sentence, Sentence>> pairs) {
    ParallelCorpus corpus;
    corpus.lang_a = lang_a;
    corpus.lang_b = lang_b;
    corpus.vocab_size_a = vocab_size_a;
    corpus.vocab_size_b = vocab_size_b;
    corpus.pairs = std::move(pairs);
    for (const auto& [a, b] : corpus.pairs) {
        if (a.empty() || b.empty()) {
            throw DataError("parallel corpus contains an empty sentence");
        }
    }
    return corpus;
}

}  // namespace bicvm
