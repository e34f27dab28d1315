#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bicvm/vocabulary.hpp"

namespace bicvm {

// Encoded sentence: non-empty id sequence valid for one Vocabulary.
struct Sentence {
    std::vector<WordId> ids;

    bool empty() const { return ids.empty(); }
    std::size_t size() const { return ids.size(); }
    bool operator==(const Sentence&) const = default;
};

// Sentence-aligned pairs for one language pair. Both sides are non-empty
// after encoding; removed_pairs counts lines dropped for emptiness
// (including pairs emptied by out-of-vocabulary dropping).
struct ParallelCorpus {
    std::string lang_a;
    std::string lang_b;
    std::size_t vocab_size_a = 0;
    std::size_t vocab_size_b = 0;
    std::vector<std::pair<Sentence, Sentence>> pairs;
    std::size_t removed_pairs = 0;

    std::size_t size() const { return pairs.size(); }
};

// Encode one normalized token sequence, silently dropping OOV tokens.
Sentence encode(const std::vector<std::string>& tokens, const Vocabulary& vocab);

// Line i of file_a pairs with line i of file_b. Throws DataError on a
// line-count mismatch (naming both counts) or an unreadable file.
ParallelCorpus load_parallel(const std::string& file_a, const std::string& file_b,
                             const Vocabulary& vocab_a, const Vocabulary& vocab_b);

// In-memory variant used by tests and the synthetic generators.
ParallelCorpus make_parallel(const std::string& lang_a, const std::string& lang_b,
                             std::size_t vocab_size_a, std::size_t vocab_size_b,
                             std::vector<std::pair<Sentence, Sentence>> pairs);

}  // namespace bicvm
