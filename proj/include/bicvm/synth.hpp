#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "bicvm/classifier.hpp"
#include "bicvm/corpus.hpp"
#include "bicvm/vocabulary.hpp"

namespace bicvm {

// Ground-truth-known corpus generation for desk-scale experiments:
// tokenwise-bijective translations, pivot triads and labeled documents.
struct SyntheticSpec {
    std::size_t vocab_size = 500;
    std::size_t min_sentence_len = 3;
    std::size_t max_sentence_len = 12;
    std::size_t corpus_size = 10000;

    std::size_t class_count = 4;
    std::size_t tokens_per_class = 10;
    double class_token_rate = 0.3;
    std::size_t doc_count = 1000;
    std::size_t min_doc_sentences = 3;
    std::size_t max_doc_sentences = 8;

    std::string lang_a = "aa";
    std::string lang_b = "bb";
    std::string lang_c = "cc";
    std::uint64_t seed = 1;

    void validate() const;
};

// Tokens "w0".."w{V-1}", each with a nominal count of 1.
Vocabulary synthetic_vocabulary(const std::string& language_tag, std::size_t vocab_size);

struct BijectivePair {
    ParallelCorpus corpus;
    std::vector<WordId> bijection;  // id in A -> id in B
};

// Language-B sentences are the tokenwise image of the language-A sentences
// under a seeded random bijection.
BijectivePair gen_bijective_pair(const SyntheticSpec& spec);

struct PivotTriad {
    ParallelCorpus corpus_ab;
    ParallelCorpus corpus_ac;
    std::vector<WordId> bijection_ab;  // A -> B
    std::vector<WordId> bijection_ac;  // A -> C
    std::vector<WordId> bijection_bc;  // B -> C, composed ground truth
};

// Two corpora sharing pivot language A with disjoint A-side sentence sets
// and no direct B-C pairs.
PivotTriad gen_pivot_triad(const SyntheticSpec& spec);

// Balanced labeled documents whose class-indicative tokens (class c owns
// ids [c*tokens_per_class, (c+1)*tokens_per_class)) appear at an elevated
// rate. `mapping` translates drawn ids tokenwise (empty = identity),
// producing the same documents' distribution in another language.
DocumentSet gen_labeled_docs(const SyntheticSpec& spec, const std::string& language_tag,
                             const std::vector<WordId>& mapping, std::uint64_t seed);

// Decode a corpus back to the plain-text parallel file format.
void write_text_corpus(const ParallelCorpus& corpus, const Vocabulary& vocab_a,
                       const Vocabulary& vocab_b, const std::string& file_a,
                       const std::string& file_b);

// Emit the labeled-document block format consumed by the classifier.
void write_documents(const DocumentSet& set, const Vocabulary& vocab,
                     const std::string& doc_path);

}  // namespace bicvm
