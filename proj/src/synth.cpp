#include "bicvm/synth.hpp"

#include <fstream>
#include <numeric>
#include <set>

#include "bicvm/error.hpp"
#include "bicvm/rng.hpp"

namespace bicvm {

namespace {

constexpr std::uint64_t kBijectionSalt = 0xB1;
constexpr std::uint64_t kSentenceSalt = 0x5E;

std::vector<WordId> random_bijection(std::size_t vocab_size, std::uint64_t seed) {
    std::vector<WordId> mapping(vocab_size);
    std::iota(mapping.begin(), mapping.end(), 0u);
    Rng rng(seed);
    rng.shuffle(mapping);
    return mapping;
}

Sentence random_sentence(const SyntheticSpec& spec, Rng& rng) {
    const std::size_t span = spec.max_sentence_len - spec.min_sentence_len + 1;
    const std::size_t len = spec.min_sentence_len + static_cast<std::size_t>(rng.bounded(span));
    Sentence s;
    s.ids.reserve(len);
    for (std::size_t i = 0; i < len; ++i) {
        s.ids.push_back(static_cast<WordId>(rng.bounded(spec.vocab_size)));
    }
    return s;
}

Sentence map_sentence(const Sentence& s, const std::vector<WordId>& mapping) {
    Sentence out;
    out.ids.reserve(s.ids.size());
    for (WordId id : s.ids) out.ids.push_back(mapping[id]);
    return out;
}

}  // namespace

void SyntheticSpec::validate() const {
    if (vocab_size < 2) throw ConfigError("synthetic vocabulary needs at least 2 words");
    if (min_sentence_len < 1 || min_sentence_len > max_sentence_len) {
        throw ConfigError("bad sentence length range");
    }
    if (class_count >= 1 && class_count * tokens_per_class > vocab_size) {
        throw ConfigError("class token sets exceed the vocabulary");
    }
    if (class_token_rate < 0.0 || class_token_rate > 1.0) {
        throw ConfigError("class_token_rate must be in [0, 1]");
    }
}

Vocabulary synthetic_vocabulary(const std::string& language_tag, std::size_t vocab_size) {
    std::vector<std::vector<std::string>> lines(1);
    lines[0].reserve(vocab_size);
    for (std::size_t i = 0; i < vocab_size; ++i) lines[0].push_back("w" + std::to_string(i));
    return Vocabulary::build(lines, 1, language_tag);
}

BijectivePair gen_bijective_pair(const SyntheticSpec& spec) {
    spec.validate();
    BijectivePair result;
    result.bijection = random_bijection(spec.vocab_size, mix_seed(spec.seed, kBijectionSalt));

    std::vector<std::pair<Sentence, Sentence>> pairs;
    pairs.reserve(spec.corpus_size);
    Rng rng(mix_seed(spec.seed, kSentenceSalt));
    for (std::size_t i = 0; i < spec.corpus_size; ++i) {
        Sentence a = random_sentence(spec, rng);
        Sentence b = map_sentence(a, result.bijection);
        pairs.emplace_back(std::move(a), std::move(b));
    }
    result.corpus = make_parallel(spec.lang_a, spec.lang_b, spec.vocab_size, spec.vocab_size,
                                  std::move(pairs));
    return result;
}

PivotTriad gen_pivot_triad(const SyntheticSpec& spec) {
    spec.validate();
    PivotTriad triad;
    triad.bijection_ab = random_bijection(spec.vocab_size, mix_seed(spec.seed, kBijectionSalt));
    triad.bijection_ac =
        random_bijection(spec.vocab_size, mix_seed(spec.seed, kBijectionSalt + 1));

    // bc = ac o ab^{-1}
    triad.bijection_bc.resize(spec.vocab_size);
    for (std::size_t a = 0; a < spec.vocab_size; ++a) {
        triad.bijection_bc[triad.bijection_ab[a]] = triad.bijection_ac[a];
    }

    // Disjoint pivot-side sentence sets across the two corpora.
    std::set<std::vector<WordId>> seen;
    Rng rng(mix_seed(spec.seed, kSentenceSalt));
    auto fresh_sentence = [&] {
        for (;;) {
            Sentence s = random_sentence(spec, rng);
            if (seen.insert(s.ids).second) return s;
        }
    };

    std::vector<std::pair<Sentence, Sentence>> pairs_ab, pairs_ac;
    pairs_ab.reserve(spec.corpus_size);
    pairs_ac.reserve(spec.corpus_size);
    for (std::size_t i = 0; i < spec.corpus_size; ++i) {
        Sentence a = fresh_sentence();
        pairs_ab.emplace_back(a, map_sentence(a, triad.bijection_ab));
    }
    for (std::size_t i = 0; i < spec.corpus_size; ++i) {
        Sentence a = fresh_sentence();
        pairs_ac.emplace_back(a, map_sentence(a, triad.bijection_ac));
    }
    triad.corpus_ab = make_parallel(spec.lang_a, spec.lang_b, spec.vocab_size,
                                    spec.vocab_size, std::move(pairs_ab));
    triad.corpus_ac = make_parallel(spec.lang_a, spec.lang_c, spec.vocab_size,
                                    spec.vocab_size, std::move(pairs_ac));
    return triad;
}

DocumentSet gen_labeled_docs(const SyntheticSpec& spec, const std::string& language_tag,
                             const std::vector<WordId>& mapping, std::uint64_t seed) {
    spec.validate();
    if (spec.class_count < 2) throw ConfigError("labeled documents need at least 2 classes");
    if (!mapping.empty() && mapping.size() != spec.vocab_size) {
        throw ConfigError("mapping size does not match the vocabulary");
    }

    DocumentSet set;
    for (std::size_t c = 0; c < spec.class_count; ++c) {
        set.class_names.push_back("class" + std::to_string(c));
    }

    Rng rng(seed);
    for (std::size_t i = 0; i < spec.doc_count; ++i) {
        LabeledDocument doc;
        doc.language_tag = language_tag;
        doc.label = i % spec.class_count;  // balanced classes

        const std::size_t sent_span = spec.max_doc_sentences - spec.min_doc_sentences + 1;
        const std::size_t n_sentences =
            spec.min_doc_sentences + static_cast<std::size_t>(rng.bounded(sent_span));
        for (std::size_t s = 0; s < n_sentences; ++s) {
            const std::size_t len_span = spec.max_sentence_len - spec.min_sentence_len + 1;
            const std::size_t len =
                spec.min_sentence_len + static_cast<std::size_t>(rng.bounded(len_span));
            Sentence sent;
            sent.ids.reserve(len);
            for (std::size_t w = 0; w < len; ++w) {
                WordId id;
                if (rng.uniform01() <= spec.class_token_rate) {
                    id = static_cast<WordId>(doc.label * spec.tokens_per_class +
                                             rng.bounded(spec.tokens_per_class));
                } else {
                    id = static_cast<WordId>(rng.bounded(spec.vocab_size));
                }
                sent.ids.push_back(mapping.empty() ? id : mapping[id]);
            }
            doc.sentences.push_back(std::move(sent));
        }
        set.docs.push_back(std::move(doc));
    }
    return set;
}

void write_text_corpus(const ParallelCorpus& corpus, const Vocabulary& vocab_a,
                       const Vocabulary& vocab_b, const std::string& file_a,
                       const std::string& file_b) {
    std::ofstream out_a(file_a, std::ios::binary);
    std::ofstream out_b(file_b, std::ios::binary);
    if (!out_a || !out_b) throw DataError("cannot open corpus files for writing");
    auto write_side = [](std::ofstream& out, const Sentence& s, const Vocabulary& vocab) {
        for (std::size_t i = 0; i < s.ids.size(); ++i) {
            if (i) out << " ";
            out << vocab.token(s.ids[i]);
        }
        out << "\n";
    };
    for (const auto& [a, b] : corpus.pairs) {
        write_side(out_a, a, vocab_a);
        write_side(out_b, b, vocab_b);
    }
}

void write_documents(const DocumentSet& set, const Vocabulary& vocab,
                     const std::string& doc_path) {
    std::ofstream out(doc_path, std::ios::binary);
    if (!out) throw DataError("cannot open document file for writing: " + doc_path);
    for (const auto& doc : set.docs) {
        out << "#label " << set.class_names.at(doc.label) << "\n";
        for (const Sentence& s : doc.sentences) {
            for (std::size_t i = 0; i < s.ids.size(); ++i) {
                if (i) out << " ";
                out << vocab.token(s.ids[i]);
            }
            out << "\n";
        }
        out << "\n";
    }
    if (!out) throw DataError("write failed: " + doc_path);
}

}  // namespace bicvm
