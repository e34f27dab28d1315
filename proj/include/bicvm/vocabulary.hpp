#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace bicvm {

using WordId = std::uint32_t;

// Lowercase (ASCII range only; input is assumed pre-tokenized) and split
// on Unicode whitespace. Never fails: an empty result is a valid outcome.
std::vector<std::string> normalize_line(const std::string& raw);

// Per-language token <-> id bijection. Ids are contiguous from 0 and
// assigned in order of first occurrence. Immutable after construction.
class Vocabulary {
public:
    Vocabulary() = default;
    explicit Vocabulary(std::string language_tag)
        : language_tag_(std::move(language_tag)) {}

    // Tokens with count >= min_count get ids by first occurrence; the rest
    // are dropped (no unknown-token slot).
    static Vocabulary build(const std::vector<std::vector<std::string>>& lines,
                            std::uint64_t min_count,
                            const std::string& language_tag);

    const std::string& language_tag() const { return language_tag_; }
    std::size_t size() const { return id_to_token_.size(); }

    std::optional<WordId> lookup(const std::string& token) const {
        auto it = token_to_id_.find(token);
        if (it == token_to_id_.end()) return std::nullopt;
        return it->second;
    }

    const std::string& token(WordId id) const { return id_to_token_[id]; }
    std::uint64_t count(WordId id) const { return counts_[id]; }

    // "#vocab v1 <tag> <size>" header, then "token<TAB>count" per line.
    void save(const std::string& path) const;
    static Vocabulary load(const std::string& path);

private:
    void insert(const std::string& token, std::uint64_t count);

    std::string language_tag_;
    std::unordered_map<std::string, WordId> token_to_id_;
    std::vector<std::string> id_to_token_;
    std::vector<std::uint64_t> counts_;
};

}  // namespace bicvm
