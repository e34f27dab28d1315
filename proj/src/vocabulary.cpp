#include "bicvm/vocabulary.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "bicvm/error.hpp"

namespace bicvm {

namespace {

// Unicode whitespace code points (White_Space=Yes).
bool is_unicode_space(char32_t cp) {
    switch (cp) {
        case 0x0009: case 0x000A: case 0x000B: case 0x000C: case 0x000D:
        case 0x0020: case 0x0085: case 0x00A0: case 0x1680:
        case 0x2028: case 0x2029: case 0x202F: case 0x205F: case 0x3000:
            return true;
        default:
            return cp >= 0x2000 && cp <= 0x200A;
    }
}

// Minimal UTF-8 decoder; malformed bytes are passed through as single
// code units so no input line can fail normalization.
char32_t decode_utf8(const std::string& s, std::size_t& i) {
    const unsigned char c0 = static_cast<unsigned char>(s[i]);
    std::size_t len = 1;
    char32_t cp = c0;
    if ((c0 & 0x80) == 0x00) {
        len = 1;
    } else if ((c0 & 0xE0) == 0xC0) {
        len = 2;
        cp = c0 & 0x1F;
    } else if ((c0 & 0xF0) == 0xE0) {
        len = 3;
        cp = c0 & 0x0F;
    } else if ((c0 & 0xF8) == 0xF0) {
        len = 4;
        cp = c0 & 0x07;
    } else {
        ++i;
        return c0;
    }
    if (i + len > s.size()) {
        ++i;
        return c0;
    }
    for (std::size_t k = 1; k < len; ++k) {
        const unsigned char c = static_cast<unsigned char>(s[i + k]);
        if ((c & 0xC0) != 0x80) {
            ++i;
            return c0;
        }
        cp = (cp << 6) | (c & 0x3F);
    }
    i += len;
    return cp;
}

}  // namespace

std::vector<std::string> normalize_line(const std::string& raw) {
    std::vector<std::string> tokens;
    std::string current;
    std::size_t i = 0;
    while (i < raw.size()) {
        const std::size_t start = i;
        const char32_t cp = decode_utf8(raw, i);
        if (is_unicode_space(cp)) {
            if (!current.empty()) {
                tokens.push_back(std::move(current));
                current.clear();
            }
            continue;
        }
        for (std::size_t k = start; k < i; ++k) {
            char c = raw[k];
            if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
            current.push_back(c);
        }
    }
    if (!current.empty()) tokens.push_back(std::move(current));
    return tokens;
}

void Vocabulary::insert(const std::string& token, std::uint64_t count) {
    token_to_id_.emplace(token, static_cast<WordId>(id_to_token_.size()));
    id_to_token_.push_back(token);
    counts_.push_back(count);
}

Vocabulary Vocabulary::build(const std::vector<std::vector<std::string>>& lines,
                             std::uint64_t min_count,
                             const std::string& language_tag) {
    if (min_count < 1) throw ConfigError("min_count must be >= 1");

    std::unordered_map<std::string, std::uint64_t> counts;
    std::vector<std::string> first_seen;
    for (const auto& line : lines) {
        for (const auto& token : line) {
            auto [it, fresh] = counts.emplace(token, 0);
            if (fresh) first_seen.push_back(token);
            ++it->second;
        }
    }

    Vocabulary vocab(language_tag);
    for (const auto& token : first_seen) {
        const std::uint64_t c = counts.at(token);
        if (c >= min_count) vocab.insert(token, c);
    }
    return vocab;
}

void Vocabulary::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open vocabulary file for writing: " + path);
    out << "#vocab v1 " << language_tag_ << " " << size() << "\n";
    for (std::size_t id = 0; id < size(); ++id) {
        out << id_to_token_[id] << "\t" << counts_[id] << "\n";
    }
    if (!out) throw DataError("write failed: " + path);
}

Vocabulary Vocabulary::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open vocabulary file: " + path);
    std::string header;
    if (!std::getline(in, header)) throw DataError("empty vocabulary file: " + path);

    std::istringstream hs(header);
    std::string magic, version, tag;
    std::size_t declared = 0;
    hs >> magic >> version >> tag >> declared;
    if (magic != "#vocab" || version != "v1") {
        throw DataError("bad vocabulary header in " + path + ": " + header);
    }

    Vocabulary vocab(tag);
    std::string line;
    while (std::getline(in, line)) {
        const auto tab = line.find('\t');
        if (tab == std::string::npos) {
            throw DataError("malformed vocabulary line in " + path + ": " + line);
        }
        vocab.insert(line.substr(0, tab), std::stoull(line.substr(tab + 1)));
    }
    if (vocab.size() != declared) {
        throw DataError("vocabulary size mismatch in " + path + ": header says " +
                        std::to_string(declared) + ", found " +
                        std::to_string(vocab.size()));
    }
    return vocab;
}

}  // namespace bicvm
