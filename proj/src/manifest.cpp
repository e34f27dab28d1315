#include "bicvm/manifest.hpp"

#include <fstream>
#include <sstream>

#include "bicvm/error.hpp"

namespace bicvm {

std::string file_digest(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw DataError("cannot open file for digest: " + path);
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    char buffer[4096];
    while (in.read(buffer, sizeof(buffer)) || in.gcount() > 0) {
        for (std::streamsize i = 0; i < in.gcount(); ++i) {
            hash ^= static_cast<unsigned char>(buffer[i]);
            hash *= 0x100000001b3ULL;
        }
        if (!in) break;
    }
    std::ostringstream out;
    out << std::hex;
    for (int shift = 60; shift >= 0; shift -= 4) out << ((hash >> shift) & 0xF);
    return out.str();
}

void RunManifest::set(const std::string& key, const std::string& value) {
    entries_.emplace_back(key, value);
}

void RunManifest::set(const std::string& key, std::uint64_t value) {
    entries_.emplace_back(key, std::to_string(value));
}

void RunManifest::set(const std::string& key, double value) {
    std::ostringstream s;
    s << value;
    entries_.emplace_back(key, s.str());
}

void RunManifest::add_input(const std::string& path) {
    entries_.emplace_back("input." + path, file_digest(path));
}

void RunManifest::add_artifact(const std::string& path) {
    entries_.emplace_back("artifact." + path, file_digest(path));
}

void RunManifest::save(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw DataError("cannot open manifest for writing: " + path);
    for (const auto& [key, value] : entries_) out << key << "=" << value << "\n";
    if (!out) throw DataError("write failed: " + path);
}

}  // namespace bicvm
