#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace bicvm {

// 64-bit FNV-1a over a file's bytes, rendered as 16 hex digits.
std::string file_digest(const std::string& path);

// Line-oriented key=value record of one CLI run: config snapshot, input
// digests, produced artifacts with their digests, timing.
class RunManifest {
public:
    void set(const std::string& key, const std::string& value);
    void set(const std::string& key, std::uint64_t value);
    void set(const std::string& key, double value);
    void add_input(const std::string& path);
    void add_artifact(const std::string& path);

    void save(const std::string& path) const;

private:
    std::vector<std::pair<std::string, std::string>> entries_;
};

}  // namespace bicvm
