#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>
#include <utility>
#include <vector>

namespace bicvm {

// splitmix64 finalizer; used to derive independent sub-seeds from the
// single user-facing seed so components never share rng streams.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t salt) {
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (salt + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Deterministic rng built on std::mt19937_64 (whose output sequence is
// fixed by the standard). Bounded draws and the Gaussian transform are
// implemented here rather than with std::*_distribution, which is
// implementation-defined; this keeps every artifact bit-reproducible
// across standard libraries.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() { return engine_(); }

    // Unbiased draw in [0, n) via modulo rejection:
    //   repeat x = next() until x - (x % n) fits without wrap; return x % n.
    std::uint64_t bounded(std::uint64_t n) {
        for (;;) {
            const std::uint64_t x = engine_();
            const std::uint64_t r = x % n;
            if (x - r <= std::numeric_limits<std::uint64_t>::max() - (n - 1)) {
                return r;
            }
        }
    }

    // Uniform in (0, 1], 53-bit resolution.
    double uniform01() {
        return static_cast<double>((engine_() >> 11) + 1) * 0x1.0p-53;
    }

    // Box-Muller, one draw per call with the spare cached.
    double gaussian(double std_dev) {
        if (has_spare_) {
            has_spare_ = false;
            return spare_ * std_dev;
        }
        const double u1 = uniform01();
        const double u2 = uniform01();
        const double radius = std::sqrt(-2.0 * std::log(u1));
        const double angle = 2.0 * M_PI * u2;
        spare_ = radius * std::sin(angle);
        has_spare_ = true;
        return radius * std::cos(angle) * std_dev;
    }

    // Fisher-Yates with bounded(); std::shuffle is not portable.
    template <typename T>
    void shuffle(std::vector<T>& items) {
        if (items.size() < 2) return;
        for (std::size_t i = items.size() - 1; i > 0; --i) {
            const std::size_t j = static_cast<std::size_t>(bounded(i + 1));
            std::swap(items[i], items[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace bicvm
