#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace cgtrack {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Deterministic random source. Draws go through explicit transforms rather
// than std distributions, whose output is implementation-defined; mt19937_64
// itself is pinned by the standard, so streams replay identically everywhere.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Inclusive on both ends.
    int uniform_int(int lo, int hi) {
        const double u = uniform();
        const int span = hi - lo + 1;
        int v = lo + static_cast<int>(u * span);
        return v > hi ? hi : v;
    }

    // Standard normal via the polar method (sqrt/log only; no trig).
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform() - 1.0;
            v = 2.0 * uniform() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        has_spare_ = true;
        return u * m;
    }

private:
    std::mt19937_64 gen_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

// Independent substream keyed by (seed, a, b). Draw order inside one
// substream is fixed; substreams never interact, so generation is
// deterministic regardless of evaluation order.
inline Rng substream(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    std::uint64_t k = splitmix64(seed ^ 0x6a09e667f3bcc909ULL);
    k = splitmix64(k ^ a);
    k = splitmix64(k ^ b);
    return Rng(k);
}

}  // namespace cgtrack
