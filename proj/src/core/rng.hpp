#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "core/constants.hpp"
#include "core/error.hpp"
#include "core/vec3.hpp"

namespace proxsim {

/// splitmix64 step; used to derive independent stream seeds from
/// (master_seed, scenario_id, tag) so parallel generation is order-independent.
inline uint64_t splitmix64(uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

inline uint64_t derive_seed(uint64_t master, uint64_t a, uint64_t b = 0) {
    return splitmix64(splitmix64(splitmix64(master) ^ a) ^ (b * 0x9e3779b97f4a7c15ULL + 1));
}

/// mt19937_64 with hand-rolled transforms. std::*_distribution output is not
/// pinned by the standard, so distributions are implemented here to keep
/// datasets byte-identical across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed) : engine_(seed) {}

    uint64_t next_u64() { return engine_(); }

    /// Uniform in [0, 1), 53-bit resolution.
    double u01() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * u01(); }

    /// Standard normal via Box-Muller (no spare caching; 2 engine draws per call).
    double gauss() {
        const double u1 = u01();
        const double u2 = u01();
        return std::sqrt(-2.0 * std::log1p(-u1)) * std::cos(kTwoPi * u2);
    }

    /// Geometric on {1, 2, ...} with success probability p (mean 1/p).
    long geometric(double p) {
        require(p > 0.0 && p <= 1.0, ErrorKind::Invalid, "geometric: p must be in (0, 1]");
        if (p >= 1.0) return 1;
        const double u = u01();
        const long k = 1 + static_cast<long>(std::floor(std::log1p(-u) / std::log1p(-p)));
        return k < 1 ? 1 : k;
    }

    /// Isotropic unit vector.
    Vec3 unit_vector() {
        const double z = uniform(-1.0, 1.0);
        const double phi = uniform(0.0, kTwoPi);
        const double s = std::sqrt(std::max(0.0, 1.0 - z * z));
        return {s * std::cos(phi), s * std::sin(phi), z};
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace proxsim
