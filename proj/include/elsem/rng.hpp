#pragma once

#include <cstdint>
#include <random>

namespace elsem {

/// splitmix64 step; used to derive independent per-replication seeds from a master seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Seeded random stream. Replication r of a run seeded with s uses substream(s, r),
/// so results do not depend on how replications are scheduled across threads.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    static Rng substream(std::uint64_t master_seed, std::uint64_t index) {
        return Rng(splitmix64(master_seed ^ splitmix64(index + 1)));
    }

    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    double normal() { return std::normal_distribution<double>(0.0, 1.0)(engine_); }
    double exponential() { return std::exponential_distribution<double>(1.0)(engine_); }
    double gamma(double shape, double scale = 1.0) {
        return std::gamma_distribution<double>(shape, scale)(engine_);
    }
    double chi_squared(double dof) { return gamma(dof / 2.0, 2.0); }
    /// Uniform integer in [0, n).
    int uniform_int(int n) { return std::uniform_int_distribution<int>(0, n - 1)(engine_); }
    int sign() { return uniform_int(2) == 0 ? -1 : 1; }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
};

}  // namespace elsem
