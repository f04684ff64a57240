#pragma once

#include <cstdint>

namespace fdglm {

/// Counter-based 64-bit generator (splitmix64). Output i is a pure function
/// of (seed, i), and substream(seed, index) derives stream `index` from the
/// same seed by hashing, so adding replications never reshuffles existing
/// ones. All simulator determinism contracts rest on this class.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    /// Stream `index` of a seeded family of independent streams.
    static Rng substream(std::uint64_t seed, std::uint64_t index);

    std::uint64_t next_u64();

    /// Uniform on [0,1), 53-bit resolution.
    double uniform01();

    /// Uniform on the open interval (0,1); safe as input to log and 1/u.
    double uniform_open01();

    /// Standard normal via Box-Muller (deterministic, no rejection).
    double normal();

    /// Exponential with mean 1.
    double exponential();

    /// Bernoulli(p).
    bool bernoulli(double p);

private:
    std::uint64_t state_;
    bool has_spare_normal_ = false;
    double spare_normal_ = 0.0;
};

/// Poisson draw by exact inversion; means above 30 are split additively into
/// chunks so the method stays exact without underflow for any finite mean.
std::uint64_t poisson_draw(Rng& rng, double mean);

}  // namespace fdglm
