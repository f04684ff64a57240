#include "fdglm/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace fdglm {

namespace {

constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ULL;

std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

}  // namespace

Rng Rng::substream(std::uint64_t seed, std::uint64_t index) {
    return Rng(mix64(seed + kGolden * (index + 1)));
}

std::uint64_t Rng::next_u64() {
    state_ += kGolden;
    return mix64(state_);
}

double Rng::uniform01() {
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::uniform_open01() {
    return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double Rng::normal() {
    if (has_spare_normal_) {
        has_spare_normal_ = false;
        return spare_normal_;
    }
    const double u1 = uniform_open01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 6.283185307179586477 * u2;
    spare_normal_ = radius * std::sin(angle);
    has_spare_normal_ = true;
    return radius * std::cos(angle);
}

double Rng::exponential() {
    return -std::log(uniform_open01());
}

bool Rng::bernoulli(double p) {
    return uniform01() < p;
}

std::uint64_t poisson_draw(Rng& rng, double mean) {
    if (!(mean >= 0.0) || !std::isfinite(mean)) {
        throw std::invalid_argument("poisson_draw: mean must be finite and nonnegative");
    }
    std::uint64_t total = 0;
    while (mean > 30.0) {
        // Poisson(a+b) = Poisson(a) + Poisson(b) with independent summands.
        const double chunk = 30.0;
        const double limit = std::exp(-chunk);
        double prod = rng.uniform_open01();
        std::uint64_t k = 0;
        while (prod > limit) {
            prod *= rng.uniform_open01();
            ++k;
        }
        total += k;
        mean -= chunk;
    }
    const double limit = std::exp(-mean);
    double prod = rng.uniform_open01();
    std::uint64_t k = 0;
    while (prod > limit) {
        prod *= rng.uniform_open01();
        ++k;
    }
    return total + k;
}

}  // namespace fdglm
