#include "lolrec/rng.hpp"

#include <cmath>
#include <numbers>

#include "lolrec/errors.hpp"

namespace lolrec {

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    // splitmix64 finalizer over seed + golden-ratio-scaled stream index.
    std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (stream + 1);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

double Rng::uniform() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

std::uint64_t Rng::below(std::uint64_t n) {
    if (n == 0) throw DataError("Rng::below requires n > 0");
    // Lemire multiply-shift; the bias at 64-bit range is negligible.
    const unsigned __int128 wide = static_cast<unsigned __int128>(engine_()) * n;
    return static_cast<std::uint64_t>(wide >> 64);
}

double Rng::normal(double mean, double stddev) {
    if (stddev == 0.0) return mean;
    if (has_spare_) {
        has_spare_ = false;
        return mean + stddev * spare_;
    }
    // Box-Muller; 1 - u lies in (0, 1] so the log is always finite.
    const double u = uniform();
    const double v = uniform();
    const double radius = std::sqrt(-2.0 * std::log(1.0 - u));
    const double angle = 2.0 * std::numbers::pi * v;
    spare_ = radius * std::sin(angle);
    has_spare_ = true;
    return mean + stddev * radius * std::cos(angle);
}

namespace {

// Hörmann's PTRS transformed-rejection sampler, valid for mean >= 10.
std::uint64_t poisson_ptrs(Rng& rng, double mean) {
    const double log_mean = std::log(mean);
    const double b = 0.931 + 2.53 * std::sqrt(mean);
    const double a = -0.059 + 0.02483 * b;
    const double inv_alpha = 1.1239 + 1.1328 / (b - 3.4);
    const double v_r = 0.9277 - 3.6224 / (b - 2.0);
    for (;;) {
        const double u = rng.uniform() - 0.5;
        const double v = rng.uniform();
        const double us = 0.5 - std::fabs(u);
        const double k = std::floor((2.0 * a / us + b) * u + mean + 0.43);
        if (us >= 0.07 && v <= v_r) return static_cast<std::uint64_t>(k);
        if (k < 0.0 || (us < 0.013 && v > us)) continue;
        if (std::log(v) + std::log(inv_alpha) - std::log(a / (us * us) + b) <=
            k * log_mean - mean - std::lgamma(k + 1.0)) {
            return static_cast<std::uint64_t>(k);
        }
    }
}

// Knuth's product-of-uniforms inversion, fine for small means.
std::uint64_t poisson_small(Rng& rng, double mean) {
    const double limit = std::exp(-mean);
    std::uint64_t k = 0;
    double product = 1.0;
    do {
        ++k;
        product *= rng.uniform();
    } while (product > limit);
    return k - 1;
}

}  // namespace

std::uint64_t Rng::poisson(double mean) {
    if (mean < 0.0) throw DataError("poisson mean must be >= 0");
    if (mean == 0.0) return 0;
    if (mean < 10.0) return poisson_small(*this, mean);
    return poisson_ptrs(*this, mean);
}

}  // namespace lolrec
