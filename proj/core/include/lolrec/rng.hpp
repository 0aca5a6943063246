#ifndef LOLREC_RNG_HPP
#define LOLREC_RNG_HPP

#include <cstdint>
#include <random>
#include <vector>

namespace lolrec {

// Derives an independent stream seed from a base seed (splitmix64 step).
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

// Seeded generator used everywhere randomness is needed. All distributions
// are built directly on raw mt19937_64 output rather than the standard
// <random> distributions, so a given seed produces the same sequence on
// every platform and standard library.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t raw() { return engine_(); }

    // Uniform on [0, 1) with 53-bit resolution.
    double uniform();

    // Uniform integer in [0, n). n must be > 0.
    std::uint64_t below(std::uint64_t n);

    // Normal(mean, stddev) via Box-Muller. stddev == 0 returns mean exactly.
    double normal(double mean = 0.0, double stddev = 1.0);

    // Poisson(mean): inversion for small means, PTRS rejection for large.
    std::uint64_t poisson(double mean);

    // Fisher-Yates shuffle driven by below().
    template <class T>
    void shuffle(std::vector<T>& values) {
        for (std::size_t i = values.size(); i > 1; --i) {
            const auto j = static_cast<std::size_t>(below(i));
            std::swap(values[i - 1], values[j]);
        }
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace lolrec

#endif  // LOLREC_RNG_HPP
