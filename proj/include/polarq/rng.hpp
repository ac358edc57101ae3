#pragma once

#include <cstdint>
#include <random>

namespace polarq {

// Deterministic random source. The raw generator is std::mt19937_64, whose
// output sequence is fixed by the standard; every sampler here is built on
// those raw draws directly, so seeded results are byte-identical across
// platforms and standard library implementations.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    // Independent stream derived from a master seed and a stream id.
    static Rng derived(std::uint64_t master, std::uint64_t stream);

    std::uint64_t next_u64() { return gen_(); }

    // Uniform in [0,1) with 53 random bits.
    double next_double() {
        return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
    }

    // Uniform in [lo, hi).
    double next_in(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Uniform integer in [0, n), n > 0. Rejection keeps it unbiased.
    std::uint64_t next_below(std::uint64_t n);

    // Standard normal via Box-Muller; pairs are cached.
    double next_normal();

    // Gamma(shape, 1) via Marsaglia-Tsang, boosted for shape < 1.
    double next_gamma(double shape);

private:
    std::mt19937_64 gen_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace polarq
