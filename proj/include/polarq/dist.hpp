#pragma once

#include <string>
#include <vector>

#include "polarq/rng.hpp"

namespace polarq {

/// Probability distribution over Z_q = {0, ..., q-1}, q >= 2.
///
/// Entries are nonnegative doubles summing to 1 within 1e-12. Construction
/// renormalizes small drift (up to 1e-9) and rejects anything further off,
/// so the invariant survives long pipelines of composite operations.
class DistQ {
public:
    explicit DistQ(std::vector<double> probs);

    static DistQ uniform(int q);
    static DistQ point_mass(int q, int symbol);

    int q() const { return static_cast<int>(probs_.size()); }
    double operator[](int i) const { return probs_[static_cast<std::size_t>(i)]; }
    const std::vector<double>& probs() const { return probs_; }

    bool operator==(const DistQ&) const = default;

private:
    std::vector<double> probs_;
};

/// Entropy normalized by lg q, in [0,1]; 0*lg 0 is 0. Terms are summed in
/// sorted order, so permutations of the same probabilities give bitwise
/// identical entropies.
double entropy_norm(const DistQ& p);

/// p shifted by j: result(m) = p(m-j mod q). Any integer j is accepted.
DistQ cyclic_shift(const DistQ& p, long long j);

/// Distribution of A+B mod q for independent A ~ a, B ~ b.
/// Each output entry sums its q products in sorted order, so inputs that are
/// equal as multisets of products convolve to bitwise identical results.
DistQ convolve(const DistQ& a, const DistQ& b);

/// Sum of |a(i) - b(i)|; twice the total variation distance, in [0,2].
double l1_distance(const DistQ& a, const DistQ& b);

/// Pointwise convex combination of parts. Weights must be nonnegative and
/// sum to 1 within the usual drift allowance.
DistQ mix(const std::vector<double>& weights, const std::vector<DistQ>& parts);

/// Symmetric Dirichlet(concentration) draw; deterministic given the rng
/// state. Large concentrations concentrate near uniform.
DistQ sample_random_dist(int q, double concentration, Rng& rng);

/// Text form "q=<q>;p=<v0>,<v1>,...", values with 17 significant digits.
std::string format_dist(const DistQ& p);
DistQ parse_dist(const std::string& text);

} // namespace polarq
