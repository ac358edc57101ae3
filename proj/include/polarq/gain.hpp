#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "polarq/channel.hpp"
#include "polarq/dist.hpp"
#include "polarq/rng.hpp"

namespace polarq {

/// Catalog of the entropy inequalities checked by the verification suite.
/// Each entry is a closed-form lower/upper bound evaluated on concrete
/// operands; see verify_bound for the operand conventions.
enum class BoundId {
    strong_convexity,         // mixture entropy beats the convex combination by an L1 term
    shift_mixture_gain,       // shift mixtures gain over H(p) via the two largest weights
    cyclic_shift_distance,    // distinct shifts of p are L1-separated (prime q)
    tail_term,                // -(1-e)lg(1-e) <= -(1/6) e lg e for small e
    residual_log_dominance,   // e lg((q-1)/e) <= (5/4) e lg(1/e) for small e
    xlog_monotone,            // x lg(1/x) increasing below 1/e
    low_entropy_lower,        // spike dist: H >= e lg(1/e)/lg q
    low_entropy_upper,        // spike dist: H <= 17 e lg(1/e)/(12 lg q)
    low_entropy_convolution,  // two spikes: weighted-average gain with constant 1/51
    taylor_bounds,            // two-sided quadratic bounds on -x lg x / lg q around 1/q
    near_uniform_entropy,     // 1 - Theta(delta^2) sandwich on H near uniform
    near_uniform_convolution, // near-uniform pair: additive gain of the sum
    max_entropy,              // H(A+B) >= max(H(A), H(B))
    weighted_average_gain,    // H(A+B) >= (2H(A)+H(B))/3 + c min(T(A), T(B))
};

const char* to_string(BoundId id);

/// The twelve closed-form checks (everything except the two convolution
/// gain theorems, which have their own entry points below).
std::vector<BoundId> bound_catalog();

struct BoundCheckReport {
    BoundId bound_id;
    std::string inputs;  // serialized operands, also hashed into CSV digests
    double lhs = 0.0;
    double rhs = 0.0;
    double margin = 0.0;  // lhs - rhs
    bool passed = false;  // margin >= -1e-12
    int case_label = 0;   // weighted_average_gain only: entropy regime 1..5
};

/// Constants of the weighted-average gain bound for alphabet size q, plus
/// the empirically estimated conditional gain coefficient.
struct GainConstants {
    int q = 0;
    double gamma0 = 0.0;
    double c = 0.0;
    double alpha_estimate = 0.0;

    static GainConstants for_q(int q);  // gamma0 and c from q; alpha left 0
};

/// H(A+B) - (H(A)+H(B))/2 for independent A ~ a, B ~ b: the entropic Ruzsa
/// distance. Nonnegative up to rounding.
double gain_unconditional(const DistQ& a, const DistQ& b);

/// H(A+B) >= max(H(A), H(B)).
BoundCheckReport check_max_ineq(const DistQ& a, const DistQ& b);

/// H(A+B) >= (2 H(A) + H(B))/3 + c min(T(A), T(B)) with the inputs oriented
/// so H(A) >= H(B); prime q only. The report labels which of the five
/// entropy regimes (by the gamma0 thresholds) the pair falls into.
BoundCheckReport check_wtavg(const DistQ& a, const DistQ& b, const GainConstants& consts);

/// H(X1+X2 | Y1,Y2) - H(X|Y) for two i.i.d. copies of the channel: the
/// weight-average over output pairs (y,z) of the pairwise Ruzsa distance.
double conditional_gain(const JointChannel& w);

struct AlphaEstimate {
    GainConstants constants;  // alpha_estimate = smallest observed gain/T ratio
    JointChannel minimizer;   // channel attaining it
};

/// Empirical lower estimate of the conditional gain coefficient: minimizes
/// conditional_gain(w) / T(w) over seeded random channels, then refines
/// around the incumbent with coordinate perturbations of decaying step.
/// Channels with T <= 1e-6 are excluded (the ratio degenerates there).
AlphaEstimate estimate_alpha(int q, int trials, std::uint64_t seed, int refinement_steps);

/// Operands for verify_bound. Meaning per BoundId:
///   strong_convexity:         dists {X, Y}, scalars {alpha}
///   shift_mixture_gain:       dists {p}, scalars = q mixture weights, ints {i, j}
///   cyclic_shift_distance:    dists {p}, ints {i, j}; q prime
///   tail_term:                scalars {eps}, eps <= 1/500
///   residual_log_dominance:   scalars {eps}, ints {q}; eps <= 1/(q-1)^4
///   xlog_monotone:            scalars {x1, x2}, 0 < x1 <= x2 < 1/e
///   low_entropy_lower:        dists {p}; eps = 1 - max entry
///   low_entropy_upper:        dists {p}; eps <= min(1/500, 1/(q-1)^4)
///   low_entropy_convolution:  dists {X, Y}; both eps bounds as above
///   taylor_bounds:            scalars {t}, ints {q}; t in [-1/q, (q-1)/q]
///   near_uniform_entropy:     dists {p}
///   near_uniform_convolution: dists {X, Y}; max |p(i)-1/q| <= 1/(2q^2) each
///   max_entropy:              dists {A, B}
///   weighted_average_gain:    dists {A, B}; q prime
struct BoundOperands {
    std::vector<DistQ> dists;
    std::vector<double> scalars;
    std::vector<int> ints;
};

/// Evaluates one catalog inequality on concrete operands. Operands that
/// violate the bound's hypotheses are rejected with an error naming the
/// failed precondition; they are never scored as failures.
BoundCheckReport verify_bound(BoundId id, const BoundOperands& operands);

/// Random operands satisfying the bound's hypotheses, for sweep drivers.
BoundOperands sample_bound_operands(BoundId id, int q, Rng& rng);

} // namespace polarq
