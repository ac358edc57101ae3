#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "polarq/channel.hpp"

namespace polarq {

enum class StatMethod { exact, mc, bound };

const char* to_string(StatMethod m);

struct IndexStat {
    std::size_t index = 0;
    double h_hat = 0.0;    // conditional entropy estimate
    double z_hat = 0.0;    // confusability estimate
    double z_tilde = 0.0;  // recursion upper bound on the max confusability
    double h_stderr = 0.0;
    double z_stderr = 0.0;
};

/// Per-index statistics of the 2^n synthetic channels of one base channel,
/// with provenance enough to re-derive them deterministically.
struct IndexStats {
    int q = 2;
    int n = 0;
    StatMethod method = StatMethod::exact;
    std::size_t samples = 0;
    std::uint64_t seed = 0;
    std::vector<IndexStat> entries;  // size 2^n, index order
};

struct TrackResult {
    IndexStats stats;
    std::vector<JointChannel> channels;  // the 2^n synthetic channels
};

/// Walks the channel tree level by level: child 2j is the sum channel of
/// node j, child 2j+1 the second-input channel; duplicate outputs are folded
/// losslessly after every step. Throws (naming the level reached) as soon
/// as the projected atom count of a level exceeds the budget.
TrackResult track_channels_exact(const JointChannel& w, int n,
                                 std::size_t atom_budget = 4000000);

/// Genie-aided sampling: each sample draws a block from the channel, pushes
/// the true symbols through the successive-cancellation recursion, and
/// records per-index posterior statistics. h is the empirical conditional
/// entropy, z the empirical confusability of the true symbol. Deterministic
/// given the seed; samples are processed in fixed 1024-sample blocks whose
/// partial sums combine in block order, so results are byte-identical for
/// any worker count (threads = 0 picks the hardware count).
IndexStats estimate_index_stats_mc(const JointChannel& w, int n, std::size_t samples,
                                   std::uint64_t seed, int threads = 0);

/// Upper bound on the max confusability of synthetic channel `index` from a
/// root value z0: per bit of the index from the first-applied transform
/// (most significant) to the last, squaring for a plus step and a q^3-fold
/// increase capped at 1 for a minus step.
double z_bound_recursion(double z0, std::uint64_t index, int n, int q);

struct FrozenPolicy {
    enum class Kind { rate, threshold };
    Kind kind = Kind::rate;
    double value = 0.0;

    static FrozenPolicy rate(double r) { return {Kind::rate, r}; }
    static FrozenPolicy threshold(double z) { return {Kind::threshold, z}; }
};

/// One concrete code: the frozen (kept) index set of a depth-n transform
/// over Z_q, along with the channel model both ends share.
struct CodeSpec {
    int q = 2;
    int n = 0;
    std::vector<std::size_t> frozen;  // sorted ascending
    JointChannel channel;
    std::string digest;       // "<method>;<samples>;<seed>"
    double union_bound = 0.0;  // sum over unfrozen indices of (q-1) z_hat
};

/// Rate policy freezes the ceil(R 2^n) highest-entropy indices (ties: larger
/// z, then smaller index); threshold policy freezes every index with
/// h_hat above the threshold. Also records the predicted failure bound of
/// the complement.
CodeSpec select_frozen(const IndexStats& stats, const JointChannel& channel,
                       FrozenPolicy policy);

struct ProfileRow {
    std::size_t index = 0;
    double h_hat = 0.0;
    double z_hat = 0.0;
    double t = 0.0;  // h (1 - h)
};

struct ProfileTable {
    std::vector<ProfileRow> rows;
    double epsilon = 0.05;
    double e_t = 0.0;
    double e_sqrt_t = 0.0;
    double frac_low = 0.0;   // h_hat <= epsilon
    double frac_high = 0.0;  // h_hat >= 1 - epsilon
};

ProfileTable polarization_profile(const IndexStats& stats, double epsilon = 0.05);

/// Code spec file: "POLARQ v1", the dimensions, the frozen set, the channel
/// text block, and the construction digest. Round-trips bit-exactly.
std::string format_code_spec(const CodeSpec& spec);
CodeSpec parse_code_spec(std::istream& in);

/// Re-derives the stats named by the digest and returns the union bound for
/// the spec's frozen set (parse_code_spec cannot recover it otherwise).
double recompute_union_bound(const CodeSpec& spec, std::size_t atom_budget = 4000000);

} // namespace polarq
