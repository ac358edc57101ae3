#pragma once

#include <cstddef>
#include <functional>
#include <vector>

#include "polarq/dist.hpp"

namespace polarq {

/// Unnormalized per-symbol scores for one sequence position. Scores stay in
/// linear domain and are rescaled by their maximum after every combination
/// step; normalization happens only at decision points. Exact zeros are
/// meaningful (noiseless channels produce them).
struct LikelihoodVec {
    int q = 2;
    std::vector<double> scores;

    /// Scores as a distribution.
    DistQ normalized() const;

    /// Smallest symbol among the exactly-tied maxima.
    int argmax_smallest() const;
};

/// Chooses the symbol committed at one index, given the likelihood of that
/// index under all earlier commitments. Drives both decoding (frozen lookup
/// or argmax) and genie-aided construction (commit the true symbol, record
/// the statistics).
using ScDecision = std::function<int(std::size_t, const LikelihoodVec&)>;

/// Successive cancellation over the recursive pair structure: indices are
/// visited in order, each likelihood computed from the two half-length
/// subproblems (sum combine for even indices, known-sum product for odd),
/// with committed symbols pushed back down. O(N log N q^2) score ops.
///
/// Buffers are reused across runs; one engine serves one thread.
class ScEngine {
public:
    ScEngine(int q, int n);

    int q() const { return q_; }
    std::size_t block_length() const { return size_; }

    /// position_posteriors.size() must be 2^n. Returns the committed
    /// symbols in index order. If every score of some index collapses to
    /// zero (possible under an inconsistent forced past), the likelihood
    /// falls back to uniform so the run stays total and deterministic.
    std::vector<int> run(const std::vector<DistQ>& position_posteriors,
                         const ScDecision& decide);

private:
    void request(std::size_t id, double* out);
    void feed(std::size_t id, int symbol);
    double* left_slot(std::size_t id) { return buffers_.data() + 2 * id * q_; }
    double* right_slot(std::size_t id) { return buffers_.data() + (2 * id + 1) * q_; }

    int q_;
    int n_;
    std::size_t size_;
    std::vector<double> buffers_;      // cached child scores, 2q per node
    std::vector<char> cache_valid_;
    std::vector<char> phase_odd_;
    std::vector<int> pending_sum_;
    const std::vector<DistQ>* posteriors_ = nullptr;
};

} // namespace polarq
