#include "polarq/sc.hpp"

#include <algorithm>
#include <string>

#include "polarq/errors.hpp"

namespace polarq {

DistQ LikelihoodVec::normalized() const {
    double sum = 0.0;
    for (double s : scores) sum += s;
    if (sum <= 0.0) return DistQ::uniform(q);
    std::vector<double> p = scores;
    for (double& v : p) v /= sum;
    return DistQ(std::move(p));
}

int LikelihoodVec::argmax_smallest() const {
    // Algebraically tied scores can differ by an ulp depending on the route
    // that computed them, so a tie is anything within a relative sliver of
    // the maximum; the smallest such symbol wins.
    double mx = 0.0;
    for (double s : scores) mx = std::max(mx, s);
    if (mx <= 0.0) return 0;
    for (int i = 0; i < q; ++i)
        if (scores[static_cast<std::size_t>(i)] >= mx * (1.0 - 1e-9)) return i;
    return 0;
}

ScEngine::ScEngine(int q, int n) : q_(q), n_(n), size_(std::size_t{1} << n) {
    if (q < 2) throw ModelError("ScEngine: alphabet size must be at least 2");
    if (n < 0 || n > 30) throw ModelError("ScEngine: depth out of range");
    const std::size_t nodes = 2 * size_;
    buffers_.assign(2 * nodes * static_cast<std::size_t>(q_), 0.0);
    cache_valid_.assign(nodes, 0);
    phase_odd_.assign(nodes, 0);
    pending_sum_.assign(nodes, 0);
}

std::vector<int> ScEngine::run(const std::vector<DistQ>& position_posteriors,
                               const ScDecision& decide) {
    if (position_posteriors.size() != size_)
        throw ModelError("ScEngine: expected " + std::to_string(size_) +
                         " position posteriors, got " +
                         std::to_string(position_posteriors.size()));
    for (const DistQ& p : position_posteriors)
        if (p.q() != q_) throw ModelError("ScEngine: posterior alphabet mismatch");
    posteriors_ = &position_posteriors;
    std::fill(cache_valid_.begin(), cache_valid_.end(), 0);
    std::fill(phase_odd_.begin(), phase_odd_.end(), 0);

    std::vector<int> u(size_);
    std::vector<double> out(static_cast<std::size_t>(q_));
    LikelihoodVec lv;
    lv.q = q_;
    for (std::size_t g = 0; g < size_; ++g) {
        request(1, out.data());
        lv.scores.assign(out.begin(), out.end());
        const int sym = decide(g, lv);
        if (sym < 0 || sym >= q_)
            throw ModelError("ScEngine: decision returned a symbol out of range");
        feed(1, sym);
        u[g] = sym;
    }
    posteriors_ = nullptr;
    return u;
}

void ScEngine::request(std::size_t id, double* out) {
    if (id >= size_) {  // leaf: position id - size_
        const DistQ& p = (*posteriors_)[id - size_];
        for (int i = 0; i < q_; ++i) out[i] = p[i];
        return;
    }
    double* left = left_slot(id);
    double* right = right_slot(id);
    if (!cache_valid_[id]) {
        request(2 * id, left);
        request(2 * id + 1, right);
        cache_valid_[id] = 1;
    }
    if (!phase_odd_[id]) {
        for (int s = 0; s < q_; ++s) {
            double acc = 0.0;
            for (int a = 0; a < q_; ++a) {
                int b = s - a;
                if (b < 0) b += q_;
                acc += left[a] * right[b];
            }
            out[s] = acc;
        }
    } else {
        const int sum = pending_sum_[id];
        for (int t = 0; t < q_; ++t) {
            int a = sum - t;
            if (a < 0) a += q_;
            out[t] = left[a] * right[t];
        }
    }
    double mx = 0.0;
    for (int i = 0; i < q_; ++i) mx = std::max(mx, out[i]);
    if (mx > 0.0) {
        for (int i = 0; i < q_; ++i) out[i] /= mx;
    } else {
        for (int i = 0; i < q_; ++i) out[i] = 1.0;  // inconsistent forced past
    }
}

void ScEngine::feed(std::size_t id, int symbol) {
    if (id >= size_) return;
    if (!phase_odd_[id]) {
        pending_sum_[id] = symbol;
        phase_odd_[id] = 1;
        return;
    }
    int first = pending_sum_[id] - symbol;
    if (first < 0) first += q_;
    feed(2 * id, first);
    feed(2 * id + 1, symbol);
    phase_odd_[id] = 0;
    cache_valid_[id] = 0;
}

} // namespace polarq
