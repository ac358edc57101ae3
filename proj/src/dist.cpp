#include "polarq/dist.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <sstream>

#include "polarq/errors.hpp"
#include "polarq/util.hpp"

namespace polarq {

namespace {

constexpr double kSumSlack = 1e-12;
constexpr double kSumReject = 1e-9;

void check_same_q(const DistQ& a, const DistQ& b, const char* op) {
    if (a.q() != b.q())
        throw ModelError(std::string(op) + ": alphabet mismatch (q=" +
                         std::to_string(a.q()) + " vs q=" + std::to_string(b.q()) + ")");
}

} // namespace

DistQ::DistQ(std::vector<double> probs) : probs_(std::move(probs)) {
    if (probs_.size() < 2)
        throw ModelError("DistQ: alphabet size must be at least 2");
    double sum = 0.0;
    for (double v : probs_) {
        if (!(v >= 0.0) || !std::isfinite(v))
            throw ModelError("DistQ: entries must be finite and nonnegative");
        sum += v;
    }
    if (std::abs(sum - 1.0) > kSumReject)
        throw ModelError("DistQ: entries sum to " + format_g17(sum) + ", not 1");
    if (std::abs(sum - 1.0) > kSumSlack)
        for (double& v : probs_) v /= sum;
}

DistQ DistQ::uniform(int q) {
    if (q < 2) throw ModelError("DistQ: alphabet size must be at least 2");
    return DistQ(std::vector<double>(static_cast<std::size_t>(q), 1.0 / q));
}

DistQ DistQ::point_mass(int q, int symbol) {
    if (q < 2) throw ModelError("DistQ: alphabet size must be at least 2");
    if (symbol < 0 || symbol >= q) throw ModelError("DistQ: symbol out of range");
    std::vector<double> v(static_cast<std::size_t>(q), 0.0);
    v[static_cast<std::size_t>(symbol)] = 1.0;
    return DistQ(std::move(v));
}

double entropy_norm(const DistQ& p) {
    std::vector<double> terms;
    terms.reserve(static_cast<std::size_t>(p.q()));
    for (double v : p.probs())
        if (v > 0.0) terms.push_back(v * std::log2(v));
    std::sort(terms.begin(), terms.end());
    double acc = 0.0;
    for (double t : terms) acc += t;
    const double h = -acc / std::log2(static_cast<double>(p.q()));
    return std::min(1.0, std::max(0.0, h));
}

DistQ cyclic_shift(const DistQ& p, long long j) {
    const int q = p.q();
    const long long jm = ((j % q) + q) % q;
    std::vector<double> out(static_cast<std::size_t>(q));
    for (int m = 0; m < q; ++m)
        out[static_cast<std::size_t>(m)] = p[static_cast<int>((m - jm + q) % q)];
    return DistQ(std::move(out));
}

DistQ convolve(const DistQ& a, const DistQ& b) {
    check_same_q(a, b, "convolve");
    const int q = a.q();
    std::vector<double> out(static_cast<std::size_t>(q));
    std::vector<double> prods(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) {
        for (int i = 0; i < q; ++i) {
            int j = k - i;
            if (j < 0) j += q;
            prods[static_cast<std::size_t>(i)] = a[i] * b[j];
        }
        std::sort(prods.begin(), prods.end());
        double acc = 0.0;
        for (double t : prods) acc += t;
        out[static_cast<std::size_t>(k)] = acc;
    }
    return DistQ(std::move(out));
}

double l1_distance(const DistQ& a, const DistQ& b) {
    check_same_q(a, b, "l1_distance");
    double acc = 0.0;
    for (int i = 0; i < a.q(); ++i) acc += std::abs(a[i] - b[i]);
    return acc;
}

DistQ mix(const std::vector<double>& weights, const std::vector<DistQ>& parts) {
    if (parts.empty() || weights.size() != parts.size())
        throw ModelError("mix: weights and parts must be nonempty and match");
    double wsum = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w))
            throw ModelError("mix: weights must be finite and nonnegative");
        wsum += w;
    }
    if (std::abs(wsum - 1.0) > kSumReject)
        throw ModelError("mix: weights sum to " + format_g17(wsum) + ", not 1");
    const int q = parts.front().q();
    std::vector<double> out(static_cast<std::size_t>(q), 0.0);
    for (std::size_t k = 0; k < parts.size(); ++k) {
        if (parts[k].q() != q) throw ModelError("mix: alphabet mismatch between parts");
        for (int i = 0; i < q; ++i)
            out[static_cast<std::size_t>(i)] += weights[k] * parts[k][i];
    }
    return DistQ(std::move(out));
}

DistQ sample_random_dist(int q, double concentration, Rng& rng) {
    if (q < 2) throw ModelError("sample_random_dist: alphabet size must be at least 2");
    if (!(concentration > 0.0))
        throw ModelError("sample_random_dist: concentration must be positive");
    std::vector<double> v(static_cast<std::size_t>(q));
    for (;;) {
        double sum = 0.0;
        for (double& x : v) {
            x = rng.next_gamma(concentration);
            sum += x;
        }
        if (sum > 0.0) {
            for (double& x : v) x /= sum;
            return DistQ(std::move(v));
        }
    }
}

std::string format_dist(const DistQ& p) {
    std::string out = "q=" + std::to_string(p.q()) + ";p=";
    for (int i = 0; i < p.q(); ++i) {
        if (i) out += ',';
        out += format_g17(p[i]);
    }
    return out;
}

DistQ parse_dist(const std::string& text) {
    int q = 0;
    if (std::sscanf(text.c_str(), "q=%d;p=", &q) != 1 || q < 2)
        throw ParseError("distribution literal: expected \"q=<int>;p=...\", got \"" + text + "\"");
    const auto pos = text.find(";p=");
    if (pos == std::string::npos)
        throw ParseError("distribution literal: missing \";p=\" in \"" + text + "\"");
    std::stringstream vals(text.substr(pos + 3));
    std::vector<double> probs;
    std::string tok;
    while (std::getline(vals, tok, ',')) {
        char* end = nullptr;
        const double v = std::strtod(tok.c_str(), &end);
        if (end == tok.c_str() || *end != '\0')
            throw ParseError("distribution literal: bad value \"" + tok + "\"");
        probs.push_back(v);
    }
    if (static_cast<int>(probs.size()) != q)
        throw ParseError("distribution literal: expected " + std::to_string(q) +
                         " values, got " + std::to_string(probs.size()));
    try {
        return DistQ(std::move(probs));
    } catch (const ModelError& e) {
        throw ParseError(std::string("distribution literal: ") + e.what());
    }
}

} // namespace polarq
