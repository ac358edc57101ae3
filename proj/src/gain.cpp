#include "polarq/gain.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "polarq/errors.hpp"
#include "polarq/util.hpp"

namespace polarq {

namespace {

constexpr double kSlack = 1e-12;
constexpr double kAlphaTFloor = 1e-6;

const double kLgE = 1.0 / std::log(2.0);

double lg(double x) { return std::log2(x); }

// x lg(1/x) with the continuous extension at 0.
double xlg1x(double x) { return x > 0.0 ? -x * std::log2(x) : 0.0; }

double sym_t(double h) { return h * (1.0 - h); }

BoundCheckReport make_report(BoundId id, std::string inputs, double lhs, double rhs) {
    BoundCheckReport r;
    r.bound_id = id;
    r.inputs = std::move(inputs);
    r.lhs = lhs;
    r.rhs = rhs;
    r.margin = lhs - rhs;
    r.passed = r.margin >= -kSlack;
    return r;
}

void require(bool ok, const char* what) {
    if (!ok) throw ModelError(std::string("bound hypothesis violated: ") + what);
}

double spike_eps(const DistQ& p) {
    return 1.0 - *std::max_element(p.probs().begin(), p.probs().end());
}

double uniform_deviation(const DistQ& p) {
    double dev = 0.0;
    for (double v : p.probs()) dev = std::max(dev, std::abs(v - 1.0 / p.q()));
    return dev;
}

std::string dist_pair_inputs(const DistQ& a, const DistQ& b) {
    return "A=" + format_dist(a) + "|B=" + format_dist(b);
}

// Spike distribution with mass 1-eps on a random symbol.
DistQ sample_spike(int q, double eps, Rng& rng) {
    const int spike = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(q)));
    std::vector<double> rest(static_cast<std::size_t>(q - 1));
    double sum = 0.0;
    for (double& v : rest) {
        v = rng.next_gamma(1.0);
        sum += v;
    }
    std::vector<double> probs(static_cast<std::size_t>(q));
    probs[static_cast<std::size_t>(spike)] = 1.0 - eps;
    int j = 0;
    for (int i = 0; i < q; ++i) {
        if (i == spike) continue;
        probs[static_cast<std::size_t>(i)] = eps * rest[static_cast<std::size_t>(j++)] / sum;
    }
    return DistQ(std::move(probs));
}

// Zero-sum deviations from uniform with max magnitude `dev`.
DistQ sample_near_uniform(int q, double dev, Rng& rng) {
    std::vector<double> d(static_cast<std::size_t>(q));
    for (;;) {
        double mean = 0.0;
        for (double& v : d) {
            v = rng.next_normal();
            mean += v;
        }
        mean /= q;
        double mx = 0.0;
        for (double& v : d) {
            v -= mean;
            mx = std::max(mx, std::abs(v));
        }
        if (mx == 0.0) continue;
        std::vector<double> probs(static_cast<std::size_t>(q));
        for (int i = 0; i < q; ++i)
            probs[static_cast<std::size_t>(i)] = 1.0 / q + d[static_cast<std::size_t>(i)] * (dev / mx);
        return DistQ(std::move(probs));
    }
}

double log_uniform(Rng& rng, double lo, double hi) {
    return std::exp(rng.next_in(std::log(lo), std::log(hi)));
}

} // namespace

const char* to_string(BoundId id) {
    switch (id) {
        case BoundId::strong_convexity: return "strong_convexity";
        case BoundId::shift_mixture_gain: return "shift_mixture_gain";
        case BoundId::cyclic_shift_distance: return "cyclic_shift_distance";
        case BoundId::tail_term: return "tail_term";
        case BoundId::residual_log_dominance: return "residual_log_dominance";
        case BoundId::xlog_monotone: return "xlog_monotone";
        case BoundId::low_entropy_lower: return "low_entropy_lower";
        case BoundId::low_entropy_upper: return "low_entropy_upper";
        case BoundId::low_entropy_convolution: return "low_entropy_convolution";
        case BoundId::taylor_bounds: return "taylor_bounds";
        case BoundId::near_uniform_entropy: return "near_uniform_entropy";
        case BoundId::near_uniform_convolution: return "near_uniform_convolution";
        case BoundId::max_entropy: return "max_entropy";
        case BoundId::weighted_average_gain: return "weighted_average_gain";
    }
    return "unknown";
}

std::vector<BoundId> bound_catalog() {
    return {BoundId::strong_convexity,        BoundId::shift_mixture_gain,
            BoundId::cyclic_shift_distance,   BoundId::tail_term,
            BoundId::residual_log_dominance,  BoundId::xlog_monotone,
            BoundId::low_entropy_lower,       BoundId::low_entropy_upper,
            BoundId::low_entropy_convolution, BoundId::taylor_bounds,
            BoundId::near_uniform_entropy,    BoundId::near_uniform_convolution};
}

GainConstants GainConstants::for_q(int q) {
    if (q < 2) throw ModelError("GainConstants: alphabet size must be at least 2");
    GainConstants g;
    g.q = q;
    const double qm1 = static_cast<double>(q - 1);
    g.gamma0 = 1.0 / (500.0 * qm1 * qm1 * qm1 * qm1 * lg(static_cast<double>(q)));
    const double q5 = std::pow(static_cast<double>(q), 5.0);
    g.c = std::pow(g.gamma0, 3.0) * lg(static_cast<double>(q)) /
          (48.0 * q5 * qm1 * qm1 * qm1 * lg(6.0 / g.gamma0) * kLgE * kLgE);
    return g;
}

double gain_unconditional(const DistQ& a, const DistQ& b) {
    return entropy_norm(convolve(a, b)) - 0.5 * (entropy_norm(a) + entropy_norm(b));
}

BoundCheckReport check_max_ineq(const DistQ& a, const DistQ& b) {
    const double lhs = entropy_norm(convolve(a, b));
    const double rhs = std::max(entropy_norm(a), entropy_norm(b));
    return make_report(BoundId::max_entropy, dist_pair_inputs(a, b), lhs, rhs);
}

BoundCheckReport check_wtavg(const DistQ& a, const DistQ& b, const GainConstants& consts) {
    if (a.q() != b.q() || a.q() != consts.q)
        throw ModelError("check_wtavg: alphabet mismatch");
    if (!is_prime(a.q()))
        throw ModelError("check_wtavg: alphabet size must be prime");
    const double ha0 = entropy_norm(a);
    const double hb0 = entropy_norm(b);
    const bool swap = hb0 > ha0;
    const double ha = swap ? hb0 : ha0;
    const double hb = swap ? ha0 : hb0;
    const double lhs = entropy_norm(convolve(a, b));
    const double rhs = (2.0 * ha + hb) / 3.0 + consts.c * std::min(sym_t(ha), sym_t(hb));
    BoundCheckReport r = make_report(BoundId::weighted_average_gain,
                                     dist_pair_inputs(swap ? b : a, swap ? a : b), lhs, rhs);
    const double g0 = consts.gamma0;
    if (ha <= g0 && hb <= g0)
        r.case_label = 1;
    else if (ha <= 1.0 - g0 / 2 && hb >= g0 / 2)
        r.case_label = 2;
    else if (hb >= 1.0 - g0)
        r.case_label = 3;
    else if (ha > g0 && hb < g0 / 2)
        r.case_label = 4;
    else if (ha > 1.0 - g0 / 2 && hb < 1.0 - g0)
        r.case_label = 5;
    else
        throw ModelError("check_wtavg: entropy pair escaped the case split");
    return r;
}

double conditional_gain(const JointChannel& w) {
    const auto& atoms = w.atoms();
    std::vector<double> h(atoms.size());
    for (std::size_t k = 0; k < atoms.size(); ++k) h[k] = entropy_norm(atoms[k].posterior);
    Kahan gain;
    for (std::size_t k = 0; k < atoms.size(); ++k)
        for (std::size_t l = 0; l < atoms.size(); ++l) {
            const double hsum = entropy_norm(convolve(atoms[k].posterior, atoms[l].posterior));
            gain.add(atoms[k].weight * atoms[l].weight * (hsum - 0.5 * (h[k] + h[l])));
        }
    return gain.value();
}

namespace {

// One coordinate of the channel (an atom weight or one posterior entry)
// nudged by a decaying step; invalid proposals are discarded by the caller.
JointChannel perturb_channel(const JointChannel& w, double step, Rng& rng) {
    std::vector<ChannelAtom> atoms(w.atoms());
    const std::size_t k = rng.next_below(atoms.size());
    if (atoms.size() > 1 && rng.next_double() < 0.25) {
        std::vector<double> weights;
        weights.reserve(atoms.size());
        double sum = 0.0;
        for (std::size_t i = 0; i < atoms.size(); ++i) {
            double v = atoms[i].weight;
            if (i == k) v = std::max(0.0, v + step * rng.next_normal());
            weights.push_back(v);
            sum += v;
        }
        if (sum <= 0.0) return w;
        for (std::size_t i = 0; i < atoms.size(); ++i) atoms[i].weight = weights[i] / sum;
    } else {
        const int q = w.q();
        const int coord = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(q)));
        std::vector<double> probs = atoms[k].posterior.probs();
        probs[static_cast<std::size_t>(coord)] =
            std::max(0.0, probs[static_cast<std::size_t>(coord)] + step * rng.next_normal());
        double sum = 0.0;
        for (double v : probs) sum += v;
        if (sum <= 0.0) return w;
        for (double& v : probs) v /= sum;
        atoms[k].posterior = DistQ(std::move(probs));
    }
    return JointChannel(w.q(), std::move(atoms));
}

} // namespace

AlphaEstimate estimate_alpha(int q, int trials, std::uint64_t seed, int refinement_steps) {
    if (!is_prime(q)) throw ModelError("estimate_alpha: alphabet size must be prime");
    if (trials < 1) throw ModelError("estimate_alpha: need at least one trial");
    Rng rng = Rng::derived(seed, 0x616c7068ULL);

    const auto ratio_of = [](const JointChannel& w) -> double {
        const double t = symmetric_entropy(w);
        if (t <= kAlphaTFloor) return -1.0;
        return conditional_gain(w) / t;
    };

    double best = std::numeric_limits<double>::infinity();
    JointChannel best_channel = make_qsc(q, 0.25 * (q - 1) / q);
    {
        const double r0 = ratio_of(best_channel);
        if (r0 >= 0.0) best = r0;
    }
    for (int t = 0; t < trials; ++t) {
        const JointChannel w = sample_random_channel(q, 8, rng);
        const double r = ratio_of(w);
        if (r >= 0.0 && r < best) {
            best = r;
            best_channel = w;
        }
    }
    const double step0 = 0.3;
    const double decay = refinement_steps > 1
                             ? std::pow(1e-3 / step0, 1.0 / (refinement_steps - 1))
                             : 1.0;
    double step = step0;
    for (int r = 0; r < refinement_steps; ++r, step *= decay) {
        const JointChannel cand = perturb_channel(best_channel, step, rng);
        const double ratio = ratio_of(cand);
        if (ratio >= 0.0 && ratio < best) {
            best = ratio;
            best_channel = cand;
        }
    }

    AlphaEstimate est{GainConstants::for_q(q), best_channel};
    est.constants.alpha_estimate = best;
    return est;
}

namespace {

BoundCheckReport verify_strong_convexity(const BoundOperands& op) {
    require(op.dists.size() == 2 && op.scalars.size() == 1,
            "strong_convexity needs dists {X, Y} and scalars {alpha}");
    const DistQ& x = op.dists[0];
    const DistQ& y = op.dists[1];
    const double alpha = op.scalars[0];
    require(x.q() == y.q(), "strong_convexity: alphabet mismatch");
    require(alpha >= 0.0 && alpha <= 1.0, "strong_convexity: alpha outside [0,1]");
    const double lhs = entropy_norm(mix({alpha, 1.0 - alpha}, {x, y}));
    const double d = l1_distance(x, y);
    const double rhs = alpha * entropy_norm(x) + (1.0 - alpha) * entropy_norm(y) +
                       alpha * (1.0 - alpha) * d * d / (2.0 * lg(static_cast<double>(x.q())));
    return make_report(BoundId::strong_convexity,
                       "X=" + format_dist(x) + "|Y=" + format_dist(y) +
                           "|alpha=" + format_g17(alpha),
                       lhs, rhs);
}

BoundCheckReport verify_shift_mixture_gain(const BoundOperands& op) {
    require(op.dists.size() == 1 && op.ints.size() == 2,
            "shift_mixture_gain needs dists {p}, q weights and ints {i, j}");
    const DistQ& p = op.dists[0];
    const int q = p.q();
    require(static_cast<int>(op.scalars.size()) == q,
            "shift_mixture_gain: weight count must equal q");
    const int i = op.ints[0], j = op.ints[1];
    require(i >= 0 && i < q && j >= 0 && j < q && i != j,
            "shift_mixture_gain: need distinct shift indices in [0,q)");
    const double li = op.scalars[static_cast<std::size_t>(i)];
    const double lj = op.scalars[static_cast<std::size_t>(j)];
    require(li + lj > 0.0, "shift_mixture_gain: weights of i and j are both zero");
    std::vector<DistQ> shifts;
    shifts.reserve(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) shifts.push_back(cyclic_shift(p, k));
    const double lhs = entropy_norm(mix(op.scalars, shifts));
    const double d = l1_distance(shifts[static_cast<std::size_t>(i)],
                                 shifts[static_cast<std::size_t>(j)]);
    const double rhs =
        entropy_norm(p) + li * lj / (li + lj) * d * d / (2.0 * lg(static_cast<double>(q)));
    std::string inputs = "p=" + format_dist(p) + "|lambda=";
    for (int k = 0; k < q; ++k) {
        if (k) inputs += ',';
        inputs += format_g17(op.scalars[static_cast<std::size_t>(k)]);
    }
    inputs += "|i=" + std::to_string(i) + "|j=" + std::to_string(j);
    return make_report(BoundId::shift_mixture_gain, std::move(inputs), lhs, rhs);
}

BoundCheckReport verify_cyclic_shift_distance(const BoundOperands& op) {
    require(op.dists.size() == 1 && op.ints.size() == 2,
            "cyclic_shift_distance needs dists {p} and ints {i, j}");
    const DistQ& p = op.dists[0];
    const int q = p.q();
    require(is_prime(q), "cyclic_shift_distance: q must be prime");
    const int i = op.ints[0], j = op.ints[1];
    require(((i - j) % q + q) % q != 0, "cyclic_shift_distance: shifts must differ mod q");
    const double lhs = l1_distance(cyclic_shift(p, i), cyclic_shift(p, j));
    const double rhs = (1.0 - entropy_norm(p)) * lg(static_cast<double>(q)) /
                       (2.0 * q * q * (q - 1) * kLgE);
    return make_report(BoundId::cyclic_shift_distance,
                       "p=" + format_dist(p) + "|i=" + std::to_string(i) +
                           "|j=" + std::to_string(j),
                       lhs, rhs);
}

BoundCheckReport verify_tail_term(const BoundOperands& op) {
    require(op.scalars.size() == 1, "tail_term needs scalars {eps}");
    const double eps = op.scalars[0];
    require(eps > 0.0 && eps <= 1.0 / 500.0, "tail_term: eps outside (0, 1/500]");
    const double lhs = xlg1x(eps) / 6.0;
    const double rhs = xlg1x(1.0 - eps);
    return make_report(BoundId::tail_term, "eps=" + format_g17(eps), lhs, rhs);
}

BoundCheckReport verify_residual_log_dominance(const BoundOperands& op) {
    require(op.scalars.size() == 1 && op.ints.size() == 1,
            "residual_log_dominance needs scalars {eps} and ints {q}");
    const double eps = op.scalars[0];
    const int q = op.ints[0];
    require(q >= 2, "residual_log_dominance: q must be at least 2");
    const double cap = 1.0 / std::pow(static_cast<double>(q - 1), 4.0);
    require(eps > 0.0 && eps <= std::min(1.0, cap),
            "residual_log_dominance: eps outside (0, 1/(q-1)^4]");
    const double lhs = 1.25 * xlg1x(eps);
    const double rhs = eps * lg(static_cast<double>(q - 1)) + xlg1x(eps);
    return make_report(BoundId::residual_log_dominance,
                       "eps=" + format_g17(eps) + "|q=" + std::to_string(q), lhs, rhs);
}

BoundCheckReport verify_xlog_monotone(const BoundOperands& op) {
    require(op.scalars.size() == 2, "xlog_monotone needs scalars {x1, x2}");
    const double x1 = op.scalars[0], x2 = op.scalars[1];
    const double inv_e = 1.0 / std::exp(1.0);
    require(x1 > 0.0 && x1 <= x2 && x2 < inv_e,
            "xlog_monotone: need 0 < x1 <= x2 < 1/e");
    return make_report(BoundId::xlog_monotone,
                       "x1=" + format_g17(x1) + "|x2=" + format_g17(x2),
                       xlg1x(x2), xlg1x(x1));
}

BoundCheckReport verify_low_entropy_lower(const BoundOperands& op) {
    require(op.dists.size() == 1, "low_entropy_lower needs dists {p}");
    const DistQ& p = op.dists[0];
    const double eps = spike_eps(p);
    require(eps < 1.0, "low_entropy_lower: eps must be below 1");
    const double lhs = entropy_norm(p);
    const double rhs = xlg1x(eps) / lg(static_cast<double>(p.q()));
    return make_report(BoundId::low_entropy_lower, "p=" + format_dist(p), lhs, rhs);
}

BoundCheckReport verify_low_entropy_upper(const BoundOperands& op) {
    require(op.dists.size() == 1, "low_entropy_upper needs dists {p}");
    const DistQ& p = op.dists[0];
    const double eps = spike_eps(p);
    const double cap =
        std::min(1.0 / 500.0, 1.0 / std::pow(static_cast<double>(p.q() - 1), 4.0));
    require(eps <= cap, "low_entropy_upper: eps above min(1/500, 1/(q-1)^4)");
    const double lhs = 17.0 * xlg1x(eps) / (12.0 * lg(static_cast<double>(p.q())));
    const double rhs = entropy_norm(p);
    return make_report(BoundId::low_entropy_upper, "p=" + format_dist(p), lhs, rhs);
}

BoundCheckReport verify_low_entropy_convolution(const BoundOperands& op) {
    require(op.dists.size() == 2, "low_entropy_convolution needs dists {X, Y}");
    DistQ x = op.dists[0];
    DistQ y = op.dists[1];
    require(x.q() == y.q(), "low_entropy_convolution: alphabet mismatch");
    if (entropy_norm(y) > entropy_norm(x)) std::swap(x, y);
    const double cap =
        std::min(1.0 / 500.0, 1.0 / std::pow(static_cast<double>(x.q() - 1), 4.0));
    require(spike_eps(x) > 0.0 && spike_eps(x) <= cap &&
                spike_eps(y) > 0.0 && spike_eps(y) <= cap,
            "low_entropy_convolution: spike masses outside (0, min(1/500, 1/(q-1)^4)]");
    const double hx = entropy_norm(x);
    const double hy = entropy_norm(y);
    const double lhs = entropy_norm(convolve(x, y)) - (2.0 * hx + hy) / 3.0;
    const double rhs = sym_t(hy) / 51.0;
    return make_report(BoundId::low_entropy_convolution, dist_pair_inputs(x, y), lhs, rhs);
}

BoundCheckReport verify_taylor_bounds(const BoundOperands& op) {
    require(op.scalars.size() == 1 && op.ints.size() == 1,
            "taylor_bounds needs scalars {t} and ints {q}");
    const double t = op.scalars[0];
    const int q = op.ints[0];
    require(q >= 2, "taylor_bounds: q must be at least 2");
    require(t >= -1.0 / q && t <= static_cast<double>(q - 1) / q,
            "taylor_bounds: t outside [-1/q, (q-1)/q]");
    const double lnq = std::log(static_cast<double>(q));
    const double f = xlg1x(1.0 / q + t) / lg(static_cast<double>(q));
    const double linear = 1.0 / q + (1.0 - 1.0 / lnq) * t;
    const double lower = linear - (q / lnq) * t * t;
    const double upper =
        linear - (q * (q * lnq - (q - 1)) / ((q - 1.0) * (q - 1.0) * lnq)) * t * t;
    BoundCheckReport r = make_report(BoundId::taylor_bounds,
                                     "t=" + format_g17(t) + "|q=" + std::to_string(q),
                                     f - lower, upper - f);
    // Two-sided check; report the tighter side's slack as the margin.
    r.lhs = f - lower;
    r.rhs = 0.0;
    r.margin = std::min(f - lower, upper - f);
    r.passed = r.margin >= -kSlack;
    return r;
}

BoundCheckReport verify_near_uniform_entropy(const BoundOperands& op) {
    require(op.dists.size() == 1, "near_uniform_entropy needs dists {p}");
    const DistQ& p = op.dists[0];
    const int q = p.q();
    const double delta = uniform_deviation(p);
    const double lnq = std::log(static_cast<double>(q));
    const double h = entropy_norm(p);
    const double lower = 1.0 - (q * static_cast<double>(q) / lnq) * delta * delta;
    const double qm1 = static_cast<double>(q - 1);
    const double upper =
        1.0 - (q * static_cast<double>(q) * (q * lnq - qm1) / (qm1 * qm1 * qm1 * lnq)) *
                  delta * delta;
    BoundCheckReport r = make_report(BoundId::near_uniform_entropy,
                                     "p=" + format_dist(p), h - lower, 0.0);
    r.margin = std::min(h - lower, upper - h);
    r.passed = r.margin >= -kSlack;
    return r;
}

BoundCheckReport verify_near_uniform_convolution(const BoundOperands& op) {
    require(op.dists.size() == 2, "near_uniform_convolution needs dists {X, Y}");
    DistQ x = op.dists[0];
    DistQ y = op.dists[1];
    require(x.q() == y.q(), "near_uniform_convolution: alphabet mismatch");
    if (entropy_norm(y) > entropy_norm(x)) std::swap(x, y);
    const int q = x.q();
    const double cap = 1.0 / (2.0 * q * q);
    require(uniform_deviation(x) <= cap && uniform_deviation(y) <= cap,
            "near_uniform_convolution: deviation above 1/(2q^2)");
    const double hx = entropy_norm(x);
    const double lhs = entropy_norm(convolve(x, y)) - hx;
    const double rhs = std::log(static_cast<double>(q)) / (16.0 * q * q) * sym_t(hx);
    return make_report(BoundId::near_uniform_convolution, dist_pair_inputs(x, y), lhs, rhs);
}

} // namespace

BoundCheckReport verify_bound(BoundId id, const BoundOperands& op) {
    switch (id) {
        case BoundId::strong_convexity: return verify_strong_convexity(op);
        case BoundId::shift_mixture_gain: return verify_shift_mixture_gain(op);
        case BoundId::cyclic_shift_distance: return verify_cyclic_shift_distance(op);
        case BoundId::tail_term: return verify_tail_term(op);
        case BoundId::residual_log_dominance: return verify_residual_log_dominance(op);
        case BoundId::xlog_monotone: return verify_xlog_monotone(op);
        case BoundId::low_entropy_lower: return verify_low_entropy_lower(op);
        case BoundId::low_entropy_upper: return verify_low_entropy_upper(op);
        case BoundId::low_entropy_convolution: return verify_low_entropy_convolution(op);
        case BoundId::taylor_bounds: return verify_taylor_bounds(op);
        case BoundId::near_uniform_entropy: return verify_near_uniform_entropy(op);
        case BoundId::near_uniform_convolution: return verify_near_uniform_convolution(op);
        case BoundId::max_entropy:
            require(op.dists.size() == 2, "max_entropy needs dists {A, B}");
            return check_max_ineq(op.dists[0], op.dists[1]);
        case BoundId::weighted_average_gain:
            require(op.dists.size() == 2, "weighted_average_gain needs dists {A, B}");
            return check_wtavg(op.dists[0], op.dists[1],
                               GainConstants::for_q(op.dists[0].q()));
    }
    throw ModelError("verify_bound: unknown bound id");
}

BoundOperands sample_bound_operands(BoundId id, int q, Rng& rng) {
    BoundOperands op;
    const auto random_dist = [&] {
        return sample_random_dist(q, log_uniform(rng, 0.15, 8.0), rng);
    };
    const double spike_cap =
        std::min(1.0 / 500.0, 1.0 / std::pow(static_cast<double>(q - 1), 4.0));
    switch (id) {
        case BoundId::strong_convexity:
            op.dists = {random_dist(), random_dist()};
            op.scalars = {rng.next_double()};
            break;
        case BoundId::shift_mixture_gain: {
            op.dists = {random_dist()};
            op.scalars = sample_random_dist(q, 1.0, rng).probs();
            const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(q)));
            int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(q - 1)));
            if (j >= i) ++j;
            op.ints = {i, j};
            break;
        }
        case BoundId::cyclic_shift_distance: {
            op.dists = {random_dist()};
            const int i = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(q)));
            int j = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(q - 1)));
            if (j >= i) ++j;
            op.ints = {i, j};
            break;
        }
        case BoundId::tail_term:
            op.scalars = {log_uniform(rng, 1e-9, 1.0 / 500.0)};
            break;
        case BoundId::residual_log_dominance:
            op.scalars = {log_uniform(rng, 1e-9, std::min(1.0, 1.0 / std::pow(q - 1.0, 4.0)))};
            op.ints = {q};
            break;
        case BoundId::xlog_monotone: {
            const double inv_e = 1.0 / std::exp(1.0);
            double x1 = log_uniform(rng, 1e-9, inv_e * 0.999);
            double x2 = log_uniform(rng, 1e-9, inv_e * 0.999);
            if (x2 < x1) std::swap(x1, x2);
            op.scalars = {x1, x2};
            break;
        }
        case BoundId::low_entropy_lower:
            op.dists = {sample_spike(q, log_uniform(rng, 1e-9, 0.8), rng)};
            break;
        case BoundId::low_entropy_upper:
            op.dists = {sample_spike(q, log_uniform(rng, 1e-9, spike_cap), rng)};
            break;
        case BoundId::low_entropy_convolution:
            op.dists = {sample_spike(q, log_uniform(rng, 1e-9, spike_cap), rng),
                        sample_spike(q, log_uniform(rng, 1e-9, spike_cap), rng)};
            break;
        case BoundId::taylor_bounds:
            op.scalars = {rng.next_in(-1.0 / q, static_cast<double>(q - 1) / q)};
            op.ints = {q};
            break;
        case BoundId::near_uniform_entropy:
            op.dists = {random_dist()};
            break;
        case BoundId::near_uniform_convolution: {
            const double cap = 0.999 / (2.0 * q * q);
            op.dists = {sample_near_uniform(q, cap * rng.next_double(), rng),
                        sample_near_uniform(q, cap * rng.next_double(), rng)};
            break;
        }
        case BoundId::max_entropy:
        case BoundId::weighted_average_gain:
            op.dists = {random_dist(), random_dist()};
            break;
    }
    return op;
}

} // namespace polarq
