#include "polarq/channel.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <istream>
#include <map>
#include <sstream>

#include "polarq/errors.hpp"
#include "polarq/util.hpp"

namespace polarq {

namespace {

constexpr double kSumSlack = 1e-12;
constexpr double kSumReject = 1e-9;

std::string posterior_key(const DistQ& p) {
    std::string key(p.probs().size() * sizeof(double), '\0');
    std::memcpy(key.data(), p.probs().data(), key.size());
    return key;
}

bool atom_less(const ChannelAtom& a, const ChannelAtom& b) {
    if (a.posterior.probs() != b.posterior.probs())
        return a.posterior.probs() < b.posterior.probs();
    return a.weight < b.weight;
}

} // namespace

JointChannel::JointChannel(int q, std::vector<ChannelAtom> atoms, bool approximate)
    : q_(q), atoms_(std::move(atoms)), approximate_(approximate) {
    if (q_ < 2) throw ModelError("JointChannel: alphabet size must be at least 2");
    std::erase_if(atoms_, [](const ChannelAtom& a) { return a.weight == 0.0; });
    if (atoms_.empty()) throw ModelError("JointChannel: no output atoms with positive weight");
    double sum = 0.0;
    for (const ChannelAtom& a : atoms_) {
        if (!(a.weight > 0.0) || !std::isfinite(a.weight))
            throw ModelError("JointChannel: atom weights must be positive and finite");
        if (a.posterior.q() != q_)
            throw ModelError("JointChannel: posterior alphabet mismatch");
        sum += a.weight;
    }
    if (std::abs(sum - 1.0) > kSumReject)
        throw ModelError("JointChannel: atom weights sum to " + format_g17(sum) + ", not 1");
    if (std::abs(sum - 1.0) > kSumSlack)
        for (ChannelAtom& a : atoms_) a.weight /= sum;
}

double channel_entropy(const JointChannel& w) {
    Kahan acc;
    for (const ChannelAtom& a : w.atoms()) acc.add(a.weight * entropy_norm(a.posterior));
    return std::min(1.0, std::max(0.0, acc.value()));
}

double symmetric_entropy(const JointChannel& w) {
    const double h = channel_entropy(w);
    return h * (1.0 - h);
}

JointChannel minus_transform(const JointChannel& w) {
    const auto& atoms = w.atoms();
    std::vector<ChannelAtom> out;
    out.reserve(atoms.size() * atoms.size());
    for (const ChannelAtom& a : atoms)
        for (const ChannelAtom& b : atoms)
            out.push_back({a.weight * b.weight, convolve(a.posterior, b.posterior)});
    return JointChannel(w.q(), std::move(out), w.approximate());
}

JointChannel plus_transform(const JointChannel& w) {
    const int q = w.q();
    const auto& atoms = w.atoms();
    std::vector<ChannelAtom> out;
    out.reserve(atoms.size() * atoms.size() * static_cast<std::size_t>(q));
    std::vector<double> post(static_cast<std::size_t>(q));
    for (const ChannelAtom& a : atoms) {
        for (const ChannelAtom& b : atoms) {
            const DistQ sum_law = convolve(a.posterior, b.posterior);
            for (int u = 0; u < q; ++u) {
                const double cu = sum_law[u];
                if (cu == 0.0) continue;
                for (int x1 = 0; x1 < q; ++x1) {
                    int x0 = u - x1;
                    if (x0 < 0) x0 += q;
                    post[static_cast<std::size_t>(x1)] = a.posterior[x0] * b.posterior[x1] / cu;
                }
                out.push_back({a.weight * b.weight * cu, DistQ(post)});
            }
        }
    }
    return JointChannel(q, std::move(out), w.approximate());
}

ChannelStats bhattacharyya(const JointChannel& w) {
    const int q = w.q();
    ChannelStats stats;
    stats.z_by_d.assign(static_cast<std::size_t>(q - 1), 0.0);
    for (int d = 1; d < q; ++d) {
        Kahan acc;
        for (const ChannelAtom& a : w.atoms()) {
            double s = 0.0;
            for (int x = 0; x < q; ++x) {
                int xd = x + d;
                if (xd >= q) xd -= q;
                s += std::sqrt(a.posterior[x] * a.posterior[xd]);
            }
            acc.add(a.weight * s);
        }
        stats.z_by_d[static_cast<std::size_t>(d - 1)] = acc.value();
    }
    stats.z_max = *std::max_element(stats.z_by_d.begin(), stats.z_by_d.end());
    stats.entropy = channel_entropy(w);
    stats.symmetric_entropy = stats.entropy * (1.0 - stats.entropy);
    return stats;
}

double ml_error_prob(const JointChannel& w) {
    Kahan acc;
    for (const ChannelAtom& a : w.atoms()) {
        double best = 0.0;
        int ties = 0;
        for (double v : a.posterior.probs()) {
            if (v > best) {
                best = v;
                ties = 1;
            } else if (v == best) {
                ++ties;
            }
        }
        acc.add(ties > 1 ? a.weight : a.weight * (1.0 - best));
    }
    return acc.value();
}

JointChannel merge_equivalent_outputs(const JointChannel& w, double tol) {
    if (!(tol >= 0.0)) throw ModelError("merge_equivalent_outputs: tol must be nonnegative");
    std::vector<ChannelAtom> merged;
    if (tol == 0.0) {
        std::map<std::string, std::size_t> seen;
        for (const ChannelAtom& a : w.atoms()) {
            const auto [it, fresh] = seen.try_emplace(posterior_key(a.posterior), merged.size());
            if (fresh)
                merged.push_back(a);
            else
                merged[it->second].weight += a.weight;
        }
    } else {
        // Greedy fold into the first representative within tol; the
        // representative posterior is the weight-average of its group.
        std::vector<double> group_weight;
        std::vector<std::vector<double>> group_sum;
        for (const ChannelAtom& a : w.atoms()) {
            std::size_t hit = group_weight.size();
            for (std::size_t g = 0; g < group_weight.size(); ++g) {
                std::vector<double> rep = group_sum[g];
                for (double& v : rep) v /= group_weight[g];
                if (l1_distance(DistQ(rep), a.posterior) <= tol) {
                    hit = g;
                    break;
                }
            }
            if (hit == group_weight.size()) {
                group_weight.push_back(a.weight);
                std::vector<double> s = a.posterior.probs();
                for (double& v : s) v *= a.weight;
                group_sum.push_back(std::move(s));
            } else {
                group_weight[hit] += a.weight;
                for (int i = 0; i < w.q(); ++i)
                    group_sum[hit][static_cast<std::size_t>(i)] += a.weight * a.posterior[i];
            }
        }
        for (std::size_t g = 0; g < group_weight.size(); ++g) {
            std::vector<double> rep = group_sum[g];
            for (double& v : rep) v /= group_weight[g];
            merged.push_back({group_weight[g], DistQ(std::move(rep))});
        }
    }
    std::sort(merged.begin(), merged.end(), atom_less);
    return JointChannel(w.q(), std::move(merged), w.approximate() || tol > 0.0);
}

JointChannel make_qsc(int q, double flip_prob) {
    if (q < 2) throw ModelError("make_qsc: alphabet size must be at least 2");
    const double limit = static_cast<double>(q - 1) / q;
    if (!(flip_prob >= 0.0) || flip_prob > limit + 1e-15)
        throw ModelError("make_qsc: flip probability outside [0, (q-1)/q]");
    flip_prob = std::min(flip_prob, limit);
    std::vector<ChannelAtom> atoms;
    atoms.reserve(static_cast<std::size_t>(q));
    for (int k = 0; k < q; ++k) {
        std::vector<double> post(static_cast<std::size_t>(q), flip_prob / (q - 1));
        post[static_cast<std::size_t>(k)] = 1.0 - flip_prob;
        atoms.push_back({1.0 / q, DistQ(std::move(post))});
    }
    return JointChannel(q, std::move(atoms));
}

JointChannel qsc_with_entropy(int q, double target, double tol) {
    if (!(target >= 0.0) || target > 1.0)
        throw ModelError("qsc_with_entropy: target entropy outside [0,1]");
    double lo = 0.0, hi = static_cast<double>(q - 1) / q;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        const double h = channel_entropy(make_qsc(q, mid));
        if (std::abs(h - target) <= tol) return make_qsc(q, mid);
        (h < target ? lo : hi) = mid;
    }
    return make_qsc(q, 0.5 * (lo + hi));
}

JointChannel sample_random_channel(int q, int max_atoms, Rng& rng) {
    if (max_atoms < 1) throw ModelError("sample_random_channel: need at least one atom");
    const int k = 1 + static_cast<int>(rng.next_below(static_cast<std::uint64_t>(max_atoms)));
    std::vector<double> weights(static_cast<std::size_t>(k));
    double wsum = 0.0;
    for (double& w : weights) {
        w = rng.next_gamma(1.0);
        wsum += w;
    }
    std::vector<ChannelAtom> atoms;
    atoms.reserve(static_cast<std::size_t>(k));
    for (int i = 0; i < k; ++i) {
        const double conc = std::exp(rng.next_in(std::log(0.15), std::log(8.0)));
        atoms.push_back({weights[static_cast<std::size_t>(i)] / wsum,
                         sample_random_dist(q, conc, rng)});
    }
    return JointChannel(q, std::move(atoms));
}

DistQ input_marginal(const JointChannel& w) {
    std::vector<double> acc(static_cast<std::size_t>(w.q()), 0.0);
    for (const ChannelAtom& a : w.atoms())
        for (int x = 0; x < w.q(); ++x)
            acc[static_cast<std::size_t>(x)] += a.weight * a.posterior[x];
    return DistQ(std::move(acc));
}

std::pair<std::size_t, int> sample_pair(const JointChannel& w, Rng& rng) {
    double r = rng.next_double();
    std::size_t atom = w.atom_count() - 1;
    for (std::size_t k = 0; k < w.atom_count(); ++k) {
        r -= w.atoms()[k].weight;
        if (r < 0.0) {
            atom = k;
            break;
        }
    }
    const DistQ& post = w.atoms()[atom].posterior;
    double s = rng.next_double();
    int x = w.q() - 1;
    for (int i = 0; i < w.q(); ++i) {
        s -= post[i];
        if (s < 0.0) {
            x = i;
            break;
        }
    }
    return {atom, x};
}

ConditionalAtomSampler::ConditionalAtomSampler(const JointChannel& w) : q_(w.q()) {
    const DistQ marg = input_marginal(w);
    cumulative_.assign(static_cast<std::size_t>(q_),
                       std::vector<double>(w.atom_count(), 0.0));
    for (int x = 0; x < q_; ++x) {
        if (marg[x] <= 0.0) continue;  // symbol never transmitted under the model
        double acc = 0.0;
        for (std::size_t k = 0; k < w.atom_count(); ++k) {
            acc += w.atoms()[k].weight * w.atoms()[k].posterior[x] / marg[x];
            cumulative_[static_cast<std::size_t>(x)][k] = acc;
        }
    }
}

std::size_t ConditionalAtomSampler::sample(int x, Rng& rng) const {
    if (x < 0 || x >= q_) throw ModelError("ConditionalAtomSampler: symbol out of range");
    const auto& cum = cumulative_[static_cast<std::size_t>(x)];
    if (cum.empty() || cum.back() <= 0.0)
        throw ModelError("ConditionalAtomSampler: symbol has zero marginal probability");
    const double r = rng.next_double() * cum.back();
    for (std::size_t k = 0; k < cum.size(); ++k)
        if (r < cum[k]) return k;
    return cum.size() - 1;
}

std::string format_channel(const JointChannel& w) {
    std::string out = "q=" + std::to_string(w.q()) +
                      ";atoms=" + std::to_string(w.atom_count()) + "\n";
    for (const ChannelAtom& a : w.atoms()) {
        out += "w=" + format_g17(a.weight) + ";p=";
        for (int i = 0; i < w.q(); ++i) {
            if (i) out += ',';
            out += format_g17(a.posterior[i]);
        }
        out += '\n';
    }
    return out;
}

JointChannel parse_channel(std::istream& in) {
    std::string header;
    if (!std::getline(in, header))
        throw ParseError("channel: missing header line");
    int q = 0;
    long long count = 0;
    if (std::sscanf(header.c_str(), "q=%d;atoms=%lld", &q, &count) != 2 || q < 2 || count < 1)
        throw ParseError("channel: bad header \"" + header + "\"");
    std::vector<ChannelAtom> atoms;
    atoms.reserve(static_cast<std::size_t>(count));
    for (long long k = 0; k < count; ++k) {
        std::string line;
        if (!std::getline(in, line))
            throw ParseError("channel: expected " + std::to_string(count) +
                             " atom lines, got " + std::to_string(k));
        const auto sep = line.find(";p=");
        if (line.rfind("w=", 0) != 0 || sep == std::string::npos)
            throw ParseError("channel: bad atom line \"" + line + "\"");
        char* end = nullptr;
        const std::string wtext = line.substr(2, sep - 2);
        const double weight = std::strtod(wtext.c_str(), &end);
        if (end == wtext.c_str() || *end != '\0')
            throw ParseError("channel: bad weight \"" + wtext + "\"");
        atoms.push_back({weight, parse_dist("q=" + std::to_string(q) + ";p=" + line.substr(sep + 3))});
    }
    try {
        return JointChannel(q, std::move(atoms));
    } catch (const ModelError& e) {
        throw ParseError(std::string("channel: ") + e.what());
    }
}

JointChannel parse_channel_text(const std::string& text) {
    std::istringstream in(text);
    return parse_channel(in);
}

} // namespace polarq
