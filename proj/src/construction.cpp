#include "polarq/construction.hpp"

#include <algorithm>
#include <cmath>
#include <future>
#include <istream>
#include <numeric>
#include <sstream>
#include <thread>

#include "polarq/errors.hpp"
#include "polarq/sc.hpp"
#include "polarq/transform.hpp"
#include "polarq/util.hpp"

namespace polarq {

namespace {

constexpr std::size_t kMcBlock = 1024;

struct IndexAccum {
    Kahan h, h2, z, z2;
};

} // namespace

const char* to_string(StatMethod m) {
    switch (m) {
        case StatMethod::exact: return "exact";
        case StatMethod::mc: return "mc";
        case StatMethod::bound: return "bound";
    }
    return "unknown";
}

TrackResult track_channels_exact(const JointChannel& w, int n, std::size_t atom_budget) {
    if (n < 0 || n > 30) throw ModelError("track_channels_exact: depth out of range");
    std::vector<JointChannel> level{merge_equivalent_outputs(w, 0.0)};
    for (int lvl = 0; lvl < n; ++lvl) {
        std::size_t projected = 0;
        for (const JointChannel& ch : level) {
            const std::size_t k = ch.atom_count();
            projected += k * k * (1 + static_cast<std::size_t>(w.q()));
        }
        if (projected > atom_budget)
            throw ModelError("track_channels_exact: atom budget exceeded entering level " +
                             std::to_string(lvl + 1) + " (needs " + std::to_string(projected) +
                             " atoms)");
        std::vector<JointChannel> next;
        next.reserve(level.size() * 2);
        for (const JointChannel& ch : level) {
            next.push_back(merge_equivalent_outputs(minus_transform(ch), 0.0));
            next.push_back(merge_equivalent_outputs(plus_transform(ch), 0.0));
        }
        level = std::move(next);
    }

    TrackResult result;
    result.stats.q = w.q();
    result.stats.n = n;
    result.stats.method = StatMethod::exact;
    const double z0 = bhattacharyya(w).z_max;
    result.stats.entries.resize(level.size());
    for (std::size_t i = 0; i < level.size(); ++i) {
        const ChannelStats cs = bhattacharyya(level[i]);
        IndexStat& s = result.stats.entries[i];
        s.index = i;
        s.h_hat = cs.entropy;
        s.z_hat = cs.z_max;
        s.z_tilde = z_bound_recursion(z0, i, n, w.q());
    }
    result.channels = std::move(level);
    return result;
}

IndexStats estimate_index_stats_mc(const JointChannel& w, int n, std::size_t samples,
                                   std::uint64_t seed, int threads) {
    if (n < 0 || n > 30) throw ModelError("estimate_index_stats_mc: depth out of range");
    if (samples < 1) throw ModelError("estimate_index_stats_mc: need at least one sample");
    const std::size_t size = std::size_t{1} << n;
    const int q = w.q();
    const double lgq = std::log2(static_cast<double>(q));

    const std::size_t blocks = (samples + kMcBlock - 1) / kMcBlock;
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, static_cast<int>(blocks)));

    using BlockSums = std::vector<IndexAccum>;
    const auto run_block = [&](std::size_t block) {
        const std::size_t lo = block * kMcBlock;
        const std::size_t hi = std::min(samples, lo + kMcBlock);
        Rng rng = Rng::derived(seed, block);
        ScEngine engine(q, n);
        BlockSums sums(size);
        std::vector<DistQ> posteriors;
        posteriors.reserve(size);
        SymbolVec x{q, std::vector<int>(size)};
        for (std::size_t s = lo; s < hi; ++s) {
            posteriors.clear();
            for (std::size_t j = 0; j < size; ++j) {
                const auto [atom, sym] = sample_pair(w, rng);
                posteriors.push_back(w.atoms()[atom].posterior);
                x.symbols[j] = sym;
            }
            const SymbolVec u = transform(x);
            engine.run(posteriors, [&](std::size_t i, const LikelihoodVec& lv) {
                const int truth = u.symbols[i];
                const DistQ post = lv.normalized();
                const double pu = std::max(post[truth], 1e-300);
                const double hterm = -std::log2(pu) / lgq;
                double zterm = 0.0;
                for (int d = 1; d < q; ++d) {
                    int td = truth + d;
                    if (td >= q) td -= q;
                    zterm += std::sqrt(post[truth] * post[td]);
                }
                sums[i].h.add(hterm);
                sums[i].h2.add(hterm * hterm);
                sums[i].z.add(zterm);
                sums[i].z2.add(zterm * zterm);
                return truth;
            });
        }
        return sums;
    };

    std::vector<BlockSums> partials(blocks);
    if (threads == 1) {
        for (std::size_t b = 0; b < blocks; ++b) partials[b] = run_block(b);
    } else {
        std::size_t next_block = 0;
        for (;;) {
            const std::size_t first = next_block;
            if (first >= blocks) break;
            const std::size_t batch = std::min<std::size_t>(threads, blocks - first);
            std::vector<std::future<BlockSums>> futures;
            futures.reserve(batch);
            for (std::size_t i = 0; i < batch; ++i)
                futures.push_back(std::async(std::launch::async, run_block, first + i));
            for (std::size_t i = 0; i < batch; ++i) partials[first + i] = futures[i].get();
            next_block = first + batch;
        }
    }

    // Partial sums combine in block order: the totals do not depend on how
    // many workers ran.
    IndexStats stats;
    stats.q = q;
    stats.n = n;
    stats.method = StatMethod::mc;
    stats.samples = samples;
    stats.seed = seed;
    stats.entries.resize(size);
    const double z0 = bhattacharyya(w).z_max;
    const double cnt = static_cast<double>(samples);
    for (std::size_t i = 0; i < size; ++i) {
        Kahan h, h2, z, z2;
        for (std::size_t b = 0; b < blocks; ++b) {
            h.add(partials[b][i].h.value());
            h2.add(partials[b][i].h2.value());
            z.add(partials[b][i].z.value());
            z2.add(partials[b][i].z2.value());
        }
        IndexStat& s = stats.entries[i];
        s.index = i;
        s.h_hat = h.value() / cnt;
        s.z_hat = z.value() / cnt;
        const double hvar = std::max(0.0, h2.value() / cnt - s.h_hat * s.h_hat);
        const double zvar = std::max(0.0, z2.value() / cnt - s.z_hat * s.z_hat);
        s.h_stderr = std::sqrt(hvar / cnt);
        s.z_stderr = std::sqrt(zvar / cnt);
        s.z_tilde = z_bound_recursion(z0, i, n, q);
    }
    return stats;
}

double z_bound_recursion(double z0, std::uint64_t index, int n, int q) {
    if (!(z0 >= 0.0) || z0 > 1.0)
        throw ModelError("z_bound_recursion: z0 outside [0,1]");
    if (n < 0 || n > 62 || index >= (std::uint64_t{1} << n))
        throw ModelError("z_bound_recursion: index out of range");
    const double q3 = static_cast<double>(q) * q * q;
    double z = z0;
    for (int k = n - 1; k >= 0; --k) {
        if ((index >> k) & 1)
            z = z * z;
        else
            z = std::min(1.0, q3 * z);
    }
    return z;
}

CodeSpec select_frozen(const IndexStats& stats, const JointChannel& channel,
                       FrozenPolicy policy) {
    const std::size_t size = std::size_t{1} << stats.n;
    if (stats.entries.size() != size)
        throw ModelError("select_frozen: incomplete stats for depth " + std::to_string(stats.n));
    if (channel.q() != stats.q) throw ModelError("select_frozen: alphabet mismatch");

    std::vector<std::size_t> frozen;
    if (policy.kind == FrozenPolicy::Kind::rate) {
        const double r = policy.value;
        if (!(r >= 0.0) || r > 1.0) throw ModelError("select_frozen: rate outside [0,1]");
        const auto count = static_cast<std::size_t>(std::ceil(r * static_cast<double>(size)));
        std::vector<std::size_t> order(size);
        std::iota(order.begin(), order.end(), 0);
        std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            const IndexStat& sa = stats.entries[a];
            const IndexStat& sb = stats.entries[b];
            if (sa.h_hat != sb.h_hat) return sa.h_hat > sb.h_hat;
            if (sa.z_hat != sb.z_hat) return sa.z_hat > sb.z_hat;
            return a < b;
        });
        frozen.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
        std::sort(frozen.begin(), frozen.end());
    } else {
        for (const IndexStat& s : stats.entries)
            if (s.h_hat > policy.value) frozen.push_back(s.index);
    }

    CodeSpec spec{stats.q, stats.n, std::move(frozen), channel, "", 0.0};
    spec.digest = std::string(to_string(stats.method)) + ";" + std::to_string(stats.samples) +
                  ";" + std::to_string(stats.seed);
    Kahan bound;
    std::size_t fi = 0;
    for (std::size_t i = 0; i < size; ++i) {
        if (fi < spec.frozen.size() && spec.frozen[fi] == i) {
            ++fi;
            continue;
        }
        bound.add((stats.q - 1) * stats.entries[i].z_hat);
    }
    spec.union_bound = bound.value();
    return spec;
}

ProfileTable polarization_profile(const IndexStats& stats, double epsilon) {
    ProfileTable table;
    table.epsilon = epsilon;
    table.rows.reserve(stats.entries.size());
    Kahan et, esqrt;
    std::size_t low = 0, high = 0;
    for (const IndexStat& s : stats.entries) {
        const double t = s.h_hat * (1.0 - s.h_hat);
        table.rows.push_back({s.index, s.h_hat, s.z_hat, t});
        et.add(t);
        esqrt.add(std::sqrt(std::max(0.0, t)));
        if (s.h_hat <= epsilon) ++low;
        if (s.h_hat >= 1.0 - epsilon) ++high;
    }
    const double count = static_cast<double>(stats.entries.size());
    table.e_t = et.value() / count;
    table.e_sqrt_t = esqrt.value() / count;
    table.frac_low = static_cast<double>(low) / count;
    table.frac_high = static_cast<double>(high) / count;
    return table;
}

std::string format_code_spec(const CodeSpec& spec) {
    std::string out = "POLARQ v1\n";
    out += "q=" + std::to_string(spec.q) + ";n=" + std::to_string(spec.n) + "\n";
    out += "frozen=";
    for (std::size_t i = 0; i < spec.frozen.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(spec.frozen[i]);
    }
    out += '\n';
    out += format_channel(spec.channel);
    out += "digest=" + spec.digest + "\n";
    return out;
}

CodeSpec parse_code_spec(std::istream& in) {
    std::string line;
    if (!std::getline(in, line) || line != "POLARQ v1")
        throw ParseError("code spec: missing \"POLARQ v1\" header");
    if (!std::getline(in, line)) throw ParseError("code spec: missing dimensions line");
    int q = 0, n = -1;
    if (std::sscanf(line.c_str(), "q=%d;n=%d", &q, &n) != 2 || q < 2 || n < 0)
        throw ParseError("code spec: bad dimensions \"" + line + "\"");
    if (!std::getline(in, line) || line.rfind("frozen=", 0) != 0)
        throw ParseError("code spec: missing frozen set line");
    std::vector<std::size_t> frozen;
    {
        std::stringstream vals(line.substr(7));
        std::string tok;
        while (std::getline(vals, tok, ',')) {
            char* end = nullptr;
            const unsigned long long v = std::strtoull(tok.c_str(), &end, 10);
            if (end == tok.c_str() || *end != '\0')
                throw ParseError("code spec: bad frozen index \"" + tok + "\"");
            frozen.push_back(static_cast<std::size_t>(v));
        }
    }
    const std::size_t size = std::size_t{1} << n;
    for (std::size_t i = 0; i < frozen.size(); ++i) {
        if (frozen[i] >= size) throw ParseError("code spec: frozen index out of range");
        if (i && frozen[i] <= frozen[i - 1])
            throw ParseError("code spec: frozen indices must be strictly increasing");
    }
    JointChannel channel = parse_channel(in);
    if (channel.q() != q) throw ParseError("code spec: channel alphabet mismatch");
    if (!std::getline(in, line) || line.rfind("digest=", 0) != 0)
        throw ParseError("code spec: missing digest line");
    return CodeSpec{q, n, std::move(frozen), std::move(channel), line.substr(7), 0.0};
}

double recompute_union_bound(const CodeSpec& spec, std::size_t atom_budget) {
    if (spec.frozen.size() == (std::size_t{1} << spec.n)) return 0.0;
    std::istringstream digest(spec.digest);
    std::string method, samples_text, seed_text;
    if (!std::getline(digest, method, ';') || !std::getline(digest, samples_text, ';') ||
        !std::getline(digest, seed_text))
        throw ParseError("code spec digest: expected \"method;samples;seed\"");
    IndexStats stats;
    if (method == "exact") {
        stats = track_channels_exact(spec.channel, spec.n, atom_budget).stats;
    } else if (method == "mc") {
        stats = estimate_index_stats_mc(spec.channel, spec.n,
                                        std::strtoull(samples_text.c_str(), nullptr, 10),
                                        std::strtoull(seed_text.c_str(), nullptr, 10));
    } else if (method == "bound") {
        const double z0 = bhattacharyya(spec.channel).z_max;
        stats.q = spec.q;
        stats.n = spec.n;
        stats.method = StatMethod::bound;
        stats.entries.resize(std::size_t{1} << spec.n);
        for (std::size_t i = 0; i < stats.entries.size(); ++i) {
            stats.entries[i].index = i;
            stats.entries[i].z_hat = z_bound_recursion(z0, i, spec.n, spec.q);
        }
    } else {
        throw ParseError("code spec digest: unknown method \"" + method + "\"");
    }
    Kahan bound;
    std::size_t fi = 0;
    for (std::size_t i = 0; i < stats.entries.size(); ++i) {
        if (fi < spec.frozen.size() && spec.frozen[fi] == i) {
            ++fi;
            continue;
        }
        bound.add((spec.q - 1) * stats.entries[i].z_hat);
    }
    return bound.value();
}

} // namespace polarq
