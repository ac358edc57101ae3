// Command-line surface for q-ary polar code construction, coding, and the
// numerical verification suites. Every randomized command takes an explicit
// seed and is byte-for-byte reproducible.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "polarq/codec.hpp"
#include "polarq/construction.hpp"
#include "polarq/errors.hpp"
#include "polarq/gain.hpp"
#include "polarq/util.hpp"

namespace {

using namespace polarq;

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open \"" + path + "\" for writing");
    return out;
}

std::ifstream open_input(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open \"" + path + "\" for reading");
    return in;
}

std::vector<int> read_symbol_file(const std::string& path, int q) {
    std::ifstream in = open_input(path);
    std::vector<int> symbols;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        char* end = nullptr;
        const long v = std::strtol(line.c_str(), &end, 10);
        if (end == line.c_str() || *end != '\0' || v < 0 || v >= q)
            throw ParseError("symbol file " + path + ": bad line \"" + line + "\"");
        symbols.push_back(static_cast<int>(v));
    }
    return symbols;
}

void write_symbol_file(const std::string& path, const std::vector<int>& symbols) {
    std::ofstream out = open_output(path);
    for (int s : symbols) out << s << "\n";
    if (!out) throw IoError("write to \"" + path + "\" failed");
}

std::vector<std::size_t> read_atom_file(const std::string& path) {
    std::ifstream in = open_input(path);
    std::vector<std::size_t> atoms;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        char* end = nullptr;
        const unsigned long long v = std::strtoull(line.c_str(), &end, 10);
        if (end == line.c_str() || *end != '\0')
            throw ParseError("atom file " + path + ": bad line \"" + line + "\"");
        atoms.push_back(static_cast<std::size_t>(v));
    }
    return atoms;
}

CodeSpec load_spec(const std::string& path) {
    std::ifstream in = open_input(path);
    return parse_code_spec(in);
}

JointChannel load_channel(const std::string& path) {
    std::ifstream in = open_input(path);
    return parse_channel(in);
}

struct CsvSink {
    std::ostream* stream;
    std::ofstream file;

    explicit CsvSink(const std::string& path) {
        if (path.empty()) {
            stream = &std::cout;
        } else {
            file = open_output(path);
            stream = &file;
        }
    }
    void row(const std::string& r) { (*stream) << r << "\n"; }
};

int run_construct(int q, int n, std::optional<double> rate, std::optional<double> threshold,
                  std::uint64_t seed, std::size_t samples, const std::string& channel_path,
                  const std::string& method, std::size_t budget, const std::string& out_path) {
    if (rate.has_value() == threshold.has_value())
        throw ModelError("construct: give exactly one of --rate and --threshold");
    const JointChannel channel =
        channel_path.empty() ? qsc_with_entropy(q, 0.5) : load_channel(channel_path);
    if (channel.q() != q) throw ModelError("construct: channel alphabet does not match --q");

    IndexStats stats;
    if (method == "exact") {
        stats = track_channels_exact(channel, n, budget).stats;
    } else if (method == "mc") {
        stats = estimate_index_stats_mc(channel, n, samples, seed);
    } else if (method == "auto") {
        try {
            stats = track_channels_exact(channel, n, budget).stats;
        } catch (const ModelError&) {
            stats = estimate_index_stats_mc(channel, n, samples, seed);
        }
    } else {
        throw ModelError("construct: unknown method \"" + method + "\"");
    }

    const FrozenPolicy policy = rate ? FrozenPolicy::rate(*rate)
                                     : FrozenPolicy::threshold(*threshold);
    const CodeSpec spec = select_frozen(stats, channel, policy);
    std::ofstream out = open_output(out_path);
    out << format_code_spec(spec);
    if (!out) throw IoError("write to \"" + out_path + "\" failed");

    std::cout << "q,n,frozen,rate,union_bound,method\n"
              << q << ',' << n << ',' << spec.frozen.size() << ','
              << format_g17(static_cast<double>(spec.frozen.size()) /
                            static_cast<double>(std::size_t{1} << n))
              << ',' << format_g17(spec.union_bound) << ',' << to_string(stats.method) << "\n";
    return 0;
}

int run_compress(const std::string& spec_path, const std::string& in_path,
                 const std::string& out_path) {
    const CodeSpec spec = load_spec(spec_path);
    const std::vector<int> symbols = read_symbol_file(in_path, spec.q);
    const std::size_t size = std::size_t{1} << spec.n;
    if (symbols.empty() || symbols.size() % size != 0)
        throw ModelError("compress: symbol count must be a positive multiple of " +
                         std::to_string(size));
    std::vector<CompressedBlock> blocks;
    for (std::size_t at = 0; at < symbols.size(); at += size) {
        SymbolVec x{spec.q, std::vector<int>(symbols.begin() + static_cast<std::ptrdiff_t>(at),
                                             symbols.begin() + static_cast<std::ptrdiff_t>(at + size))};
        blocks.push_back(compress(x, spec));
    }
    std::ofstream out = open_output(out_path);
    write_stream(out, spec.q, spec.n, blocks);
    return 0;
}

int run_decompress(const std::string& spec_path, const std::string& in_path,
                   const std::string& atoms_path, const std::string& out_path) {
    const CodeSpec spec = load_spec(spec_path);
    std::ifstream in = open_input(in_path);
    const std::vector<CompressedBlock> blocks = read_stream(in, spec.frozen.size());
    const std::size_t size = std::size_t{1} << spec.n;
    std::vector<std::size_t> atoms;
    if (atoms_path.empty())
        atoms.assign(blocks.size() * size, 0);
    else
        atoms = read_atom_file(atoms_path);
    if (atoms.size() != blocks.size() * size)
        throw ModelError("decompress: expected " + std::to_string(blocks.size() * size) +
                         " atom indices");
    std::vector<int> symbols;
    symbols.reserve(atoms.size());
    for (std::size_t b = 0; b < blocks.size(); ++b) {
        const std::vector<std::size_t> slice(atoms.begin() + static_cast<std::ptrdiff_t>(b * size),
                                             atoms.begin() + static_cast<std::ptrdiff_t>((b + 1) * size));
        const SymbolVec x = decompress(blocks[b], slice, spec);
        symbols.insert(symbols.end(), x.symbols.begin(), x.symbols.end());
    }
    write_symbol_file(out_path, symbols);
    return 0;
}

int run_simulate(const std::string& spec_path, std::size_t trials, std::uint64_t seed,
                 const std::string& out_path) {
    const CodeSpec spec = load_spec(spec_path);
    const std::size_t size = std::size_t{1} << spec.n;
    Rng rng = Rng::derived(seed, 0x73696dULL);
    std::size_t failures = 0;
    SymbolVec x{spec.q, std::vector<int>(size)};
    std::vector<std::size_t> atoms(size);
    for (std::size_t t = 0; t < trials; ++t) {
        for (std::size_t j = 0; j < size; ++j) {
            const auto [atom, sym] = sample_pair(spec.channel, rng);
            atoms[j] = atom;
            x.symbols[j] = sym;
        }
        const SymbolVec decoded = decompress(compress(x, spec), atoms, spec);
        if (decoded.symbols != x.symbols) ++failures;
    }
    const double rate = trials ? static_cast<double>(failures) / static_cast<double>(trials) : 0.0;
    const double stderr_ = trials ? std::sqrt(rate * (1.0 - rate) / static_cast<double>(trials)) : 0.0;
    const double bound = recompute_union_bound(spec);
    CsvSink csv(out_path);
    csv.row("q,n,trials,failures,failure_rate,union_bound,binom_stderr");
    csv.row(std::to_string(spec.q) + ',' + std::to_string(spec.n) + ',' +
            std::to_string(trials) + ',' + std::to_string(failures) + ',' +
            format_g17(rate) + ',' + format_g17(bound) + ',' + format_g17(stderr_));
    return 0;
}

int run_profile(const std::string& channel_path, int n, double epsilon,
                const std::string& method, std::size_t samples, std::uint64_t seed,
                std::size_t budget, const std::string& out_path) {
    const JointChannel channel = load_channel(channel_path);
    IndexStats stats;
    if (method == "exact")
        stats = track_channels_exact(channel, n, budget).stats;
    else if (method == "mc")
        stats = estimate_index_stats_mc(channel, n, samples, seed);
    else
        throw ModelError("profile: unknown method \"" + method + "\"");
    const ProfileTable table = polarization_profile(stats, epsilon);
    CsvSink csv(out_path);
    csv.row("index,h_hat,z_hat,t");
    for (const ProfileRow& row : table.rows)
        csv.row(std::to_string(row.index) + ',' + format_g17(row.h_hat) + ',' +
                format_g17(row.z_hat) + ',' + format_g17(row.t));
    std::cout << "n,epsilon,e_t,e_sqrt_t,frac_low,frac_high\n"
              << n << ',' << format_g17(epsilon) << ',' << format_g17(table.e_t) << ','
              << format_g17(table.e_sqrt_t) << ',' << format_g17(table.frac_low) << ','
              << format_g17(table.frac_high) << "\n";
    return 0;
}

int run_verify(int q, std::size_t trials, std::uint64_t seed, const std::string& out_path) {
    if (!is_prime(q)) throw ModelError("verify-inequalities: --q must be prime");
    CsvSink csv(out_path);
    csv.row("bound_id,inputs_digest,lhs,rhs,margin,passed");
    const auto emit = [&](const BoundCheckReport& r) {
        csv.row(std::string(to_string(r.bound_id)) + ',' + hex16(fnv1a64(r.inputs)) + ',' +
                format_g17(r.lhs) + ',' + format_g17(r.rhs) + ',' + format_g17(r.margin) +
                ',' + (r.passed ? "1" : "0"));
    };
    std::vector<BoundId> ids = bound_catalog();
    ids.push_back(BoundId::max_entropy);
    ids.push_back(BoundId::weighted_average_gain);
    bool all_passed = true;
    for (BoundId id : ids) {
        Rng rng = Rng::derived(seed, static_cast<std::uint64_t>(id));
        for (std::size_t t = 0; t < trials; ++t) {
            const BoundCheckReport r = verify_bound(id, sample_bound_operands(id, q, rng));
            all_passed = all_passed && r.passed;
            emit(r);
        }
    }
    {
        // conditional gain of random channels, reported against zero
        Rng rng = Rng::derived(seed, 0xc0ffeeULL);
        for (std::size_t t = 0; t < trials; ++t) {
            const JointChannel w = sample_random_channel(q, 8, rng);
            const double gain = conditional_gain(w);
            BoundCheckReport r;
            r.inputs = format_channel(w);
            r.lhs = gain;
            r.rhs = 0.0;
            r.margin = gain;
            r.passed = gain >= -1e-12;
            all_passed = all_passed && r.passed;
            csv.row("conditional_gain," + hex16(fnv1a64(r.inputs)) + ',' + format_g17(r.lhs) +
                    ",0," + format_g17(r.margin) + ',' + (r.passed ? "1" : "0"));
        }
    }
    return all_passed ? 0 : 4;
}

int run_estimate_alpha(int q, int trials, int refine, std::uint64_t seed,
                       const std::string& out_path, const std::string& channel_out) {
    const AlphaEstimate est = estimate_alpha(q, trials, seed, refine);
    CsvSink csv(out_path);
    csv.row("q,trials,refine,seed,alpha_estimate,minimizer_t,minimizer_atoms");
    csv.row(std::to_string(q) + ',' + std::to_string(trials) + ',' + std::to_string(refine) +
            ',' + std::to_string(seed) + ',' + format_g17(est.constants.alpha_estimate) + ',' +
            format_g17(symmetric_entropy(est.minimizer)) + ',' +
            std::to_string(est.minimizer.atom_count()));
    if (channel_out.empty()) {
        std::cout << format_channel(est.minimizer);
    } else {
        std::ofstream out = open_output(channel_out);
        out << format_channel(est.minimizer);
    }
    return 0;
}

int run_contraction(int q, std::size_t trials, std::uint64_t seed, const std::string& out_path) {
    Rng rng = Rng::derived(seed, 0x636f6eULL);
    CsvSink csv(out_path);
    csv.row("trial,h,t,ratio");
    double lambda_hat = 0.0;
    std::size_t used = 0;
    for (std::size_t t = 0; t < trials; ++t) {
        const JointChannel w = sample_random_channel(q, 8, rng);
        const double tw = symmetric_entropy(w);
        if (tw <= 1e-9) continue;
        const double ratio = (std::sqrt(symmetric_entropy(minus_transform(w))) +
                              std::sqrt(symmetric_entropy(plus_transform(w)))) /
                             (2.0 * std::sqrt(tw));
        lambda_hat = std::max(lambda_hat, ratio);
        ++used;
        csv.row(std::to_string(t) + ',' + format_g17(channel_entropy(w)) + ',' +
                format_g17(tw) + ',' + format_g17(ratio));
    }
    std::cout << "q,lambda_hat,channels_used\n"
              << q << ',' << format_g17(lambda_hat) << ',' << used << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"q-ary polar source/channel coding toolkit"};
    app.require_subcommand(1);

    int q = 3, n = 4;
    std::uint64_t seed = 0;
    std::size_t samples = 100000, trials = 1000, budget = 4000000;
    int alpha_trials = 1000, refine = 200;
    double epsilon = 0.05;
    std::optional<double> rate, threshold;
    std::string channel_path, spec_path, in_path, out_path, atoms_path, channel_out;
    std::string method = "auto";

    auto* construct = app.add_subcommand("construct", "build a code spec from a channel");
    construct->add_option("--q", q)->required();
    construct->add_option("--n", n)->required();
    construct->add_option("--rate", rate);
    construct->add_option("--threshold", threshold);
    construct->add_option("--seed", seed)->required();
    construct->add_option("--samples", samples);
    construct->add_option("--channel", channel_path);
    construct->add_option("--method", method)->check(CLI::IsMember({"auto", "exact", "mc"}));
    construct->add_option("--budget", budget);
    construct->add_option("--out", out_path)->required();

    auto* compress_cmd = app.add_subcommand("compress", "symbol file -> stream");
    compress_cmd->add_option("--spec", spec_path)->required();
    compress_cmd->add_option("--in", in_path)->required();
    compress_cmd->add_option("--out", out_path)->required();

    auto* decompress_cmd = app.add_subcommand("decompress", "stream -> symbol file");
    decompress_cmd->add_option("--spec", spec_path)->required();
    decompress_cmd->add_option("--in", in_path)->required();
    decompress_cmd->add_option("--atoms", atoms_path);
    decompress_cmd->add_option("--out", out_path)->required();

    auto* simulate = app.add_subcommand("simulate", "empirical decompression failure rate");
    simulate->add_option("--spec", spec_path)->required();
    simulate->add_option("--trials", trials)->required();
    simulate->add_option("--seed", seed)->required();
    simulate->add_option("--out", out_path);

    auto* profile = app.add_subcommand("profile", "per-index polarization statistics");
    profile->add_option("--channel", channel_path)->required();
    profile->add_option("--n", n)->required();
    profile->add_option("--epsilon", epsilon);
    profile->add_option("--method", method)->check(CLI::IsMember({"exact", "mc"}));
    profile->add_option("--samples", samples);
    profile->add_option("--seed", seed);
    profile->add_option("--budget", budget);
    profile->add_option("--out", out_path);

    auto* verify = app.add_subcommand("verify-inequalities", "sweep the bound catalog");
    verify->add_option("--q", q)->required();
    verify->add_option("--trials", trials)->required();
    verify->add_option("--seed", seed)->required();
    verify->add_option("--out", out_path);

    auto* alpha = app.add_subcommand("estimate-alpha", "minimum conditional gain ratio");
    alpha->add_option("--q", q)->required();
    alpha->add_option("--trials", alpha_trials)->required();
    alpha->add_option("--refine", refine);
    alpha->add_option("--seed", seed)->required();
    alpha->add_option("--out", out_path);
    alpha->add_option("--channel-out", channel_out);

    auto* contraction = app.add_subcommand("contraction", "root symmetric entropy contraction sweep");
    contraction->add_option("--q", q)->required();
    contraction->add_option("--trials", trials)->required();
    contraction->add_option("--seed", seed)->required();
    contraction->add_option("--out", out_path);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        app.exit(e);
        std::cerr << "error: parse: invalid command line\n";
        return 2;
    }

    try {
        if (app.got_subcommand(construct))
            return run_construct(q, n, rate, threshold, seed, samples, channel_path, method,
                                 budget, out_path);
        if (app.got_subcommand(compress_cmd)) return run_compress(spec_path, in_path, out_path);
        if (app.got_subcommand(decompress_cmd))
            return run_decompress(spec_path, in_path, atoms_path, out_path);
        if (app.got_subcommand(simulate)) return run_simulate(spec_path, trials, seed, out_path);
        if (app.got_subcommand(profile)) {
            if (method == "auto") method = "exact";
            return run_profile(channel_path, n, epsilon, method, samples, seed, budget, out_path);
        }
        if (app.got_subcommand(verify)) return run_verify(q, trials, seed, out_path);
        if (app.got_subcommand(alpha))
            return run_estimate_alpha(q, alpha_trials, refine, seed, out_path, channel_out);
        if (app.got_subcommand(contraction)) return run_contraction(q, trials, seed, out_path);
    } catch (const polarq::ParseError& e) {
        std::cerr << "error: parse: " << e.what() << "\n";
        return 2;
    } catch (const IoError& e) {
        std::cerr << "error: io: " << e.what() << "\n";
        return 3;
    } catch (const ModelError& e) {
        std::cerr << "error: model: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
