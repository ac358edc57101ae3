#include "polarq/codec.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <string>

#include "polarq/errors.hpp"
#include "polarq/util.hpp"

namespace polarq {

namespace {

void check_block_shape(const CompressedBlock& block, const CodeSpec& spec) {
    if (block.q != spec.q || block.n != spec.n)
        throw ModelError("block does not match code spec dimensions");
    if (block.payload.size() != spec.frozen.size())
        throw ModelError("payload length " + std::to_string(block.payload.size()) +
                         " does not match frozen set size " +
                         std::to_string(spec.frozen.size()));
    for (int s : block.payload)
        if (s < 0 || s >= spec.q) throw ModelError("payload symbol out of range");
}

std::vector<DistQ> posteriors_for(const std::vector<std::size_t>& y_atoms,
                                  const CodeSpec& spec) {
    const std::size_t size = std::size_t{1} << spec.n;
    if (y_atoms.size() != size)
        throw ModelError("expected " + std::to_string(size) + " observed atoms, got " +
                         std::to_string(y_atoms.size()));
    std::vector<DistQ> posteriors;
    posteriors.reserve(size);
    for (std::size_t a : y_atoms) {
        if (a >= spec.channel.atom_count())
            throw ModelError("observed atom index " + std::to_string(a) + " out of range");
        posteriors.push_back(spec.channel.atoms()[a].posterior);
    }
    return posteriors;
}

std::vector<int> run_sc(const std::vector<int>& payload,
                        const std::vector<DistQ>& posteriors, const CodeSpec& spec) {
    ScEngine engine(spec.q, spec.n);
    std::size_t next_frozen = 0;
    return engine.run(posteriors, [&](std::size_t i, const LikelihoodVec& lv) {
        if (next_frozen < spec.frozen.size() && spec.frozen[next_frozen] == i)
            return payload[next_frozen++];
        return lv.argmax_smallest();
    });
}

void validate_factors(const std::vector<int>& factors, int q) {
    if (factors.empty()) throw ModelError("factorization is empty");
    long long prod = 1;
    int prev = 2;
    for (int f : factors) {
        if (!is_prime(f)) throw ModelError("factorization contains non-prime " + std::to_string(f));
        if (f < prev) throw ModelError("factorization must be ascending");
        prev = f;
        prod *= f;
    }
    if (prod != q)
        throw ModelError("factorization multiplies to " + std::to_string(prod) + ", not " +
                         std::to_string(q));
}

} // namespace

CompressedBlock compress(const SymbolVec& x, const CodeSpec& spec) {
    validate(x);
    if (x.q != spec.q || x.symbols.size() != (std::size_t{1} << spec.n))
        throw ModelError("compress: input does not match code spec dimensions");
    const SymbolVec u = transform(x);
    CompressedBlock block{spec.q, spec.n, {}};
    block.payload.reserve(spec.frozen.size());
    for (std::size_t i : spec.frozen) block.payload.push_back(u.symbols[i]);
    return block;
}

std::vector<int> sc_decode_transformed(const CompressedBlock& block,
                                       const std::vector<std::size_t>& y_atoms,
                                       const CodeSpec& spec) {
    check_block_shape(block, spec);
    return run_sc(block.payload, posteriors_for(y_atoms, spec), spec);
}

SymbolVec sc_decode(const CompressedBlock& block, const std::vector<std::size_t>& y_atoms,
                    const CodeSpec& spec) {
    return inverse_transform(SymbolVec{spec.q, sc_decode_transformed(block, y_atoms, spec)});
}

SymbolVec decompress(const CompressedBlock& block, const std::vector<std::size_t>& y_atoms,
                     const CodeSpec& spec) {
    return sc_decode(block, y_atoms, spec);
}

SymbolVec channel_encode(const std::vector<int>& message, const std::vector<int>& frozen_fill,
                         const CodeSpec& spec) {
    const std::size_t size = std::size_t{1} << spec.n;
    if (frozen_fill.size() != spec.frozen.size())
        throw ModelError("channel_encode: fill length does not match frozen set");
    if (message.size() != size - spec.frozen.size())
        throw ModelError("channel_encode: message length does not match unfrozen count");
    SymbolVec u{spec.q, std::vector<int>(size)};
    std::size_t next_frozen = 0, next_message = 0;
    for (std::size_t i = 0; i < size; ++i) {
        if (next_frozen < spec.frozen.size() && spec.frozen[next_frozen] == i)
            u.symbols[i] = frozen_fill[next_frozen++];
        else
            u.symbols[i] = message[next_message++];
    }
    validate(u);
    return inverse_transform(u);
}

std::vector<int> channel_decode(const std::vector<std::size_t>& received_atoms,
                                const std::vector<int>& frozen_fill, const CodeSpec& spec) {
    const CompressedBlock as_payload{spec.q, spec.n, frozen_fill};
    const std::vector<int> u = sc_decode_transformed(as_payload, received_atoms, spec);
    std::vector<int> message;
    message.reserve(u.size() - spec.frozen.size());
    std::size_t next_frozen = 0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        if (next_frozen < spec.frozen.size() && spec.frozen[next_frozen] == i) {
            ++next_frozen;
            continue;
        }
        message.push_back(u[i]);
    }
    return message;
}

std::vector<int> prime_factorization(int q) {
    if (q < 2) throw ModelError("prime_factorization: need q >= 2");
    std::vector<int> factors;
    int rest = q;
    for (int d = 2; d * d <= rest; ++d)
        while (rest % d == 0) {
            factors.push_back(d);
            rest /= d;
        }
    if (rest > 1) factors.push_back(rest);
    return factors;
}

std::vector<int> digit_decompose(int x, const std::vector<int>& factors) {
    long long prod = 1;
    for (int f : factors) prod *= f;
    if (x < 0 || x >= prod) throw ModelError("digit_decompose: symbol out of range");
    validate_factors(factors, static_cast<int>(prod));
    std::vector<int> digits;
    digits.reserve(factors.size());
    int rest = x;
    for (int f : factors) {
        digits.push_back(rest % f);
        rest /= f;
    }
    return digits;
}

int digit_compose(const std::vector<int>& digits, const std::vector<int>& factors) {
    if (digits.size() != factors.size())
        throw ModelError("digit_compose: digit count does not match factorization");
    int x = 0;
    int scale = 1;
    for (std::size_t j = 0; j < factors.size(); ++j) {
        if (digits[j] < 0 || digits[j] >= factors[j])
            throw ModelError("digit_compose: digit out of range");
        x += digits[j] * scale;
        scale *= factors[j];
    }
    return x;
}

PlaneSplit split_channel_planes(const JointChannel& w, const std::vector<int>& factors) {
    validate_factors(factors, w.q());
    PlaneSplit split;
    std::size_t combos = 1;
    for (std::size_t j = 0; j < factors.size(); ++j) {
        const int qj = factors[j];
        std::vector<ChannelAtom> atoms;
        std::vector<long long> map(w.atom_count() * combos, -1);
        std::vector<double> mass(static_cast<std::size_t>(qj));
        for (std::size_t k = 0; k < w.atom_count(); ++k) {
            const ChannelAtom& atom = w.atoms()[k];
            for (std::size_t c = 0; c < combos; ++c) {
                double total = 0.0;
                for (int u = 0; u < qj; ++u) {
                    double m = 0.0;
                    // symbols with lower digits c and digit j equal to u
                    for (int x = static_cast<int>(c) + static_cast<int>(combos) * u; x < w.q();
                         x += static_cast<int>(combos) * qj)
                        m += atom.posterior[x];
                    mass[static_cast<std::size_t>(u)] = m;
                    total += m;
                }
                if (total <= 0.0) continue;
                std::vector<double> post(static_cast<std::size_t>(qj));
                for (int u = 0; u < qj; ++u) post[static_cast<std::size_t>(u)] =
                    mass[static_cast<std::size_t>(u)] / total;
                map[k * combos + c] = static_cast<long long>(atoms.size());
                atoms.push_back({atom.weight * total, DistQ(std::move(post))});
            }
        }
        split.channels.emplace_back(qj, std::move(atoms));
        split.atom_map.push_back(std::move(map));
        split.combos.push_back(combos);
        combos *= static_cast<std::size_t>(qj);
    }
    return split;
}

MultilevelCode build_multilevel_code(const JointChannel& w, int n, FrozenPolicy policy,
                                     StatMethod method, std::size_t samples,
                                     std::uint64_t seed, std::size_t atom_budget) {
    MultilevelCode code{w, prime_factorization(w.q()), {}};
    const PlaneSplit split = split_channel_planes(w, code.factors);
    for (std::size_t j = 0; j < split.channels.size(); ++j) {
        IndexStats stats;
        if (method == StatMethod::exact)
            stats = track_channels_exact(split.channels[j], n, atom_budget).stats;
        else if (method == StatMethod::mc)
            stats = estimate_index_stats_mc(split.channels[j], n, samples, seed + j);
        else
            throw ModelError("build_multilevel_code: method must be exact or mc");
        code.planes.push_back(select_frozen(stats, split.channels[j], policy));
    }
    return code;
}

MultilevelBlock multilevel_compress(const SymbolVec& x, const MultilevelCode& code) {
    validate(x);
    if (x.q != code.channel.q())
        throw ModelError("multilevel_compress: alphabet does not match code");
    MultilevelBlock block;
    std::size_t scale = 1;
    for (std::size_t j = 0; j < code.planes.size(); ++j) {
        SymbolVec plane{code.factors[j], std::vector<int>(x.symbols.size())};
        for (std::size_t pos = 0; pos < x.symbols.size(); ++pos)
            plane.symbols[pos] = (x.symbols[pos] / static_cast<int>(scale)) % code.factors[j];
        block.planes.push_back(compress(plane, code.planes[j]));
        scale *= static_cast<std::size_t>(code.factors[j]);
    }
    return block;
}

SymbolVec multilevel_decompress(const MultilevelBlock& block,
                                const std::vector<std::size_t>& y_atoms,
                                const MultilevelCode& code) {
    if (block.planes.size() != code.planes.size() || code.planes.empty())
        throw ModelError("multilevel_decompress: plane count mismatch");
    const PlaneSplit split = split_channel_planes(code.channel, code.factors);
    const std::size_t size = std::size_t{1} << code.planes[0].n;
    if (y_atoms.size() != size)
        throw ModelError("multilevel_decompress: expected " + std::to_string(size) +
                         " observed atoms");
    std::vector<int> lower_combo(size, 0);  // recovered lower digits, mixed radix
    std::vector<int> assembled(size, 0);
    std::size_t scale = 1;
    for (std::size_t j = 0; j < code.planes.size(); ++j) {
        std::vector<std::size_t> plane_atoms(size);
        for (std::size_t pos = 0; pos < size; ++pos) {
            if (y_atoms[pos] >= code.channel.atom_count())
                throw ModelError("multilevel_decompress: observed atom index out of range");
            const long long id =
                split.atom_map[j][y_atoms[pos] * split.combos[j] +
                                  static_cast<std::size_t>(lower_combo[pos])];
            if (id < 0)
                throw ModelError("multilevel_decompress: stage " + std::to_string(j + 1) +
                                 " side information impossible under the model; aborting "
                                 "later stages");
            plane_atoms[pos] = static_cast<std::size_t>(id);
        }
        const SymbolVec plane = sc_decode(block.planes[j], plane_atoms, code.planes[j]);
        for (std::size_t pos = 0; pos < size; ++pos) {
            assembled[pos] += plane.symbols[pos] * static_cast<int>(scale);
            lower_combo[pos] += plane.symbols[pos] * static_cast<int>(scale);
        }
        scale *= static_cast<std::size_t>(code.factors[j]);
    }
    return SymbolVec{code.channel.q(), std::move(assembled)};
}

void write_stream(std::ostream& out, int q, int n,
                  const std::vector<CompressedBlock>& blocks) {
    if (q < 2 || q > 251) throw ModelError("write_stream: q must be in [2,251]");
    std::size_t payload_len = blocks.empty() ? 0 : blocks.front().payload.size();
    out << "POLARQC v1\n";
    out << "q=" << q << ";n=" << n << ";count=" << blocks.size() << "\n";
    std::string bytes;
    for (const CompressedBlock& b : blocks) {
        if (b.q != q || b.n != n || b.payload.size() != payload_len)
            throw ModelError("write_stream: inconsistent block shapes");
        for (int s : b.payload) {
            if (s < 0 || s >= q) throw ModelError("write_stream: symbol out of range");
            bytes.push_back(static_cast<char>(static_cast<unsigned char>(s)));
        }
    }
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("write_stream: stream write failed");
}

std::vector<CompressedBlock> read_stream(std::istream& in, std::size_t payload_len) {
    std::string line;
    if (!std::getline(in, line) || line != "POLARQC v1")
        throw ParseError("stream: missing \"POLARQC v1\" header");
    if (!std::getline(in, line)) throw ParseError("stream: missing dimensions line");
    int q = 0, n = -1;
    long long count = -1;
    if (std::sscanf(line.c_str(), "q=%d;n=%d;count=%lld", &q, &n, &count) != 3 || q < 2 ||
        q > 251 || n < 0 || count < 0)
        throw ParseError("stream: bad dimensions \"" + line + "\"");
    std::vector<CompressedBlock> blocks(static_cast<std::size_t>(count));
    std::string bytes(static_cast<std::size_t>(count) * payload_len, '\0');
    in.read(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (static_cast<std::size_t>(in.gcount()) != bytes.size())
        throw ParseError("stream: truncated payload section");
    std::size_t at = 0;
    for (CompressedBlock& b : blocks) {
        b.q = q;
        b.n = n;
        b.payload.resize(payload_len);
        for (std::size_t i = 0; i < payload_len; ++i) {
            const int s = static_cast<unsigned char>(bytes[at++]);
            if (s >= q) throw ParseError("stream: symbol out of range");
            b.payload[i] = s;
        }
    }
    return blocks;
}

void write_multilevel_stream(std::ostream& out, int n, const std::vector<int>& factors,
                             const std::vector<MultilevelBlock>& blocks) {
    for (std::size_t j = 0; j < factors.size(); ++j) {
        out << "plane=" << (j + 1) << ";q=" << factors[j] << "\n";
        std::vector<CompressedBlock> plane_blocks;
        plane_blocks.reserve(blocks.size());
        for (const MultilevelBlock& b : blocks) {
            if (b.planes.size() != factors.size())
                throw ModelError("write_multilevel_stream: plane count mismatch");
            plane_blocks.push_back(b.planes[j]);
        }
        write_stream(out, factors[j], n, plane_blocks);
    }
}

std::vector<MultilevelBlock> read_multilevel_stream(
    std::istream& in, const std::vector<int>& factors,
    const std::vector<std::size_t>& payload_lens) {
    if (payload_lens.size() != factors.size())
        throw ModelError("read_multilevel_stream: payload length per plane required");
    std::vector<std::vector<CompressedBlock>> per_plane;
    for (std::size_t j = 0; j < factors.size(); ++j) {
        std::string line;
        if (!std::getline(in, line))
            throw ParseError("multilevel stream: missing plane header");
        int plane = 0, q = 0;
        if (std::sscanf(line.c_str(), "plane=%d;q=%d", &plane, &q) != 2 ||
            plane != static_cast<int>(j + 1) || q != factors[j])
            throw ParseError("multilevel stream: bad plane header \"" + line + "\"");
        per_plane.push_back(read_stream(in, payload_lens[j]));
        if (j > 0 && per_plane[j].size() != per_plane[0].size())
            throw ParseError("multilevel stream: plane block counts disagree");
    }
    std::vector<MultilevelBlock> blocks(per_plane.empty() ? 0 : per_plane[0].size());
    for (std::size_t b = 0; b < blocks.size(); ++b)
        for (std::size_t j = 0; j < factors.size(); ++j)
            blocks[b].planes.push_back(per_plane[j][b]);
    return blocks;
}

} // namespace polarq
