#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "polarq/construction.hpp"
#include "polarq/sc.hpp"
#include "polarq/transform.hpp"

namespace polarq {

/// Transform outputs at the frozen indices, in increasing index order.
struct CompressedBlock {
    int q = 2;
    int n = 0;
    std::vector<int> payload;
};

CompressedBlock compress(const SymbolVec& x, const CodeSpec& spec);

/// Estimates the transform outputs in index order -- frozen indices read
/// from the payload, the rest set to the likelihood argmax (ties resolve to
/// the smallest symbol) -- and returns the inverse transform. y_atoms are
/// indices into spec.channel's atom list, one per position.
SymbolVec sc_decode(const CompressedBlock& block, const std::vector<std::size_t>& y_atoms,
                    const CodeSpec& spec);

/// Same estimate in the transform domain, before inverting. channel_decode
/// and the coding-duality tests want this directly.
std::vector<int> sc_decode_transformed(const CompressedBlock& block,
                                       const std::vector<std::size_t>& y_atoms,
                                       const CodeSpec& spec);

/// compress/sc_decode surfaced as a source-coding pair.
SymbolVec decompress(const CompressedBlock& block, const std::vector<std::size_t>& y_atoms,
                     const CodeSpec& spec);

/// Message symbols occupy the unfrozen indices, the shared fill the frozen
/// ones; the codeword is the inverse transform of that assembly.
SymbolVec channel_encode(const std::vector<int>& message, const std::vector<int>& frozen_fill,
                         const CodeSpec& spec);

/// SC decoding with the frozen fill as payload; returns the estimates at
/// the unfrozen indices.
std::vector<int> channel_decode(const std::vector<std::size_t>& received_atoms,
                                const std::vector<int>& frozen_fill, const CodeSpec& spec);

/// Ascending prime factors with multiplicity (12 -> {2,2,3}).
std::vector<int> prime_factorization(int q);

/// Mixed-radix digits of x for the given factor list: x = d0 + f0*d1 +
/// f0*f1*d2 + ...; bijective on [0, prod f).
std::vector<int> digit_decompose(int x, const std::vector<int>& factors);
int digit_compose(const std::vector<int>& digits, const std::vector<int>& factors);

/// The per-digit subchannels of a composite-alphabet channel: plane j sees
/// digit j with the original output and all lower digits as side
/// information. atom_map[j] sends (original atom k, lower-digit combo c),
/// flattened as k * combos + c, to the plane atom index, or -1 where the
/// combo has zero probability. The plane entropies sum to the channel
/// entropy (chain rule).
struct PlaneSplit {
    std::vector<JointChannel> channels;
    std::vector<std::vector<long long>> atom_map;
    std::vector<std::size_t> combos;  // product of factors below each plane
};
PlaneSplit split_channel_planes(const JointChannel& w, const std::vector<int>& factors);

/// A composite-alphabet code: one prime-alphabet code per digit plane, each
/// built against its subchannel.
struct MultilevelCode {
    JointChannel channel;
    std::vector<int> factors;
    std::vector<CodeSpec> planes;
};

MultilevelCode build_multilevel_code(const JointChannel& w, int n, FrozenPolicy policy,
                                     StatMethod method, std::size_t samples = 0,
                                     std::uint64_t seed = 0,
                                     std::size_t atom_budget = 4000000);

struct MultilevelBlock {
    std::vector<CompressedBlock> planes;
};

/// Compresses digit plane by digit plane, lowest first.
MultilevelBlock multilevel_compress(const SymbolVec& x, const MultilevelCode& code);

/// Decodes plane by plane, feeding recovered planes forward as side
/// information. If a recovered lower plane makes some position's side
/// information impossible under the model, the failing plane is reported
/// and later stages are abandoned.
SymbolVec multilevel_decompress(const MultilevelBlock& block,
                                const std::vector<std::size_t>& y_atoms,
                                const MultilevelCode& code);

/// Stream format: "POLARQC v1", then "q=..;n=..;count=..", then every
/// block's payload as one symbol per byte (q <= 251). Bit-exact round trip.
/// The payload length comes from the code spec, not the stream.
void write_stream(std::ostream& out, int q, int n,
                  const std::vector<CompressedBlock>& blocks);
std::vector<CompressedBlock> read_stream(std::istream& in, std::size_t payload_len);

/// Multi-level streams concatenate per-plane streams, each preceded by a
/// "plane=<j>;q=<qj>" line (j counts from 1).
void write_multilevel_stream(std::ostream& out, int n, const std::vector<int>& factors,
                             const std::vector<MultilevelBlock>& blocks);
std::vector<MultilevelBlock> read_multilevel_stream(std::istream& in,
                                                    const std::vector<int>& factors,
                                                    const std::vector<std::size_t>& payload_lens);

} // namespace polarq
