#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "oracles.hpp"
#include "polarq/codec.hpp"
#include "polarq/errors.hpp"

using namespace polarq;

namespace {

CodeSpec make_spec(int q, int n, std::vector<std::size_t> frozen, JointChannel channel) {
    return CodeSpec{q, n, std::move(frozen), std::move(channel), "exact;0;0", 0.0};
}

CodeSpec random_spec(int q, int n, const JointChannel& channel, Rng& rng) {
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::size_t> order(size);
    std::iota(order.begin(), order.end(), 0);
    for (std::size_t i = size; i > 1; --i)
        std::swap(order[i - 1], order[rng.next_below(i)]);
    const std::size_t count = rng.next_below(size + 1);
    std::vector<std::size_t> frozen(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(count));
    std::sort(frozen.begin(), frozen.end());
    return make_spec(q, n, std::move(frozen), channel);
}

SymbolVec random_block(int q, int n, Rng& rng) {
    SymbolVec x{q, std::vector<int>(std::size_t{1} << n)};
    for (int& s : x.symbols) s = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(q)));
    return x;
}

std::vector<std::size_t> all_frozen(int n) {
    std::vector<std::size_t> f(std::size_t{1} << n);
    std::iota(f.begin(), f.end(), 0);
    return f;
}

} // namespace

TEST_CASE("compress examples") {
    SUBCASE("hand-expanded ternary block") {
        const CodeSpec spec = make_spec(3, 2, {0, 3}, make_qsc(3, 0.2));
        const CompressedBlock block = compress({3, {1, 2, 0, 1}}, spec);
        CHECK(block.payload == std::vector<int>{1, 1});
    }
    SUBCASE("all-zero input gives all-zero payload") {
        const CodeSpec spec = make_spec(3, 3, all_frozen(3), make_qsc(3, 0.2));
        const CompressedBlock block = compress({3, std::vector<int>(8, 0)}, spec);
        CHECK(std::all_of(block.payload.begin(), block.payload.end(),
                          [](int s) { return s == 0; }));
    }
    SUBCASE("dimension mismatch") {
        const CodeSpec spec = make_spec(3, 2, {0}, make_qsc(3, 0.2));
        CHECK_THROWS_AS(compress({3, {0, 1}}, spec), ModelError);
        CHECK_THROWS_AS(compress({2, {0, 1, 0, 1}}, spec), ModelError);
    }
}

TEST_CASE("full-rate specs decode exactly without side information") {
    Rng rng(31);
    for (int q : {2, 3}) {
        const JointChannel w = make_qsc(q, 0.5 * (q - 1) / q);
        SUBCASE("exhaustive over short blocks") {
            for (int n = 0; n <= 3; ++n) {
                const CodeSpec spec = make_spec(q, n, all_frozen(n), w);
                const std::size_t size = std::size_t{1} << n;
                SymbolVec x{q, std::vector<int>(size, 0)};
                const std::vector<std::size_t> atoms(size, 0);
                for (;;) {
                    CHECK(decompress(compress(x, spec), atoms, spec).symbols == x.symbols);
                    std::size_t d = 0;
                    while (d < size && ++x.symbols[d] == q) x.symbols[d++] = 0;
                    if (d == size) break;
                }
            }
        }
        SUBCASE("random long blocks") {
            const int n = 14;
            const CodeSpec spec = make_spec(q, n, all_frozen(n), w);
            const std::vector<std::size_t> atoms(std::size_t{1} << n, 0);
            for (int trial = 0; trial < 3; ++trial) {
                const SymbolVec x = random_block(q, n, rng);
                CHECK(decompress(compress(x, spec), atoms, spec).symbols == x.symbols);
            }
        }
    }
}

TEST_CASE("noiseless channel decodes exactly with an empty frozen set") {
    Rng rng(33);
    for (int q : {2, 3}) {
        const CodeSpec spec = make_spec(q, 4, {}, make_qsc(q, 0.0));
        for (int trial = 0; trial < 20; ++trial) {
            const SymbolVec x = random_block(q, 4, rng);
            std::vector<std::size_t> atoms(x.symbols.size());
            for (std::size_t j = 0; j < atoms.size(); ++j)
                atoms[j] = static_cast<std::size_t>(x.symbols[j]);
            const CompressedBlock block = compress(x, spec);
            CHECK(block.payload.empty());
            CHECK(decompress(block, atoms, spec).symbols == x.symbols);
        }
    }
}

TEST_CASE("successive cancellation matches the sequential-ML oracle") {
    Rng rng(35);
    for (int q : {2, 3}) {
        for (int ch = 0; ch < 2; ++ch) {
            const JointChannel w = sample_random_channel(q, 4, rng);
            const ConditionalAtomSampler sampler(w);
            for (int sp = 0; sp < 5; ++sp) {
                const CodeSpec spec = random_spec(q, 2, w, rng);
                const std::size_t size = 4;
                SymbolVec x{q, std::vector<int>(size, 0)};
                for (;;) {
                    std::vector<std::size_t> atoms(size);
                    for (std::size_t j = 0; j < size; ++j)
                        atoms[j] = sampler.sample(x.symbols[j], rng);
                    const CompressedBlock block = compress(x, spec);
                    const std::vector<int> via_engine =
                        sc_decode_transformed(block, atoms, spec);
                    const std::vector<int> via_oracle =
                        oracles::sequential_ml_oracle(spec, atoms, block.payload);
                    CHECK(via_engine == via_oracle);
                    std::size_t d = 0;
                    while (d < size && ++x.symbols[d] == q) x.symbols[d++] = 0;
                    if (d == size) break;
                }
            }
        }
    }
}

TEST_CASE("decoder rejects malformed inputs") {
    const CodeSpec spec = make_spec(3, 2, {0, 1}, make_qsc(3, 0.2));
    const CompressedBlock block{3, 2, {0, 0}};
    CHECK_THROWS_AS(sc_decode(block, {0, 1, 2, 3}, spec), ModelError);  // atom out of range
    CHECK_THROWS_AS(sc_decode(block, {0, 1, 2}, spec), ModelError);     // wrong length
    CHECK_THROWS_AS(sc_decode({3, 2, {0}}, {0, 1, 2, 0}, spec), ModelError);  // short payload
}

TEST_CASE("channel coding wrapper") {
    SUBCASE("hand-assembled codeword") {
        const CodeSpec spec = make_spec(2, 2, {0, 1}, make_qsc(2, 0.05));
        const SymbolVec x = channel_encode({1, 0}, {0, 0}, spec);
        CHECK(transform(x).symbols == std::vector<int>{0, 0, 1, 0});
        CHECK(channel_encode({0, 0}, {0, 0}, spec).symbols == std::vector<int>{0, 0, 0, 0});
    }
    SUBCASE("rate zero never errs") {
        const CodeSpec spec = make_spec(2, 3, all_frozen(3), make_qsc(2, 0.3));
        const SymbolVec x = channel_encode({}, std::vector<int>(8, 0), spec);
        Rng rng(37);
        const ConditionalAtomSampler sampler(spec.channel);
        std::vector<std::size_t> atoms(8);
        for (std::size_t j = 0; j < 8; ++j) atoms[j] = sampler.sample(x.symbols[j], rng);
        CHECK(channel_decode(atoms, std::vector<int>(8, 0), spec).empty());
    }
    SUBCASE("noiseless channel carries any message") {
        Rng rng(39);
        const CodeSpec spec = make_spec(3, 3, {0, 1}, make_qsc(3, 0.0));
        for (int trial = 0; trial < 50; ++trial) {
            std::vector<int> message(6);
            for (int& m : message) m = static_cast<int>(rng.next_below(3));
            const SymbolVec x = channel_encode(message, {0, 0}, spec);
            std::vector<std::size_t> atoms(x.symbols.size());
            for (std::size_t j = 0; j < atoms.size(); ++j)
                atoms[j] = static_cast<std::size_t>(x.symbols[j]);
            CHECK(channel_decode(atoms, {0, 0}, spec) == message);
        }
    }
    SUBCASE("coding duality on shared realizations") {
        Rng rng(41);
        const JointChannel w = make_qsc(3, 0.35);
        const ConditionalAtomSampler sampler(w);
        const CodeSpec spec = make_spec(3, 4, {0, 1, 2, 4, 8}, w);
        const std::vector<int> fill(spec.frozen.size(), 0);
        for (int trial = 0; trial < 200; ++trial) {
            std::vector<int> message(16 - fill.size());
            for (int& m : message) m = static_cast<int>(rng.next_below(3));
            const SymbolVec x = channel_encode(message, fill, spec);
            const SymbolVec u = transform(x);
            std::vector<std::size_t> atoms(16);
            for (std::size_t j = 0; j < 16; ++j) atoms[j] = sampler.sample(x.symbols[j], rng);
            const std::vector<int> u_hat =
                sc_decode_transformed({3, 4, fill}, atoms, spec);
            const std::vector<int> decoded = channel_decode(atoms, fill, spec);
            CHECK((decoded == message) == (u_hat == u.symbols));
        }
    }
    SUBCASE("length validation") {
        const CodeSpec spec = make_spec(2, 2, {0}, make_qsc(2, 0.1));
        CHECK_THROWS_AS(channel_encode({1}, {0}, spec), ModelError);
        CHECK_THROWS_AS(channel_encode({1, 0, 1}, {}, spec), ModelError);
    }
}

TEST_CASE("digit decomposition") {
    CHECK(digit_decompose(5, {2, 3}) == std::vector<int>{1, 2});
    CHECK(digit_decompose(0, {2, 2, 3}) == std::vector<int>{0, 0, 0});
    for (int q : {4, 6, 12}) {
        const std::vector<int> factors = prime_factorization(q);
        for (int x = 0; x < q; ++x)
            CHECK(digit_compose(digit_decompose(x, factors), factors) == x);
    }
    CHECK(prime_factorization(12) == std::vector<int>{2, 2, 3});
    CHECK_THROWS_AS(digit_decompose(5, {3, 2}), ModelError);  // not ascending
    CHECK_THROWS_AS(digit_decompose(7, {2, 3}), ModelError);  // out of range
    CHECK_THROWS_AS(digit_decompose(3, {4}), ModelError);     // not prime
}

TEST_CASE("plane splitting and the chain rule") {
    SUBCASE("uniform composite source splits into uniform planes") {
        const JointChannel w(6, {{1.0, DistQ::uniform(6)}});
        const PlaneSplit split = split_channel_planes(w, {2, 3});
        REQUIRE(split.channels.size() == 2);
        CHECK(channel_entropy(split.channels[0]) == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(channel_entropy(split.channels[1]) == doctest::Approx(1.0).epsilon(1e-12));
        // entropies add in bits: lg2 * 1 + lg3 * 1 = lg6 * H(X)
        const double weighted = (std::log2(2.0) * 1.0 + std::log2(3.0) * 1.0) / std::log2(6.0);
        CHECK(weighted == doctest::Approx(channel_entropy(w)).epsilon(1e-12));
    }
    SUBCASE("chain rule on random composite channels") {
        Rng rng(43);
        for (int q : {4, 6, 12}) {
            const std::vector<int> factors = prime_factorization(q);
            for (int trial = 0; trial < 60; ++trial) {
                const JointChannel w = sample_random_channel(q, 5, rng);
                const PlaneSplit split = split_channel_planes(w, factors);
                double weighted = 0.0;
                for (std::size_t j = 0; j < factors.size(); ++j)
                    weighted += channel_entropy(split.channels[j]) *
                                std::log2(static_cast<double>(factors[j]));
                CHECK(std::abs(weighted / std::log2(static_cast<double>(q)) -
                               channel_entropy(w)) <= 1e-9);
            }
        }
    }
    SUBCASE("factorization mismatch") {
        const JointChannel w(6, {{1.0, DistQ::uniform(6)}});
        CHECK_THROWS_AS(split_channel_planes(w, {2, 2}), ModelError);
    }
}

TEST_CASE("multilevel round trips") {
    SUBCASE("noiseless composite channel, any depth") {
        Rng rng(45);
        for (int n : {1, 3, 5}) {
            const MultilevelCode code = build_multilevel_code(
                make_qsc(6, 0.0), n, FrozenPolicy::threshold(0.5), StatMethod::exact);
            const SymbolVec x = random_block(6, n, rng);
            std::vector<std::size_t> atoms(x.symbols.size());
            for (std::size_t j = 0; j < atoms.size(); ++j)
                atoms[j] = static_cast<std::size_t>(x.symbols[j]);
            const MultilevelBlock block = multilevel_compress(x, code);
            CHECK(multilevel_decompress(block, atoms, code).symbols == x.symbols);
        }
    }
    SUBCASE("full-rate planes recover any block") {
        Rng rng(47);
        const MultilevelCode code = build_multilevel_code(
            make_qsc(6, 0.4), 3, FrozenPolicy::rate(1.0), StatMethod::exact);
        const ConditionalAtomSampler sampler(code.channel);
        for (int trial = 0; trial < 20; ++trial) {
            const SymbolVec x = random_block(6, 3, rng);
            std::vector<std::size_t> atoms(x.symbols.size());
            for (std::size_t j = 0; j < atoms.size(); ++j)
                atoms[j] = sampler.sample(x.symbols[j], rng);
            const MultilevelBlock block = multilevel_compress(x, code);
            CHECK(multilevel_decompress(block, atoms, code).symbols == x.symbols);
        }
    }
    SUBCASE("corrupt lower plane surfaces the failing stage") {
        Rng rng(49);
        const MultilevelCode code = build_multilevel_code(
            make_qsc(6, 0.0), 2, FrozenPolicy::threshold(-1.0), StatMethod::exact);
        const SymbolVec x = random_block(6, 2, rng);
        std::vector<std::size_t> atoms(x.symbols.size());
        for (std::size_t j = 0; j < atoms.size(); ++j)
            atoms[j] = static_cast<std::size_t>(x.symbols[j]);
        MultilevelBlock block = multilevel_compress(x, code);
        block.planes[0].payload[0] = (block.planes[0].payload[0] + 1) % 2;
        try {
            multilevel_decompress(block, atoms, code);
            FAIL("expected a stage failure");
        } catch (const ModelError& e) {
            CHECK(std::string(e.what()).find("stage 2") != std::string::npos);
        }
    }
}

TEST_CASE("stream format") {
    Rng rng(51);
    SUBCASE("single-code stream round trip") {
        const CodeSpec spec = make_spec(3, 3, {0, 1, 2, 5}, make_qsc(3, 0.2));
        std::vector<CompressedBlock> blocks;
        for (int b = 0; b < 10; ++b) blocks.push_back(compress(random_block(3, 3, rng), spec));
        std::ostringstream out;
        write_stream(out, 3, 3, blocks);
        std::istringstream in(out.str());
        const std::vector<CompressedBlock> back = read_stream(in, spec.frozen.size());
        REQUIRE(back.size() == blocks.size());
        for (std::size_t b = 0; b < blocks.size(); ++b)
            CHECK(back[b].payload == blocks[b].payload);
        // byte-exact re-serialization
        std::ostringstream out2;
        write_stream(out2, 3, 3, back);
        CHECK(out2.str() == out.str());
    }
    SUBCASE("empty payload blocks") {
        std::ostringstream out;
        write_stream(out, 2, 2, std::vector<CompressedBlock>(4, CompressedBlock{2, 2, {}}));
        std::istringstream in(out.str());
        CHECK(read_stream(in, 0).size() == 4);
    }
    SUBCASE("multilevel stream round trip") {
        const MultilevelCode code = build_multilevel_code(
            make_qsc(6, 0.3), 2, FrozenPolicy::rate(0.5), StatMethod::exact);
        std::vector<MultilevelBlock> blocks;
        for (int b = 0; b < 5; ++b)
            blocks.push_back(multilevel_compress(random_block(6, 2, rng), code));
        std::ostringstream out;
        write_multilevel_stream(out, 2, code.factors, blocks);
        std::vector<std::size_t> lens;
        for (const CodeSpec& plane : code.planes) lens.push_back(plane.frozen.size());
        std::istringstream in(out.str());
        const auto back = read_multilevel_stream(in, code.factors, lens);
        REQUIRE(back.size() == blocks.size());
        for (std::size_t b = 0; b < blocks.size(); ++b)
            for (std::size_t j = 0; j < code.factors.size(); ++j)
                CHECK(back[b].planes[j].payload == blocks[b].planes[j].payload);
    }
    SUBCASE("malformed streams") {
        std::istringstream bad1("POLARQC v2\n");
        CHECK_THROWS_AS(read_stream(bad1, 1), ParseError);
        std::istringstream bad2("POLARQC v1\nq=3;n=2;count=5\nab");
        CHECK_THROWS_AS(read_stream(bad2, 2), ParseError);
    }
}
