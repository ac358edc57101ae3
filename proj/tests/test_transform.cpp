#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "polarq/errors.hpp"
#include "polarq/rng.hpp"
#include "polarq/transform.hpp"

using namespace polarq;

namespace {

SymbolVec random_vec(int q, int n, Rng& rng) {
    SymbolVec v{q, std::vector<int>(std::size_t{1} << n)};
    for (int& s : v.symbols) s = static_cast<int>(rng.next_below(static_cast<std::uint64_t>(q)));
    return v;
}

SymbolVec apply_matrix(const std::vector<std::vector<int>>& m, const SymbolVec& x) {
    SymbolVec out{x.q, std::vector<int>(x.symbols.size(), 0)};
    for (std::size_t i = 0; i < m.size(); ++i) {
        int acc = 0;
        for (std::size_t j = 0; j < m.size(); ++j)
            acc += m[i][j] * x.symbols[j];
        out.symbols[i] = acc % x.q;
    }
    return out;
}

} // namespace

TEST_CASE("base step and depth-2 expansion") {
    for (int q : {2, 3, 5}) {
        for (int x0 = 0; x0 < q; ++x0)
            for (int x1 = 0; x1 < q; ++x1) {
                const SymbolVec u = transform({q, {x0, x1}});
                CHECK(u.symbols[0] == (x0 + x1) % q);
                CHECK(u.symbols[1] == x1);
            }
        const SymbolVec u = transform({q, {1 % q, 2 % q, 3 % q, 4 % q}});
        const int x0 = 1 % q, x1 = 2 % q, x2 = 3 % q, x3 = 4 % q;
        CHECK(u.symbols[0] == (x0 + x1 + x2 + x3) % q);
        CHECK(u.symbols[1] == (x2 + x3) % q);
        CHECK(u.symbols[2] == (x1 + x3) % q);
        CHECK(u.symbols[3] == x3 % q);
    }
}

TEST_CASE("all-zero input maps to all-zero output") {
    const SymbolVec z{3, std::vector<int>(16, 0)};
    CHECK(transform(z).symbols == z.symbols);
    CHECK(inverse_transform(z).symbols == z.symbols);
}

TEST_CASE("invalid symbol vectors are rejected") {
    CHECK_THROWS_AS(transform({2, {0, 1, 0}}), ModelError);
    CHECK_THROWS_AS(transform({2, {0, 2}}), ModelError);
    CHECK_THROWS_AS(inverse_transform({2, {0, 1, 1}}), ModelError);
}

TEST_CASE("matrix oracle, exhaustive for n <= 2") {
    for (int q : {2, 3, 5})
        for (int n = 0; n <= 2; ++n) {
            const auto m = transform_matrix(n, q);
            const std::size_t size = std::size_t{1} << n;
            std::vector<int> x(size, 0);
            for (;;) {
                const SymbolVec v{q, x};
                CHECK(transform(v).symbols == apply_matrix(m, v).symbols);
                std::size_t i = 0;
                while (i < size && ++x[i] == q) x[i++] = 0;
                if (i == size) break;
            }
        }
}

TEST_CASE("matrix oracle, random vectors for n = 3, 4") {
    Rng rng(2024);
    for (int q : {2, 3, 5})
        for (int n : {3, 4}) {
            const auto m = transform_matrix(n, q);
            for (int trial = 0; trial < 1000; ++trial) {
                const SymbolVec v = random_vec(q, n, rng);
                CHECK(transform(v).symbols == apply_matrix(m, v).symbols);
            }
        }
}

TEST_CASE("matrix form basics") {
    CHECK(transform_matrix(0, 5) == std::vector<std::vector<int>>{{1}});
    CHECK(transform_matrix(1, 3) == std::vector<std::vector<int>>{{1, 1}, {0, 1}});
    const auto m2 = transform_matrix(2, 2);
    CHECK(m2 == std::vector<std::vector<int>>{
                    {1, 1, 1, 1}, {0, 0, 1, 1}, {0, 1, 0, 1}, {0, 0, 0, 1}});
    CHECK_THROWS_AS(transform_matrix(11, 2), ModelError);
    for (const auto& row : transform_matrix(4, 7))
        for (int e : row) CHECK((e == 0 || e == 1));
}

TEST_CASE("bit reversal permutation") {
    CHECK(bit_reversal_perm(0) == std::vector<std::size_t>{0});
    CHECK(bit_reversal_perm(1) == std::vector<std::size_t>{0, 1});
    CHECK(bit_reversal_perm(2) == std::vector<std::size_t>{0, 2, 1, 3});
    for (int n = 0; n <= 10; ++n) {
        const auto perm = bit_reversal_perm(n);
        for (std::size_t i = 0; i < perm.size(); ++i) CHECK(perm[perm[i]] == i);
    }
}

TEST_CASE("inverse transform") {
    SUBCASE("base step") {
        for (int u0 = 0; u0 < 3; ++u0)
            for (int u1 = 0; u1 < 3; ++u1) {
                const SymbolVec x = inverse_transform({3, {u0, u1}});
                CHECK(x.symbols[0] == ((u0 - u1) % 3 + 3) % 3);
                CHECK(x.symbols[1] == u1);
            }
    }
    SUBCASE("round trip, q in {2,3,5}, n <= 10") {
        Rng rng(7);
        for (int q : {2, 3, 5})
            for (int trial = 0; trial < 1000; ++trial) {
                const int n = static_cast<int>(rng.next_below(11));
                const SymbolVec x = random_vec(q, n, rng);
                CHECK(inverse_transform(transform(x)).symbols == x.symbols);
            }
    }
    SUBCASE("round trip at n = 16") {
        Rng rng(8);
        for (int q : {2, 3, 5}) {
            const SymbolVec x = random_vec(q, 16, rng);
            CHECK(inverse_transform(transform(x)).symbols == x.symbols);
        }
    }
}

TEST_CASE("linearity on random pairs") {
    Rng rng(9);
    for (int trial = 0; trial < 500; ++trial) {
        const int q = 2 + static_cast<int>(rng.next_below(6));
        const int n = static_cast<int>(rng.next_below(8));
        const SymbolVec x = random_vec(q, n, rng);
        const SymbolVec y = random_vec(q, n, rng);
        SymbolVec sum{q, std::vector<int>(x.symbols.size())};
        for (std::size_t i = 0; i < sum.symbols.size(); ++i)
            sum.symbols[i] = (x.symbols[i] + y.symbols[i]) % q;
        const SymbolVec tx = transform(x);
        const SymbolVec ty = transform(y);
        const SymbolVec tsum = transform(sum);
        for (std::size_t i = 0; i < sum.symbols.size(); ++i)
            CHECK(tsum.symbols[i] == (tx.symbols[i] + ty.symbols[i]) % q);
    }
}
