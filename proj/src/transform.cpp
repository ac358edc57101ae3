#include "polarq/transform.hpp"

#include <span>
#include <string>

#include "polarq/errors.hpp"

namespace polarq {

namespace {

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

void forward_rec(std::span<int> v, std::span<int> scratch, int q) {
    const std::size_t m = v.size();
    if (m == 1) return;
    const std::size_t h = m / 2;
    forward_rec(v.subspan(0, h), scratch.subspan(0, h), q);
    forward_rec(v.subspan(h, h), scratch.subspan(h, h), q);
    for (std::size_t i = 0; i < h; ++i) {
        scratch[2 * i] = (v[i] + v[h + i]) % q;
        scratch[2 * i + 1] = v[h + i];
    }
    for (std::size_t i = 0; i < m; ++i) v[i] = scratch[i];
}

void inverse_rec(std::span<int> v, std::span<int> scratch, int q) {
    const std::size_t m = v.size();
    if (m == 1) return;
    const std::size_t h = m / 2;
    for (std::size_t i = 0; i < h; ++i) {
        scratch[i] = (v[2 * i] - v[2 * i + 1] + q) % q;
        scratch[h + i] = v[2 * i + 1];
    }
    for (std::size_t i = 0; i < m; ++i) v[i] = scratch[i];
    inverse_rec(v.subspan(0, h), scratch.subspan(0, h), q);
    inverse_rec(v.subspan(h, h), scratch.subspan(h, h), q);
}

} // namespace

void validate(const SymbolVec& v) {
    if (v.q < 2) throw ModelError("SymbolVec: alphabet size must be at least 2");
    if (!is_pow2(v.symbols.size()))
        throw ModelError("SymbolVec: length " + std::to_string(v.symbols.size()) +
                         " is not a power of two");
    for (int s : v.symbols)
        if (s < 0 || s >= v.q) throw ModelError("SymbolVec: symbol out of range");
}

int depth_of(const SymbolVec& v) {
    int n = 0;
    while ((std::size_t{1} << n) < v.symbols.size()) ++n;
    return n;
}

SymbolVec transform(const SymbolVec& x) {
    validate(x);
    SymbolVec u = x;
    std::vector<int> scratch(u.symbols.size());
    forward_rec(u.symbols, scratch, u.q);
    return u;
}

SymbolVec inverse_transform(const SymbolVec& u) {
    validate(u);
    SymbolVec x = u;
    std::vector<int> scratch(x.symbols.size());
    inverse_rec(x.symbols, scratch, x.q);
    return x;
}

std::vector<std::vector<int>> transform_matrix(int n, int q, int max_n) {
    if (n < 0 || n > max_n)
        throw ModelError("transform_matrix: n=" + std::to_string(n) +
                         " outside [0," + std::to_string(max_n) + "]");
    if (q < 2) throw ModelError("transform_matrix: alphabet size must be at least 2");
    const std::size_t size = std::size_t{1} << n;
    const auto rev = bit_reversal_perm(n);
    std::vector<std::vector<int>> rows(size, std::vector<int>(size, 0));
    for (std::size_t i = 0; i < size; ++i) {
        // Kronecker power row rev(i): entry 1 exactly when rev(i) is a
        // bitwise subset of the column index.
        const std::size_t r = rev[i];
        for (std::size_t j = 0; j < size; ++j)
            rows[i][j] = ((r & ~j) == 0) ? 1 : 0;
    }
    return rows;
}

std::vector<std::size_t> bit_reversal_perm(int n) {
    if (n < 0) throw ModelError("bit_reversal_perm: negative depth");
    const std::size_t size = std::size_t{1} << n;
    std::vector<std::size_t> perm(size);
    for (std::size_t i = 0; i < size; ++i) {
        std::size_t r = 0;
        for (int b = 0; b < n; ++b)
            if (i & (std::size_t{1} << b)) r |= std::size_t{1} << (n - 1 - b);
        perm[i] = r;
    }
    return perm;
}

} // namespace polarq
