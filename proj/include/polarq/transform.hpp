#pragma once

#include <cstddef>
#include <vector>

namespace polarq {

/// Length-2^n vector of symbols from Z_q.
struct SymbolVec {
    int q = 2;
    std::vector<int> symbols;
};

/// Throws unless the length is a power of two and every symbol is in [0,q).
void validate(const SymbolVec& v);

/// n such that v has 2^n symbols.
int depth_of(const SymbolVec& v);

/// The recursive butterfly map u = G x over Z_q, O(N log N) symbol ops.
/// Base step on a pair is (x0, x1) -> (x0+x1, x1); each level interleaves
/// the sum of the two half-transforms with the second half-transform.
SymbolVec transform(const SymbolVec& x);

/// Inverse of transform: the same butterfly run backwards with subtraction.
SymbolVec inverse_transform(const SymbolVec& u);

/// Dense form of the map: the bit-reversal permutation applied to the n-fold
/// Kronecker power of [[1,1],[0,1]]. Entries are all 0/1. Intended as a test
/// oracle; n is capped because the matrix is 2^n x 2^n.
std::vector<std::vector<int>> transform_matrix(int n, int q, int max_n = 10);

/// Permutation sending i to the reversal of its n-bit binary representation.
std::vector<std::size_t> bit_reversal_perm(int n);

} // namespace polarq
