#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

namespace wehrl {

using cplx = std::complex<double>;

// Exponent vector alpha in d+1 variables with |alpha| = N.
struct MultiIndex {
    std::vector<int> entries;

    int degree() const;
    int size() const { return static_cast<int>(entries.size()); }
    int operator[](int k) const { return entries[static_cast<std::size_t>(k)]; }

    bool operator==(const MultiIndex&) const = default;
};

// binom(n, k) exactly, as a double (all values used here stay below 2^53).
double binomial(int n, int k);

// N! / alpha!  (multinomial coefficient), exact in double at desk scale.
double multinomial(int degree, std::span<const int> alpha);

// Number of multi-indices with d+1 entries and |alpha| = N, i.e. binom(N+d, d).
// Throws std::overflow_error if the count does not fit in size_t.
std::size_t multiindex_count(int d, int N);

// All multi-indices of degree N in d+1 variables, ordered lexicographically
// descending on the leading entries, so (N,0,...,0) sits at index 0.
const std::vector<MultiIndex>& enumerate_multiindices(int d, int N);

// Position of alpha in the enumeration above.
std::size_t multiindex_rank(int d, int N, std::span<const int> alpha);

// Bombieri weights alpha!/N! in enumeration order, cached per (d, N).
const std::vector<double>& bombieri_weights(int d, int N);

}  // namespace wehrl
