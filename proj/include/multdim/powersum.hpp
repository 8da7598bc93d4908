#pragma once

#include <cstdint>
#include <limits>

namespace multdim::powersum {

// hi == kInf means an infinite upper limit (requires a convergent exponent).
inline constexpr std::uint64_t kInf = std::numeric_limits<std::uint64_t>::max();

// sum_{k=lo}^{hi} k^{-alpha}. Direct summation below a cutoff, Euler-Maclaurin
// with closed-form integrals above it; absolute accuracy ~1e-13 relative.
double pow_sum(double alpha, std::uint64_t lo, std::uint64_t hi);

// sum_{k=lo}^{hi} k^{-alpha} ln k.
double pow_log_sum(double alpha, std::uint64_t lo, std::uint64_t hi);

// Triangular double sums against the inner prefix/suffix of a power sum:
//
//   tri_lower(a, c, l1, h1, l2, h2)
//     = sum_{k2=l2}^{h2} k2^{-c} * sum_{k1=l1}^{min(h1, k2)} k1^{-a}
//       (terms with min(h1,k2) < l1 contribute 0)
//
//   tri_upper(d, b, l1, h1, l2, h2)
//     = sum_{k2=l2}^{h2} k2^{-b} * sum_{k1=max(l1, k2+1)}^{h1} k1^{-d}
double tri_lower(double a, double c, std::uint64_t l1, std::uint64_t h1, std::uint64_t l2,
                 std::uint64_t h2);
double tri_upper(double d, double b, std::uint64_t l1, std::uint64_t h1, std::uint64_t l2,
                 std::uint64_t h2);

}  // namespace multdim::powersum
