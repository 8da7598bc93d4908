#pragma once

#include <cstdint>
#include <vector>

#include "multdim/approx.hpp"
#include "multdim/estimate_rng.hpp"

namespace multdim {

// The star-shaped domain A_q = { x : ||q x1|| ||q x2|| < psi_q } on the torus.
struct StarDomain {
  std::uint64_t q = 1;
  double psi_q = 0.0;

  bool contains(const TorusPoint2& p) const;
};

// j with 2q <= 2^j <= q/psi(q); nonempty whenever 0 < psi(q) < 1/4.
struct IndexRange {
  int j_lo = 0, j_hi = 0;

  bool contains(int j) const { return j >= j_lo && j <= j_hi; }
  int size() const { return j_hi - j_lo + 1; }
  std::vector<int> levels() const;
};

IndexRange dyadic_index_range(std::uint64_t q, double psi_q);

// One dyadic level of the covering: ||q x1|| < q 2^{-(j-1)}, ||q x2|| <
// psi / (q 2^{-j}); per-cell halfwidths 2^{-(j-1)} and psi/(q^2 2^{-j}).
struct DyadicRectangleFamily {
  std::uint64_t q = 1;
  int j = 0;
  double psi_q = 0.0;

  double cap1() const;           // q 2^{-(j-1)}, bound on ||q x1||
  double cap2() const;           // psi / (q 2^{-j}), bound on ||q x2||
  double cell_halfwidth1() const;  // 2^{-(j-1)}
  double cell_halfwidth2() const;  // psi / (q^2 2^{-j})

  bool contains(const TorusPoint2& p) const;
};

// A single translate R_{q,j}(a,b) centered at (a/q, b/q); torus-periodic.
struct CellRectangle {
  std::uint64_t q = 1;
  int j = 0;
  double psi_q = 0.0;
  std::uint64_t a = 0, b = 0;

  double center1() const { return static_cast<double>(a) / static_cast<double>(q); }
  double center2() const { return static_cast<double>(b) / static_cast<double>(q); }
  double halfwidth1() const;
  double halfwidth2() const;
  bool contains(const TorusPoint2& p) const;
  double area() const;  // 8 psi / q^2, no boundary clipping
};

// Closed-form Lebesgue measure of A_q: 4 psi (1 + ln(1/(4 psi))); independent
// of q by the measure-preserving folding x -> qx mod 1.
double star_measure(double psi_q);

// The covering levels R_{q,j}, j in I_q.
std::vector<DyadicRectangleFamily> covering_family(std::uint64_t q, double psi_q);

// Exact per-cell area 8 psi / q^2; throws when j is outside I_q.
double cell_measure(std::uint64_t q, int j, double psi_q);

// Uniform sample of A_q: x1 is drawn from the exact marginal (inverse CDF on
// t = ||q x1||), then x2 uniform on the admissible strips for that x1.
TorusPoint2 sample_star_domain(std::uint64_t q, double psi_q, SplitMix& rng);

struct CoverCheckResult {
  std::uint64_t samples = 0;
  std::uint64_t covered = 0;
  std::uint64_t escaped = 0;
};

// Rejection-check of the inclusion A_q within the union of the R_{q,j}.
CoverCheckResult cover_check(std::uint64_t q, double psi_q, std::uint64_t samples,
                             std::uint64_t seed);

}  // namespace multdim
