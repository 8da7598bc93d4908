#include "multdim/geometry.hpp"

#include <cmath>
#include <stdexcept>

namespace multdim {

namespace {

void require_psi(double psi_q) {
  if (!(psi_q > 0.0 && psi_q < 0.25))
    throw std::domain_error("psi_q must lie in (0, 1/4), got " + std::to_string(psi_q));
}

double mod1(double x) { return x - std::floor(x); }

}  // namespace

bool StarDomain::contains(const TorusPoint2& p) const {
  const double d1 = nearest_integer_distance(static_cast<double>(q) * p.x1);
  const double d2 = nearest_integer_distance(static_cast<double>(q) * p.x2);
  return d1 * d2 < psi_q;
}

std::vector<int> IndexRange::levels() const {
  std::vector<int> out;
  for (int j = j_lo; j <= j_hi; ++j) out.push_back(j);
  return out;
}

IndexRange dyadic_index_range(std::uint64_t q, double psi_q) {
  require_psi(psi_q);
  if (q == 0) throw std::domain_error("q must be >= 1");
  IndexRange r;
  // j_lo = min{ j : 2^j >= 2q }, exact on integers
  r.j_lo = 1;
  while ((1ull << r.j_lo) < 2 * q) ++r.j_lo;
  // j_hi = max{ j : 2^j <= q / psi } via floating log with integer fix-up
  const double target = static_cast<double>(q) / psi_q;
  int j = static_cast<int>(std::floor(std::log2(target)));
  while (std::exp2(static_cast<double>(j + 1)) <= target) ++j;
  while (std::exp2(static_cast<double>(j)) > target) --j;
  r.j_hi = j;
  if (r.j_hi < r.j_lo) throw std::logic_error("empty dyadic index range");
  return r;
}

double DyadicRectangleFamily::cap1() const {
  return static_cast<double>(q) * std::exp2(-(j - 1));
}

double DyadicRectangleFamily::cap2() const {
  return psi_q / (static_cast<double>(q) * std::exp2(-j));
}

double DyadicRectangleFamily::cell_halfwidth1() const { return std::exp2(-(j - 1)); }

double DyadicRectangleFamily::cell_halfwidth2() const {
  return psi_q * std::exp2(j) / (static_cast<double>(q) * static_cast<double>(q));
}

bool DyadicRectangleFamily::contains(const TorusPoint2& p) const {
  const double d1 = nearest_integer_distance(static_cast<double>(q) * p.x1);
  const double d2 = nearest_integer_distance(static_cast<double>(q) * p.x2);
  return d1 < cap1() && d2 < cap2();
}

double CellRectangle::halfwidth1() const { return std::exp2(-(j - 1)); }

double CellRectangle::halfwidth2() const {
  return psi_q * std::exp2(j) / (static_cast<double>(q) * static_cast<double>(q));
}

bool CellRectangle::contains(const TorusPoint2& p) const {
  const double d1 = nearest_integer_distance(p.x1 - center1());
  const double d2 = nearest_integer_distance(p.x2 - center2());
  return d1 < halfwidth1() && d2 < halfwidth2();
}

double CellRectangle::area() const {
  return 8.0 * psi_q / (static_cast<double>(q) * static_cast<double>(q));
}

double star_measure(double psi_q) {
  require_psi(psi_q);
  return 4.0 * psi_q * (1.0 + std::log(1.0 / (4.0 * psi_q)));
}

std::vector<DyadicRectangleFamily> covering_family(std::uint64_t q, double psi_q) {
  const IndexRange range = dyadic_index_range(q, psi_q);
  std::vector<DyadicRectangleFamily> out;
  for (int j = range.j_lo; j <= range.j_hi; ++j) out.push_back({q, j, psi_q});
  return out;
}

double cell_measure(std::uint64_t q, int j, double psi_q) {
  const IndexRange range = dyadic_index_range(q, psi_q);
  if (!range.contains(j))
    throw std::out_of_range("j=" + std::to_string(j) + " outside the dyadic index range");
  return 8.0 * psi_q / (static_cast<double>(q) * static_cast<double>(q));
}

TorusPoint2 sample_star_domain(std::uint64_t q, double psi_q, SplitMix& rng) {
  require_psi(psi_q);
  // Marginal of t = ||q x1|| on [0, 1/2]: density proportional to
  // m(t) = min(1, 2 psi / t). Split mass at t0 = 2 psi:
  //   [0, t0]   mass t0
  //   [t0, 1/2] mass 2 psi ln(1/(4 psi))
  const double t0 = 2.0 * psi_q;
  const double mass_core = t0;
  const double mass_tail = 2.0 * psi_q * std::log(1.0 / (4.0 * psi_q));
  const double u = rng.uniform() * (mass_core + mass_tail);
  double t;
  if (u < mass_core) {
    t = u;  // uniform on the fully admissible core
  } else {
    // inverse CDF of 2 psi / t on [t0, 1/2]
    t = t0 * std::exp((u - mass_core) / (2.0 * psi_q));
  }
  // Reconstruct x1 = (a + sign * t) / q on the torus.
  const std::uint64_t a = rng.below(q);
  const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
  const double x1 = mod1((static_cast<double>(a) + sign * t) / static_cast<double>(q));
  // Admissible strip for x2: ||q x2|| < w with w = min(1/2, psi / t).
  const double w = t > 0 ? std::min(0.5, psi_q / t) : 0.5;
  const std::uint64_t b = rng.below(q);
  const double delta = (2.0 * rng.uniform() - 1.0) * w;
  const double x2 = mod1((static_cast<double>(b) + delta) / static_cast<double>(q));
  return TorusPoint2(x1, x2);
}

CoverCheckResult cover_check(std::uint64_t q, double psi_q, std::uint64_t samples,
                             std::uint64_t seed) {
  const auto family = covering_family(q, psi_q);
  CoverCheckResult result;
  result.samples = samples;
  SplitMix rng = substream(seed, q);
  for (std::uint64_t i = 0; i < samples; ++i) {
    const TorusPoint2 p = sample_star_domain(q, psi_q, rng);
    bool covered = false;
    for (const auto& fam : family) {
      if (fam.contains(p)) {
        covered = true;
        break;
      }
    }
    if (covered)
      ++result.covered;
    else
      ++result.escaped;
  }
  return result;
}

}  // namespace multdim
