#include "multdim/fourier.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "multdim/powersum.hpp"

namespace multdim {

using powersum::kInf;
using powersum::pow_sum;
using powersum::tri_lower;
using powersum::tri_upper;

double oscillatory_integral(double eta, std::int64_t n) {
    if (n == 0) return 2.0 * eta;
    const double nd = static_cast<double>(n);
    return std::sin(2.0 * std::numbers::pi * nd * eta) / (std::numbers::pi * nd);
}

double rect_fourier_coeff(std::uint64_t q, int j, double psi_q, FrequencyVector n) {
    const auto qz = static_cast<std::int64_t>(q);
    if (n.n1 % qz != 0 || n.n2 % qz != 0) return 0.0;
    const DyadicRectangleFamily fam{q, j, psi_q};
    const double qd = static_cast<double>(q);
    return qd * qd * oscillatory_integral(fam.cell_halfwidth1(), -n.n1) *
           oscillatory_integral(fam.cell_halfwidth2(), -n.n2);
}

double coeff_bound(std::uint64_t q, int j, double psi_q, FrequencyVector n) {
    const auto qz = static_cast<std::int64_t>(q);
    if (n.n1 % qz != 0 || n.n2 % qz != 0) return 0.0;
    const double k1 = std::abs(static_cast<double>(n.n1)) / static_cast<double>(q);
    const double k2 = std::abs(static_cast<double>(n.n2)) / static_cast<double>(q);
    // A = q 2^{-j}, B = psi / (q 2^{-j}); the min{1/0, cap} = cap convention.
    const double A = std::ldexp(static_cast<double>(q), -j);
    const double B = psi_q / A;
    const double m1 = (k1 == 0.0) ? A : std::min(A, 1.0 / k1);
    const double m2 = (k2 == 0.0) ? B : std::min(B, 1.0 / k2);
    return m1 * m2;
}

int periodized_cell_value(std::uint64_t q, int j, double psi_q, const TorusPoint2& p) {
    int count = 0;
    for (std::uint64_t a = 0; a < q; ++a)
        for (std::uint64_t b = 0; b < q; ++b) {
            const CellRectangle cell{q, j, psi_q, a, b};
            if (cell.contains(p)) ++count;
        }
    return count;
}

void EmpiricalMeasure::add(const TorusPoint2& p, double weight) {
    atoms_.emplace_back(p, weight);
    total_ += weight;
}

void EmpiricalMeasure::normalize() {
    if (total_ <= 0.0) throw std::domain_error("EmpiricalMeasure: nonpositive mass");
    for (auto& [p, w] : atoms_) w /= total_;
    total_ = 1.0;
}

std::complex<double> EmpiricalMeasure::transform(const FrequencyVector& xi) const {
    std::complex<double> acc{0.0, 0.0};
    for (const auto& [p, w] : atoms_) {
        const double phase = -2.0 * std::numbers::pi *
                             (static_cast<double>(xi.n1) * p.x1 + static_cast<double>(xi.n2) * p.x2);
        acc += w * std::complex<double>{std::cos(phase), std::sin(phase)};
    }
    return acc;
}

std::complex<double> empirical_fourier_transform(const EmpiricalMeasure& mu,
                                                 const FrequencyVector& xi) {
    return mu.transform(xi);
}

FamilyMeasureResult measure_of_family(const EmpiricalMeasure* mu, std::uint64_t q, int j,
                                      double psi_q, std::uint64_t nmax, Smoothing smoothing) {
    FamilyMeasureResult out;
    out.nmax = nmax;
    out.zero_term = rect_fourier_coeff(q, j, psi_q, FrequencyVector{0, 0});
    if (mu == nullptr) {
        // Lebesgue: only the zero frequency pairs nontrivially.
        out.value = out.zero_term;
        out.terms = 1;
        return out;
    }
    const auto N = static_cast<std::int64_t>(nmax);
    const auto qz = static_cast<std::int64_t>(q);
    std::complex<double> acc{0.0, 0.0};
    for (std::int64_t k1 = -N; k1 <= N; ++k1)
        for (std::int64_t k2 = -N; k2 <= N; ++k2) {
            const FrequencyVector n{qz * k1, qz * k2};
            const double c = rect_fourier_coeff(q, j, psi_q, n);
            if (c == 0.0) continue;
            double w = 1.0;
            if (smoothing == Smoothing::Cesaro) {
                w = (1.0 - std::abs(static_cast<double>(k1)) / static_cast<double>(N + 1)) *
                    (1.0 - std::abs(static_cast<double>(k2)) / static_cast<double>(N + 1));
            }
            acc += w * c * mu->transform(FrequencyVector{-n.n1, -n.n2});
            ++out.terms;
        }
    out.value = acc.real();
    return out;
}

double S_term(int j, std::uint64_t k1, std::uint64_t k2, std::uint64_t q, double psi_q, double s) {
    if (k1 == 0 && k2 == 0) return psi_q;
    const double A = std::ldexp(static_cast<double>(q), -j);
    const double B = psi_q / A;
    const double m1 = (k1 == 0) ? A : std::min(1.0 / static_cast<double>(k1), A);
    const double m2 = (k2 == 0) ? B : std::min(1.0 / static_cast<double>(k2), B);
    const std::uint64_t kmax = std::max(k1, k2);  // min(k1^{-s}, k2^{-s}), zero excluded
    const double sel = std::exp(-s * std::log(static_cast<double>(std::max<std::uint64_t>(
                                    1, (k1 == 0) ? k2 : (k2 == 0) ? k1 : kmax))));
    return m1 * m2 * std::exp(-s * std::log(static_cast<double>(q))) * sel;
}

namespace {

struct Region {
    double coef;       // constant factor on this range
    double ex;         // power of k already present (0 saturated, 1 past switch)
    std::uint64_t lo;
    std::uint64_t hi;  // kInf allowed
};

// min(1/k, cap) over k in [lo, hi] splits at sw = floor(1/cap): coefficient
// cap below the switch, k^{-1} above it.
std::vector<Region> axis_regions(double cap, std::uint64_t lo, std::uint64_t hi) {
    const auto sw = static_cast<std::uint64_t>(std::floor(1.0 / cap));
    std::vector<Region> out;
    if (lo <= sw) out.push_back({cap, 0.0, lo, (hi == kInf) ? sw : std::min(hi, sw)});
    const std::uint64_t lo2 = std::max(lo, sw + 1);
    if (hi == kInf || lo2 <= hi) out.push_back({1.0, 1.0, lo2, hi});
    return out;
}

// sum over the regions of coef * k^{-(ex + extra)}.
double axis_sum(const std::vector<Region>& regs, double extra) {
    double s = 0.0;
    for (const auto& r : regs) s += r.coef * pow_sum(r.ex + extra, r.lo, r.hi);
    return s;
}

// Half-quadrant sums with the outer variable carrying the extra k^{-s}.
// lower: inner <= outer; upper: inner > outer.
double quadrant_lower(const std::vector<Region>& inner, const std::vector<Region>& outer,
                      double s) {
    double total = 0.0;
    for (const auto& ri : inner)
        for (const auto& ro : outer)
            total += ri.coef * ro.coef * tri_lower(ri.ex, ro.ex + s, ri.lo, ri.hi, ro.lo, ro.hi);
    return total;
}

double quadrant_upper(const std::vector<Region>& inner, const std::vector<Region>& outer,
                      double s) {
    double total = 0.0;
    for (const auto& ri : inner)
        for (const auto& ro : outer)
            total += ri.coef * ro.coef * tri_upper(ri.ex + s, ro.ex, ri.lo, ri.hi, ro.lo, ro.hi);
    return total;
}

}  // namespace

BoundBreakdown quadratic_bound_sum(std::uint64_t q, double psi_q, double s, std::uint64_t kmax) {
    if (!(s > 0.0 && s <= 1.0)) throw std::domain_error("quadratic_bound_sum: s in (0, 1]");
    BoundBreakdown out;
    const IndexRange range = dyadic_index_range(q, psi_q);
    out.levels = range.size();
    const double qd = static_cast<double>(q);
    if (kmax == 0)
        kmax = 4 * static_cast<std::uint64_t>(std::ceil(qd / psi_q));
    out.kmax = kmax;
    const double qs = std::exp(-s * std::log(qd));
    // Levels below the geometric-mean scale q / sqrt(psi) form the first group.
    const double split = std::log2(qd / std::sqrt(psi_q));

    for (int j = range.j_lo; j <= range.j_hi; ++j) {
        const double A = std::ldexp(qd, -j);
        const double B = psi_q / A;
        const bool low = static_cast<double>(j) < split;

        const auto regs1 = axis_regions(A, 1, kmax);
        const auto regs2 = axis_regions(B, 1, kmax);

        out.omega0 += psi_q;
        out.omega1 += A * qs * axis_sum(regs2, s);
        out.omega2 += B * qs * axis_sum(regs1, s);
        const double lower = qs * quadrant_lower(regs1, regs2, s);
        const double upper = qs * quadrant_upper(regs1, regs2, s);
        (low ? out.t11 : out.t21) += lower;
        (low ? out.t12 : out.t22) += upper;

        // Independent recomputation with the roles of the axes swapped; the
        // diagonal moves to the other half, so agreement with the parts is a
        // genuine consistency check.
        out.total += psi_q + A * qs * axis_sum(regs2, s) + B * qs * axis_sum(regs1, s) +
                     qs * quadrant_lower(regs2, regs1, s) + qs * quadrant_upper(regs2, regs1, s);

        // Exact continuation past kmax.
        const auto tail1 = axis_regions(A, kmax + 1, kInf);
        const auto tail2 = axis_regions(B, kmax + 1, kInf);
        double tail = A * axis_sum(tail2, s) + B * axis_sum(tail1, s);
        tail += axis_sum(regs1, 0.0) * axis_sum(tail2, s);
        tail += axis_sum(regs2, 0.0) * axis_sum(tail1, s);
        tail += quadrant_lower(tail1, tail2, s) + quadrant_upper(tail1, tail2, s);
        out.tail_estimate += qs * tail;
    }
    return out;
}

double quadratic_bound_sum_direct(std::uint64_t q, double psi_q, double s, std::uint64_t kmax) {
    const IndexRange range = dyadic_index_range(q, psi_q);
    double total = 0.0;
    for (int j = range.j_lo; j <= range.j_hi; ++j)
        for (std::uint64_t k1 = 0; k1 <= kmax; ++k1)
            for (std::uint64_t k2 = 0; k2 <= kmax; ++k2) total += S_term(j, k1, k2, q, psi_q, s);
    return total;
}

double quadratic_bound_rhs(std::uint64_t q, double psi_q, double s, double eps) {
    if (!(eps >= 0.0 && eps < s)) throw std::domain_error("quadratic_bound_rhs: need 0 <= eps < s");
    const double se = s - eps;
    return psi_q * std::log(1.0 / psi_q) +
           std::exp(-se * std::log(static_cast<double>(q)) + 0.5 * se * std::log(psi_q));
}

}  // namespace multdim
