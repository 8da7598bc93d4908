#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "multdim/geometry.hpp"

namespace multdim {

struct FrequencyVector {
    std::int64_t n1 = 0;
    std::int64_t n2 = 0;
};

// Integral of e(n x) over [-eta, eta]: sin(2 pi n eta) / (pi n), and 2 eta at n = 0.
double oscillatory_integral(double eta, std::int64_t n);

// Fourier coefficient of the level-j cell sum at frequency n. Zero unless q
// divides both components; otherwise a product of two oscillatory integrals
// scaled by q^2 (the a, b character sums saturate).
double rect_fourier_coeff(std::uint64_t q, int j, double psi_q, FrequencyVector n);

// Envelope for |rect_fourier_coeff| at n = q k: the coefficient is dominated
// by 16 * coeff_bound on the divisibility lattice and vanishes off it.
double coeff_bound(std::uint64_t q, int j, double psi_q, FrequencyVector n);

// Number of periodized cells of the level-j family containing p, i.e. the
// pointwise value of the function whose coefficients rect_fourier_coeff gives.
// O(q^2); intended for small-q cross-checks.
int periodized_cell_value(std::uint64_t q, int j, double psi_q, const TorusPoint2& p);

// Weighted atomic measure on the torus with transform
// mu_hat(xi) = sum_i w_i e(-xi . x_i).
class EmpiricalMeasure {
public:
    EmpiricalMeasure() = default;
    void add(const TorusPoint2& p, double weight = 1.0);
    void normalize();  // rescale weights to total mass 1
    double total_mass() const { return total_; }
    std::size_t size() const { return atoms_.size(); }
    std::complex<double> transform(const FrequencyVector& xi) const;

private:
    std::vector<std::pair<TorusPoint2, double>> atoms_;
    double total_ = 0.0;
};

std::complex<double> empirical_fourier_transform(const EmpiricalMeasure& mu,
                                                 const FrequencyVector& xi);

enum class Smoothing { None, Cesaro };

struct FamilyMeasureResult {
    double value = 0.0;      // real part of the truncated pairing
    double zero_term = 0.0;  // n = 0 contribution (the total cell area)
    std::uint64_t nmax = 0;  // truncation radius actually used
    std::uint64_t terms = 0; // nonzero coefficients visited
};

// Pairing sum_{|k|_inf <= nmax} c_{q,j}(q k) mu_hat(-q k), optionally with
// Fejer weights. mu == nullptr means Lebesgue measure: only the n = 0 term
// survives and the result is the exact family area 8 psi(q) / q^2 * q^2.
FamilyMeasureResult measure_of_family(const EmpiricalMeasure* mu, std::uint64_t q, int j,
                                      double psi_q, std::uint64_t nmax,
                                      Smoothing smoothing = Smoothing::None);

// Summand of the quadratic coefficient bound at lattice point k = (k1, k2):
//   min(1/k1, q 2^{-j}) min(1/k2, psi/(q 2^{-j})) q^{-s} min(k1^{-s}, k2^{-s})
// with the conventions S(j, 0) = psi(q) and 1/0 = +inf.
double S_term(int j, std::uint64_t k1, std::uint64_t k2, std::uint64_t q, double psi_q, double s);

struct BoundBreakdown {
    // Grouped by which factor saturates and by the diagonal split. omega0 is
    // the k = 0 term aggregated over levels; omega1/omega2 are the axes.
    double omega0 = 0.0;
    double omega1 = 0.0;
    double omega2 = 0.0;
    double t11 = 0.0;  // low levels, k1 <= k2
    double t12 = 0.0;  // low levels, k1 > k2
    double t21 = 0.0;  // high levels, k1 <= k2
    double t22 = 0.0;  // high levels, k1 > k2
    double total = 0.0;          // independently recomputed (k1-major) full sum
    double tail_estimate = 0.0;  // exact continuation beyond kmax
    std::uint64_t kmax = 0;
    int levels = 0;

    double parts_sum() const { return omega0 + omega1 + omega2 + t11 + t12 + t21 + t22; }
};

// sum over levels j and lattice points 0 <= k1, k2 <= kmax of S_term, split
// into the standard regions. kmax == 0 selects 4 * ceil(q / psi(q)), past
// every saturation switch. Evaluated via power-sum primitives; cost is
// independent of kmax.
BoundBreakdown quadratic_bound_sum(std::uint64_t q, double psi_q, double s, std::uint64_t kmax = 0);

// Brute-force double loop over the same lattice; small kmax only. Oracle for
// quadratic_bound_sum.
double quadratic_bound_sum_direct(std::uint64_t q, double psi_q, double s, std::uint64_t kmax);

// Comparison scale psi log(1/psi) + q^{-(s-eps)} psi^{(s-eps)/2}.
double quadratic_bound_rhs(std::uint64_t q, double psi_q, double s, double eps);

}  // namespace multdim
