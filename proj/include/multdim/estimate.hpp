#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "multdim/approx.hpp"
#include "multdim/exponents.hpp"
#include "multdim/geometry.hpp"

namespace multdim {

struct MonteCarloResult {
    double mean = 0.0;
    double stderr_ = 0.0;
    std::uint64_t samples = 0;
};

// Fraction of uniform torus samples satisfying the predicate. Samples are
// drawn in fixed-size chunks with per-chunk substreams and reduced in chunk
// order, so the result is bit-identical for any thread count.
MonteCarloResult monte_carlo_measure(const std::function<bool(const TorusPoint2&)>& predicate,
                                     std::uint64_t n_samples, std::uint64_t seed, int threads = 1);

// Exists q in Q with N_lo <= q <= qmax and is_hit(q, p, psi, mode).
bool truncated_limsup_membership(const TorusPoint2& p, const ApproxFunction& psi, const IndexSet& Q,
                                 std::uint64_t N_lo, std::uint64_t qmax,
                                 HitMode mode = HitMode::Multiplicative);

struct BoxCountResult {
    std::vector<std::uint64_t> resolutions;  // grid sizes G (boxes of side 1/G)
    std::vector<std::uint64_t> counts;
    double slope = 0.0;
    double residual = 0.0;  // rms residual of the log-log fit
};

// Generic box counting: a member point cloud is built once (stratified
// samples on the finest grid plus optional deterministic probes), then boxes
// containing cloud points are counted at every resolution. Sharing the cloud
// keeps counts monotone in the resolution.
BoxCountResult box_counting_dimension(const std::function<bool(const TorusPoint2&)>& membership,
                                      const std::vector<std::uint64_t>& resolutions,
                                      std::uint64_t seed, int samples_per_cell = 1,
                                      const std::vector<TorusPoint2>& probes = {});

// Box counting for the truncated limsup set of the A_q. At grid size G the
// contributing denominators are the dyadic window below the largest q with
// psi(q)/q >= 1/G (rows and columns of A_q thinner than a box contribute no
// new boxes), and occupied boxes are counted along the distinct row/column
// lines a/q of the window. For psi(q) = q^{-tau} the expected slope is
// (tau+3)/(tau+1).
BoxCountResult box_counting_limsup(const ApproxFunction& psi, const IndexSet& Q,
                                   std::uint64_t qmax,
                                   const std::vector<std::uint64_t>& resolutions);

struct BorelCantelliRow {
    std::uint64_t q = 0;
    double psi_q = 0.0;
    double star = 0.0;          // L(A_q), closed form
    double partial_sum = 0.0;   // running sum of star
    double gallagher_term = 0.0;
    double gallagher_partial = 0.0;
};

struct BorelCantelliSeries {
    std::vector<BorelCantelliRow> rows;
    SeriesVerdict measure_verdict = SeriesVerdict::Inconclusive;    // sum L(A_q)
    SeriesVerdict gallagher_verdict = SeriesVerdict::Inconclusive;  // sum psi log(1/psi)
};

BorelCantelliSeries borel_cantelli_sums(const ApproxFunction& psi, const IndexSet& Q,
                                        std::uint64_t qmax);

struct DecayProbeResult {
    std::vector<double> shell_radii;  // sup-norm shell centers 2^m
    std::vector<double> shell_max;    // max |mu_hat| over the sampled shell
    double exponent = 0.0;            // fitted s in |mu_hat| ~ |xi|^{-s}
    double residual = 0.0;
};

enum class DecayScan { Random, Axis1 };

// Fourier decay of the uniform probability measure on a finite union of
// cells. mu_hat is evaluated in closed form per cell; shells are dyadic in
// the sup-norm.
DecayProbeResult decay_probe(const std::vector<CellRectangle>& cells, int shells,
                             std::uint64_t xi_budget, std::uint64_t seed,
                             DecayScan scan = DecayScan::Random);

// Least-squares fit y ~ a + slope * x; returns {slope, rms residual}.
std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace multdim
