#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "multdim/approx.hpp"

namespace multdim {

// The three series whose exponents of convergence the formulas use:
//   lambda: sum (psi(q)/q)^s          tau: sum q^{-s} psi(q)^{s/2}
//   d:      sum q (psi(q)/q)^s        (d always over all naturals)
enum class ExponentKind { Lambda, Tau, D };

const char* exponent_kind_name(ExponentKind k);

// Dyadic-block convergence heuristic verdicts. SlowDecay means the block sums
// decrease but not yet geometrically (ratio in [0.95, 1)); bisection leans
// convergent there so brackets can shrink below the heuristic's resolution.
enum class SeriesVerdict { Convergent, Divergent, SlowDecay, Inconclusive };

struct SeriesConfig {
  std::uint64_t qmax = 1ull << 20;  // series budget
  int tail_blocks = 5;              // dyadic blocks inspected
  double ratio_threshold = 0.95;    // geometric-decay ratio for "convergent"
  int bisection_iters = 40;
};

struct BlockDiagnostics {
  std::vector<double> block_sums;  // sums over [2^m, 2^{m+1})
  SeriesVerdict verdict = SeriesVerdict::Inconclusive;
};

struct ExponentResult {
  double value = 0.0;  // in [0,1]
  double lo = 0.0, hi = 0.0;
  std::string method;  // "closed-form" or "bisection"
  BlockDiagnostics evidence;
};

// Raised when the dyadic-block heuristic can classify neither way.
struct HeuristicInconclusive : std::runtime_error {
  explicit HeuristicInconclusive(const std::string& what) : std::runtime_error(what) {}
};

// Series term for one q at exponent s; zero terms are dropped by callers.
double exponent_series_term(ExponentKind kind, std::uint64_t q, double psi_q, double s);

// Dyadic-block partial sums and verdict for the series at exponent s.
BlockDiagnostics classify_series(ExponentKind kind, const ApproxFunction& psi, const IndexSet& Q,
                                 double s, const SeriesConfig& cfg = {});

// Closed-form infimum for power-law psi (nullopt otherwise). Finite-support
// psi yields 0 for every kind.
std::optional<double> closed_form_exponent(ExponentKind kind, const ApproxFunction& psi,
                                           const IndexSet& Q);

// Bisection on s in [0,1] driven by classify_series.
ExponentResult bisect_exponent(ExponentKind kind, const ApproxFunction& psi, const IndexSet& Q,
                               const SeriesConfig& cfg = {});

// Closed form when available, bisection otherwise.
ExponentResult exponent_of_convergence(ExponentKind kind, const ApproxFunction& psi,
                                       const IndexSet& Q, const SeriesConfig& cfg = {});

struct DimensionFormulas {
  double lambda = 0, tau = 0, d = 0;
  double dimF_W = 0;   // min{2 lambda, 1}
  double dimF_M = 0;   // 2 tau
  double dimH_M = 0;   // 1 + min{d, 1}
  double salem_gap = 0;  // dimH_M - dimF_M
  bool khintchine_convergent = false;  // sum psi < infinity   (dimF_W formula hypothesis)
  bool gallagher_convergent = false;   // sum psi log(1/psi) < infinity (dimF_M hypothesis)
  std::string warning;  // set when a formula is reported outside its hypothesis
};

DimensionFormulas dimension_formulas(const ApproxFunction& psi, const IndexSet& Q,
                                     const SeriesConfig& cfg = {});

struct GallagherSums {
  std::vector<std::uint64_t> q;          // support members encountered
  std::vector<double> khintchine;        // partial sums of psi(q)
  std::vector<double> gallagher;         // partial sums of psi(q) log(1/psi(q))
};

// Partial sums of sum psi(q) and sum psi(q) log(1/psi(q)); terms with
// psi(q)=0 contribute 0 (0*log(1/0) := 0).
GallagherSums gallagher_partial_sums(const ApproxFunction& psi, const IndexSet& Q,
                                     std::uint64_t qmax);

// Dyadic-block verdict for the plain series sum_{q in Q} f(q)-style sums used
// by the applicability flags; kind selects psi or psi log(1/psi).
SeriesVerdict classify_weight_series(const ApproxFunction& psi, const IndexSet& Q, bool gallagher,
                                     const SeriesConfig& cfg = {});

}  // namespace multdim
