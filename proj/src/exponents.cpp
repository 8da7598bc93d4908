#include "multdim/exponents.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace multdim {

const char* exponent_kind_name(ExponentKind k) {
  switch (k) {
    case ExponentKind::Lambda: return "lambda";
    case ExponentKind::Tau: return "tau";
    case ExponentKind::D: return "d";
  }
  return "?";
}

double exponent_series_term(ExponentKind kind, std::uint64_t q, double psi_q, double s) {
  if (psi_q <= 0.0) return 0.0;
  const double lq = std::log(static_cast<double>(q));
  const double lp = std::log(psi_q);
  switch (kind) {
    case ExponentKind::Lambda:
      return std::exp(s * (lp - lq));
    case ExponentKind::Tau:
      return std::exp(-s * lq + 0.5 * s * lp);
    case ExponentKind::D:
      return std::exp(lq + s * (lp - lq));
  }
  return 0.0;
}

namespace {

SeriesVerdict verdict_from_blocks(const std::vector<double>& blocks, const SeriesConfig& cfg) {
  // Ignore leading empty blocks (support may start late).
  std::vector<double> b;
  bool seen = false;
  for (double v : blocks) {
    if (v > 0) seen = true;
    if (seen) b.push_back(v);
  }
  const int n = static_cast<int>(b.size());
  if (n < cfg.tail_blocks + 1) return SeriesVerdict::Inconclusive;
  bool geo = true, nondec = true, dec = true;
  for (int i = n - cfg.tail_blocks; i < n; ++i) {
    const double prev = b[i - 1], cur = b[i];
    if (prev <= 0) return SeriesVerdict::Inconclusive;
    const double r = cur / prev;
    if (!(r < cfg.ratio_threshold)) geo = false;
    if (cur < prev) nondec = false;
    if (!(cur < prev)) dec = false;
  }
  if (geo) return SeriesVerdict::Convergent;
  if (nondec) return SeriesVerdict::Divergent;
  if (dec) return SeriesVerdict::SlowDecay;
  return SeriesVerdict::Inconclusive;
}

template <class Term>
BlockDiagnostics classify_generic(const ApproxFunction& psi, const IndexSet& Q,
                                  const SeriesConfig& cfg, Term term) {
  BlockDiagnostics diag;
  std::uint64_t block_end = 2;  // current block is [block_end/2, block_end)
  double acc = 0.0, comp = 0.0;
  auto flush = [&]() {
    diag.block_sums.push_back(acc);
    acc = comp = 0.0;
  };
  Q.for_each(cfg.qmax, [&](std::uint64_t q) {
    while (q >= block_end) {
      flush();
      block_end *= 2;
    }
    const double t = term(q);
    // Kahan accumulation
    const double y = t - comp;
    const double s = acc + y;
    comp = (s - acc) - y;
    acc = s;
  });
  // Only a fully covered final block carries comparable information.
  if (block_end - 1 <= cfg.qmax) flush();
  diag.verdict = verdict_from_blocks(diag.block_sums, cfg);
  return diag;
}

}  // namespace

BlockDiagnostics classify_series(ExponentKind kind, const ApproxFunction& psi, const IndexSet& Q,
                                 double s, const SeriesConfig& cfg) {
  return classify_generic(psi, Q, cfg, [&](std::uint64_t q) {
    return exponent_series_term(kind, q, psi(q), s);
  });
}

SeriesVerdict classify_weight_series(const ApproxFunction& psi, const IndexSet& Q, bool gallagher,
                                     const SeriesConfig& cfg) {
  auto diag = classify_generic(psi, Q, cfg, [&](std::uint64_t q) {
    const double v = psi(q);
    if (v <= 0) return 0.0;
    return gallagher ? v * std::log(1.0 / v) : v;
  });
  return diag.verdict;
}

std::optional<double> closed_form_exponent(ExponentKind kind, const ApproxFunction& psi,
                                           const IndexSet& Q) {
  if (psi.finite_support()) return 0.0;  // finite sums converge for every s > 0
  if (!psi.is_power_law()) return std::nullopt;
  if (Q.kind() == IndexSet::Kind::Explicit) return 0.0;
  // For psi(q) = q^{-tau} over the naturals, the primes, or an arithmetic
  // progression, the series converges exactly when the total power of q
  // exceeds 1 (prime terms p^{-x} likewise converge iff x > 1).
  const double tau = psi.tau();
  double inf = 0.0;
  switch (kind) {
    case ExponentKind::Lambda:
      inf = 1.0 / (tau + 1.0);  // s (tau + 1) > 1
      break;
    case ExponentKind::Tau:
      inf = 2.0 / (tau + 2.0);  // s (1 + tau/2) > 1
      break;
    case ExponentKind::D:
      inf = 2.0 / (tau + 1.0);  // s (tau + 1) > 2
      break;
  }
  return std::clamp(inf, 0.0, 1.0);
}

ExponentResult bisect_exponent(ExponentKind kind, const ApproxFunction& psi, const IndexSet& Q,
                               const SeriesConfig& cfg) {
  ExponentResult res;
  res.method = "bisection";

  auto classify = [&](double s) { return classify_series(kind, psi, Q, s, cfg); };

  auto leans_convergent = [](SeriesVerdict v) {
    return v == SeriesVerdict::Convergent || v == SeriesVerdict::SlowDecay;
  };

  BlockDiagnostics top = classify(1.0);
  if (top.verdict == SeriesVerdict::Divergent) {
    // inf over an empty set of convergent s in [0,1]; clamp to 1
    res.value = res.lo = res.hi = 1.0;
    res.evidence = std::move(top);
    return res;
  }
  double lo = 0.0, hi = 1.0;
  BlockDiagnostics last = std::move(top);
  for (int it = 0; it < cfg.bisection_iters; ++it) {
    const double mid = 0.5 * (lo + hi);
    BlockDiagnostics diag = classify(mid);
    if (diag.verdict == SeriesVerdict::Divergent) {
      lo = mid;
    } else if (leans_convergent(diag.verdict)) {
      hi = mid;
    } else {
      // Inconclusive: accept only if adjacent probes already bracket it.
      const double h = 0.02;
      BlockDiagnostics up = classify(std::min(1.0, mid + h));
      BlockDiagnostics down = classify(std::max(0.0, mid - h));
      if (leans_convergent(up.verdict) && down.verdict == SeriesVerdict::Divergent) {
        lo = std::max(lo, mid - h);
        hi = std::min(hi, mid + h);
        last = std::move(diag);
        break;
      }
      if (leans_convergent(up.verdict)) {
        hi = std::min(1.0, mid + h);
      } else if (down.verdict == SeriesVerdict::Divergent) {
        lo = std::max(0.0, mid - h);
      } else {
        throw HeuristicInconclusive("series verdict inconclusive near s=" + std::to_string(mid));
      }
    }
    last = std::move(diag);
  }
  res.lo = lo;
  res.hi = hi;
  res.value = 0.5 * (lo + hi);
  res.evidence = std::move(last);
  return res;
}

ExponentResult exponent_of_convergence(ExponentKind kind, const ApproxFunction& psi,
                                       const IndexSet& Q, const SeriesConfig& cfg) {
  if (auto cf = closed_form_exponent(kind, psi, Q)) {
    ExponentResult res;
    res.value = res.lo = res.hi = *cf;
    res.method = "closed-form";
    return res;
  }
  return bisect_exponent(kind, psi, Q, cfg);
}

DimensionFormulas dimension_formulas(const ApproxFunction& psi, const IndexSet& Q,
                                     const SeriesConfig& cfg) {
  DimensionFormulas out;
  out.lambda = exponent_of_convergence(ExponentKind::Lambda, psi, Q, cfg).value;
  out.tau = exponent_of_convergence(ExponentKind::Tau, psi, Q, cfg).value;
  out.d = exponent_of_convergence(ExponentKind::D, psi, IndexSet::all_naturals(), cfg).value;
  out.dimF_W = std::min(2.0 * out.lambda, 1.0);
  out.dimF_M = 2.0 * out.tau;  // tau already clamped to [0,1]
  out.dimH_M = 1.0 + std::min(out.d, 1.0);
  out.salem_gap = out.dimH_M - out.dimF_M;

  auto convergent = [&](bool gallagher) {
    if (psi.finite_support()) return true;
    if (psi.is_power_law()) return psi.tau() > 1.0;  // both series need tau > 1
    return classify_weight_series(psi, Q, gallagher, cfg) == SeriesVerdict::Convergent;
  };
  out.khintchine_convergent = convergent(false);
  out.gallagher_convergent = convergent(true);
  if (!out.gallagher_convergent)
    out.warning =
        "sum psi log(1/psi) diverges: the 2*tau formula for dimF is outside its hypothesis "
        "(a divergent example has dimF = 2)";
  return out;
}

GallagherSums gallagher_partial_sums(const ApproxFunction& psi, const IndexSet& Q,
                                     std::uint64_t qmax) {
  if (qmax == 0) throw std::domain_error("qmax must be >= 1");
  GallagherSums out;
  double kh = 0.0, kh_c = 0.0, ga = 0.0, ga_c = 0.0;
  auto add = [](double& acc, double& comp, double t) {
    const double y = t - comp;
    const double s = acc + y;
    comp = (s - acc) - y;
    acc = s;
  };
  Q.for_each(qmax, [&](std::uint64_t q) {
    const double v = psi(q);
    add(kh, kh_c, v);
    add(ga, ga_c, v > 0 ? v * std::log(1.0 / v) : 0.0);
    out.q.push_back(q);
    out.khintchine.push_back(kh);
    out.gallagher.push_back(ga);
  });
  return out;
}

}  // namespace multdim
