#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "multdim/rational.hpp"

namespace multdim {

// Intended use of an approximation function; fixes the admissible range
// [0, 1/2) for linear and [0, 1/4) for multiplicative approximation.
enum class RangeUse { Linear, Multiplicative };

inline double range_cap(RangeUse use) {
  return use == RangeUse::Linear ? 0.5 : 0.25;
}

enum class HitMode { Linear, Multiplicative };

// Exact evaluation backend for construction-type psi (see counterexample.hpp).
struct PsiBackend {
  virtual ~PsiBackend() = default;
  virtual Rational eval_exact(const BigInt& q) const = 0;
  virtual double eval(std::uint64_t q) const = 0;
  virtual nlohmann::json describe() const = 0;
};

// An approximation function psi: N -> [0, range_cap).
//
// Support convention: psi(q) = 0 outside the declared support. For the
// analytic kinds (power, reciprocal) the support is trimmed to the q where
// the formula value lies below the range cap, so evaluation is always
// admissible. psi_eval_checked() exposes the untrimmed value and rejects
// cap violations, for callers that want the strict behaviour.
class ApproxFunction {
 public:
  enum class Kind { Power, Reciprocal, Table, Construction };

  static ApproxFunction power(double tau, RangeUse use = RangeUse::Multiplicative);
  static ApproxFunction reciprocal(RangeUse use = RangeUse::Linear);
  static ApproxFunction table(std::map<std::uint64_t, Rational> values,
                              RangeUse use = RangeUse::Multiplicative);
  static ApproxFunction construction(std::shared_ptr<const PsiBackend> backend,
                                     RangeUse use = RangeUse::Linear);

  Kind kind() const { return kind_; }
  RangeUse use() const { return use_; }
  double cap() const { return range_cap(use_); }
  double tau() const { return tau_; }

  // psi(q) with the support convention applied.
  double operator()(std::uint64_t q) const;

  // Raw formula value, before support trimming (power/reciprocal only differ).
  double raw(std::uint64_t q) const;

  // Exact value when the kind supports it (table, construction, reciprocal,
  // and power with integer exponent); nullopt otherwise.
  std::optional<Rational> exact(std::uint64_t q) const;

  // Smallest q in the support of an analytic kind (1 for table/construction).
  std::uint64_t support_min() const { return support_min_; }

  // Pointwise square root, Psi(q) = psi(q)^{1/2}. Turns the multiplicative
  // convergence exponent of psi into the linear one of Psi.
  ApproxFunction sqrt(RangeUse use = RangeUse::Linear) const;

  // Power-law kinds have a closed-form decay exponent: psi(q) = q^{-tau}.
  bool is_power_law() const { return kind_ == Kind::Power || kind_ == Kind::Reciprocal; }
  // Table kinds have finite support.
  bool finite_support() const { return kind_ == Kind::Table; }

  const std::map<std::uint64_t, Rational>& table_values() const { return table_; }
  std::shared_ptr<const PsiBackend> backend() const { return backend_; }

  nlohmann::json to_json() const;
  static ApproxFunction from_json(const nlohmann::json& j);

 private:
  ApproxFunction() = default;
  Kind kind_ = Kind::Power;
  RangeUse use_ = RangeUse::Multiplicative;
  double tau_ = 0.0;
  std::uint64_t support_min_ = 1;
  std::map<std::uint64_t, Rational> table_;
  std::map<std::uint64_t, double> table_dbl_;  // cache of table_ as doubles
  std::shared_ptr<const PsiBackend> backend_;
};

// Strict evaluation: returns the raw value and throws std::domain_error when
// it is not strictly below the function's range cap.
double psi_eval_checked(const ApproxFunction& psi, std::uint64_t q);

// The set Q of admissible denominators.
class IndexSet {
 public:
  enum class Kind { AllNaturals, Primes, Explicit, Stride };

  static IndexSet all_naturals();
  static IndexSet primes();
  static IndexSet explicit_set(std::vector<std::uint64_t> values);
  static IndexSet stride(std::uint64_t start, std::uint64_t step);

  Kind kind() const { return kind_; }
  bool contains(std::uint64_t q) const;

  // Strictly increasing members q <= qmax.
  std::vector<std::uint64_t> up_to(std::uint64_t qmax) const;

  // Calls f(q) for each member q <= qmax in increasing order.
  template <class F>
  void for_each(std::uint64_t qmax, F&& f) const {
    for (std::uint64_t q : up_to(qmax)) f(q);
  }

  nlohmann::json to_json() const;
  static IndexSet from_json(const nlohmann::json& j);

 private:
  Kind kind_ = Kind::AllNaturals;
  std::uint64_t start_ = 1, step_ = 1;
  std::vector<std::uint64_t> values_;
};

// A point of the torus [0,1)^2, optionally with exact rational coordinates.
struct TorusPoint2 {
  double x1 = 0.0, x2 = 0.0;
  std::optional<Rational> ex1, ex2;

  TorusPoint2() = default;
  TorusPoint2(double a, double b);
  TorusPoint2(const Rational& a, const Rational& b);
  bool exact() const { return ex1 && ex2; }
};

// ||q*x1 - y1|| * ||q*x2 - y2|| < psi(q) (multiplicative), or
// ||q*x1 - y1|| < psi(q) (linear; first coordinate only).
// Uses the exact rational path when point, offset, and psi(q) are all exact.
bool is_hit(std::uint64_t q, const TorusPoint2& p, const ApproxFunction& psi,
            HitMode mode = HitMode::Multiplicative,
            const std::optional<TorusPoint2>& offset = std::nullopt);

// #{q in Q, q <= qmax : is_hit(q, p, psi, mode, offset)}.
std::uint64_t hit_count(const TorusPoint2& p, const ApproxFunction& psi,
                        const IndexSet& Q, std::uint64_t qmax,
                        HitMode mode = HitMode::Multiplicative,
                        const std::optional<TorusPoint2>& offset = std::nullopt);

// Simple deterministic prime helpers shared across modules.
std::vector<std::uint64_t> primes_up_to(std::uint64_t n);
bool is_prime_u64(std::uint64_t n);

}  // namespace multdim
