#include "multdim/approx.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace multdim {

namespace {

// Smallest q >= 1 with q^{-tau} < cap.
std::uint64_t power_support_min(double tau, double cap) {
  std::uint64_t q = 1;
  while (std::pow(static_cast<double>(q), -tau) >= cap) ++q;
  return q;
}

bool integral(double x) { return x == std::floor(x); }

}  // namespace

ApproxFunction ApproxFunction::power(double tau, RangeUse use) {
  if (!(tau > 0)) throw std::domain_error("power kind requires tau > 0");
  ApproxFunction f;
  f.kind_ = Kind::Power;
  f.use_ = use;
  f.tau_ = tau;
  f.support_min_ = power_support_min(tau, range_cap(use));
  return f;
}

ApproxFunction ApproxFunction::reciprocal(RangeUse use) {
  ApproxFunction f;
  f.kind_ = Kind::Reciprocal;
  f.use_ = use;
  f.tau_ = 1.0;
  f.support_min_ = use == RangeUse::Linear ? 3 : 5;
  return f;
}

ApproxFunction ApproxFunction::table(std::map<std::uint64_t, Rational> values, RangeUse use) {
  ApproxFunction f;
  f.kind_ = Kind::Table;
  f.use_ = use;
  const Rational cap(1, use == RangeUse::Linear ? 2 : 4);
  for (const auto& [q, v] : values) {
    if (q == 0) throw std::domain_error("table key must be >= 1");
    if (v < 0 || v >= cap)
      throw std::domain_error("range violation: table value at q=" + std::to_string(q) +
                              " not in [0, " + rational_to_string(cap) + ")");
    f.table_dbl_[q] = static_cast<double>(v);
  }
  f.table_ = std::move(values);
  return f;
}

ApproxFunction ApproxFunction::construction(std::shared_ptr<const PsiBackend> backend,
                                            RangeUse use) {
  if (!backend) throw std::invalid_argument("null construction backend");
  ApproxFunction f;
  f.kind_ = Kind::Construction;
  f.use_ = use;
  f.backend_ = std::move(backend);
  return f;
}

double ApproxFunction::raw(std::uint64_t q) const {
  if (q == 0) throw std::domain_error("q must be >= 1");
  switch (kind_) {
    case Kind::Power:
      return std::pow(static_cast<double>(q), -tau_);
    case Kind::Reciprocal:
      return 1.0 / static_cast<double>(q);
    case Kind::Table: {
      auto it = table_dbl_.find(q);
      return it == table_dbl_.end() ? 0.0 : it->second;
    }
    case Kind::Construction:
      return backend_->eval(q);
  }
  return 0.0;
}

double ApproxFunction::operator()(std::uint64_t q) const {
  if (q < support_min_) return 0.0;
  return raw(q);
}

std::optional<Rational> ApproxFunction::exact(std::uint64_t q) const {
  if (q == 0) throw std::domain_error("q must be >= 1");
  switch (kind_) {
    case Kind::Power: {
      if (!integral(tau_)) return std::nullopt;
      if (q < support_min_) return Rational(0);
      BigInt den = 1;
      for (int i = 0; i < static_cast<int>(tau_); ++i) den *= q;
      return Rational(1, den);
    }
    case Kind::Reciprocal:
      if (q < support_min_) return Rational(0);
      return Rational(1, q);
    case Kind::Table: {
      auto it = table_.find(q);
      return it == table_.end() ? Rational(0) : it->second;
    }
    case Kind::Construction:
      return backend_->eval_exact(BigInt(q));
  }
  return std::nullopt;
}

ApproxFunction ApproxFunction::sqrt(RangeUse use) const {
  switch (kind_) {
    case Kind::Power:
      return power(tau_ / 2.0, use);
    case Kind::Reciprocal:
      return power(0.5, use);
    case Kind::Table: {
      ApproxFunction f;
      f.kind_ = Kind::Table;
      f.use_ = use;
      for (const auto& [q, v] : table_dbl_) f.table_dbl_[q] = std::sqrt(v);
      // exact table entries are lost under sqrt; keep the double cache only
      return f;
    }
    case Kind::Construction:
      throw std::domain_error("sqrt of a construction psi is not supported");
  }
  throw std::logic_error("unreachable");
}

double psi_eval_checked(const ApproxFunction& psi, std::uint64_t q) {
  const double v = psi.raw(q);
  if (!(v < psi.cap()))
    throw std::domain_error("range violation: psi(" + std::to_string(q) + ") = " +
                            std::to_string(v) + " not < " + std::to_string(psi.cap()));
  return v;
}

nlohmann::json ApproxFunction::to_json() const {
  nlohmann::json j;
  j["use"] = use_ == RangeUse::Linear ? "linear" : "multiplicative";
  switch (kind_) {
    case Kind::Power:
      j["kind"] = "power";
      j["tau"] = tau_;
      break;
    case Kind::Reciprocal:
      j["kind"] = "reciprocal";
      break;
    case Kind::Table: {
      j["kind"] = "table";
      nlohmann::json vals = nlohmann::json::object();
      for (const auto& [q, v] : table_) vals[std::to_string(q)] = rational_to_string(v);
      j["values"] = vals;
      break;
    }
    case Kind::Construction:
      j["kind"] = "construction";
      j["construction"] = backend_->describe();
      break;
  }
  return j;
}

ApproxFunction ApproxFunction::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  RangeUse use = RangeUse::Multiplicative;
  if (j.contains("use")) {
    const std::string u = j.at("use").get<std::string>();
    if (u == "linear") use = RangeUse::Linear;
    else if (u == "multiplicative") use = RangeUse::Multiplicative;
    else throw std::invalid_argument("unknown range use: " + u);
  }
  if (kind == "power") return power(j.at("tau").get<double>(), use);
  if (kind == "reciprocal") return reciprocal(use);
  if (kind == "table") {
    std::map<std::uint64_t, Rational> vals;
    for (const auto& [k, v] : j.at("values").items())
      vals[std::stoull(k)] = rational_from_string(v.get<std::string>());
    return table(std::move(vals), use);
  }
  throw std::invalid_argument("unknown psi kind: " + kind);
}

// ---------------------------------------------------------------------------
// IndexSet

IndexSet IndexSet::all_naturals() { return IndexSet{}; }

IndexSet IndexSet::primes() {
  IndexSet s;
  s.kind_ = Kind::Primes;
  return s;
}

IndexSet IndexSet::explicit_set(std::vector<std::uint64_t> values) {
  IndexSet s;
  s.kind_ = Kind::Explicit;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  if (!values.empty() && values.front() == 0)
    throw std::domain_error("index set members must be positive");
  s.values_ = std::move(values);
  return s;
}

IndexSet IndexSet::stride(std::uint64_t start, std::uint64_t step) {
  if (start == 0 || step == 0) throw std::domain_error("stride requires start, step >= 1");
  IndexSet s;
  s.kind_ = Kind::Stride;
  s.start_ = start;
  s.step_ = step;
  return s;
}

bool IndexSet::contains(std::uint64_t q) const {
  if (q == 0) return false;
  switch (kind_) {
    case Kind::AllNaturals:
      return true;
    case Kind::Primes:
      return is_prime_u64(q);
    case Kind::Explicit:
      return std::binary_search(values_.begin(), values_.end(), q);
    case Kind::Stride:
      return q >= start_ && (q - start_) % step_ == 0;
  }
  return false;
}

std::vector<std::uint64_t> IndexSet::up_to(std::uint64_t qmax) const {
  std::vector<std::uint64_t> out;
  switch (kind_) {
    case Kind::AllNaturals:
      out.reserve(qmax);
      for (std::uint64_t q = 1; q <= qmax; ++q) out.push_back(q);
      break;
    case Kind::Primes:
      return primes_up_to(qmax);
    case Kind::Explicit:
      for (std::uint64_t q : values_) {
        if (q > qmax) break;
        out.push_back(q);
      }
      break;
    case Kind::Stride:
      for (std::uint64_t q = start_; q <= qmax; q += step_) out.push_back(q);
      break;
  }
  return out;
}

nlohmann::json IndexSet::to_json() const {
  nlohmann::json j;
  switch (kind_) {
    case Kind::AllNaturals:
      j["kind"] = "all-naturals";
      break;
    case Kind::Primes:
      j["kind"] = "primes";
      break;
    case Kind::Explicit:
      j["kind"] = "explicit";
      j["values"] = values_;
      break;
    case Kind::Stride:
      j["kind"] = "stride";
      j["start"] = start_;
      j["step"] = step_;
      break;
  }
  return j;
}

IndexSet IndexSet::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "all-naturals") return all_naturals();
  if (kind == "primes") return primes();
  if (kind == "explicit") return explicit_set(j.at("values").get<std::vector<std::uint64_t>>());
  if (kind == "stride")
    return stride(j.at("start").get<std::uint64_t>(), j.at("step").get<std::uint64_t>());
  throw std::invalid_argument("unknown index set kind: " + kind);
}

// ---------------------------------------------------------------------------
// TorusPoint2 and hit predicates

namespace {
double mod1(double x) { return x - std::floor(x); }
}  // namespace

TorusPoint2::TorusPoint2(double a, double b) : x1(mod1(a)), x2(mod1(b)) {}

TorusPoint2::TorusPoint2(const Rational& a, const Rational& b) {
  ex1 = rational_mod1(a);
  ex2 = rational_mod1(b);
  x1 = static_cast<double>(*ex1);
  x2 = static_cast<double>(*ex2);
}

bool is_hit(std::uint64_t q, const TorusPoint2& p, const ApproxFunction& psi, HitMode mode,
            const std::optional<TorusPoint2>& offset) {
  if (q == 0) throw std::domain_error("q must be >= 1");
  const bool offset_exact = !offset || offset->exact();
  if (p.exact() && offset_exact) {
    if (auto pv = psi.exact(q)) {
      const Rational y1 = offset ? *offset->ex1 : Rational(0);
      const Rational y2 = offset ? *offset->ex2 : Rational(0);
      Rational d1 = nearest_integer_distance(Rational(q) * *p.ex1 - y1);
      if (mode == HitMode::Linear) return d1 < *pv;
      Rational d2 = nearest_integer_distance(Rational(q) * *p.ex2 - y2);
      return d1 * d2 < *pv;
    }
  }
  const double v = psi(q);
  const double y1 = offset ? offset->x1 : 0.0;
  const double y2 = offset ? offset->x2 : 0.0;
  const double d1 = nearest_integer_distance(static_cast<double>(q) * p.x1 - y1);
  if (mode == HitMode::Linear) return d1 < v;
  const double d2 = nearest_integer_distance(static_cast<double>(q) * p.x2 - y2);
  return d1 * d2 < v;
}

std::uint64_t hit_count(const TorusPoint2& p, const ApproxFunction& psi, const IndexSet& Q,
                        std::uint64_t qmax, HitMode mode,
                        const std::optional<TorusPoint2>& offset) {
  if (qmax == 0) throw std::domain_error("qmax must be >= 1");
  std::uint64_t count = 0;
  Q.for_each(qmax, [&](std::uint64_t q) {
    if (is_hit(q, p, psi, mode, offset)) ++count;
  });
  return count;
}

// ---------------------------------------------------------------------------
// Prime helpers

std::vector<std::uint64_t> primes_up_to(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  if (n < 2) return out;
  std::vector<bool> composite(n + 1, false);
  for (std::uint64_t i = 2; i * i <= n; ++i)
    if (!composite[i])
      for (std::uint64_t j = i * i; j <= n; j += i) composite[j] = true;
  for (std::uint64_t i = 2; i <= n; ++i)
    if (!composite[i]) out.push_back(i);
  return out;
}

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  // deterministic Miller-Rabin for 64-bit with the standard witness set
  auto mulmod = [](std::uint64_t a, std::uint64_t b, std::uint64_t m) -> std::uint64_t {
    return static_cast<std::uint64_t>((__uint128_t)a * b % m);
  };
  auto powmod = [&](std::uint64_t a, std::uint64_t e, std::uint64_t m) {
    std::uint64_t r = 1;
    a %= m;
    while (e) {
      if (e & 1) r = mulmod(r, a, m);
      a = mulmod(a, a, m);
      e >>= 1;
    }
    return r;
  };
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  for (std::uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

}  // namespace multdim
