#include "multdim/counterexample.hpp"

#include <boost/multiprecision/miller_rabin.hpp>
#include <cmath>
#include <numbers>
#include <nlohmann/json.hpp>

#include "multdim/estimate_rng.hpp"

namespace multdim {
namespace {

// ln of a positive bigint, stable for thousands of digits.
double log_big(const BigInt& n) {
    const unsigned bits = boost::multiprecision::msb(n);
    if (bits <= 60) return std::log(n.convert_to<double>());
    const BigInt top = n >> (bits - 52);
    return std::log(top.convert_to<double>()) + static_cast<double>(bits - 52) * std::numbers::ln2;
}

bool is_probable_prime(const BigInt& n) {
    return boost::multiprecision::miller_rabin_test(n, 25);
}

// Probable primes in (base, base + span], found by a windowed sieve against
// the small primes followed by Miller-Rabin on the survivors. Assumes
// base > max(small_primes), so no candidate equals a sieving prime.
std::vector<BigInt> window_primes(const BigInt& base, std::uint64_t span,
                                  const std::vector<std::uint64_t>& small_primes) {
    std::vector<bool> composite(span, false);
    for (const std::uint64_t p : small_primes) {
        const std::uint64_t r = (base % p).convert_to<std::uint64_t>();
        // first offset o in [1, span] with p | base + o
        for (std::uint64_t o = p - r; o <= span; o += p) composite[o - 1] = true;
    }
    std::vector<BigInt> out;
    for (std::uint64_t o = 1; o <= span; ++o) {
        if (composite[o - 1]) continue;
        BigInt cand = base + o;
        if (is_probable_prime(cand)) out.push_back(std::move(cand));
    }
    return out;
}

}  // namespace

Rational LevelData::reciprocal_sum() const {
    Rational s = 0;
    for (const BigInt& p : primes) s += Rational(1, p);
    return s;
}

std::vector<BigInt> select_level_primes(int k, const BigInt& N_prev, const Rational& theta,
                                        std::uint64_t budget) {
    if (theta < 0) throw std::domain_error("select_level_primes: theta must be >= 0");
    // Every candidate prime exceeds N_prev, so the reciprocal sum over a whole
    // budget of candidates cannot reach budget / N_prev.
    if (N_prev > 1 && theta * Rational(N_prev) >= Rational(budget))
        throw BudgetExhausted("level " + std::to_string(k) +
                              ": threshold unreachable within the candidate budget");

    std::vector<BigInt> primes;
    Rational sum = 0;

    if (N_prev < BigInt(1) << 40) {
        // Small path: walk candidates directly.
        std::uint64_t q = N_prev.convert_to<std::uint64_t>();
        for (std::uint64_t used = 0; used < budget;) {
            ++q;
            ++used;
            if (!is_prime_u64(q)) continue;
            primes.emplace_back(q);
            sum += Rational(1, q);
            if (sum > theta) return primes;
        }
    } else {
        static const std::vector<std::uint64_t> small = primes_up_to(100'000);
        BigInt base = N_prev;
        constexpr std::uint64_t span = 8192;
        for (std::uint64_t used = 0; used < budget; used += span) {
            for (BigInt& p : window_primes(base, span, small)) {
                sum += Rational(1, p);
                primes.push_back(std::move(p));
                if (sum > theta) return primes;
            }
            base += span;
        }
    }
    throw BudgetExhausted("level " + std::to_string(k) +
                          ": candidate budget exhausted before reaching the threshold");
}

namespace {

class ConstructionBackend final : public PsiBackend {
public:
    explicit ConstructionBackend(std::vector<LevelData> levels) : levels_(std::move(levels)) {}

    Rational eval_exact(const BigInt& q) const override {
        Rational s = 0;
        for (const auto& lvl : levels_)
            if (lvl.N % q == 0) s += Rational(q, (BigInt(1) << lvl.k) * lvl.N);
        return s;
    }

    double eval(std::uint64_t q) const override {
        return eval_exact(BigInt(q)).convert_to<double>();
    }

    nlohmann::json describe() const override {
        nlohmann::json j;
        j["kind"] = "construction";
        j["levels"] = levels_.size();
        return j;
    }

private:
    std::vector<LevelData> levels_;
};

}  // namespace

Rational Construction::psi_exact(const BigInt& q) const {
    Rational s = 0;
    for (const auto& lvl : levels)
        if (lvl.N % q == 0) s += Rational(q, (BigInt(1) << lvl.k) * lvl.N);
    return s;
}

ApproxFunction Construction::psi() const {
    return ApproxFunction::construction(std::make_shared<ConstructionBackend>(levels),
                                        RangeUse::Linear);
}

Construction build_construction(const ConstructionConfig& cfg) {
    if (cfg.levels < 1) throw std::domain_error("build_construction: levels >= 1");
    if (cfg.mode == ConstructionMode::Scaled && !cfg.thetas.empty() &&
        static_cast<int>(cfg.thetas.size()) < cfg.levels)
        throw std::domain_error("build_construction: need one theta per level");

    Construction out;
    out.config = cfg;
    BigInt N_prev = 1;
    for (int k = 1; k <= cfg.levels; ++k) {
        Rational theta;
        if (cfg.mode == ConstructionMode::Exact) {
            theta = Rational(BigInt(1) << k);
        } else if (!cfg.thetas.empty()) {
            theta = cfg.thetas[static_cast<std::size_t>(k - 1)];
            if (theta <= 0) throw std::domain_error("build_construction: theta must be > 0");
        } else {
            theta = std::min(Rational(BigInt(1) << k), Rational(2, N_prev));
        }
        LevelData lvl;
        lvl.k = k;
        lvl.threshold = theta;
        lvl.primes = select_level_primes(k, N_prev, theta, cfg.prime_budget);
        lvl.N = 1;
        for (const BigInt& p : lvl.primes) lvl.N *= p;
        N_prev = lvl.N;
        out.levels.push_back(std::move(lvl));
    }
    return out;
}

std::vector<DivergenceReport> verify_divergence(const Construction& c) {
    std::vector<DivergenceReport> out;
    for (const auto& lvl : c.levels) {
        DivergenceReport r;
        r.k = lvl.k;
        const Rational pow2 = Rational(1, BigInt(1) << lvl.k);
        r.sum = lvl.reciprocal_sum() * pow2;  // sum_p psi_k(N/p) = sum_p 1/(2^k p)
        r.target = lvl.threshold * pow2;
        r.passed = r.sum > r.target;
        out.push_back(std::move(r));
    }
    return out;
}

TransferReport verify_transfer(const LevelData& level, const std::vector<Rational>& samples,
                               std::uint64_t subset_budget, std::uint64_t seed) {
    TransferReport rep;
    rep.samples = samples.size();

    std::vector<BigInt> divisors;
    divisors.emplace_back(1);
    divisors.push_back(level.N);
    for (const BigInt& p : level.primes) divisors.push_back(level.N / p);
    SplitMix rng = substream(seed, static_cast<std::uint64_t>(level.k));
    for (std::uint64_t i = 0; i < subset_budget; ++i) {
        BigInt d = 1;
        for (const BigInt& p : level.primes)
            if (rng.next() & 1) d *= p;
        divisors.push_back(std::move(d));
    }
    rep.divisors_tested = divisors.size();

    const Rational bound_rhs = Rational(1, BigInt(1) << level.k);  // 2^{-k}
    for (const Rational& x : samples) {
        const Rational nx_dist = nearest_integer_distance(Rational(level.N) * x);
        for (const BigInt& q : divisors) {
            const Rational psi_k = Rational(q, (BigInt(1) << level.k) * level.N);
            if (nearest_integer_distance(Rational(q) * x) < psi_k) {
                ++rep.hits;
                if (!(nx_dist < bound_rhs)) ++rep.violations;
            }
        }
    }
    return rep;
}

EnvelopeSeries envelope_series(const Construction& c, double s) {
    if (!(s > 0.0)) throw std::domain_error("envelope_series: s > 0 required");
    EnvelopeSeries out;
    double total = 0.0;
    for (const auto& lvl : c.levels) {
        const double log_term = -s * (static_cast<double>(lvl.k) * std::numbers::ln2 + log_big(lvl.N));
        const double term = std::exp(log_term);
        total += term;
        out.terms.push_back(term);
        out.partial_sums.push_back(total);
    }
    if (!out.terms.empty() && total > 0.0) {
        const double last = out.terms.back();
        out.stable_digits =
            (last == 0.0) ? 18
                          : std::max(0, static_cast<int>(std::floor(std::log10(total / last))));
    }
    return out;
}

nlohmann::json construction_to_json(const Construction& c) {
    nlohmann::json j;
    j["mode"] = (c.config.mode == ConstructionMode::Exact) ? "exact" : "scaled";
    j["levels"] = nlohmann::json::array();
    const auto reports = verify_divergence(c);
    for (std::size_t i = 0; i < c.levels.size(); ++i) {
        const auto& lvl = c.levels[i];
        nlohmann::json lj;
        lj["k"] = lvl.k;
        lj["prime_count"] = lvl.primes.size();
        lj["first_prime"] = lvl.primes.front().str();
        lj["last_prime"] = lvl.primes.back().str();
        if (lvl.primes.size() <= 64 && lvl.primes.back() < 1'000'000) {
            auto arr = nlohmann::json::array();
            for (const auto& p : lvl.primes) arr.push_back(p.convert_to<std::uint64_t>());
            lj["primes"] = arr;
        }
        lj["modulus_digits"] = lvl.N.str().size();
        lj["threshold"] = rational_to_string(lvl.threshold);
        lj["reciprocal_sum"] = rational_to_string(lvl.reciprocal_sum());
        lj["divergence_sum"] = rational_to_string(reports[i].sum);
        lj["divergence_target"] = rational_to_string(reports[i].target);
        lj["divergence_passed"] = reports[i].passed;
        j["levels"].push_back(std::move(lj));
    }
    return j;
}

}  // namespace multdim
