#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "multdim/approx.hpp"
#include "multdim/rational.hpp"

namespace multdim {

// One level of the divergent-but-null construction: primes above the previous
// level's modulus whose exact reciprocal sum strictly exceeds the threshold.
struct LevelData {
    int k = 1;
    std::vector<BigInt> primes;
    BigInt N = 1;        // product of the level's primes (squarefree)
    Rational threshold;  // theta_k

    Rational reciprocal_sum() const;  // exact sum of 1/p over the level
};

enum class ConstructionMode { Exact, Scaled };

struct ConstructionConfig {
    int levels = 1;
    ConstructionMode mode = ConstructionMode::Scaled;
    // Scaled mode: explicit thresholds, one per level; empty selects the
    // automatic schedule theta_k = min(2^k, 2 / N^{(k-1)}).
    std::vector<Rational> thetas;
    // Cap on candidates examined past N_prev during prime selection.
    std::uint64_t prime_budget = 2'000'000;
};

struct BudgetExhausted : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Smallest consecutive primes p > N_prev with exact sum of 1/p > theta;
// minimal prefix. Throws BudgetExhausted when the candidate cap is hit.
std::vector<BigInt> select_level_primes(int k, const BigInt& N_prev, const Rational& theta,
                                        std::uint64_t budget);

struct Construction {
    ConstructionConfig config;
    std::vector<LevelData> levels;

    // psi(q) = sum_k q / (2^k N^{(k)}) over levels with q | N^{(k)}.
    Rational psi_exact(const BigInt& q) const;
    ApproxFunction psi() const;  // Construction-kind wrapper, exact evaluation
};

Construction build_construction(const ConstructionConfig& cfg);

struct DivergenceReport {
    int k = 1;
    Rational sum;     // sum over level primes p of psi_k(N/p) = 1/(2^k p)
    Rational target;  // theta_k / 2^k
    bool passed = false;
};

std::vector<DivergenceReport> verify_divergence(const Construction& c);

struct TransferReport {
    std::uint64_t samples = 0;
    std::uint64_t hits = 0;        // samples with ||q x|| < psi_k(q) for a tested q
    std::uint64_t violations = 0;  // hits where ||N x|| < 2^{-k} failed (must stay 0)
    std::uint64_t divisors_tested = 0;
};

// Exact check of the transfer implication on one level: for rational x and
// divisors q | N, ||q x|| < psi_k(q) implies ||N x|| < 2^{-k}. Divisors tested
// are {N/p} union {1, N} plus seeded random subset products.
TransferReport verify_transfer(const LevelData& level, const std::vector<Rational>& samples,
                               std::uint64_t subset_budget = 32, std::uint64_t seed = 1);

struct EnvelopeSeries {
    std::vector<double> terms;         // (2^{-k} / N^{(k)})^s per level
    std::vector<double> partial_sums;
    int stable_digits = 0;  // significant digits at which the last term left the sum unchanged
};

// Partial sums of sum_k (2^{-k} / N^{(k)})^s; converges for every s > 0.
EnvelopeSeries envelope_series(const Construction& c, double s);

nlohmann::json construction_to_json(const Construction& c);

}  // namespace multdim
