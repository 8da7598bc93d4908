#include <doctest.h>

#include <cmath>

#include "multdim/exponents.hpp"

using namespace multdim;

TEST_CASE("closed-form exponents for power-law psi") {
    const auto Q = IndexSet::all_naturals();
    for (double tau : {1.5, 2.0, 3.0}) {
        const auto psi = ApproxFunction::power(tau);
        CHECK(*closed_form_exponent(ExponentKind::Lambda, psi, Q) ==
              doctest::Approx(1.0 / (tau + 1.0)));
        CHECK(*closed_form_exponent(ExponentKind::Tau, psi, Q) ==
              doctest::Approx(2.0 / (tau + 2.0)));
        CHECK(*closed_form_exponent(ExponentKind::D, psi, Q) ==
              doctest::Approx(std::min(1.0, 2.0 / (tau + 1.0))));
    }
    // reciprocal: tau-exponent 2/3, lambda 1/2, d clamped at 1
    const auto rec = ApproxFunction::reciprocal();
    CHECK(*closed_form_exponent(ExponentKind::Tau, rec, Q) == doctest::Approx(2.0 / 3.0));
    CHECK(*closed_form_exponent(ExponentKind::Lambda, rec, Q) == doctest::Approx(0.5));
    CHECK(*closed_form_exponent(ExponentKind::D, rec, Q) == doctest::Approx(1.0));
    // finite support: every series converges for every s > 0
    std::map<std::uint64_t, Rational> vals{{5, Rational(1, 10)}};
    CHECK(*closed_form_exponent(ExponentKind::Tau, ApproxFunction::table(vals), Q) == 0.0);
}

TEST_CASE("bisection brackets the closed form") {
    const auto Q = IndexSet::all_naturals();
    for (double tau : {1.5, 3.0}) {
        const auto psi = ApproxFunction::power(tau);
        for (auto kind : {ExponentKind::Lambda, ExponentKind::Tau}) {
            const auto want = *closed_form_exponent(kind, psi, Q);
            const auto got = bisect_exponent(kind, psi, Q);
            CHECK(got.method == "bisection");
            CHECK(got.value == doctest::Approx(want).epsilon(2e-2));
            CHECK(got.lo <= want + 2e-2);
            CHECK(got.hi >= want - 2e-2);
        }
    }
    // the reciprocal tau-exponent 2/3, numerically
    const auto rec = bisect_exponent(ExponentKind::Tau, ApproxFunction::reciprocal(), Q);
    CHECK(rec.value == doctest::Approx(2.0 / 3.0).epsilon(2e-2));
}

TEST_CASE("series classification verdicts") {
    const auto psi = ApproxFunction::power(3.0);
    const auto Q = IndexSet::all_naturals();
    // lambda series: sum q^{-4s}; geometric blocks on either side of s = 1/4
    CHECK(classify_series(ExponentKind::Lambda, psi, Q, 0.5).verdict ==
          SeriesVerdict::Convergent);
    CHECK(classify_series(ExponentKind::Lambda, psi, Q, 0.2).verdict ==
          SeriesVerdict::Divergent);
    // just above the threshold the block sums decay, but slower than the
    // geometric ratio cutoff
    CHECK(classify_series(ExponentKind::Lambda, psi, Q, 0.255).verdict ==
          SeriesVerdict::SlowDecay);
}

TEST_CASE("block sums match direct partial sums") {
    const auto psi = ApproxFunction::power(2.0);
    const auto Q = IndexSet::all_naturals();
    SeriesConfig cfg;
    cfg.qmax = 1 << 10;
    const auto diag = classify_series(ExponentKind::Lambda, psi, Q, 0.4, cfg);
    REQUIRE(diag.block_sums.size() == 10);  // blocks [2^m, 2^{m+1}), m = 0..9
    double direct = 0.0;
    for (std::uint64_t q = 4; q < 8; ++q)
        direct += exponent_series_term(ExponentKind::Lambda, q, psi(q), 0.4);
    CHECK(diag.block_sums[2] == doctest::Approx(direct).epsilon(1e-13));
    CHECK(diag.block_sums[0] == 0.0);  // q = 1 is outside the trimmed support
}

TEST_CASE("dimension formulas for a convergent power law") {
    const auto out = dimension_formulas(ApproxFunction::power(3.0), IndexSet::all_naturals());
    CHECK(out.lambda == doctest::Approx(0.25));
    CHECK(out.tau == doctest::Approx(0.4));
    CHECK(out.d == doctest::Approx(0.5));
    CHECK(out.dimF_W == doctest::Approx(0.5));
    CHECK(out.dimF_M == doctest::Approx(0.8));
    CHECK(out.dimH_M == doctest::Approx(1.5));
    CHECK(out.salem_gap == doctest::Approx(0.7));
    CHECK(out.khintchine_convergent);
    CHECK(out.gallagher_convergent);
    CHECK(out.warning.empty());
}

TEST_CASE("dimension formulas flag the divergent reciprocal case") {
    const auto out = dimension_formulas(ApproxFunction::reciprocal(RangeUse::Multiplicative),
                                        IndexSet::all_naturals());
    CHECK(out.tau == doctest::Approx(2.0 / 3.0));
    CHECK(out.dimF_M == doctest::Approx(4.0 / 3.0));  // formula value, not the truth
    CHECK_FALSE(out.khintchine_convergent);
    CHECK_FALSE(out.gallagher_convergent);
    CHECK_FALSE(out.warning.empty());
}

TEST_CASE("weight-series partial sums approach frozen constants") {
    // psi(q) = q^{-3} over the trimmed support q >= 2:
    //   sum psi            = zeta(3) - 1
    //   sum psi log(1/psi) = -3 zeta'(3)
    const auto psi = ApproxFunction::power(3.0);
    const auto sums = gallagher_partial_sums(psi, IndexSet::all_naturals(), 100000);
    REQUIRE(!sums.khintchine.empty());
    REQUIRE(sums.q.front() == 1);
    CHECK(sums.khintchine.front() == 0.0);  // q = 1 is outside the trimmed support
    // tails past 1e5: about 1/(2 qmax^2) and (3 ln qmax + 3/2)/(2 qmax^2)
    CHECK(sums.khintchine.back() == doctest::Approx(0.2020569031595943).epsilon(1e-9));
    CHECK(sums.gallagher.back() == doctest::Approx(0.5943787286569106).epsilon(1e-8));
    // partial sums are nondecreasing
    for (std::size_t i = 1; i < sums.khintchine.size(); ++i) {
        CHECK(sums.khintchine[i] >= sums.khintchine[i - 1]);
        CHECK(sums.gallagher[i] >= sums.gallagher[i - 1]);
    }

    CHECK(classify_weight_series(psi, IndexSet::all_naturals(), true) ==
          SeriesVerdict::Convergent);
    CHECK(classify_weight_series(ApproxFunction::reciprocal(RangeUse::Multiplicative),
                                 IndexSet::all_naturals(), true) == SeriesVerdict::Divergent);
}

TEST_CASE("index set restriction changes the exponent budget, not the formulas") {
    // over the primes the tau series sum p^{-s(1 + tau/2)} still has closed
    // form threshold s (1 + tau/2) > 1
    const auto psi = ApproxFunction::power(2.0);
    CHECK(*closed_form_exponent(ExponentKind::Tau, psi, IndexSet::primes()) ==
          doctest::Approx(0.5));
    // explicit finite Q: exponent 0
    CHECK(*closed_form_exponent(ExponentKind::Tau, psi, IndexSet::explicit_set({2, 3, 5})) ==
          0.0);
}
