#include <doctest.h>

#include <cmath>
#include <map>

#include <nlohmann/json.hpp>

#include "multdim/approx.hpp"
#include "multdim/rational.hpp"

using namespace multdim;

TEST_CASE("power-law psi: values, exact path, support trimming") {
    const auto psi = ApproxFunction::power(3.0);
    CHECK(psi.use() == RangeUse::Multiplicative);
    CHECK(psi.tau() == 3.0);
    CHECK(psi(2) == doctest::Approx(0.125));
    CHECK(psi(10) == doctest::Approx(1e-3));
    // q = 1 gives the raw value 1, outside [0, 1/4): trimmed to 0
    CHECK(psi.support_min() == 2);
    CHECK(psi(1) == 0.0);
    CHECK(psi.raw(1) == 1.0);
    CHECK_THROWS_AS(psi_eval_checked(psi, 1), std::domain_error);
    CHECK(psi_eval_checked(psi, 2) == doctest::Approx(0.125));
    // integer exponent: exact rational values
    REQUIRE(psi.exact(2).has_value());
    CHECK(*psi.exact(2) == Rational(1, 8));
    CHECK(*psi.exact(1) == Rational(0));
    CHECK_FALSE(ApproxFunction::power(1.5).exact(2).has_value());
}

TEST_CASE("reciprocal psi: support depends on the intended range") {
    const auto lin = ApproxFunction::reciprocal(RangeUse::Linear);
    CHECK(lin.support_min() == 3);  // 1/2 is not strictly below the cap 1/2
    CHECK(lin(2) == 0.0);
    CHECK(lin(3) == doctest::Approx(1.0 / 3.0));
    CHECK(*lin.exact(5) == Rational(1, 5));

    const auto mult = ApproxFunction::reciprocal(RangeUse::Multiplicative);
    CHECK(mult.support_min() == 5);  // first q with 1/q < 1/4
    CHECK(mult(4) == 0.0);
    CHECK(mult(5) == doctest::Approx(0.2));
    // the strict evaluator refuses 1/4 against the multiplicative cap
    CHECK_THROWS_AS(psi_eval_checked(mult, 4), std::domain_error);
    CHECK_THROWS_AS(psi_eval_checked(mult, 3), std::domain_error);
    CHECK(psi_eval_checked(mult, 5) == doctest::Approx(0.2));
}

TEST_CASE("table psi: exact values, cap validation, JSON round trip") {
    std::map<std::uint64_t, Rational> vals{{3, Rational(1, 10)}, {8, Rational(1, 100)}};
    const auto psi = ApproxFunction::table(vals);
    CHECK(psi.finite_support());
    CHECK(psi(3) == doctest::Approx(0.1));
    CHECK(psi(4) == 0.0);
    CHECK(*psi.exact(8) == Rational(1, 100));
    CHECK(*psi.exact(9) == Rational(0));

    // a value at the cap is rejected outright
    std::map<std::uint64_t, Rational> bad{{2, Rational(1, 4)}};
    CHECK_THROWS_AS(ApproxFunction::table(bad), std::domain_error);
    std::map<std::uint64_t, Rational> bad_lin{{2, Rational(1, 2)}};
    CHECK_THROWS_AS(ApproxFunction::table(bad_lin, RangeUse::Linear), std::domain_error);

    const auto back = ApproxFunction::from_json(psi.to_json());
    CHECK(back.kind() == ApproxFunction::Kind::Table);
    CHECK(back.use() == psi.use());
    CHECK(*back.exact(3) == Rational(1, 10));
    CHECK(*back.exact(8) == Rational(1, 100));
}

TEST_CASE("psi JSON round trips for analytic kinds") {
    for (const auto& psi : {ApproxFunction::power(2.5, RangeUse::Linear),
                            ApproxFunction::power(3.0),
                            ApproxFunction::reciprocal()}) {
        const auto back = ApproxFunction::from_json(psi.to_json());
        CHECK(back.kind() == psi.kind());
        CHECK(back.use() == psi.use());
        for (std::uint64_t q : {1ull, 2ull, 7ull, 1000ull}) CHECK(back(q) == psi(q));
    }
}

TEST_CASE("sqrt halves the decay exponent") {
    const auto psi = ApproxFunction::power(3.0);
    const auto root = psi.sqrt();
    CHECK(root.use() == RangeUse::Linear);
    CHECK(root.tau() == doctest::Approx(1.5));
    for (std::uint64_t q : {2ull, 9ull, 50ull})
        CHECK(root(q) == doctest::Approx(std::sqrt(psi.raw(q))));
    const auto rec_root = ApproxFunction::reciprocal().sqrt();
    CHECK(rec_root.tau() == doctest::Approx(0.5));

    std::map<std::uint64_t, Rational> vals{{4, Rational(1, 16)}, {9, Rational(1, 81)}};
    const auto table_root = ApproxFunction::table(vals).sqrt();
    CHECK(table_root(4) == doctest::Approx(0.25));
    CHECK(table_root(9) == doctest::Approx(1.0 / 9.0));
}

TEST_CASE("index sets: membership, enumeration, JSON round trip") {
    const auto primes = IndexSet::primes();
    CHECK(primes.up_to(20) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19});
    CHECK(primes.contains(97));
    CHECK_FALSE(primes.contains(91));  // 7 * 13

    const auto nat = IndexSet::all_naturals();
    CHECK(nat.up_to(4) == std::vector<std::uint64_t>{1, 2, 3, 4});

    const auto odd = IndexSet::stride(3, 2);
    CHECK(odd.up_to(10) == std::vector<std::uint64_t>{3, 5, 7, 9});
    CHECK(odd.contains(9));
    CHECK_FALSE(odd.contains(8));

    const auto expl = IndexSet::explicit_set({10, 2, 7, 2});
    CHECK(expl.up_to(100) == std::vector<std::uint64_t>{2, 7, 10});
    CHECK(expl.up_to(7) == std::vector<std::uint64_t>{2, 7});

    for (const auto& s : {primes, nat, odd, expl}) {
        const auto back = IndexSet::from_json(s.to_json());
        CHECK(back.kind() == s.kind());
        CHECK(back.up_to(50) == s.up_to(50));
    }
}

TEST_CASE("rational serialization round trips") {
    for (const char* s : {"1/3", "-3/7", "0", "12345678901234567890/7", "2"}) {
        const Rational r = rational_from_string(s);
        CHECK(rational_from_string(rational_to_string(r)) == r);
    }
    CHECK(rational_to_string(Rational(2, 4)) == "1/2");
    CHECK(rational_to_string(Rational(5)) == "5/1");
    CHECK(rational_from_string("4/6") == Rational(2, 3));
    CHECK_THROWS_AS(rational_from_string("a/b"), std::invalid_argument);
    CHECK_THROWS_AS(rational_from_string("1/0"), std::invalid_argument);
}

TEST_CASE("exact distance-to-integers helpers") {
    CHECK(nearest_integer_distance(Rational(7, 3)) == Rational(1, 3));
    CHECK(nearest_integer_distance(Rational(-1, 4)) == Rational(1, 4));
    CHECK(nearest_integer_distance(Rational(1, 2)) == Rational(1, 2));
    CHECK(nearest_integer_distance(Rational(5)) == Rational(0));
    CHECK(nearest_integer_distance(2.25) == doctest::Approx(0.25));
    CHECK(nearest_integer_distance(-0.1) == doctest::Approx(0.1));
    CHECK(rational_mod1(Rational(-1, 3)) == Rational(2, 3));
}

TEST_CASE("multiplicative and linear hit predicates") {
    const auto psi = ApproxFunction::power(3.0);
    // x = (1/3, 1/2): ||3 x1|| = 0, so the product is 0 < psi(3)
    const TorusPoint2 p{Rational(1, 3), Rational(1, 2)};
    CHECK(is_hit(3, p, psi));
    // exact non-hit: x = (1/3 + 1/9, 1/2); ||3 x1|| = 1/3, ||3 x2|| = 1/2,
    // product 1/6 >= 1/27
    const TorusPoint2 miss{Rational(4, 9), Rational(1, 2)};
    CHECK_FALSE(is_hit(3, miss, psi));

    // linear mode ignores the second coordinate
    const auto lin = ApproxFunction::reciprocal(RangeUse::Linear);
    const TorusPoint2 lp{Rational(1, 5), Rational(1, 2)};
    CHECK(is_hit(5, lp, lin, HitMode::Linear));

    // exact boundary: ||q x1|| ||q x2|| == psi(q) is not a hit
    std::map<std::uint64_t, Rational> vals{{2, Rational(1, 16)}};
    const auto tab = ApproxFunction::table(vals);
    const TorusPoint2 edge{Rational(1, 8), Rational(1, 4)};  // ||2x1||=1/4, ||2x2||=1/2 -> 1/8
    CHECK_FALSE(is_hit(2, edge, tab));
    const TorusPoint2 just_in{Rational(1, 8), Rational(1, 8)};  // 1/4 * 1/4 = 1/16
    CHECK_FALSE(is_hit(2, just_in, tab));
    const TorusPoint2 strict{Rational(1, 16), Rational(1, 8)};  // 1/8 * 1/4 = 1/32 < 1/16
    CHECK(is_hit(2, strict, tab));
}

TEST_CASE("hit_count agrees with a manual scan") {
    const auto psi = ApproxFunction::power(3.0);
    const auto Q = IndexSet::all_naturals();
    const TorusPoint2 p{0.3137515, 0.7182818};
    std::uint64_t manual = 0;
    for (std::uint64_t q = 1; q <= 500; ++q)
        if (is_hit(q, p, psi)) ++manual;
    CHECK(hit_count(p, psi, Q, 500) == manual);
    // restricted to primes the count can only drop
    CHECK(hit_count(p, psi, IndexSet::primes(), 500) <= manual);
}

TEST_CASE("prime helpers") {
    CHECK(primes_up_to(20) == std::vector<std::uint64_t>{2, 3, 5, 7, 11, 13, 17, 19});
    CHECK(primes_up_to(1) == std::vector<std::uint64_t>{});
    CHECK(is_prime_u64(2));
    CHECK(is_prime_u64(9999999967ull));
    CHECK_FALSE(is_prime_u64(1));
    CHECK_FALSE(is_prime_u64(9999999967ull * 3));
}
