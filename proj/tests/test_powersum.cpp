#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <tuple>
#include <utility>

#include "multdim/powersum.hpp"

using namespace multdim::powersum;

namespace {

double brute_pow(double a, std::uint64_t lo, std::uint64_t hi) {
    double s = 0.0;
    for (std::uint64_t k = hi; k >= lo && k > 0; --k) s += std::pow(static_cast<double>(k), -a);
    return s;
}

double brute_pow_log(double a, std::uint64_t lo, std::uint64_t hi) {
    double s = 0.0;
    for (std::uint64_t k = hi; k >= lo && k > 0; --k)
        s += std::pow(static_cast<double>(k), -a) * std::log(static_cast<double>(k));
    return s;
}

double brute_tri_lower(double a, double c, std::uint64_t l1, std::uint64_t h1, std::uint64_t l2,
                       std::uint64_t h2) {
    double s = 0.0;
    for (std::uint64_t k2 = l2; k2 <= h2; ++k2) {
        const std::uint64_t top = std::min(h1, k2);
        double inner = 0.0;
        for (std::uint64_t k1 = l1; k1 <= top; ++k1) inner += std::pow(static_cast<double>(k1), -a);
        s += std::pow(static_cast<double>(k2), -c) * inner;
    }
    return s;
}

double brute_tri_upper(double d, double b, std::uint64_t l1, std::uint64_t h1, std::uint64_t l2,
                       std::uint64_t h2) {
    double s = 0.0;
    for (std::uint64_t k2 = l2; k2 <= h2; ++k2) {
        double inner = 0.0;
        for (std::uint64_t k1 = std::max(l1, k2 + 1); k1 <= h1; ++k1)
            inner += std::pow(static_cast<double>(k1), -d);
        s += std::pow(static_cast<double>(k2), -b) * inner;
    }
    return s;
}

}  // namespace

TEST_CASE("pow_sum matches direct summation across the direct/analytic cutoff") {
    for (double a : {0.0, 0.3, 1.0, 1.7}) {
        for (auto [lo, hi] : {std::pair<std::uint64_t, std::uint64_t>{1, 100},
                              {7, 5000},
                              {3000, 9000},
                              {5000, 5000}}) {
            const double got = pow_sum(a, lo, hi);
            const double want = brute_pow(a, lo, hi);
            CHECK(got == doctest::Approx(want).epsilon(1e-12));
        }
    }
}

TEST_CASE("pow_log_sum matches direct summation") {
    for (double a : {0.4, 1.0, 1.6}) {
        for (auto [lo, hi] :
             {std::pair<std::uint64_t, std::uint64_t>{1, 200}, {9, 4000}, {2500, 7000}}) {
            const double got = pow_log_sum(a, lo, hi);
            const double want = brute_pow_log(a, lo, hi);
            CHECK(got == doctest::Approx(want).epsilon(1e-11));
        }
    }
}

TEST_CASE("infinite-tail power sums hit known zeta values") {
    // frozen: zeta(2) = pi^2/6, zeta(1.5), and sum ln(k)/k^2 = -zeta'(2)
    CHECK(pow_sum(2.0, 1, kInf) == doctest::Approx(1.6449340668482264).epsilon(1e-13));
    CHECK(pow_sum(1.5, 1, kInf) == doctest::Approx(2.6123753486854883).epsilon(1e-13));
    CHECK(pow_log_sum(2.0, 1, kInf) == doctest::Approx(0.9375482543158438).epsilon(1e-12));
    // tail consistency: full = head + tail
    const double full = pow_sum(1.5, 1, kInf);
    CHECK(full == doctest::Approx(pow_sum(1.5, 1, 12345) + pow_sum(1.5, 12346, kInf))
                      .epsilon(1e-13));
    CHECK_THROWS_AS(pow_sum(0.8, 1, kInf), std::domain_error);
}

TEST_CASE("partial power sums obey the standard envelope inequalities") {
    // sum_{k<=xi} k^{-s} <= (1 + 1/(1-s)) xi^{1-s} and
    // sum_{k>xi} k^{-(1+s)} <= (1/s) xi^{-s} (integral comparison)
    for (double s : {0.3, 0.5, 0.9}) {
        for (std::uint64_t xi : {std::uint64_t{10}, std::uint64_t{1000}, std::uint64_t{100000}}) {
            const double head = pow_sum(s, 1, xi);
            const double cap = (1.0 + 1.0 / (1.0 - s)) * std::pow(static_cast<double>(xi), 1.0 - s);
            CHECK(head <= cap);
            const double tail = pow_sum(1.0 + s, xi + 1, kInf);
            CHECK(tail <= std::pow(static_cast<double>(xi), -s) / s);
        }
    }
}

TEST_CASE("a small power of 1/psi eventually dominates log(1/psi)") {
    auto dominated = [](double psi, double eps) {
        return std::pow(1.0 / psi, eps) > std::log(1.0 / psi);
    };
    // at eps = 0.05 the crossover sits near 1/psi ~ e^20; far below it the
    // power loses, far above it wins for good
    CHECK_FALSE(dominated(1e-9, 0.05));
    CHECK(dominated(1e-40, 0.05));
    CHECK(dominated(1e-60, 0.05));
    CHECK(dominated(1e-300, 0.05));
}

TEST_CASE("tri_lower matches brute force on mixed finite ranges") {
    struct Case {
        double a, c;
        std::uint64_t l1, h1, l2, h2;
    };
    for (const Case& t : {Case{0.4, 1.3, 1, 6000, 1, 5000},
                          Case{0.4, 1.3, 3, 50, 10, 7000},
                          Case{1.0, 1.5, 1, 4000, 2, 3000},
                          Case{0.0, 2.0, 5, 100, 1, 4000}}) {
        const double got = tri_lower(t.a, t.c, t.l1, t.h1, t.l2, t.h2);
        const double want = brute_tri_lower(t.a, t.c, t.l1, t.h1, t.l2, t.h2);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("tri_upper matches brute force on mixed finite ranges") {
    struct Case {
        double d, b;
        std::uint64_t l1, h1, l2, h2;
    };
    for (const Case& t : {Case{1.3, 0.4, 1, 6000, 1, 5000},
                          Case{1.3, 0.4, 7, 3000, 2, 2500},
                          Case{1.7, 1.2, 1, 5000, 1, 5000},
                          Case{2.0, 0.0, 10, 800, 1, 1200}}) {
        const double got = tri_upper(t.d, t.b, t.l1, t.h1, t.l2, t.h2);
        const double want = brute_tri_upper(t.d, t.b, t.l1, t.h1, t.l2, t.h2);
        CHECK(got == doctest::Approx(want).epsilon(1e-10));
    }
}

TEST_CASE("tri sums with infinite inner limits agree with per-row tail sums") {
    // h1 = inf, finite h2: tri_lower's min(h1, k2) saturates at k2, so a brute
    // loop suffices; tri_upper's inner suffix is a one-dimensional tail
    const double low = tri_lower(0.5, 1.8, 1, kInf, 1, 5000);
    CHECK(low == doctest::Approx(brute_tri_lower(0.5, 1.8, 1, 5000, 1, 5000)).epsilon(1e-10));

    double rows = 0.0;
    for (std::uint64_t k2 = 1; k2 <= 3000; ++k2)
        rows += std::pow(static_cast<double>(k2), -0.7) * pow_sum(1.6, k2 + 1, kInf);
    CHECK(tri_upper(1.6, 0.7, 1, kInf, 1, 3000) == doctest::Approx(rows).epsilon(1e-10));
}

TEST_CASE("lower and upper triangles tile the full product") {
    // sum_{k1 <= k2} + sum_{k1 > k2} of k1^{-a} k2^{-c} over [l, inf)^2
    for (auto [a, c, l] : {std::make_tuple(1.4, 1.6, std::uint64_t{3}),
                           std::make_tuple(1.2, 2.3, std::uint64_t{1}),
                           std::make_tuple(1.9, 1.1, std::uint64_t{7})}) {
        const double tiles = tri_lower(a, c, l, kInf, l, kInf) + tri_upper(a, c, l, kInf, l, kInf);
        const double product = pow_sum(a, l, kInf) * pow_sum(c, l, kInf);
        CHECK(tiles == doctest::Approx(product).epsilon(1e-10));
    }
}
