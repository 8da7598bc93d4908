#include <doctest.h>

#include <cmath>

#include "multdim/estimate_rng.hpp"
#include "multdim/geometry.hpp"

using namespace multdim;

namespace {

// Quadrature oracle for the area of { ||q x1|| ||q x2|| < psi }: by the
// folding x -> qx the area is 4 * integral over t in (0, 1/2) of
// min(1/2, psi/t) dt; the integrand is constant on [0, 2 psi] and smooth
// beyond it, where Simpson applies.
double quad_star_measure(double psi, int panels = 200000) {
    const double lo = 2.0 * psi, hi = 0.5;
    const double h = (hi - lo) / panels;
    auto f = [&](double t) { return psi / t; };
    double s = f(lo) + f(hi);
    for (int i = 1; i < panels; ++i) s += (i % 2 ? 4.0 : 2.0) * f(lo + i * h);
    return 4.0 * (0.5 * 2.0 * psi + s * h / 3.0);
}

}  // namespace

TEST_CASE("star measure: closed form vs quadrature") {
    for (double psi : {1.0 / 8.0, 1.0 / 100.0, 1.0 / 4096.0}) {
        CHECK(star_measure(psi) == doctest::Approx(quad_star_measure(psi)).epsilon(1e-9));
    }
    // frozen value at psi = 4^{-3}
    CHECK(star_measure(std::pow(4.0, -3.0)) ==
          doctest::Approx(0.23578679513998632).epsilon(1e-15));
    // admissible range is the open interval (0, 1/4)
    CHECK_THROWS_AS(star_measure(0.0), std::domain_error);
    CHECK_THROWS_AS(star_measure(0.25), std::domain_error);
}

TEST_CASE("star domain membership is independent of q in measure") {
    // folding is measure preserving: containment statistics for q = 2 and
    // q = 1000 agree with the closed form
    const double psi = 1.0 / 64.0;
    const double closed = star_measure(psi);
    for (std::uint64_t q : {2ull, 1000ull}) {
        const StarDomain dom{q, psi};
        SplitMix rng = substream(17, q);
        const int n = 200000;
        int hits = 0;
        for (int i = 0; i < n; ++i) {
            const TorusPoint2 p{rng.uniform(), rng.uniform()};
            if (dom.contains(p)) ++hits;
        }
        const double mean = static_cast<double>(hits) / n;
        const double sigma = std::sqrt(closed * (1.0 - closed) / n);
        CHECK(std::abs(mean - closed) < 4.0 * sigma);
    }
}

TEST_CASE("dyadic index range endpoints") {
    // q = 8, psi = 2^{-9}: 2q = 16 <= 2^j <= q/psi = 4096
    const auto r = dyadic_index_range(8, std::ldexp(1.0, -9));
    CHECK(r.j_lo == 4);
    CHECK(r.j_hi == 12);
    CHECK(r.size() == 9);
    CHECK(r.levels().front() == 4);
    CHECK(r.levels().back() == 12);
    CHECK(r.contains(4));
    CHECK_FALSE(r.contains(13));
    // nonempty whenever 0 < psi < 1/4
    for (std::uint64_t q : {2ull, 3ull, 97ull}) {
        const auto rr = dyadic_index_range(q, 0.2499);
        CHECK(rr.size() >= 1);
    }
}

TEST_CASE("cell geometry: halfwidths, area, and level bounds") {
    const std::uint64_t q = 8;
    const double psi = std::ldexp(1.0, -9);
    const auto range = dyadic_index_range(q, psi);
    for (int j : range.levels()) {
        const DyadicRectangleFamily fam{q, j, psi};
        CHECK(fam.cap1() == doctest::Approx(8.0 * std::ldexp(1.0, -(j - 1))));
        CHECK(fam.cap2() == doctest::Approx(psi / (8.0 * std::ldexp(1.0, -j))));
        CHECK(fam.cell_halfwidth1() == doctest::Approx(std::ldexp(1.0, -(j - 1))));
        CHECK(fam.cell_halfwidth2() == doctest::Approx(psi / (64.0 * std::ldexp(1.0, -j))));
        // per-cell area 2h1 * 2h2 = 8 psi / q^2, independent of j
        CHECK(cell_measure(q, j, psi) == doctest::Approx(8.0 * psi / 64.0).epsilon(1e-14));
        const CellRectangle cell{q, j, psi, 3, 5};
        CHECK(cell.area() == doctest::Approx(4.0 * cell.halfwidth1() * cell.halfwidth2()));
        CHECK(cell.contains(TorusPoint2{cell.center1(), cell.center2()}));
    }
    CHECK_THROWS_AS(cell_measure(q, range.j_lo - 1, psi), std::out_of_range);
    CHECK_THROWS_AS(cell_measure(q, range.j_hi + 1, psi), std::out_of_range);
    CHECK(static_cast<int>(covering_family(q, psi).size()) == range.size());
}

TEST_CASE("cell containment respects torus wraparound") {
    // cell centered at 0 reaches across the origin
    const std::uint64_t q = 4;
    const double psi = 1.0 / 256.0;
    const int j = dyadic_index_range(q, psi).j_lo;
    const CellRectangle cell{q, j, psi, 0, 0};
    const double h1 = cell.halfwidth1();
    CHECK(cell.contains(TorusPoint2{1.0 - 0.5 * h1, 0.0}));
    CHECK_FALSE(cell.contains(TorusPoint2{0.5, 0.0}));
}

TEST_CASE("star domain samples are members") {
    for (std::uint64_t q : {2ull, 17ull}) {
        const double psi = 1.0 / 32.0;
        const StarDomain dom{q, psi};
        SplitMix rng = substream(5, q);
        for (int i = 0; i < 20000; ++i) {
            const TorusPoint2 p = sample_star_domain(q, psi, rng);
            CHECK(dom.contains(p));
        }
    }
}

TEST_CASE("dyadic covering captures the sampled star domain") {
    for (std::uint64_t q : {3ull, 17ull}) {
        const double psi = 1.0 / (static_cast<double>(q) * static_cast<double>(q));
        const auto res = cover_check(q, psi, 20000, 42);
        CHECK(res.samples == 20000);
        CHECK(res.covered == res.samples);
        CHECK(res.escaped == 0);
    }
}
