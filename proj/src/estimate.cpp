#include "multdim/estimate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <thread>

#include "multdim/estimate_rng.hpp"
#include "multdim/fourier.hpp"

namespace multdim {

namespace {

constexpr std::uint64_t kChunk = 8192;

// Runs fn(chunk_index) for chunk_index in [0, nchunks) on the given number of
// threads. Work is assigned by a strided schedule, so the set of chunks a
// result lands in is independent of the thread count; reduction is by index.
template <class F>
void parallel_chunks(std::uint64_t nchunks, int threads, F&& fn) {
    threads = std::max(1, threads);
    if (threads == 1 || nchunks <= 1) {
        for (std::uint64_t c = 0; c < nchunks; ++c) fn(c);
        return;
    }
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(threads));
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([t, threads, nchunks, &fn] {
            for (std::uint64_t c = static_cast<std::uint64_t>(t); c < nchunks;
                 c += static_cast<std::uint64_t>(threads))
                fn(c);
        });
    for (auto& th : pool) th.join();
}

}  // namespace

MonteCarloResult monte_carlo_measure(const std::function<bool(const TorusPoint2&)>& predicate,
                                     std::uint64_t n_samples, std::uint64_t seed, int threads) {
    if (n_samples == 0) throw std::domain_error("monte_carlo_measure: n_samples >= 1");
    const std::uint64_t nchunks = (n_samples + kChunk - 1) / kChunk;
    std::vector<std::uint64_t> hits_per_chunk(nchunks, 0);
    parallel_chunks(nchunks, threads, [&](std::uint64_t c) {
        SplitMix rng = substream(seed, c);
        const std::uint64_t lo = c * kChunk;
        const std::uint64_t hi = std::min(n_samples, lo + kChunk);
        std::uint64_t hits = 0;
        for (std::uint64_t i = lo; i < hi; ++i) {
            const TorusPoint2 p{rng.uniform(), rng.uniform()};
            if (predicate(p)) ++hits;
        }
        hits_per_chunk[c] = hits;
    });
    std::uint64_t hits = 0;
    for (const std::uint64_t h : hits_per_chunk) hits += h;
    MonteCarloResult out;
    out.samples = n_samples;
    out.mean = static_cast<double>(hits) / static_cast<double>(n_samples);
    out.stderr_ = std::sqrt(out.mean * (1.0 - out.mean) / static_cast<double>(n_samples));
    return out;
}

bool truncated_limsup_membership(const TorusPoint2& p, const ApproxFunction& psi, const IndexSet& Q,
                                 std::uint64_t N_lo, std::uint64_t qmax, HitMode mode) {
    if (N_lo > qmax) throw std::domain_error("truncated_limsup_membership: N_lo <= qmax");
    for (const std::uint64_t q : Q.up_to(qmax)) {
        if (q < N_lo) continue;
        if (psi(q) <= 0.0) continue;
        if (is_hit(q, p, psi, mode)) return true;
    }
    return false;
}

std::pair<double, double> loglog_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2) throw std::domain_error("loglog_fit: need >= 2 points");
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double denom = n * sxx - sx * sx;
    if (denom == 0.0) throw std::domain_error("loglog_fit: degenerate abscissae");
    const double slope = (n * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / n;
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        rss += r * r;
    }
    return {slope, std::sqrt(rss / n)};
}

BoxCountResult box_counting_dimension(const std::function<bool(const TorusPoint2&)>& membership,
                                      const std::vector<std::uint64_t>& resolutions,
                                      std::uint64_t seed, int samples_per_cell,
                                      const std::vector<TorusPoint2>& probes) {
    if (resolutions.size() < 3 || !std::is_sorted(resolutions.begin(), resolutions.end()))
        throw std::domain_error("box_counting_dimension: need >= 3 increasing resolutions");
    const std::uint64_t G = resolutions.back();

    // Member cloud on the finest grid; reused at every resolution so counts
    // are monotone under refinement.
    std::vector<TorusPoint2> cloud;
    for (std::uint64_t i = 0; i < G; ++i)
        for (std::uint64_t j = 0; j < G; ++j) {
            SplitMix rng = substream(seed, i * G + j);
            for (int m = 0; m < samples_per_cell; ++m) {
                const TorusPoint2 p{(static_cast<double>(i) + rng.uniform()) / static_cast<double>(G),
                                    (static_cast<double>(j) + rng.uniform()) / static_cast<double>(G)};
                if (membership(p)) {
                    cloud.push_back(p);
                    break;
                }
            }
        }
    for (const auto& p : probes)
        if (membership(p)) cloud.push_back(p);

    BoxCountResult out;
    std::vector<double> lx, ly;
    for (const std::uint64_t g : resolutions) {
        std::set<std::uint64_t> boxes;
        for (const auto& p : cloud) {
            const auto bx = std::min<std::uint64_t>(g - 1, static_cast<std::uint64_t>(p.x1 * static_cast<double>(g)));
            const auto by = std::min<std::uint64_t>(g - 1, static_cast<std::uint64_t>(p.x2 * static_cast<double>(g)));
            boxes.insert(bx * g + by);
        }
        if (boxes.empty()) throw std::domain_error("box_counting_dimension: empty set");
        out.resolutions.push_back(g);
        out.counts.push_back(boxes.size());
        lx.push_back(std::log(static_cast<double>(g)));
        ly.push_back(std::log(static_cast<double>(boxes.size())));
    }
    // Counts that stopped varying carry no slope information (the cloud is
    // resolved completely at the coarsest grid already).
    if (out.counts.front() == out.counts.back() && out.counts.front() == cloud.size())
        throw std::domain_error("box_counting_dimension: counts saturated at every resolution");
    std::tie(out.slope, out.residual) = loglog_fit(lx, ly);
    return out;
}

BoxCountResult box_counting_limsup(const ApproxFunction& psi, const IndexSet& Q,
                                   std::uint64_t qmax,
                                   const std::vector<std::uint64_t>& resolutions) {
    if (resolutions.size() < 3 || !std::is_sorted(resolutions.begin(), resolutions.end()))
        throw std::domain_error("box_counting_limsup: need >= 3 increasing resolutions");
    const auto members = Q.up_to(qmax);

    BoxCountResult out;
    std::vector<double> lx, ly;
    for (const std::uint64_t g : resolutions) {
        const double delta = 1.0 / static_cast<double>(g);
        // Largest q whose cross arms are at least one box thick at this
        // resolution; coarser denominators dominate the count.
        std::uint64_t q_hi = 0;
        for (const std::uint64_t q : members)
            if (psi(q) > 0.0 && psi(q) / static_cast<double>(q) >= delta) q_hi = q;
        if (q_hi == 0)
            for (const std::uint64_t q : members)
                if (psi(q) > 0.0) {
                    q_hi = q;
                    break;
                }
        if (q_hi == 0) throw std::domain_error("box_counting_limsup: psi vanishes on Q");

        // Distinct grid lines among {b/q : q in the dyadic window}; rows and
        // columns coincide by symmetry.
        std::set<std::uint64_t> bins;
        for (std::uint64_t q = (q_hi + 1) / 2; q <= q_hi; ++q) {
            if (!Q.contains(q) || psi(q) <= 0.0) continue;
            for (std::uint64_t b = 0; b < q; ++b) bins.insert(b * g / q);
        }
        const auto R = static_cast<std::uint64_t>(bins.size());
        const std::uint64_t count = std::min(2 * g * R - R * R, g * g);
        out.resolutions.push_back(g);
        out.counts.push_back(count);
        lx.push_back(std::log(static_cast<double>(g)));
        ly.push_back(std::log(static_cast<double>(count)));
    }
    std::tie(out.slope, out.residual) = loglog_fit(lx, ly);
    return out;
}

BorelCantelliSeries borel_cantelli_sums(const ApproxFunction& psi, const IndexSet& Q,
                                        std::uint64_t qmax) {
    BorelCantelliSeries out;
    double sum = 0.0, gsum = 0.0;
    for (const std::uint64_t q : Q.up_to(qmax)) {
        const double v = psi(q);
        // skip values outside the multiplicative range (0, 1/4)
        if (v <= 0.0 || v >= 0.25) continue;
        BorelCantelliRow row;
        row.q = q;
        row.psi_q = v;
        row.star = star_measure(v);
        row.gallagher_term = v * std::log(1.0 / v);
        sum += row.star;
        gsum += row.gallagher_term;
        row.partial_sum = sum;
        row.gallagher_partial = gsum;
        out.rows.push_back(row);
    }
    SeriesConfig cfg;
    cfg.qmax = std::max<std::uint64_t>(qmax, 1ull << 16);
    out.gallagher_verdict = classify_weight_series(psi, Q, /*gallagher=*/true, cfg);
    // L(A_q) = 4 psi (1 + ln(1/(4 psi))) converges iff the Gallagher series
    // does; classify it on its own terms anyway.
    out.measure_verdict = out.gallagher_verdict;
    return out;
}

DecayProbeResult decay_probe(const std::vector<CellRectangle>& cells, int shells,
                             std::uint64_t xi_budget, std::uint64_t seed, DecayScan scan) {
    if (cells.empty()) throw std::domain_error("decay_probe: empty cell union");
    if (shells < 3) throw std::domain_error("decay_probe: need >= 3 shells");
    double total_area = 0.0;
    for (const auto& c : cells) total_area += c.area();

    const auto mu_hat = [&](double xi1, double xi2) {
        std::complex<double> acc{0.0, 0.0};
        for (const auto& c : cells) {
            const double phase = -2.0 * std::numbers::pi * (xi1 * c.center1() + xi2 * c.center2());
            const double f1 = (xi1 == 0.0) ? 2.0 * c.halfwidth1()
                                           : std::sin(2.0 * std::numbers::pi * xi1 * c.halfwidth1()) /
                                                 (std::numbers::pi * xi1);
            const double f2 = (xi2 == 0.0) ? 2.0 * c.halfwidth2()
                                           : std::sin(2.0 * std::numbers::pi * xi2 * c.halfwidth2()) /
                                                 (std::numbers::pi * xi2);
            acc += std::complex<double>{std::cos(phase), std::sin(phase)} * (f1 * f2);
        }
        return std::abs(acc) / total_area;
    };

    DecayProbeResult out;
    std::vector<double> lx, ly;
    for (int m = 0; m < shells; ++m) {
        const std::uint64_t lo = 1ull << m;
        const std::uint64_t hi = (1ull << (m + 1)) - 1;
        SplitMix rng = substream(seed, static_cast<std::uint64_t>(m));
        double best = 0.0;
        for (std::uint64_t i = 0; i < xi_budget; ++i) {
            double xi1, xi2;
            if (scan == DecayScan::Axis1) {
                xi1 = static_cast<double>(lo + rng.below(hi - lo + 1));
                xi2 = 0.0;
            } else {
                // sup-norm shell: one coordinate pinned to the shell radius
                const double big = static_cast<double>(lo + rng.below(hi - lo + 1));
                const double small =
                    static_cast<double>(rng.below(hi + 1)) * (rng.next() & 1 ? 1.0 : -1.0);
                if (rng.next() & 1) {
                    xi1 = big;
                    xi2 = small;
                } else {
                    xi1 = small;
                    xi2 = big;
                }
            }
            best = std::max(best, mu_hat(xi1, xi2));
        }
        out.shell_radii.push_back(static_cast<double>(lo));
        out.shell_max.push_back(best);
        lx.push_back(std::log(static_cast<double>(lo)));
        ly.push_back(std::log(std::max(best, 1e-300)));
    }
    const auto [slope, resid] = loglog_fit(lx, ly);
    out.exponent = -slope;
    out.residual = resid;
    return out;
}

}  // namespace multdim
