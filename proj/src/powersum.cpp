#include "multdim/powersum.hpp"

#include <cmath>
#include <stdexcept>

namespace multdim::powersum {
namespace {

// Terms are summed directly below this index; Euler-Maclaurin takes over above.
constexpr std::uint64_t kDirect = 2048;

double term(double alpha, std::uint64_t k) {
    return std::exp(-alpha * std::log(static_cast<double>(k)));
}

// Kahan-compensated direct sum of k^{-alpha} over [lo, hi] (finite, small).
double direct_pow(double alpha, std::uint64_t lo, std::uint64_t hi) {
    double s = 0.0, comp = 0.0;
    for (std::uint64_t k = lo; k <= hi; ++k) {
        const double y = term(alpha, k) - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s;
}

double direct_pow_log(double alpha, std::uint64_t lo, std::uint64_t hi) {
    double s = 0.0, comp = 0.0;
    for (std::uint64_t k = lo; k <= hi; ++k) {
        const double lk = std::log(static_cast<double>(k));
        const double y = std::exp(-alpha * lk) * lk - comp;
        const double t = s + y;
        comp = (t - s) - y;
        s = t;
    }
    return s;
}

// Euler-Maclaurin for sum_{k=L}^{H} k^{-alpha}, valid for L >= kDirect.
// H == kInf requires alpha > 1.
double em_pow(double alpha, std::uint64_t L, std::uint64_t H) {
    const double a = alpha;
    const double xL = static_cast<double>(L);
    auto f = [a](double x) { return std::exp(-a * std::log(x)); };
    auto f1 = [a, &f](double x) { return -a * f(x) / x; };
    auto f3 = [a, &f](double x) { return -a * (a + 1.0) * (a + 2.0) * f(x) / (x * x * x); };
    auto f5 = [a, &f](double x) {
        return -a * (a + 1.0) * (a + 2.0) * (a + 3.0) * (a + 4.0) * f(x) / std::pow(x, 5.0);
    };

    double integral, boundary;
    if (H == kInf) {
        if (a <= 1.0) throw std::domain_error("pow_sum: divergent infinite sum");
        integral = std::exp((1.0 - a) * std::log(xL)) / (a - 1.0);
        boundary = 0.5 * f(xL) - f1(xL) / 12.0 + f3(xL) / 720.0 - f5(xL) / 30240.0;
    } else {
        const double xH = static_cast<double>(H);
        if (a == 1.0) {
            integral = std::log(xH / xL);
        } else {
            integral = (std::exp((1.0 - a) * std::log(xL)) - std::exp((1.0 - a) * std::log(xH))) /
                       (a - 1.0);
        }
        boundary = 0.5 * (f(xL) + f(xH)) + (f1(xH) - f1(xL)) / 12.0 - (f3(xH) - f3(xL)) / 720.0 +
                   (f5(xH) - f5(xL)) / 30240.0;
    }
    return integral + boundary;
}

// Euler-Maclaurin for sum_{k=L}^{H} k^{-alpha} ln k, L >= kDirect.
double em_pow_log(double alpha, std::uint64_t L, std::uint64_t H) {
    const double a = alpha;
    auto f = [a](double x) {
        const double lx = std::log(x);
        return std::exp(-a * lx) * lx;
    };
    auto f1 = [a](double x) {
        const double lx = std::log(x);
        return std::exp(-(a + 1.0) * lx) * (1.0 - a * lx);
    };
    auto f3 = [a](double x) {
        const double lx = std::log(x);
        return std::exp(-(a + 3.0) * lx) *
               (3.0 * a * a + 6.0 * a + 2.0 - a * (a + 1.0) * (a + 2.0) * lx);
    };
    auto antider = [a](double x) {
        // integral of t^{-a} ln t
        const double lx = std::log(x);
        if (a == 1.0) return 0.5 * lx * lx;
        const double u = 1.0 - a;
        return std::exp(u * lx) * (lx / u - 1.0 / (u * u));
    };

    const double xL = static_cast<double>(L);
    double integral, boundary;
    if (H == kInf) {
        if (a <= 1.0) throw std::domain_error("pow_log_sum: divergent infinite sum");
        integral = -antider(xL);
        boundary = 0.5 * f(xL) - f1(xL) / 12.0 + f3(xL) / 720.0;
    } else {
        const double xH = static_cast<double>(H);
        integral = antider(xH) - antider(xL);
        boundary = 0.5 * (f(xL) + f(xH)) + (f1(xH) - f1(xL)) / 12.0 - (f3(xH) - f3(xL)) / 720.0;
    }
    return integral + boundary;
}

// Expansion of the full prefix sum: sum_{k=1}^{K} k^{-a} = C(a) + E(a, K) for
// K >= kDirect, where E collects the Euler-Maclaurin boundary terms at K.
double prefix_expansion(double a, double x) {
    const double lx = std::log(x);
    const double head = (a == 1.0) ? lx : std::exp((1.0 - a) * lx) / (1.0 - a);
    const double fa = std::exp(-a * lx);
    return head + 0.5 * fa - a * fa / (12.0 * x) +
           a * (a + 1.0) * (a + 2.0) * fa / (720.0 * x * x * x);
}

double prefix_constant(double a) {
    const std::uint64_t anchor = kDirect;
    return direct_pow(a, 1, anchor) - prefix_expansion(a, static_cast<double>(anchor));
}

// sum_{k2=L}^{H} k2^{-c} * P(a, l1, k2) for L >= max(l1, 1). Direct below the
// cutoff with an incremental prefix, analytic expansion above it.
double coupled_sum(double c, double a, std::uint64_t l1, std::uint64_t L, std::uint64_t H) {
    if (L > H) return 0.0;
    double total = 0.0;

    // Direct part: k2 in [L, min(H, kDirect)].
    std::uint64_t direct_hi = (H == kInf) ? kDirect : std::min(H, kDirect);
    if (L <= direct_hi) {
        double prefix = (L >= l1) ? pow_sum(a, l1, L) : 0.0;
        double s = 0.0, comp = 0.0;
        for (std::uint64_t k2 = L;; ++k2) {
            const double y = term(c, k2) * prefix - comp;
            const double t = s + y;
            comp = (t - s) - y;
            s = t;
            if (k2 == direct_hi) break;
            prefix += term(a, k2 + 1);
        }
        total += s;
    }

    // Analytic part: k2 in [L2, H] with L2 > kDirect, so the prefix expansion
    // P(a, l1, k2) = D + E(a, k2) holds (k2 >= l1 is guaranteed since L >= l1).
    const std::uint64_t L2 = std::max(L, kDirect + 1);
    if (H == kInf || L2 <= H) {
        const double D = prefix_constant(a) - ((l1 <= 1) ? 0.0 : pow_sum(a, 1, l1 - 1));
        double s = D * pow_sum(c, L2, H);
        if (a == 1.0) {
            s += pow_log_sum(c, L2, H);
        } else {
            s += pow_sum(c + a - 1.0, L2, H) / (1.0 - a);
        }
        s += 0.5 * pow_sum(c + a, L2, H);
        s -= (a / 12.0) * pow_sum(c + a + 1.0, L2, H);
        s += (a * (a + 1.0) * (a + 2.0) / 720.0) * pow_sum(c + a + 3.0, L2, H);
        total += s;
    }
    return total;
}

}  // namespace

double pow_sum(double alpha, std::uint64_t lo, std::uint64_t hi) {
    if (lo == 0) throw std::domain_error("pow_sum: lo must be >= 1");
    if (hi != kInf && lo > hi) return 0.0;
    if (hi != kInf && hi <= 2 * kDirect) return direct_pow(alpha, lo, hi);
    if (lo > kDirect) return em_pow(alpha, lo, hi);
    return direct_pow(alpha, lo, kDirect) + em_pow(alpha, kDirect + 1, hi);
}

double pow_log_sum(double alpha, std::uint64_t lo, std::uint64_t hi) {
    if (lo == 0) throw std::domain_error("pow_log_sum: lo must be >= 1");
    if (hi != kInf && lo > hi) return 0.0;
    if (hi != kInf && hi <= 2 * kDirect) return direct_pow_log(alpha, lo, hi);
    if (lo > kDirect) return em_pow_log(alpha, lo, hi);
    return direct_pow_log(alpha, lo, kDirect) + em_pow_log(alpha, kDirect + 1, hi);
}

double tri_lower(double a, double c, std::uint64_t l1, std::uint64_t h1, std::uint64_t l2,
                 std::uint64_t h2) {
    if (l1 == 0 || l2 == 0) throw std::domain_error("tri_lower: indices start at 1");
    // Nonempty inner sum needs k2 >= l1.
    const std::uint64_t L = std::max(l2, l1);
    double total = 0.0;
    // Varying prefix: k2 in [L, min(h1, h2)].
    if (h1 == kInf) {
        total += coupled_sum(c, a, l1, L, h2);
    } else {
        if (L <= std::min(h1, h2)) total += coupled_sum(c, a, l1, L, std::min(h1, h2));
        // Saturated prefix: k2 in (h1, h2].
        const std::uint64_t Ls = std::max(l2, h1 + 1);
        if (h2 == kInf || Ls <= h2) total += pow_sum(a, l1, h1) * pow_sum(c, Ls, h2);
    }
    return total;
}

namespace {

// sum_{k2=L}^{H} k2^{-b} * T(d, k2), where T(d, k2) = sum_{k1 > k2} k1^{-d}.
// Needs d > 1; for H == kInf additionally b + d - 1 > 1.
double coupled_tail_sum(double b, double d, std::uint64_t L, std::uint64_t H) {
    if (H != kInf && L > H) return 0.0;
    double total = 0.0;
    const std::uint64_t direct_hi = (H == kInf) ? kDirect : std::min(H, kDirect);
    if (L <= direct_hi) {
        double s = 0.0, comp = 0.0;
        for (std::uint64_t k2 = L; k2 <= direct_hi; ++k2) {
            const double y = term(b, k2) * pow_sum(d, k2 + 1, kInf) - comp;
            const double t = s + y;
            comp = (t - s) - y;
            s = t;
        }
        total += s;
    }
    const std::uint64_t L2 = std::max(L, kDirect + 1);
    if (H == kInf || L2 <= H) {
        // T(d, k2) = k2^{1-d}/(d-1) - k2^{-d}/2 + d k2^{-d-1}/12 - ...
        total += pow_sum(b + d - 1.0, L2, H) / (d - 1.0);
        total -= 0.5 * pow_sum(b + d, L2, H);
        total += (d / 12.0) * pow_sum(b + d + 1.0, L2, H);
        total -= (d * (d + 1.0) * (d + 2.0) / 720.0) * pow_sum(b + d + 3.0, L2, H);
    }
    return total;
}

}  // namespace

double tri_upper(double d, double b, std::uint64_t l1, std::uint64_t h1, std::uint64_t l2,
                 std::uint64_t h2) {
    if (l1 == 0 || l2 == 0) throw std::domain_error("tri_upper: indices start at 1");
    const double full = pow_sum(d, l1, h1);
    double total = 0.0;
    // k2 < l1: the inner sum is the full range.
    if (l2 < l1) {
        const std::uint64_t hi = (h2 == kInf) ? l1 - 1 : std::min(h2, l1 - 1);
        if (l2 <= hi) total += full * pow_sum(b, l2, hi);
    }
    const std::uint64_t L = std::max(l2, l1);
    if (h1 == kInf) {
        // Inner sum is the tail beyond k2.
        total += coupled_tail_sum(b, d, L, h2);
    } else if (h1 >= l1 + 1) {
        // k2 in [l1, h1-1] (inner nonempty): full - P(d, l1, k2).
        const std::uint64_t H = (h2 == kInf) ? h1 - 1 : std::min(h2, h1 - 1);
        if (L <= H) {
            total += full * pow_sum(b, L, H);
            total -= coupled_sum(b, d, l1, L, H);
        }
    }
    return total;
}

}  // namespace multdim::powersum
