#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <vector>

namespace oracle {

// erf(x) = 2/sqrt(pi) exp(-x^2) sum_n 2^n x^(2n+1) / (1*3*...*(2n+1)); all terms positive.
inline long double erf_series(long double x) {
    if (x < 0) return -erf_series(-x);
    long double term = x;
    long double sum = x;
    for (int n = 1; n < 2000; ++n) {
        term *= 2.0L * x * x / (2.0L * n + 1.0L);
        sum += term;
        if (term < sum * 1e-21L) break;
    }
    return 2.0L / std::sqrt(3.14159265358979323846264338327950288L) * std::exp(-x * x) * sum;
}

// Upper tail 1 - Phi(x) for x >= 3 from the Laplace continued fraction (modified Lentz).
inline long double upper_tail_fraction(long double x) {
    const long double tiny = 1e-300L;
    long double f = x;
    long double c = x;
    long double d = 0.0L;
    for (int k = 1; k < 5000; ++k) {
        d = x + k * d;
        d = (d == 0.0L) ? tiny : 1.0L / d;
        c = x + k / c;
        if (c == 0.0L) c = tiny;
        const long double delta = c * d;
        f *= delta;
        if (std::fabs(delta - 1.0L) < 1e-20L) break;
    }
    const long double pdf =
        std::exp(-0.5L * x * x) / std::sqrt(2.0L * 3.14159265358979323846264338327950288L);
    return pdf / f;
}

inline double phi_cdf(double x) {
    if (x > 3.0) return static_cast<double>(1.0L - upper_tail_fraction(x));
    if (x < -3.0) return static_cast<double>(upper_tail_fraction(-x));
    return static_cast<double>(0.5L * (1.0L + erf_series(x / std::sqrt(2.0L))));
}

inline double phi_upper(double x) {
    if (x > 3.0) return static_cast<double>(upper_tail_fraction(x));
    return 1.0 - phi_cdf(x);
}

inline double quantile_by_bisection(double p) {
    double lo = -40.0, hi = 40.0;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        (phi_cdf(mid) < p ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

struct McEstimate {
    double value;
    double se;
};

inline McEstimate proportion(std::int64_t hits, std::int64_t draws) {
    const double p = static_cast<double>(hits) / draws;
    return {p, std::sqrt(p * (1.0 - p) / draws)};
}

// P(max_i Z_i > c), Z_i = sqrt(1 - l_i^2) W_i - l_i U0, by direct simulation.
inline McEstimate exceedance_mc(double c, std::span<const double> lambdas, std::int64_t draws,
                                std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::normal_distribution<double> normal;
    std::int64_t hits = 0;
    for (std::int64_t i = 0; i < draws; ++i) {
        const double u0 = normal(engine);
        bool exceeded = false;
        for (double l : lambdas) {
            const double z = std::sqrt(1.0 - l * l) * normal(engine) - l * u0;
            exceeded = exceeded || z > c;
        }
        hits += exceeded;
    }
    return proportion(hits, draws);
}

}  // namespace oracle
