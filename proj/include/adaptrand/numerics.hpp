#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "adaptrand/error.hpp"

namespace adaptrand::numerics {

inline constexpr double kSqrt2 = 1.41421356237309504880;
inline constexpr double kInvSqrt2Pi = 0.39894228040143267794;

/// Beyond this magnitude the normal CDF is returned as exactly 0 or 1.
inline constexpr double kSaturation = 40.0;

/// Standard normal density.
double normal_pdf(double x);

/// Standard normal CDF, accurate to ~1 ulp away from the saturated tails.
double normal_cdf(double x);

/// Upper tail 1 - Phi(x) without cancellation for large x.
double normal_upper_tail(double x);

/// Inverse of normal_cdf on (0, 1). Throws DomainError outside (0, 1).
double normal_quantile(double p);

enum class QuadratureKind { gauss_hermite, adaptive_interval };

/*
 * Nodes and weights of a quadrature rule. Gauss-Hermite rules are for the
 * weight exp(-x^2); nodes whose weight underflows to zero are omitted, so a
 * rule may hold slightly fewer than its nominal order.
 */
struct QuadratureRule {
    std::vector<double> nodes;
    std::vector<double> weights;
    QuadratureKind kind = QuadratureKind::gauss_hermite;
    int order = 0;
};

/// Builds the n-point Gauss-Hermite rule (Golub-Welsch nodes, Newton polish).
QuadratureRule make_gauss_hermite_rule(int n);

/// Largest rule used by the node-doubling integrator.
inline constexpr int kMaxHermiteNodes = 1024;

/// Cached rules of order 8, 16, ..., kMaxHermiteNodes. Thread-safe.
std::span<const QuadratureRule> hermite_rule_ladder();

namespace detail {
[[noreturn]] void throw_not_converged(double tol, double last_change);
}

/*
 * Integral of phi(u) f(u) over the real line, phi the standard normal
 * density. Rules are doubled until two consecutive refinements each change
 * the estimate by less than tol; the finest estimate is returned.
 */
template <class F>
double integrate_weighted_normal(F&& f, double tol) {
    const auto ladder = hermite_rule_ladder();
    double previous = 0.0;
    double change = 0.0;
    int settled = 0;
    for (std::size_t level = 0; level < ladder.size(); ++level) {
        const QuadratureRule& rule = ladder[level];
        double sum = 0.0;
        for (std::size_t i = 0; i < rule.nodes.size(); ++i)
            sum += rule.weights[i] * f(kSqrt2 * rule.nodes[i]);
        const double estimate = sum / 1.77245385090551602730;  // sqrt(pi)
        if (level > 0) {
            change = std::abs(estimate - previous);
            settled = change < tol ? settled + 1 : 0;
            if (settled == 2) return estimate;
        }
        previous = estimate;
    }
    detail::throw_not_converged(tol, change);
}

/// Adaptive Gauss-Kronrod integral of f over [a, b] to absolute tolerance tol.
double integrate_interval(const std::function<double(double)>& f, double a,
                          double b, double tol);

/*
 * P(max_i Z_i > c) where the Z_i are unit normals with Cov(Z_i, Z_j) =
 * lambda_i lambda_j, the correlation structure of many-to-one comparisons
 * that share one control arm. Each lambda must lie in (0, 1).
 */
double mvn_common_control_exceedance(double c, std::span<const double> lambdas);

/// Integration tolerance used by mvn_common_control_exceedance.
inline constexpr double kExceedanceTolerance = 1e-10;

}  // namespace adaptrand::numerics
