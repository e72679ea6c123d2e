#include "adaptrand/numerics.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <array>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <limits>
#include <sstream>

namespace adaptrand::numerics {

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

double normal_cdf(double x) {
    if (x <= -kSaturation) return 0.0;
    if (x >= kSaturation) return 1.0;
    return 0.5 * std::erfc(-x / kSqrt2);
}

double normal_upper_tail(double x) {
    if (x >= kSaturation) return 0.0;
    if (x <= -kSaturation) return 1.0;
    return 0.5 * std::erfc(x / kSqrt2);
}

namespace {

// Rational approximation of the normal quantile (P. J. Acklam), relative
// error about 1e-9; used only as the starting point for Halley refinement.
double quantile_initial_guess(double p) {
    static constexpr std::array<double, 6> a{
        -3.969683028665376e+01, 2.209460984245205e+02, -2.759285104469687e+02,
        1.383577518672690e+02,  -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b{
        -5.447609879822406e+01, 1.615858368580409e+02, -1.556989798598866e+02,
        6.680131188771972e+01, -1.328068155288572e+01};
    static constexpr std::array<double, 6> c{
        -7.784894002430293e-03, -3.223964580411365e-01, -2.400758277161838e+00,
        -2.549732539343734e+00, 4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d{
        7.784695709041462e-03, 3.224671290700398e-01, 2.445134137142996e+00,
        3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    if (p < p_low) {
        const double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
                c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - p_low) {
        const double q = std::sqrt(-2.0 * std::log1p(-p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q +
                 c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    const double q = p - 0.5;
    const double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r +
            a[5]) *
           q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        std::ostringstream msg;
        msg << "normal_quantile: p = " << p << " is outside (0, 1)";
        throw DomainError(msg.str());
    }
    if (p == 0.5) return 0.0;
    double x = quantile_initial_guess(p);
    // Halley steps; the residual is taken on the smaller tail to avoid
    // cancellation near p = 1.
    for (int iter = 0; iter < 3; ++iter) {
        const double residual = (p < 0.5) ? normal_cdf(x) - p
                                          : (1.0 - p) - normal_upper_tail(x);
        const double density = normal_pdf(x);
        if (density == 0.0) break;
        const double u = residual / density;
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

namespace {

struct ScaledHermite {
    double p_n;        // orthonormal p_n(x), up to the common scale
    double p_nm1;      // p_{n-1}(x), same scale
    double log_sum_sq; // log of sum_{k<n} p_k(x)^2, unscaled
};

// Orthonormal Hermite recurrence (weight exp(-x^2)) with periodic
// rescaling so n = 1024 stays inside double range.
ScaledHermite evaluate_orthonormal_hermite(int n, double x) {
    double p_prev = 0.0;
    double p_curr = std::pow(M_PI, -0.25);
    double log_scale = 0.0;
    double sum_sq = 0.0;
    for (int k = 0; k < n; ++k) {
        sum_sq += p_curr * p_curr;
        const double p_next = x * std::sqrt(2.0 / (k + 1)) * p_curr -
                              std::sqrt(static_cast<double>(k) / (k + 1)) * p_prev;
        p_prev = p_curr;
        p_curr = p_next;
        const double magnitude = std::abs(p_curr);
        if (magnitude > 1e100) {
            p_prev /= magnitude;
            p_curr /= magnitude;
            sum_sq /= magnitude * magnitude;
            log_scale += std::log(magnitude);
        }
    }
    return {p_curr, p_prev, std::log(sum_sq) + 2.0 * log_scale};
}

}  // namespace

QuadratureRule make_gauss_hermite_rule(int n) {
    if (n < 1 || n > kMaxHermiteNodes) {
        throw DomainError("make_gauss_hermite_rule: order must be in [1, " +
                          std::to_string(kMaxHermiteNodes) + "]");
    }
    Eigen::VectorXd diagonal = Eigen::VectorXd::Zero(n);
    Eigen::VectorXd off_diagonal(std::max(n - 1, 0));
    for (int k = 1; k < n; ++k) off_diagonal[k - 1] = std::sqrt(0.5 * k);

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diagonal, off_diagonal, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success)
        throw ConvergenceError("make_gauss_hermite_rule: eigenvalue solver failed");

    QuadratureRule rule;
    rule.kind = QuadratureKind::gauss_hermite;
    rule.order = n;
    rule.nodes.reserve(n);
    rule.weights.reserve(n);
    const double derivative_scale = std::sqrt(2.0 * n);
    for (int i = 0; i < n; ++i) {
        double x = solver.eigenvalues()[i];
        ScaledHermite h{};
        for (int iter = 0; iter < 4; ++iter) {
            h = evaluate_orthonormal_hermite(n, x);
            if (h.p_nm1 == 0.0) break;
            x -= h.p_n / (derivative_scale * h.p_nm1);
        }
        h = evaluate_orthonormal_hermite(n, x);
        const double weight = std::exp(-h.log_sum_sq);
        if (weight > 0.0) {
            rule.nodes.push_back(x);
            rule.weights.push_back(weight);
        }
    }
    return rule;
}

std::span<const QuadratureRule> hermite_rule_ladder() {
    static const std::vector<QuadratureRule> ladder = [] {
        std::vector<QuadratureRule> rules;
        for (int n = 8; n <= kMaxHermiteNodes; n *= 2)
            rules.push_back(make_gauss_hermite_rule(n));
        return rules;
    }();
    return ladder;
}

namespace detail {
void throw_not_converged(double tol, double last_change) {
    std::ostringstream msg;
    msg << "integrate_weighted_normal: tolerance " << tol << " not reached with "
        << kMaxHermiteNodes << " nodes (last change " << last_change << ")";
    throw ConvergenceError(msg.str());
}
}  // namespace detail

double integrate_interval(const std::function<double(double)>& f, double a,
                          double b, double tol) {
    // Boost's tolerance is relative to the L1 norm; the absolute target is
    // checked against the returned error estimate below.
    double error = 0.0;
    double l1 = 0.0;
    const double value = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(
        f, a, b, 25, 1e-14, &error, &l1);
    if (error > tol) {
        std::ostringstream msg;
        msg << "integrate_interval: error estimate " << error
            << " exceeds tolerance " << tol;
        throw ConvergenceError(msg.str());
    }
    return value;
}

double mvn_common_control_exceedance(double c, std::span<const double> lambdas) {
    if (lambdas.empty())
        throw DomainError("mvn_common_control_exceedance: no arms supplied");
    for (double lambda : lambdas) {
        if (!(lambda > 0.0 && lambda < 1.0)) {
            std::ostringstream msg;
            msg << "mvn_common_control_exceedance: lambda " << lambda
                << " is outside (0, 1)";
            throw DomainError(msg.str());
        }
    }
    if (c <= -kSaturation) return 1.0;
    if (lambdas.size() == 1) return normal_upper_tail(c);

    std::array<double, 16> slope_buf{};
    std::array<double, 16> inv_sd_buf{};
    std::vector<double> slope_heap;
    std::vector<double> inv_sd_heap;
    double* slope = slope_buf.data();
    double* inv_sd = inv_sd_buf.data();
    if (lambdas.size() > slope_buf.size()) {
        slope_heap.resize(lambdas.size());
        inv_sd_heap.resize(lambdas.size());
        slope = slope_heap.data();
        inv_sd = inv_sd_heap.data();
    }
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        slope[i] = lambdas[i];
        inv_sd[i] = 1.0 / std::sqrt(1.0 - lambdas[i] * lambdas[i]);
    }
    const std::size_t k = lambdas.size();

    // Conditional on the shared control component u, the arms are
    // independent; 1 - prod(1 - tail_i) is formed in log space so that tiny
    // exceedances keep their relative accuracy.
    auto conditional_exceedance = [&](double u) {
        double log_all_below = 0.0;
        for (std::size_t i = 0; i < k; ++i) {
            const double tail = normal_upper_tail((c - slope[i] * u) * inv_sd[i]);
            if (tail >= 1.0) return 1.0;
            log_all_below += std::log1p(-tail);
        }
        return -std::expm1(log_all_below);
    };
    const double value = integrate_weighted_normal(conditional_exceedance,
                                                   kExceedanceTolerance);
    return std::clamp(value, 0.0, 1.0);
}

}  // namespace adaptrand::numerics
