#include "adaptrand/verification.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adaptrand/error.hpp"
#include "adaptrand/numerics.hpp"
#include "adaptrand/rng.hpp"
#include "adaptrand/statistics.hpp"

namespace adaptrand::verification {

using numerics::normal_cdf;
using numerics::normal_upper_tail;

namespace {

// The integrands below have transitions of width sqrt(1 - w1), which gets
// narrow as w1 -> 1; adaptive Gauss-Kronrod on a truncated line handles that
// better than a fixed Hermite ladder. Mass beyond |z| = 12 is below 1e-32.
constexpr double kLineLimit = 12.0;

template <class F>
double integrate_against_density(F&& f, double tol) {
    return numerics::integrate_interval(
        [&](double z) { return numerics::normal_pdf(z) * f(z); }, -kLineLimit, kLineLimit, tol);
}

// P(sqrt(w) z + sqrt(1 - w) Z2 > c) for fixed z.
double stage2_tail(double c, double w, double z) {
    return normal_upper_tail((c - std::sqrt(w) * z) / std::sqrt(1.0 - w));
}

void check_weight(double w1) {
    if (!(w1 > 0.0 && w1 < 1.0)) {
        std::ostringstream msg;
        msg << "w1 = " << w1 << " is outside (0, 1)";
        throw DomainError(msg.str());
    }
}

}  // namespace

double lemma1_denominator(double c_prime) { return normal_cdf(c_prime / numerics::kSqrt2); }

double lemma1_numerator(const Lemma1Query& q) {
    check_weight(q.w1);
    return integrate_against_density(
        [&](double z) { return stage2_tail(q.c, q.w1, z) * normal_upper_tail(z - q.c_prime); },
        1e-12);
}

double lemma1_Q(const Lemma1Query& q) {
    check_weight(q.w1);
    const double denominator = lemma1_denominator(q.c_prime);
    if (denominator < 1e-4)
        throw DomainError("lemma1_Q: conditioning event has probability below 1e-4");
    return std::clamp(lemma1_numerator(q) / denominator, 0.0, 1.0);
}

std::vector<double> uniform_w1_grid(int points) {
    std::vector<double> grid;
    for (int i = 1; i <= points; ++i) grid.push_back(static_cast<double>(i) / (points + 1));
    return grid;
}

MonotonicityReport lemma1_monotonicity_check(double c, double c_prime,
                                             const std::vector<double>& grid) {
    for (std::size_t i = 1; i < grid.size(); ++i)
        if (!(grid[i] > grid[i - 1]))
            throw DomainError("lemma1_monotonicity_check: grid must be strictly increasing");
    MonotonicityReport report;
    report.grid = grid;
    for (double w : grid) report.values.push_back(lemma1_Q({w, c, c_prime}));
    report.max_violation = report.values.size() < 2 ? 0.0 : -1.0;
    for (std::size_t i = 1; i < report.values.size(); ++i)
        report.max_violation =
            std::max(report.max_violation, report.values[i] - report.values[i - 1]);
    report.passed = report.max_violation <= report.tolerance;
    return report;
}

bool w1_ordering_check(int n1, int n2_0, int n0, double beta1, double beta2) {
    if (!(beta1 >= beta2 && beta2 >= 0.0))
        throw DomainError("w1_ordering_check: need beta1 >= beta2 >= 0");
    return weight_w1(n1, beta1 * n2_0, n0) <= weight_w1(n1, beta2 * n2_0, n0);
}

namespace {

void check_query(const TheoremQuery& q, std::size_t arms) {
    if (q.n1_per_arm.size() != arms || q.betas.size() != arms) {
        std::ostringstream msg;
        msg << "theorem query: expected " << arms << " stage-1 sizes and betas";
        throw DomainError(msg.str());
    }
    for (int n : q.n1_per_arm)
        if (n < 1) throw DomainError("theorem query: stage-1 sizes must be positive");
    for (std::size_t k = 0; k < arms; ++k) {
        if (q.betas[k] < 0.0) throw DomainError("theorem query: betas must be non-negative");
        if (k > 0 && q.betas[k] > q.betas[k - 1])
            throw DomainError("theorem query: betas must be non-increasing");
    }
    if (q.n2_placebo < 0 || q.n0 < 1)
        throw DomainError("theorem query: need n2_placebo >= 0 and n0 >= 1");
    if (!(q.alpha > 0.0 && q.alpha < 0.5)) throw DomainError("theorem query: alpha in (0, 0.5)");
}

std::vector<double> region_weights(const TheoremQuery& q) {
    std::vector<double> weights;
    for (double beta : q.betas)
        weights.push_back(weight_w1(q.n1_per_arm[0], beta * q.n2_placebo, q.n0));
    return weights;
}

}  // namespace

double ranking_shift(const TheoremQuery& q, int other) {
    return (std::sqrt(static_cast<double>(q.n1_per_arm.at(other - 1))) -
            std::sqrt(static_cast<double>(q.n1_per_arm.at(0)))) *
           q.mu0;
}

BoundResult theorem1_rejection_bound(const TheoremQuery& q) {
    check_query(q, 2);
    const double c = numerics::normal_quantile(1.0 - q.alpha);
    const double shift = ranking_shift(q, 2);
    const std::vector<double> w = region_weights(q);
    constexpr double tol = 1e-12;

    // Arm 1 ranks first when Z1 >= Z1^2 + shift, i.e. with probability
    // Phi(z - shift) given Z1 = z.
    auto top = [&](double z) { return normal_cdf(z - shift); };
    auto bottom = [&](double z) { return normal_upper_tail(z - shift); };

    BoundResult result;
    result.alpha = q.alpha;
    result.tolerance = 1e-6;
    result.terms = {
        integrate_against_density([&](double z) { return stage2_tail(c, w[0], z) * top(z); }, tol),
        integrate_against_density([&](double z) { return stage2_tail(c, w[1], z) * bottom(z); },
                                  tol)};
    result.chw_terms = {
        integrate_against_density([&](double z) { return stage2_tail(c, w[0], z) * top(z); }, tol),
        integrate_against_density([&](double z) { return stage2_tail(c, w[0], z) * bottom(z); },
                                  tol)};
    const double p_top = lemma1_denominator(-shift);
    result.region_probabilities = {p_top, 1.0 - p_top};
    result.probability = result.terms[0] + result.terms[1];
    result.bound_ok = result.probability <= q.alpha + result.tolerance;
    return result;
}

BoundResult theorem3_rejection_bound(const TheoremQuery& q, std::int64_t draws,
                                     std::uint64_t seed) {
    check_query(q, 3);
    if (draws < 1) throw DomainError("theorem3_rejection_bound: draws must be positive");
    const double c = numerics::normal_quantile(1.0 - q.alpha);
    const double shift2 = ranking_shift(q, 2);
    const double shift3 = ranking_shift(q, 3);
    const std::vector<double> w = region_weights(q);
    std::vector<double> root_w, root_rest;
    for (double wk : w) {
        root_w.push_back(std::sqrt(wk));
        root_rest.push_back(std::sqrt(1.0 - wk));
    }

    std::int64_t reject[3] = {0, 0, 0};
    std::int64_t chw_reject[3] = {0, 0, 0};
    std::int64_t in_region[3] = {0, 0, 0};
    RngStream rng(seed, 0);
    for (std::int64_t i = 0; i < draws; ++i) {
        const double z1 = rng.normal();
        const double z2 = rng.normal();
        const double bound2 = rng.normal() + shift2;
        const double bound3 = rng.normal() + shift3;
        const double hi = std::max(bound2, bound3);
        const double lo = std::min(bound2, bound3);
        const int region = z1 >= hi ? 0 : (z1 >= lo ? 1 : 2);
        ++in_region[region];
        if (root_w[region] * z1 + root_rest[region] * z2 > c) ++reject[region];
        if (root_w[1] * z1 + root_rest[1] * z2 > c) ++chw_reject[region];
    }

    const double n = static_cast<double>(draws);
    BoundResult result;
    result.alpha = q.alpha;
    std::int64_t total = 0;
    for (int k = 0; k < 3; ++k) {
        result.terms.push_back(reject[k] / n);
        result.chw_terms.push_back(chw_reject[k] / n);
        result.region_probabilities.push_back(in_region[k] / n);
        total += reject[k];
    }
    result.probability = total / n;
    result.mc_se = std::sqrt(result.probability * (1.0 - result.probability) / n);
    result.tolerance = 3.0 * result.mc_se;
    result.bound_ok = result.probability <= q.alpha + result.tolerance;
    return result;
}

std::vector<TheoremQuery> random_two_arm_queries(int count, std::uint64_t seed) {
    RngStream rng(seed, 1);
    auto between = [&](int lo, int hi) {
        return lo + static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(hi - lo + 1)));
    };
    std::vector<TheoremQuery> queries;
    for (int i = 0; i < count; ++i) {
        TheoremQuery q;
        q.n1_per_arm = {between(5, 60), between(5, 60)};
        q.n2_placebo = between(1, 60);
        q.n0 = between(5, 120);
        const double beta1 = 3.0 * rng.uniform();
        const double beta2 = (i % 5 == 4) ? beta1 : beta1 * rng.uniform();
        q.betas = {beta1, beta2};
        q.mu0 = -2.0 + 4.0 * rng.uniform();
        q.alpha = 0.005 + 0.095 * rng.uniform();
        queries.push_back(std::move(q));
    }
    return queries;
}

OrderingSweep w1_ordering_sweep(int samples, std::uint64_t seed) {
    OrderingSweep sweep;
    for (const auto& q : random_two_arm_queries(samples, seed)) {
        ++sweep.samples;
        if (!w1_ordering_check(q.n1_per_arm[0], q.n2_placebo, q.n0, q.betas[0], q.betas[1]))
            ++sweep.failures;
    }
    return sweep;
}

}  // namespace adaptrand::verification
