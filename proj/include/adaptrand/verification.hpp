#pragma once

#include <cstdint>
#include <vector>

namespace adaptrand::verification {

/*
 * Q(w1) = P(sqrt(w1) Z1 + sqrt(1 - w1) Z2 > c | Z1 <= Z3 + c_prime) for
 * independent standard normals Z1, Z2, Z3.
 */
struct Lemma1Query {
    double w1 = 0.5;
    double c = 1.959963984540054;
    double c_prime = 0.0;
};

/// P(Z1 <= Z3 + c_prime) = Phi(c_prime / sqrt(2)).
double lemma1_denominator(double c_prime);

/// Joint probability P(sqrt(w1) Z1 + sqrt(1 - w1) Z2 > c, Z1 <= Z3 + c_prime).
double lemma1_numerator(const Lemma1Query& q);

/// Quadrature error bound of lemma1_Q.
inline constexpr double kLemma1Tolerance = 1e-8;

double lemma1_Q(const Lemma1Query& q);

/// w1 = i / (points + 1), i = 1..points.
std::vector<double> uniform_w1_grid(int points);

struct MonotonicityReport {
    std::vector<double> grid;
    std::vector<double> values;
    double max_violation = 0.0;  // max of Q(w_{i+1}) - Q(w_i); <= 0 when decreasing
    double tolerance = 1e-7;
    bool passed = true;
};

/// Checks Q is non-increasing along a strictly increasing grid in (0, 1).
MonotonicityReport lemma1_monotonicity_check(double c, double c_prime,
                                             const std::vector<double>& grid);

/// True iff w1(n1, beta1 n2_0, n0) <= w1(n1, beta2 n2_0, n0); requires beta1 >= beta2 >= 0.
bool w1_ordering_check(int n1, int n2_0, int n0, double beta1, double beta2);

/*
 * Two-stage design used by the rejection bounds. Arm 1 is tested; the
 * competitors are arms 2 (and 3). Stage-2 sizes are beta_k * n2_placebo,
 * where k is the rank of arm 1 after stage 1, and n0 is the cumulative
 * placebo size entering the weight.
 */
struct TheoremQuery {
    std::vector<int> n1_per_arm;  // stage-1 sizes of arms 1, 2 (, 3)
    int n2_placebo = 0;
    std::vector<double> betas;  // non-increasing, non-negative
    int n0 = 0;
    double alpha = 0.025;
    double mu0 = 0.0;  // common mean under the null
};

struct BoundResult {
    double probability = 0.0;    // P(unweighted statistic > c) under the null
    double alpha = 0.0;
    double tolerance = 0.0;      // slack allowed above alpha
    bool bound_ok = false;
    double mc_se = 0.0;          // zero for quadrature results
    std::vector<double> terms;   // joint probability of rejection per ranking region
    std::vector<double> region_probabilities;
    std::vector<double> chw_terms;  // same regions, fixed-weight statistic
};

/// Shift of the stage-1 ranking comparison between arm 1 and arm `other`.
double ranking_shift(const TheoremQuery& q, int other);

/*
 * Two active arms: the rejection probability as the two-region mixture,
 * each region integrated over Z1 with the competitor and Z2 tails in closed
 * form. bound_ok iff probability <= alpha + 1e-6.
 */
BoundResult theorem1_rejection_bound(const TheoremQuery& q);

/*
 * Three active arms: Monte Carlo over (Z1, Z2, Z1^2, Z1^3) with the
 * top / middle / bottom ranking regions. bound_ok iff
 * probability <= alpha + 3 * mc_se.
 */
BoundResult theorem3_rejection_bound(const TheoremQuery& q, std::int64_t draws = 10'000'000,
                                     std::uint64_t seed = 20240101);

/*
 * Random valid two-arm queries for sweeps: stage-1 sizes in [5, 60],
 * n2_placebo in [1, 60], n0 in [5, 120], beta1 in [0, 3], beta2 in
 * [0, beta1], mu0 in [-2, 2], alpha in [0.005, 0.1]. Every fifth query has
 * beta2 = beta1 (the non-adaptive case).
 */
std::vector<TheoremQuery> random_two_arm_queries(int count, std::uint64_t seed);

struct OrderingSweep {
    int samples = 0;
    int failures = 0;
};

/// w1_ordering_check over random valid inputs drawn like random_two_arm_queries.
OrderingSweep w1_ordering_sweep(int samples, std::uint64_t seed);

}  // namespace adaptrand::verification
