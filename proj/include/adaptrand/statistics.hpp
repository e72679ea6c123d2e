#pragma once

namespace adaptrand {

/*
 * Data of one active arm split into the burn-in stage and the adaptive stage,
 * together with the cumulative placebo data it is compared against.
 */
struct StageSplit {
    int n1 = 0;         // stage-1 size of the tested arm
    double mean1 = 0.0; // stage-1 mean of the tested arm
    int n2 = 0;         // stage-2 size of the tested arm
    double mean2 = 0.0; // stage-2 mean of the tested arm
    int n0 = 0;         // cumulative placebo size
    double mean0 = 0.0; // cumulative placebo mean
};

/// One-sided comparison of an active arm with placebo.
struct PairwiseTestResult {
    double statistic = 0.0;
    double p_value = 0.5;  // upper tail, 1 - Phi(statistic)
    int arm = 0;
};

/// Unweighted z statistic on pooled stage data. Throws DegenerateError if n1 + n2 = 0.
double z_statistic(const StageSplit& split, double sigma);

/// Two-sample z statistic from cumulative arm data.
double z_statistic(int n, double mean, int n0, double mean0, double sigma);

/*
 * Share of the variance of the z statistic carried by the stage-1 component
 * when the stage-2 size is b: [n1 / (n1 + b)^2] / [1 / (n1 + b) + 1 / n0].
 * b may be fractional (b = beta * n2_placebo in the analytic setting).
 */
double weight_w1(double n1, double b, double n0);

struct ZComponents {
    double z1 = 0.0;  // stage-1 component
    double z2 = 0.0;  // stage-2 component, including the placebo mean
};

/*
 * Stage components of the z statistic, centered at the placebo mean mu0, so
 * that z = sqrt(w1) z1 + sqrt(1 - w1) z2 with w1 = weight_w1(n1, n2, n0).
 * Requires n2 >= 1.
 */
ZComponents z_components(const StageSplit& split, double mu0, double sigma);

/// Combination statistic with a pre-specified weight w1_fixed in (0, 1).
double chw_statistic(double z1, double z2, double w1_fixed);

/*
 * Pooled-variance two-proportion statistic
 * (R1/n1 - R0/n0) / sqrt(phat (1 - phat) (1/n1 + 1/n0)); 0 when phat is 0 or 1.
 */
double proportion_test(int responders1, int n1, int responders0, int n0);

/*
 * Same statistic with the Yates continuity correction: |R1/n1 - R0/n0| is
 * shrunk by min(0.5 (1/n1 + 1/n0), |R1/n1 - R0/n0|) before standardizing.
 */
double proportion_test_corrected(int responders1, int n1, int responders0, int n0);

PairwiseTestResult pairwise_result(double statistic, int arm);

}  // namespace adaptrand
