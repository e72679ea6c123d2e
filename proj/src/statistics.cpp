#include "adaptrand/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "adaptrand/error.hpp"
#include "adaptrand/numerics.hpp"

namespace adaptrand {

double z_statistic(int n, double mean, int n0, double mean0, double sigma) {
    if (n < 1) throw DegenerateError("z_statistic: tested arm has no subjects");
    if (n0 < 1) throw DegenerateError("z_statistic: placebo arm has no subjects");
    return (mean - mean0) / (sigma * std::sqrt(1.0 / n + 1.0 / n0));
}

double z_statistic(const StageSplit& split, double sigma) {
    const int n = split.n1 + split.n2;
    if (n < 1) throw DegenerateError("z_statistic: n1 + n2 = 0");
    const double pooled = (split.mean1 * split.n1 + split.mean2 * split.n2) / n;
    return z_statistic(n, pooled, split.n0, split.mean0, sigma);
}

double weight_w1(double n1, double b, double n0) {
    if (!(n1 >= 1.0) || !(b >= 0.0) || !(n0 >= 1.0)) {
        std::ostringstream msg;
        msg << "weight_w1: need n1 >= 1, b >= 0, n0 >= 1 (got " << n1 << ", " << b << ", "
            << n0 << ")";
        throw DomainError(msg.str());
    }
    const double stage_total = n1 + b;
    return (n1 / (stage_total * stage_total)) / (1.0 / stage_total + 1.0 / n0);
}

ZComponents z_components(const StageSplit& split, double mu0, double sigma) {
    if (split.n1 < 1 || split.n0 < 1)
        throw DegenerateError("z_components: n1 and n0 must be positive");
    if (split.n2 < 1) throw DegenerateError("z_components: stage 2 is empty");
    const double n1 = split.n1;
    const double a = split.n2;
    const double n0 = split.n0;
    ZComponents out;
    out.z1 = std::sqrt(n1) * (split.mean1 - mu0) / sigma;
    const double share = a / (n1 + a);
    const double numerator = share * (split.mean2 - mu0) - (split.mean0 - mu0);
    out.z2 = numerator / (sigma * std::sqrt(a / ((n1 + a) * (n1 + a)) + 1.0 / n0));
    return out;
}

double chw_statistic(double z1, double z2, double w1_fixed) {
    if (!(w1_fixed > 0.0 && w1_fixed < 1.0)) {
        std::ostringstream msg;
        msg << "chw_statistic: weight " << w1_fixed << " is outside (0, 1)";
        throw DomainError(msg.str());
    }
    return std::sqrt(w1_fixed) * z1 + std::sqrt(1.0 - w1_fixed) * z2;
}

double proportion_test(int responders1, int n1, int responders0, int n0) {
    if (n1 < 1 || n0 < 1) throw DegenerateError("proportion_test: empty arm");
    const double pooled = static_cast<double>(responders1 + responders0) / (n1 + n0);
    if (pooled <= 0.0 || pooled >= 1.0) return 0.0;
    const double difference =
        static_cast<double>(responders1) / n1 - static_cast<double>(responders0) / n0;
    return difference / std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n0));
}

double proportion_test_corrected(int responders1, int n1, int responders0, int n0) {
    if (n1 < 1 || n0 < 1) throw DegenerateError("proportion_test_corrected: empty arm");
    const double pooled = static_cast<double>(responders1 + responders0) / (n1 + n0);
    if (pooled <= 0.0 || pooled >= 1.0) return 0.0;
    const double difference =
        static_cast<double>(responders1) / n1 - static_cast<double>(responders0) / n0;
    const double correction = std::min(0.5 * (1.0 / n1 + 1.0 / n0), std::abs(difference));
    const double shrunk = std::copysign(std::abs(difference) - correction, difference);
    return shrunk / std::sqrt(pooled * (1.0 - pooled) * (1.0 / n1 + 1.0 / n0));
}

PairwiseTestResult pairwise_result(double statistic, int arm) {
    return {statistic, numerics::normal_upper_tail(statistic), arm};
}

}  // namespace adaptrand
