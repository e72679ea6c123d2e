#include "adaptrand/multiplicity.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adaptrand/numerics.hpp"

namespace adaptrand {

namespace {

bool tied(const AdjustedResult& adj, int a, int b) {
    return adj.adjusted_p[a - 1] == adj.adjusted_p[b - 1] && adj.raw_p[a - 1] == adj.raw_p[b - 1];
}

void order_selection(AdjustedResult& adj) {
    adj.selection_order.resize(adj.raw_p.size());
    std::iota(adj.selection_order.begin(), adj.selection_order.end(), 1);
    std::stable_sort(adj.selection_order.begin(), adj.selection_order.end(), [&](int a, int b) {
        if (adj.adjusted_p[a - 1] != adj.adjusted_p[b - 1])
            return adj.adjusted_p[a - 1] < adj.adjusted_p[b - 1];
        return adj.raw_p[a - 1] < adj.raw_p[b - 1];
    });
}

std::vector<double> raw_from_statistics(std::span<const double> statistics) {
    std::vector<double> raw(statistics.size());
    std::transform(statistics.begin(), statistics.end(), raw.begin(),
                   numerics::normal_upper_tail);
    return raw;
}

std::vector<double> correlation_roots(std::span<const int> arm_ns, int n0) {
    if (n0 < 1) throw DomainError("dunnett: placebo arm has no subjects");
    std::vector<double> lambdas(arm_ns.size());
    for (std::size_t i = 0; i < arm_ns.size(); ++i) {
        if (arm_ns[i] < 1) throw DomainError("dunnett: active arm has no subjects");
        lambdas[i] = std::sqrt(static_cast<double>(arm_ns[i]) / (arm_ns[i] + n0));
    }
    return lambdas;
}

void check_sizes(std::span<const double> statistics, std::span<const int> arm_ns) {
    if (statistics.empty()) throw DomainError("dunnett: no hypotheses");
    if (statistics.size() != arm_ns.size())
        throw DomainError("dunnett: statistics and arm sizes differ in length");
}

}  // namespace

AdjustedResult no_adjustment(std::span<const double> raw_p) {
    AdjustedResult adj;
    adj.raw_p.assign(raw_p.begin(), raw_p.end());
    adj.adjusted_p = adj.raw_p;
    order_selection(adj);
    return adj;
}

AdjustedResult bonferroni_adjust(std::span<const double> raw_p) {
    if (raw_p.empty()) throw DomainError("bonferroni_adjust: no hypotheses");
    AdjustedResult adj;
    adj.raw_p.assign(raw_p.begin(), raw_p.end());
    const double k = static_cast<double>(raw_p.size());
    for (double p : raw_p) adj.adjusted_p.push_back(std::min(1.0, k * p));
    order_selection(adj);
    return adj;
}

AdjustedResult dunnett_single_step_adjust(std::span<const double> statistics,
                                          std::span<const int> arm_ns, int n0) {
    check_sizes(statistics, arm_ns);
    const std::vector<double> lambdas = correlation_roots(arm_ns, n0);
    AdjustedResult adj;
    adj.raw_p = raw_from_statistics(statistics);
    adj.adjusted_p.resize(statistics.size());
    for (std::size_t g = 0; g < statistics.size(); ++g) {
        const double p = numerics::mvn_common_control_exceedance(statistics[g], lambdas);
        adj.adjusted_p[g] = std::max(p, adj.raw_p[g]);
    }
    order_selection(adj);
    return adj;
}

AdjustedResult dunnett_step_down_adjust(std::span<const double> statistics,
                                        std::span<const int> arm_ns, int n0) {
    check_sizes(statistics, arm_ns);
    const std::vector<double> lambdas = correlation_roots(arm_ns, n0);
    const std::size_t k = statistics.size();

    std::vector<std::size_t> by_statistic(k);
    std::iota(by_statistic.begin(), by_statistic.end(), 0);
    std::stable_sort(by_statistic.begin(), by_statistic.end(),
                     [&](std::size_t a, std::size_t b) { return statistics[a] > statistics[b]; });

    AdjustedResult adj;
    adj.raw_p = raw_from_statistics(statistics);
    adj.adjusted_p.resize(k);
    std::vector<double> remaining;
    remaining.reserve(k);
    double running_max = 0.0;
    for (std::size_t j = 0; j < k; ++j) {
        remaining.clear();
        for (std::size_t i = j; i < k; ++i) remaining.push_back(lambdas[by_statistic[i]]);
        const std::size_t arm = by_statistic[j];
        const double q = std::max(
            numerics::mvn_common_control_exceedance(statistics[arm], remaining), adj.raw_p[arm]);
        running_max = std::max(running_max, q);
        adj.adjusted_p[arm] = running_max;
    }
    order_selection(adj);
    return adj;
}

AdjustedResult adjust(Multiplicity procedure, std::span<const double> statistics,
                      std::span<const int> arm_ns, int n0) {
    switch (procedure) {
        case Multiplicity::none:
            return no_adjustment(raw_from_statistics(statistics));
        case Multiplicity::bonferroni:
            return bonferroni_adjust(raw_from_statistics(statistics));
        case Multiplicity::dunnett_single_step:
            return dunnett_single_step_adjust(statistics, arm_ns, n0);
        case Multiplicity::dunnett_step_down:
            return dunnett_step_down_adjust(statistics, arm_ns, n0);
    }
    throw DomainError("adjust: unknown multiplicity procedure");
}

void break_selection_ties(AdjustedResult& adj, RngStream& rng) {
    auto& order = adj.selection_order;
    for (std::size_t start = 0; start < order.size();) {
        std::size_t end = start + 1;
        while (end < order.size() && tied(adj, order[start], order[end])) ++end;
        if (end - start > 1) rng.shuffle(std::span<int>(order).subspan(start, end - start));
        start = end;
    }
}

int select_best(const AdjustedResult& adj, RngStream& rng) {
    AdjustedResult copy = adj;
    break_selection_ties(copy, rng);
    return copy.selection_order.front();
}

}  // namespace adaptrand
