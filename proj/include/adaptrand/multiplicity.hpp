#pragma once

#include <span>
#include <vector>

#include "adaptrand/design.hpp"
#include "adaptrand/rng.hpp"

namespace adaptrand {

/*
 * Raw and adjusted one-sided p-values of the m dose-vs-placebo comparisons;
 * entry g - 1 belongs to arm g. selection_order lists arms by ascending
 * adjusted p, ties going to the smaller raw p (larger statistic). Arms tied
 * on both stay in index order until break_selection_ties shuffles them.
 */
struct AdjustedResult {
    std::vector<double> raw_p;
    std::vector<double> adjusted_p;
    std::vector<int> selection_order;
};

/// Significance is strict: p < alpha.
inline bool significant(double p, double alpha) { return p < alpha; }

AdjustedResult no_adjustment(std::span<const double> raw_p);

AdjustedResult bonferroni_adjust(std::span<const double> raw_p);

/*
 * Single-step Dunnett: the adjusted p of arm g is the probability that the
 * maximum of all m correlated statistics exceeds statistic g, with
 * lambda_i = sqrt(n_i / (n_i + n0)).
 */
AdjustedResult dunnett_single_step_adjust(std::span<const double> statistics,
                                          std::span<const int> arm_ns, int n0);

/*
 * Step-down Dunnett: arms are visited by descending statistic; the j-th is
 * compared with the maximum over the arms not yet visited (itself included),
 * and a running maximum keeps the adjusted p-values monotone.
 */
AdjustedResult dunnett_step_down_adjust(std::span<const double> statistics,
                                        std::span<const int> arm_ns, int n0);

/// Dispatches on the configured procedure.
AdjustedResult adjust(Multiplicity procedure, std::span<const double> statistics,
                      std::span<const int> arm_ns, int n0);

/// Shuffles runs of arms tied on both adjusted and raw p.
void break_selection_ties(AdjustedResult& adj, RngStream& rng);

/// Arm with the smallest adjusted p-value after random tie-breaking.
int select_best(const AdjustedResult& adj, RngStream& rng);

}  // namespace adaptrand
