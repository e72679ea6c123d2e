#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "adaptrand/monte_carlo.hpp"
#include "adaptrand/presets.hpp"

namespace adaptrand {

struct ScenarioReport {
    Scenario scenario;
    OCReport report;
};

/// Fixed-point with six decimals, '.' separator, independent of the locale.
std::string format_fixed6(double value);

/*
 * Long-format operating characteristics:
 *   scenario,metric,group,value,mc_se
 * Metrics: raw_reject, adjusted_reject, selected, select_confirm (groups
 * D1..Dm), overall_power (group overall), avg_n_by_rank (placebo, S1..Sm),
 * avg_n_by_arm (placebo, D1..Dm).
 */
void write_oc_csv(std::ostream& out, const std::vector<ScenarioReport>& reports);

/// scenario,checkpoint,rank,mean_proportion; checkpoint 1 is the first adaptive subject.
void write_trajectories_csv(std::ostream& out, const std::vector<ScenarioReport>& reports);

/*
 * One row per null rate:
 *   p0,pairwise_D1,pairwise_D1_se,...,bonferroni_fwer,bonferroni_fwer_se
 * Pairwise columns are unadjusted rejection rates.
 */
void write_null_scan_csv(std::ostream& out, const std::vector<double>& grid,
                         const std::vector<ScenarioReport>& reports);

}  // namespace adaptrand
