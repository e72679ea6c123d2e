#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "adaptrand/design.hpp"

namespace adaptrand {

struct Scenario {
    std::string label;  // CSV-safe (no commas)
    DesignConfig config;
};

/*
 * Named batch of scenarios. Presets with a null grid are null-rate scans:
 * scenario i uses common response rate null_grid[i] in every arm.
 */
struct ScenarioPreset {
    std::string name;
    std::vector<Scenario> scenarios;
    std::int64_t iterations = 100'000;
    std::vector<double> null_grid;
};

/// table1, table2, table3, figure1, case-study, figure2.
std::vector<std::string> preset_names();

/// Throws ValidationError for an unknown name.
ScenarioPreset expand_preset(std::string_view name);

/// Three-dose continuous design with n = 120, burn-in 60, step-down Dunnett.
DesignConfig continuous_design(std::vector<double> means, RandomizationSpec randomization,
                               int total_n = 120, int burn_in = 60);

/// Two-dose binary design with n = 180, burn-in 90 and Bonferroni; the case-study
/// scenarios use the continuity-corrected proportion test.
DesignConfig case_study_design(std::vector<double> rates, RandomizationSpec randomization,
                               TestKind test = TestKind::proportion_corrected);

/// Common null rates 0.05, 0.10, ..., 0.95.
std::vector<double> null_rate_grid();

}  // namespace adaptrand
