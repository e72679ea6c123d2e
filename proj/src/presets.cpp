#include "adaptrand/presets.hpp"

#include <sstream>

namespace adaptrand {

namespace {

const std::vector<std::vector<int>> kContinuousBlocks = {
    {8, 4, 4, 4}, {8, 5, 4, 3}, {8, 7, 4, 1}, {8, 5, 5, 2}, {9, 9, 1, 1}};

struct NamedMeans {
    const char* name;
    std::vector<double> means;
};

const std::vector<NamedMeans> kAlternatives = {
    {"muA", {0.43, 0.68, 0.93, 1.2}},   // linear
    {"muB", {0.43, 1.0, 1.15, 1.2}},    // plateau
    {"muC", {0.43, 1.0, 1.2, 1.2}},     // two equal top doses
};

const std::vector<double> kCaseStudyRates = {0.151, 0.282, 0.400};
const std::vector<int> kCaseStudyBlock = {7, 7, 1};

std::string block_label(const std::vector<int>& block) {
    std::ostringstream out;
    out << "r";
    for (std::size_t i = 0; i < block.size(); ++i) out << (i ? "-" : "") << block[i];
    return out.str();
}

std::string number_label(double x) {
    std::ostringstream out;
    out << x;
    return out.str();
}

DbcdRandomization dbcd_phi(double lambda) { return {2.0, PhiPowerTarget{lambda}}; }

FixedRandomization equal_probs(int arms) {
    return {std::vector<double>(arms, 1.0 / arms)};
}

ScenarioPreset table1() {
    ScenarioPreset preset{"table1", {}, 100'000, {}};
    for (const auto& [n, burn_in] : {std::pair{120, 60}, std::pair{40, 20}}) {
        for (double mu : {0.0, 1.0}) {
            for (const auto& block : kContinuousBlocks) {
                preset.scenarios.push_back(
                    {"n" + std::to_string(n) + "_mu" + number_label(mu) + "_" + block_label(block),
                     continuous_design({mu, mu, mu, mu}, RabrRandomization{block}, n, burn_in)});
            }
        }
    }
    return preset;
}

ScenarioPreset power_tables(const std::string& name) {
    ScenarioPreset preset{name, {}, 100'000, {}};
    for (const auto& alt : kAlternatives) {
        const std::string mu = alt.name;
        preset.scenarios.push_back(
            {mu + "_RABR_r9-9-1-1", continuous_design(alt.means, RabrRandomization{{9, 9, 1, 1}})});
        preset.scenarios.push_back({mu + "_Fixed", continuous_design(alt.means, equal_probs(4))});
        for (double lambda : {-2.0, 0.0, 2.0})
            preset.scenarios.push_back({mu + "_DBCD_lambda" + number_label(lambda),
                                        continuous_design(alt.means, dbcd_phi(lambda))});
    }
    return preset;
}

ScenarioPreset figure1() {
    ScenarioPreset preset{"figure1", {}, 100'000, {}};
    for (const auto& alt : kAlternatives) {
        const std::string mu = alt.name;
        preset.scenarios.push_back(
            {mu + "_RABR_r9-9-1-1", continuous_design(alt.means, RabrRandomization{{9, 9, 1, 1}})});
        preset.scenarios.push_back(
            {mu + "_DBCD_lambda2", continuous_design(alt.means, dbcd_phi(2.0))});
    }
    return preset;
}

ScenarioPreset case_study() {
    ScenarioPreset preset{"case-study", {}, 100'000, {}};
    preset.scenarios.push_back(
        {"RABR_r7-7-1", case_study_design(kCaseStudyRates, RabrRandomization{kCaseStudyBlock})});
    preset.scenarios.push_back({"Fixed", case_study_design(kCaseStudyRates, equal_probs(3))});
    preset.scenarios.push_back(
        {"DBCD_neyman", case_study_design(kCaseStudyRates, DbcdRandomization{2.0, NeymanTarget{}})});
    return preset;
}

ScenarioPreset figure2() {
    ScenarioPreset preset{"figure2", {}, 100'000, null_rate_grid()};
    for (double p0 : preset.null_grid)
        preset.scenarios.push_back({"p0=" + number_label(p0),
                                    case_study_design({p0, p0, p0},
                                                      RabrRandomization{kCaseStudyBlock},
                                                      TestKind::proportion)});
    return preset;
}

}  // namespace

std::vector<double> null_rate_grid() {
    std::vector<double> grid;
    for (int i = 1; i <= 19; ++i) grid.push_back(i / 20.0);
    return grid;
}

DesignConfig continuous_design(std::vector<double> means, RandomizationSpec randomization,
                               int total_n, int burn_in) {
    DesignConfig cfg;
    cfg.arms = static_cast<int>(means.size());
    cfg.endpoint = NormalEndpoint{std::move(means), 1.0};
    cfg.randomization = std::move(randomization);
    cfg.burn_in = burn_in;
    cfg.total_n = total_n;
    cfg.analysis = {0.025, TestKind::z_known_variance, Multiplicity::dunnett_step_down};
    return validate_config(std::move(cfg));
}

DesignConfig case_study_design(std::vector<double> rates, RandomizationSpec randomization,
                               TestKind test) {
    DesignConfig cfg;
    cfg.arms = static_cast<int>(rates.size());
    cfg.endpoint = BinaryEndpoint{std::move(rates)};
    cfg.randomization = std::move(randomization);
    cfg.burn_in = 90;
    cfg.total_n = 180;
    cfg.analysis = {0.025, test, Multiplicity::bonferroni};
    return validate_config(std::move(cfg));
}

std::vector<std::string> preset_names() {
    return {"table1", "table2", "table3", "figure1", "case-study", "figure2"};
}

ScenarioPreset expand_preset(std::string_view name) {
    if (name == "table1") return table1();
    if (name == "table2" || name == "table3") return power_tables(std::string(name));
    if (name == "figure1") return figure1();
    if (name == "case-study") return case_study();
    if (name == "figure2") return figure2();
    throw ValidationError("preset: unknown name \"" + std::string(name) + "\"");
}

}  // namespace adaptrand
