#include "adaptrand/report_io.hpp"

#include <cmath>
#include <cstdio>

namespace adaptrand {

std::string format_fixed6(double value) {
    if (value == 0.0) value = 0.0;  // drop the sign of -0
    char buffer[64];
    std::snprintf(buffer, sizeof buffer, "%.6f", value);
    std::string text(buffer);
    for (char& ch : text)
        if (ch == ',') ch = '.';
    return text;
}

namespace {

std::string dose(int g) { return "D" + std::to_string(g); }

std::string rank_name(int r) { return r == 0 ? "placebo" : "S" + std::to_string(r); }

void row(std::ostream& out, const std::string& scenario, const char* metric,
         const std::string& group, double value, double se) {
    out << scenario << ',' << metric << ',' << group << ',' << format_fixed6(value) << ','
        << format_fixed6(se) << '\n';
}

void rate_rows(std::ostream& out, const std::string& scenario, const char* metric,
               const std::vector<RateEstimate>& rates) {
    for (std::size_t i = 0; i < rates.size(); ++i)
        row(out, scenario, metric, dose(static_cast<int>(i) + 1), rates[i].rate, rates[i].mc_se);
}

}  // namespace

void write_oc_csv(std::ostream& out, const std::vector<ScenarioReport>& reports) {
    out << "scenario,metric,group,value,mc_se\n";
    for (const auto& [scenario, report] : reports) {
        const std::string& name = scenario.label;
        rate_rows(out, name, "raw_reject", report.raw_reject);
        rate_rows(out, name, "adjusted_reject", report.adjusted_reject);
        rate_rows(out, name, "selected", report.selected);
        rate_rows(out, name, "select_confirm", report.select_confirm);
        row(out, name, "overall_power", "overall", report.overall_power.rate,
            report.overall_power.mc_se);
        for (std::size_t r = 0; r < report.avg_n_by_rank.size(); ++r)
            row(out, name, "avg_n_by_rank", rank_name(static_cast<int>(r)),
                report.avg_n_by_rank[r].mean, report.avg_n_by_rank[r].mc_se);
        for (std::size_t g = 0; g < report.avg_n_by_arm.size(); ++g)
            row(out, name, "avg_n_by_arm", g == 0 ? "placebo" : dose(static_cast<int>(g)),
                report.avg_n_by_arm[g].mean, report.avg_n_by_arm[g].mc_se);
    }
}

void write_trajectories_csv(std::ostream& out, const std::vector<ScenarioReport>& reports) {
    out << "scenario,checkpoint,rank,mean_proportion\n";
    for (const auto& [scenario, report] : reports) {
        for (std::size_t k = 0; k < report.trajectory_by_rank.size(); ++k) {
            const auto& proportions = report.trajectory_by_rank[k];
            for (std::size_t r = 0; r < proportions.size(); ++r)
                out << scenario.label << ',' << k + 1 << ',' << rank_name(static_cast<int>(r))
                    << ',' << format_fixed6(proportions[r]) << '\n';
        }
    }
}

void write_null_scan_csv(std::ostream& out, const std::vector<double>& grid,
                         const std::vector<ScenarioReport>& reports) {
    if (grid.size() != reports.size())
        throw ValidationError("null scan: grid and reports differ in length");
    out << "p0";
    const std::size_t doses = reports.empty() ? 0 : reports.front().report.raw_reject.size();
    for (std::size_t g = 1; g <= doses; ++g)
        out << ",pairwise_D" << g << ",pairwise_D" << g << "_se";
    out << ",bonferroni_fwer,bonferroni_fwer_se\n";
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const OCReport& report = reports[i].report;
        out << format_fixed6(grid[i]);
        for (const auto& rate : report.raw_reject)
            out << ',' << format_fixed6(rate.rate) << ',' << format_fixed6(rate.mc_se);
        out << ',' << format_fixed6(report.overall_power.rate) << ','
            << format_fixed6(report.overall_power.mc_se) << '\n';
    }
}

}  // namespace adaptrand
