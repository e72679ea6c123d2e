#include "adaptrand/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <numeric>
#include <thread>

#include "adaptrand/randomization.hpp"
#include "adaptrand/statistics.hpp"

namespace adaptrand {

std::vector<std::vector<double>> TrialResult::proportion_trajectory() const {
    std::vector<std::vector<double>> out;
    out.reserve(trajectory_counts.size());
    for (std::size_t k = 0; k < trajectory_counts.size(); ++k) {
        const double enrolled = burn_in + static_cast<double>(k) + 1.0;
        std::vector<double> row;
        for (int n : trajectory_counts[k]) row.push_back(n / enrolled);
        out.push_back(std::move(row));
    }
    return out;
}

namespace {

void enroll(TrialState& state, const DesignConfig& cfg, int arm, RngStream& rng) {
    if (const auto* normal = std::get_if<NormalEndpoint>(&cfg.endpoint)) {
        state.add_normal(arm, normal->means[arm] + normal->sigma * rng.normal());
    } else {
        state.add_binary(arm, rng.bernoulli(std::get<BinaryEndpoint>(cfg.endpoint).rates[arm]));
    }
}

TrialResult simulate_validated(const DesignConfig& cfg, RngStream& rng) {
    const int arms = cfg.arms;
    TrialState state(arms, cfg.is_binary(), cfg.total_n);

    std::vector<int> block(arms);
    for (int b = 0; b < cfg.burn_in / arms; ++b) {
        std::iota(block.begin(), block.end(), 0);
        rng.shuffle(std::span<int>(block));
        for (int arm : block) enroll(state, cfg, arm, rng);
    }

    TrialResult result;
    result.burn_in = cfg.burn_in;
    result.trajectory_counts.reserve(cfg.total_n - cfg.burn_in);
    BlockCursor cursor;
    const double sigma = cfg.sigma();
    for (int subject = cfg.burn_in; subject < cfg.total_n; ++subject) {
        int arm = 0;
        if (const auto* fixed = std::get_if<FixedRandomization>(&cfg.randomization)) {
            arm = draw_arm(fixed->probs, rng);
        } else if (const auto* rabr = std::get_if<RabrRandomization>(&cfg.randomization)) {
            arm = rabr_next_assignment(state, *rabr, cursor, sigma, rng);
        } else {
            arm = dbcd_next_assignment(state, std::get<DbcdRandomization>(cfg.randomization),
                                       sigma, rng);
        }
        enroll(state, cfg, arm, rng);
        result.trajectory_counts.push_back(state.counts());
    }

    const int active = arms - 1;
    std::vector<int> arm_ns(active);
    result.statistics.resize(active);
    for (int g = 1; g < arms; ++g) {
        arm_ns[g - 1] = state.count(g);
        if (cfg.analysis.test == TestKind::proportion) {
            result.statistics[g - 1] = proportion_test(state.responders(g), state.count(g),
                                                       state.responders(kPlacebo),
                                                       state.count(kPlacebo));
        } else if (cfg.analysis.test == TestKind::proportion_corrected) {
            result.statistics[g - 1] = proportion_test_corrected(
                state.responders(g), state.count(g), state.responders(kPlacebo),
                state.count(kPlacebo));
        } else {
            result.statistics[g - 1] = z_statistic(state.count(g), state.arm_mean(g),
                                                   state.count(kPlacebo),
                                                   state.arm_mean(kPlacebo), sigma);
        }
    }
    result.adjusted = adjust(cfg.analysis.multiplicity, result.statistics, arm_ns,
                             state.count(kPlacebo));
    break_selection_ties(result.adjusted, rng);
    result.selected = result.adjusted.selection_order.front();
    const double alpha = cfg.analysis.alpha;
    result.confirmed = significant(result.adjusted.adjusted_p[result.selected - 1], alpha);
    result.rejected_any = std::any_of(result.adjusted.adjusted_p.begin(),
                                      result.adjusted.adjusted_p.end(),
                                      [&](double p) { return significant(p, alpha); });
    result.final_counts = state.counts();
    return result;
}

}  // namespace

TrialResult simulate_trial(const DesignConfig& cfg, RngStream& stream) {
    const DesignConfig validated = validate_config(cfg);
    try {
        return simulate_validated(validated, stream);
    } catch (const SimulationError&) {
        throw;
    } catch (const std::exception& e) {
        throw SimulationError(stream.stream_id(), e.what());
    }
}

std::vector<int> rank_arms_for_report(const TrialResult& result) {
    std::vector<int> ranks{kPlacebo};
    ranks.insert(ranks.end(), result.adjusted.selection_order.begin(),
                 result.adjusted.selection_order.end());
    return ranks;
}

OCTally::OCTally(int arms, int checkpoints)
    : arms_(arms),
      checkpoints_(checkpoints),
      raw_reject_(arms - 1, 0),
      adjusted_reject_(arms - 1, 0),
      selected_(arms - 1, 0),
      select_confirm_(arms - 1, 0),
      n_by_rank_(arms, 0),
      n_by_rank_sq_(arms, 0),
      n_by_arm_(arms, 0),
      n_by_arm_sq_(arms, 0),
      trajectory_by_rank_(static_cast<std::size_t>(checkpoints) * arms, 0) {}

void OCTally::add(const TrialResult& result, double alpha) {
    ++iterations_;
    if (result.rejected_any) ++any_rejection_;
    for (int g = 1; g < arms_; ++g) {
        if (significant(result.adjusted.raw_p[g - 1], alpha)) ++raw_reject_[g - 1];
        if (significant(result.adjusted.adjusted_p[g - 1], alpha)) ++adjusted_reject_[g - 1];
    }
    ++selected_[result.selected - 1];
    if (result.confirmed) ++select_confirm_[result.selected - 1];

    const std::vector<int> ranks = rank_arms_for_report(result);
    for (int r = 0; r < arms_; ++r) {
        const std::int64_t n = result.final_counts[ranks[r]];
        n_by_rank_[r] += n;
        n_by_rank_sq_[r] += n * n;
        const std::int64_t by_arm = result.final_counts[r];
        n_by_arm_[r] += by_arm;
        n_by_arm_sq_[r] += by_arm * by_arm;
    }
    for (int k = 0; k < checkpoints_; ++k)
        for (int r = 0; r < arms_; ++r)
            trajectory_by_rank_[static_cast<std::size_t>(k) * arms_ + r] +=
                result.trajectory_counts[k][ranks[r]];
}

void OCTally::merge(const OCTally& other) {
    auto add_into = [](std::vector<std::int64_t>& into, const std::vector<std::int64_t>& from) {
        for (std::size_t i = 0; i < into.size(); ++i) into[i] += from[i];
    };
    iterations_ += other.iterations_;
    any_rejection_ += other.any_rejection_;
    add_into(raw_reject_, other.raw_reject_);
    add_into(adjusted_reject_, other.adjusted_reject_);
    add_into(selected_, other.selected_);
    add_into(select_confirm_, other.select_confirm_);
    add_into(n_by_rank_, other.n_by_rank_);
    add_into(n_by_rank_sq_, other.n_by_rank_sq_);
    add_into(n_by_arm_, other.n_by_arm_);
    add_into(n_by_arm_sq_, other.n_by_arm_sq_);
    add_into(trajectory_by_rank_, other.trajectory_by_rank_);
}

namespace {

RateEstimate rate_of(std::int64_t hits, std::int64_t iterations) {
    const double rate = static_cast<double>(hits) / static_cast<double>(iterations);
    return {rate, std::sqrt(rate * (1.0 - rate) / static_cast<double>(iterations))};
}

MeanEstimate mean_of(std::int64_t sum, std::int64_t sum_sq, std::int64_t iterations) {
    const double n = static_cast<double>(iterations);
    const double mean = static_cast<double>(sum) / n;
    if (iterations < 2) return {mean, 0.0};
    const double variance =
        std::max(0.0, (static_cast<double>(sum_sq) - n * mean * mean) / (n - 1.0));
    return {mean, std::sqrt(variance / n)};
}

}  // namespace

OCReport OCReport::from_tally(const OCTally& tally, int burn_in, int total_n) {
    OCReport report;
    report.iterations = tally.iterations_;
    report.arms = tally.arms_;
    report.burn_in = burn_in;
    report.total_n = total_n;
    if (tally.iterations_ == 0) return report;
    const auto iters = tally.iterations_;
    for (int g = 1; g < tally.arms_; ++g) {
        report.raw_reject.push_back(rate_of(tally.raw_reject_[g - 1], iters));
        report.adjusted_reject.push_back(rate_of(tally.adjusted_reject_[g - 1], iters));
        report.selected.push_back(rate_of(tally.selected_[g - 1], iters));
        report.select_confirm.push_back(rate_of(tally.select_confirm_[g - 1], iters));
    }
    report.overall_power = rate_of(tally.any_rejection_, iters);
    for (int r = 0; r < tally.arms_; ++r) {
        report.avg_n_by_rank.push_back(mean_of(tally.n_by_rank_[r], tally.n_by_rank_sq_[r], iters));
        report.avg_n_by_arm.push_back(mean_of(tally.n_by_arm_[r], tally.n_by_arm_sq_[r], iters));
    }
    report.trajectory_by_rank.resize(tally.checkpoints_);
    for (int k = 0; k < tally.checkpoints_; ++k) {
        const double denominator = static_cast<double>(iters) * (burn_in + k + 1);
        for (int r = 0; r < tally.arms_; ++r)
            report.trajectory_by_rank[k].push_back(
                static_cast<double>(tally.trajectory_by_rank_[static_cast<std::size_t>(k) * tally.arms_ + r]) /
                denominator);
    }
    return report;
}

OCReport run_oc(const DesignConfig& cfg, std::int64_t iterations, std::uint64_t master_seed,
                int workers) {
    if (iterations < 1) throw ValidationError("iterations: must be at least 1");
    if (workers < 1) throw ValidationError("workers: must be at least 1");
    const DesignConfig validated = validate_config(cfg);
    const int checkpoints = validated.total_n - validated.burn_in;
    const double alpha = validated.analysis.alpha;

    const auto worker_count = static_cast<int>(std::min<std::int64_t>(workers, iterations));
    std::vector<OCTally> tallies(worker_count, OCTally(validated.arms, checkpoints));
    std::vector<std::exception_ptr> failures(worker_count);

    auto work = [&](int w) {
        const std::int64_t begin = iterations * w / worker_count;
        const std::int64_t end = iterations * (w + 1) / worker_count;
        for (std::int64_t i = begin; i < end; ++i) {
            RngStream rng(master_seed, static_cast<std::uint64_t>(i));
            try {
                tallies[w].add(simulate_validated(validated, rng), alpha);
            } catch (const std::exception& e) {
                failures[w] = std::make_exception_ptr(
                    SimulationError(static_cast<std::uint64_t>(i), e.what()));
                return;
            }
        }
    };

    if (worker_count == 1) {
        work(0);
    } else {
        std::vector<std::thread> threads;
        threads.reserve(worker_count);
        for (int w = 0; w < worker_count; ++w) threads.emplace_back(work, w);
        for (auto& t : threads) t.join();
    }
    // Workers own increasing stream ranges, so the first failure in worker
    // order is the one with the lowest stream id.
    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    OCTally total(validated.arms, checkpoints);
    for (const auto& tally : tallies) total.merge(tally);
    return OCReport::from_tally(total, validated.burn_in, validated.total_n);
}

}  // namespace adaptrand
