#pragma once

#include <cstdint>
#include <vector>

#include "adaptrand/design.hpp"
#include "adaptrand/multiplicity.hpp"
#include "adaptrand/rng.hpp"

namespace adaptrand {

/// Outcome of one simulated trial.
struct TrialResult {
    std::vector<int> final_counts;
    std::vector<double> statistics;  // per active arm, arm g at g - 1
    AdjustedResult adjusted;
    int selected = 0;  // S1, the arm with the smallest adjusted p
    bool confirmed = false;
    bool rejected_any = false;
    int burn_in = 0;
    // arm counts after each adaptive assignment; row k follows subject burn_in + k + 1
    std::vector<std::vector<int>> trajectory_counts;

    std::vector<std::vector<double>> proportion_trajectory() const;
};

/// A simulation failure tagged with the stream that produced it.
class SimulationError : public Error {
   public:
    SimulationError(std::uint64_t stream_id, const std::string& what)
        : Error("stream " + std::to_string(stream_id) + ": " + what), stream_id_(stream_id) {}
    std::uint64_t stream_id() const { return stream_id_; }

   private:
    std::uint64_t stream_id_;
};

/*
 * Runs one trial: equal permuted-block burn-in, then total_n - burn_in
 * adaptive assignments with instantly observed responses, then the
 * configured test and multiplicity adjustment on the cumulative data.
 */
TrialResult simulate_trial(const DesignConfig& cfg, RngStream& stream);

/// Arms by report rank: placebo, then S1, S2, ... following the selection order.
std::vector<int> rank_arms_for_report(const TrialResult& result);

struct RateEstimate {
    double rate = 0.0;
    double mc_se = 0.0;  // sqrt(rate (1 - rate) / iterations)
    bool operator==(const RateEstimate&) const = default;
};

struct MeanEstimate {
    double mean = 0.0;
    double mc_se = 0.0;  // sample standard deviation / sqrt(iterations)
    bool operator==(const MeanEstimate&) const = default;
};

/*
 * Integer tallies over a set of trials. Merging is exact, so the final report
 * does not depend on how trials were split between workers.
 */
class OCTally {
   public:
    OCTally() = default;
    OCTally(int arms, int checkpoints);

    void add(const TrialResult& result, double alpha);
    void merge(const OCTally& other);

    std::int64_t iterations() const { return iterations_; }

   private:
    friend struct OCReport;
    int arms_ = 0;
    int checkpoints_ = 0;
    std::int64_t iterations_ = 0;
    std::int64_t any_rejection_ = 0;
    std::vector<std::int64_t> raw_reject_;
    std::vector<std::int64_t> adjusted_reject_;
    std::vector<std::int64_t> selected_;
    std::vector<std::int64_t> select_confirm_;
    std::vector<std::int64_t> n_by_rank_;
    std::vector<std::int64_t> n_by_rank_sq_;
    std::vector<std::int64_t> n_by_arm_;
    std::vector<std::int64_t> n_by_arm_sq_;
    std::vector<std::int64_t> trajectory_by_rank_;  // [checkpoint * arms + rank]
};

/*
 * Operating characteristics over many trials. Per-dose vectors are indexed by
 * arm g at g - 1; by-rank vectors run placebo, S1, S2, ...
 */
struct OCReport {
    std::int64_t iterations = 0;
    int arms = 0;
    int burn_in = 0;
    int total_n = 0;
    std::vector<RateEstimate> raw_reject;       // unadjusted p < alpha
    std::vector<RateEstimate> adjusted_reject;  // adjusted p < alpha
    std::vector<RateEstimate> selected;         // dose chosen as S1
    std::vector<RateEstimate> select_confirm;   // chosen as S1 and adjusted p < alpha
    RateEstimate overall_power;                 // any adjusted rejection; the FWER under the null
    std::vector<MeanEstimate> avg_n_by_rank;
    std::vector<MeanEstimate> avg_n_by_arm;
    std::vector<std::vector<double>> trajectory_by_rank;  // [checkpoint][rank]

    static OCReport from_tally(const OCTally& tally, int burn_in, int total_n);
    bool operator==(const OCReport&) const = default;
};

/*
 * Simulates trials with streams (master_seed, 0), ..., (master_seed,
 * iterations - 1) on `workers` threads and aggregates them. The report is
 * bit-identical for every worker count.
 */
OCReport run_oc(const DesignConfig& cfg, std::int64_t iterations, std::uint64_t master_seed,
                int workers = 1);

}  // namespace adaptrand
