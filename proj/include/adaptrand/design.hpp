#pragma once

#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "adaptrand/error.hpp"

namespace adaptrand {

/// Arm 0 is always placebo; arms 1..m are the active doses.
inline constexpr int kPlacebo = 0;

struct NormalEndpoint {
    std::vector<double> means;  // per arm, placebo first
    double sigma = 1.0;         // known common standard deviation
    bool operator==(const NormalEndpoint&) const = default;
};

struct BinaryEndpoint {
    std::vector<double> rates;  // per arm response probability, placebo first
    bool operator==(const BinaryEndpoint&) const = default;
};

using EndpointSpec = std::variant<NormalEndpoint, BinaryEndpoint>;

struct FixedRandomization {
    std::vector<double> probs;
    bool operator==(const FixedRandomization&) const = default;
};

enum class BlockMode { per_subject, permuted_block };

/*
 * Response adaptive block randomization. block[0] is the placebo share; the
 * remaining entries are non-increasing and are handed to the active arms in
 * order of their current standardized response.
 */
struct RabrRandomization {
    std::vector<int> block;
    BlockMode mode = BlockMode::per_subject;

    int block_size() const;
    bool operator==(const RabrRandomization&) const = default;
};

/// Target tau_g proportional to sqrt(Phi((mu_g - lambda) / sigma)).
struct PhiPowerTarget {
    double lambda = 0.0;
    bool operator==(const PhiPowerTarget&) const = default;
};

/// Target proportional to sqrt(q_g (1 - q_g)) for binary responses.
struct NeymanTarget {
    bool operator==(const NeymanTarget&) const = default;
};

using DbcdTarget = std::variant<PhiPowerTarget, NeymanTarget>;

/// Doubly adaptive biased coin design.
struct DbcdRandomization {
    double eta = 2.0;
    DbcdTarget target = PhiPowerTarget{};
    bool operator==(const DbcdRandomization&) const = default;
};

using RandomizationSpec =
    std::variant<FixedRandomization, RabrRandomization, DbcdRandomization>;

enum class TestKind { z_known_variance, proportion, proportion_corrected };

enum class Multiplicity { none, bonferroni, dunnett_single_step, dunnett_step_down };

struct AnalysisSpec {
    double alpha = 0.025;  // one-sided
    TestKind test = TestKind::z_known_variance;
    Multiplicity multiplicity = Multiplicity::dunnett_step_down;
    bool operator==(const AnalysisSpec&) const = default;
};

struct DesignConfig {
    int arms = 0;  // placebo + active arms
    EndpointSpec endpoint;
    RandomizationSpec randomization;
    int burn_in = 0;
    int total_n = 0;
    AnalysisSpec analysis;

    int active_arms() const { return arms - 1; }
    bool is_binary() const { return std::holds_alternative<BinaryEndpoint>(endpoint); }
    /// Known sigma for normal endpoints, 1 for binary ones.
    double sigma() const;

    bool operator==(const DesignConfig&) const = default;
};

/*
 * Checks every invariant of the configuration and returns it with fixed
 * probabilities renormalized to sum to exactly one. Throws ValidationError
 * whose message names the offending field.
 */
DesignConfig validate_config(DesignConfig cfg);

/*
 * Running sufficient statistics of one simulated trial, plus the order in
 * which subjects were assigned.
 */
class TrialState {
   public:
    TrialState(int arms, bool binary, int expected_subjects = 0);

    int arms() const { return static_cast<int>(counts_.size()); }
    int count(int arm) const { return counts_.at(arm); }
    const std::vector<int>& counts() const { return counts_; }
    int total() const { return static_cast<int>(log_.size()); }

    double sum(int arm) const { return sums_.at(arm); }
    int responders(int arm) const { return responders_.at(arm); }

    /// Arm of each subject in enrollment order.
    const std::vector<int>& assignment_log() const { return log_; }

    void add_normal(int arm, double response);
    void add_binary(int arm, bool responded);

    /// Sample mean (normal data) or sample proportion (binary data).
    double arm_mean(int arm) const;

    bool binary() const { return binary_; }

   private:
    void check_arm(int arm) const;

    std::vector<int> counts_;
    std::vector<double> sums_;
    std::vector<int> responders_;
    std::vector<int> log_;
    bool binary_ = false;
};

}  // namespace adaptrand
