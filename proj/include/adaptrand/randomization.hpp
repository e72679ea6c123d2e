#pragma once

#include <span>
#include <vector>

#include "adaptrand/design.hpp"
#include "adaptrand/rng.hpp"

namespace adaptrand {

/*
 * Active arms ordered from best to worst. order holds arm indices 1..m;
 * measures[g - 1] is the ranking statistic of arm g.
 */
struct ArmRanking {
    std::vector<int> order;
    std::vector<double> measures;
};

/*
 * sqrt(n_g) * xbar_g / sigma on all data accumulated so far. For binary data
 * the statistic is sqrt(n_g) * phat_g and sigma is ignored: any pooled
 * standard deviation is a common factor and leaves the ordering unchanged.
 */
double standardized_measure(const TrialState& state, int arm, double sigma);

/// Sorts arms by descending measure; exact ties are shuffled with rng.
ArmRanking rank_arms(std::span<const double> measures, RngStream& rng);

/// Per-arm probabilities (placebo first): placebo r0/B, k-th best arm r_k/B.
std::vector<double> rabr_probabilities(std::span<const int> block, const ArmRanking& ranking);

/// Remaining assignments of the current permuted block.
class BlockCursor {
   public:
    bool empty() const { return remaining_.empty(); }
    std::size_t size() const { return remaining_.size(); }
    const ArmRanking& frozen_ranking() const { return frozen_; }

    void refill(std::span<const int> block, ArmRanking ranking, RngStream& rng);
    int pop();

   private:
    std::vector<int> remaining_;  // next assignment at the back
    ArmRanking frozen_;
};

/*
 * Next adaptive assignment under RABR. Per-subject mode re-ranks on the
 * cumulative data and draws one arm; permuted-block mode re-ranks only when
 * the cursor is exhausted and then deals the shuffled block.
 */
int rabr_next_assignment(const TrialState& state, const RabrRandomization& spec,
                         BlockCursor& cursor, double sigma, RngStream& rng);

/// tau_g proportional to sqrt(Phi((mean_g - lambda) / sigma)), all arms.
std::vector<double> dbcd_target_allocation(std::span<const double> means, double sigma,
                                           double lambda);

/// Allocation proportional to sqrt(q_g (1 - q_g)).
std::vector<double> dbcd_neyman_allocation(std::span<const double> rates);

/// Sample proportion, replaced by (R + 0.5) / (n + 1) when R is 0 or n.
double guarded_rate(int responders, int n);

/*
 * Allocation function a_g = tau_g (tau_g / theta_g)^eta, normalized. Arms
 * with theta_g = 0 take all of the probability (shared equally) and arms with
 * theta_g = 1 get none.
 */
std::vector<double> dbcd_allocation_probability(double eta, std::span<const double> theta,
                                                std::span<const double> tau_hat);

/// Next assignment under DBCD, re-estimating the target from current data.
int dbcd_next_assignment(const TrialState& state, const DbcdRandomization& spec, double sigma,
                         RngStream& rng);

/// Draws an index with the given probabilities (which must sum to one).
int draw_arm(std::span<const double> probs, RngStream& rng);

}  // namespace adaptrand
