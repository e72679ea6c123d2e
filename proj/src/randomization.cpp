#include "adaptrand/randomization.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "adaptrand/numerics.hpp"

namespace adaptrand {

double standardized_measure(const TrialState& state, int arm, double sigma) {
    const double mean = state.arm_mean(arm);
    const double root_n = std::sqrt(static_cast<double>(state.count(arm)));
    if (state.binary()) return root_n * mean;
    return root_n * mean / sigma;
}

ArmRanking rank_arms(std::span<const double> measures, RngStream& rng) {
    ArmRanking ranking;
    ranking.measures.assign(measures.begin(), measures.end());
    ranking.order.resize(measures.size());
    std::iota(ranking.order.begin(), ranking.order.end(), 1);
    std::stable_sort(ranking.order.begin(), ranking.order.end(), [&](int a, int b) {
        return measures[a - 1] > measures[b - 1];
    });
    for (std::size_t start = 0; start < ranking.order.size();) {
        std::size_t end = start + 1;
        while (end < ranking.order.size() &&
               measures[ranking.order[end] - 1] == measures[ranking.order[start] - 1])
            ++end;
        if (end - start > 1)
            rng.shuffle(std::span<int>(ranking.order).subspan(start, end - start));
        start = end;
    }
    return ranking;
}

std::vector<double> rabr_probabilities(std::span<const int> block, const ArmRanking& ranking) {
    const double block_size = std::accumulate(block.begin(), block.end(), 0.0);
    std::vector<double> probs(block.size(), 0.0);
    probs[kPlacebo] = block[0] / block_size;
    for (std::size_t rank = 0; rank < ranking.order.size(); ++rank)
        probs[ranking.order[rank]] = block[rank + 1] / block_size;
    return probs;
}

void BlockCursor::refill(std::span<const int> block, ArmRanking ranking, RngStream& rng) {
    frozen_ = std::move(ranking);
    remaining_.clear();
    remaining_.insert(remaining_.end(), block[0], kPlacebo);
    for (std::size_t rank = 0; rank < frozen_.order.size(); ++rank)
        remaining_.insert(remaining_.end(), block[rank + 1], frozen_.order[rank]);
    rng.shuffle(std::span<int>(remaining_));
}

int BlockCursor::pop() {
    const int arm = remaining_.back();
    remaining_.pop_back();
    return arm;
}

namespace {

ArmRanking current_ranking(const TrialState& state, double sigma, RngStream& rng) {
    std::vector<double> measures(state.arms() - 1);
    for (int g = 1; g < state.arms(); ++g)
        measures[g - 1] = standardized_measure(state, g, sigma);
    return rank_arms(measures, rng);
}

}  // namespace

int rabr_next_assignment(const TrialState& state, const RabrRandomization& spec,
                         BlockCursor& cursor, double sigma, RngStream& rng) {
    if (spec.mode == BlockMode::permuted_block) {
        if (cursor.empty()) cursor.refill(spec.block, current_ranking(state, sigma, rng), rng);
        return cursor.pop();
    }
    const ArmRanking ranking = current_ranking(state, sigma, rng);
    // Integer draw over the block keeps each probability exactly r_k / B.
    auto slot = static_cast<int>(rng.uniform_int(static_cast<std::uint32_t>(spec.block_size())));
    if (slot < spec.block[0]) return kPlacebo;
    slot -= spec.block[0];
    for (std::size_t rank = 0; rank < ranking.order.size(); ++rank) {
        if (slot < spec.block[rank + 1]) return ranking.order[rank];
        slot -= spec.block[rank + 1];
    }
    return ranking.order.back();  // unreachable: slot < B
}

std::vector<double> dbcd_target_allocation(std::span<const double> means, double sigma,
                                           double lambda) {
    std::vector<double> tau(means.size());
    double total = 0.0;
    for (std::size_t g = 0; g < means.size(); ++g) {
        tau[g] = std::sqrt(numerics::normal_cdf((means[g] - lambda) / sigma));
        total += tau[g];
    }
    if (total == 0.0) {
        // every Phi underflowed; the limiting allocation is proportional to
        // exp(-z^2 / 4) / |z|^(1/2), dominated by the largest mean
        const auto best = std::max_element(means.begin(), means.end()) - means.begin();
        std::fill(tau.begin(), tau.end(), 0.0);
        tau[best] = 1.0;
        return tau;
    }
    for (double& t : tau) t /= total;
    return tau;
}

std::vector<double> dbcd_neyman_allocation(std::span<const double> rates) {
    std::vector<double> alloc(rates.size());
    double total = 0.0;
    for (std::size_t g = 0; g < rates.size(); ++g) {
        alloc[g] = std::sqrt(rates[g] * (1.0 - rates[g]));
        total += alloc[g];
    }
    for (double& a : alloc) a /= total;
    return alloc;
}

double guarded_rate(int responders, int n) {
    if (n <= 0) throw EmptyArmError("guarded_rate: arm has no subjects");
    if (responders == 0 || responders == n) return (responders + 0.5) / (n + 1.0);
    return static_cast<double>(responders) / n;
}

std::vector<double> dbcd_allocation_probability(double eta, std::span<const double> theta,
                                                std::span<const double> tau_hat) {
    const std::size_t arms = theta.size();
    std::vector<double> alloc(arms, 0.0);
    const auto empty = std::count(theta.begin(), theta.end(), 0.0);
    if (empty > 0) {
        for (std::size_t g = 0; g < arms; ++g)
            if (theta[g] == 0.0) alloc[g] = 1.0 / static_cast<double>(empty);
        return alloc;
    }
    double total = 0.0;
    for (std::size_t g = 0; g < arms; ++g) {
        if (theta[g] >= 1.0) continue;
        alloc[g] = tau_hat[g] * std::pow(tau_hat[g] / theta[g], eta);
        total += alloc[g];
    }
    for (double& a : alloc) a /= total;
    return alloc;
}

int dbcd_next_assignment(const TrialState& state, const DbcdRandomization& spec, double sigma,
                         RngStream& rng) {
    const int arms = state.arms();
    std::vector<double> theta(arms);
    std::vector<double> estimates(arms);
    for (int g = 0; g < arms; ++g) {
        theta[g] = static_cast<double>(state.count(g)) / state.total();
        estimates[g] = std::holds_alternative<NeymanTarget>(spec.target)
                           ? guarded_rate(state.responders(g), state.count(g))
                           : state.arm_mean(g);
    }
    const std::vector<double> tau_hat =
        std::holds_alternative<NeymanTarget>(spec.target)
            ? dbcd_neyman_allocation(estimates)
            : dbcd_target_allocation(estimates, sigma, std::get<PhiPowerTarget>(spec.target).lambda);
    const std::vector<double> probs = dbcd_allocation_probability(spec.eta, theta, tau_hat);
    return draw_arm(probs, rng);
}

int draw_arm(std::span<const double> probs, RngStream& rng) {
    const double u = rng.uniform();
    double cumulative = 0.0;
    int last_positive = 0;
    for (std::size_t g = 0; g < probs.size(); ++g) {
        if (probs[g] <= 0.0) continue;
        last_positive = static_cast<int>(g);
        cumulative += probs[g];
        if (u < cumulative) return static_cast<int>(g);
    }
    return last_positive;
}

}  // namespace adaptrand
