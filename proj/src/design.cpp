#include "adaptrand/design.hpp"

#include <cmath>
#include <numeric>
#include <sstream>

namespace adaptrand {

int RabrRandomization::block_size() const {
    return std::accumulate(block.begin(), block.end(), 0);
}

double DesignConfig::sigma() const {
    if (const auto* normal = std::get_if<NormalEndpoint>(&endpoint)) return normal->sigma;
    return 1.0;
}

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ValidationError(field + ": " + what);
}

void validate_endpoint(const DesignConfig& cfg) {
    if (const auto* normal = std::get_if<NormalEndpoint>(&cfg.endpoint)) {
        if (static_cast<int>(normal->means.size()) != cfg.arms)
            fail("endpoint.means", "expected " + std::to_string(cfg.arms) +
                                       " entries (placebo first), got " +
                                       std::to_string(normal->means.size()));
        for (double mean : normal->means)
            if (!std::isfinite(mean)) fail("endpoint.means", "entries must be finite");
        if (!(normal->sigma > 0.0) || !std::isfinite(normal->sigma))
            fail("endpoint.sigma", "must be a positive finite number");
        return;
    }
    const auto& binary = std::get<BinaryEndpoint>(cfg.endpoint);
    if (static_cast<int>(binary.rates.size()) != cfg.arms)
        fail("endpoint.rates", "expected " + std::to_string(cfg.arms) +
                                   " entries (placebo first), got " +
                                   std::to_string(binary.rates.size()));
    for (double rate : binary.rates)
        if (!(rate > 0.0 && rate < 1.0)) fail("endpoint.rates", "each rate must lie in (0, 1)");
}

void validate_randomization(DesignConfig& cfg) {
    if (auto* fixed = std::get_if<FixedRandomization>(&cfg.randomization)) {
        if (static_cast<int>(fixed->probs.size()) != cfg.arms)
            fail("randomization.probs", "expected " + std::to_string(cfg.arms) + " entries");
        double total = 0.0;
        for (double p : fixed->probs) {
            if (!(p >= 0.0 && p <= 1.0)) fail("randomization.probs", "entries must lie in [0, 1]");
            total += p;
        }
        if (std::abs(total - 1.0) > 1e-12) {
            std::ostringstream msg;
            msg << "probabilities sum to " << total << ", not 1";
            fail("randomization.probs", msg.str());
        }
        for (double& p : fixed->probs) p /= total;
        return;
    }
    if (auto* rabr = std::get_if<RabrRandomization>(&cfg.randomization)) {
        const auto& block = rabr->block;
        if (static_cast<int>(block.size()) != cfg.arms)
            fail("randomization.block", "expected " + std::to_string(cfg.arms) + " entries");
        if (block[0] < 1) fail("randomization.block", "placebo entry r0 must be at least 1");
        for (std::size_t g = 1; g < block.size(); ++g) {
            if (block[g] < 0) fail("randomization.block", "entries must be non-negative");
            if (g >= 2 && block[g] > block[g - 1])
                fail("randomization.block",
                     "active entries must be non-increasing (r" + std::to_string(g - 1) +
                         " >= r" + std::to_string(g) + " violated)");
        }
        return;
    }
    const auto& dbcd = std::get<DbcdRandomization>(cfg.randomization);
    if (!(dbcd.eta >= 0.0) || !std::isfinite(dbcd.eta))
        fail("randomization.eta", "must be a non-negative finite number");
    if (const auto* phi = std::get_if<PhiPowerTarget>(&dbcd.target)) {
        if (!std::isfinite(phi->lambda)) fail("randomization.target.lambda", "must be finite");
    } else if (!cfg.is_binary()) {
        fail("randomization.target", "the neyman target requires a binary endpoint");
    }
}

void validate_analysis(const DesignConfig& cfg) {
    const double alpha = cfg.analysis.alpha;
    if (!(alpha > 0.0 && alpha < 0.5)) fail("analysis.alpha", "must lie in (0, 0.5)");
    const bool wants_proportion = cfg.analysis.test != TestKind::z_known_variance;
    if (wants_proportion != cfg.is_binary())
        fail("analysis.test", wants_proportion
                                  ? "the proportion test requires a binary endpoint"
                                  : "the z test requires a normal endpoint");
}

}  // namespace

DesignConfig validate_config(DesignConfig cfg) {
    if (cfg.arms < 2) fail("arms", "need placebo plus at least one active arm");
    if (cfg.burn_in < 1) fail("burn_in", "must be positive");
    if (cfg.burn_in % cfg.arms != 0)
        fail("burn_in", std::to_string(cfg.burn_in) + " is not divisible by the arm count " +
                            std::to_string(cfg.arms));
    if (cfg.total_n < cfg.burn_in)
        fail("total_n", "must be at least burn_in (" + std::to_string(cfg.burn_in) + ")");
    validate_endpoint(cfg);
    validate_randomization(cfg);
    validate_analysis(cfg);
    return cfg;
}

TrialState::TrialState(int arms, bool binary, int expected_subjects)
    : counts_(arms, 0), sums_(arms, 0.0), responders_(arms, 0), binary_(binary) {
    if (arms < 1) throw ValidationError("TrialState: need at least one arm");
    log_.reserve(expected_subjects);
}

void TrialState::check_arm(int arm) const {
    if (arm < 0 || arm >= arms())
        throw DomainError("TrialState: arm index " + std::to_string(arm) + " out of range");
}

void TrialState::add_normal(int arm, double response) {
    check_arm(arm);
    ++counts_[arm];
    sums_[arm] += response;
    log_.push_back(arm);
}

void TrialState::add_binary(int arm, bool responded) {
    check_arm(arm);
    ++counts_[arm];
    if (responded) {
        ++responders_[arm];
        sums_[arm] += 1.0;
    }
    log_.push_back(arm);
}

double TrialState::arm_mean(int arm) const {
    check_arm(arm);
    if (counts_[arm] == 0)
        throw EmptyArmError("arm " + std::to_string(arm) + " has no subjects");
    if (binary_) return static_cast<double>(responders_[arm]) / counts_[arm];
    return sums_[arm] / counts_[arm];
}

}  // namespace adaptrand
