#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>

#include <json.hpp>

#include "adaptrand/design.hpp"

namespace adaptrand {

/// Malformed JSON text; the message carries line and column.
class ConfigParseError : public ValidationError {
   public:
    using ValidationError::ValidationError;
};

/*
 * JSON form of a DesignConfig:
 *
 *   {"arms": 4,
 *    "endpoint": {"type": "normal", "means": [...], "sigma": 1}
 *              | {"type": "binary", "rates": [...]},
 *    "randomization": {"type": "fixed", "probs": [...]}
 *                   | {"type": "rabr", "block": [...], "mode": "per-subject" | "permuted-block"}
 *                   | {"type": "dbcd", "eta": 2,
 *                      "target": {"type": "phi-power", "lambda": 0} | {"type": "neyman"}},
 *    "burn_in": 60, "total_n": 120,
 *    "analysis": {"alpha": 0.025, "test": "z-known-variance" | "proportion" | "proportion-corrected",
 *                 "multiplicity": "none" | "bonferroni" | "dunnett-single-step"
 *                               | "dunnett-step-down"}}
 *
 * Unknown keys are rejected. "mode" defaults to per-subject.
 */
nlohmann::json config_to_json(const DesignConfig& cfg);

/// Decodes and validates; errors name the field path, e.g. "analysis.alpha".
DesignConfig config_from_json(const nlohmann::json& doc);

DesignConfig parse_config_text(std::string_view text);
DesignConfig parse_config(const std::filesystem::path& path);

/// Pretty-printed JSON text.
std::string serialize_config(const DesignConfig& cfg);

/// FNV-1a 64 digest of the compact JSON form.
std::uint64_t config_digest(const DesignConfig& cfg);

std::string to_string(BlockMode mode);
std::string to_string(TestKind test);
std::string to_string(Multiplicity procedure);

}  // namespace adaptrand
