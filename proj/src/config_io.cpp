#include "adaptrand/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace adaptrand {

using nlohmann::json;

std::string to_string(BlockMode mode) {
    return mode == BlockMode::per_subject ? "per-subject" : "permuted-block";
}

std::string to_string(TestKind test) {
    switch (test) {
        case TestKind::z_known_variance: return "z-known-variance";
        case TestKind::proportion: return "proportion";
        case TestKind::proportion_corrected: return "proportion-corrected";
    }
    return "unknown";
}

std::string to_string(Multiplicity procedure) {
    switch (procedure) {
        case Multiplicity::none: return "none";
        case Multiplicity::bonferroni: return "bonferroni";
        case Multiplicity::dunnett_single_step: return "dunnett-single-step";
        case Multiplicity::dunnett_step_down: return "dunnett-step-down";
    }
    return "unknown";
}

json config_to_json(const DesignConfig& cfg) {
    json doc;
    doc["arms"] = cfg.arms;
    if (const auto* normal = std::get_if<NormalEndpoint>(&cfg.endpoint)) {
        doc["endpoint"] = {{"type", "normal"}, {"means", normal->means}, {"sigma", normal->sigma}};
    } else {
        doc["endpoint"] = {{"type", "binary"},
                           {"rates", std::get<BinaryEndpoint>(cfg.endpoint).rates}};
    }
    if (const auto* fixed = std::get_if<FixedRandomization>(&cfg.randomization)) {
        doc["randomization"] = {{"type", "fixed"}, {"probs", fixed->probs}};
    } else if (const auto* rabr = std::get_if<RabrRandomization>(&cfg.randomization)) {
        doc["randomization"] = {
            {"type", "rabr"}, {"block", rabr->block}, {"mode", to_string(rabr->mode)}};
    } else {
        const auto& dbcd = std::get<DbcdRandomization>(cfg.randomization);
        json target;
        if (const auto* phi = std::get_if<PhiPowerTarget>(&dbcd.target))
            target = {{"type", "phi-power"}, {"lambda", phi->lambda}};
        else
            target = {{"type", "neyman"}};
        doc["randomization"] = {{"type", "dbcd"}, {"eta", dbcd.eta}, {"target", target}};
    }
    doc["burn_in"] = cfg.burn_in;
    doc["total_n"] = cfg.total_n;
    doc["analysis"] = {{"alpha", cfg.analysis.alpha},
                       {"test", to_string(cfg.analysis.test)},
                       {"multiplicity", to_string(cfg.analysis.multiplicity)}};
    return doc;
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& what) {
    throw ValidationError(path + ": " + what);
}

std::string join(const std::string& parent, const std::string& key) {
    return parent.empty() ? key : parent + "." + key;
}

void require_object(const json& node, const std::string& path) {
    if (!node.is_object()) fail(path.empty() ? "(root)" : path, "expected a JSON object");
}

void reject_unknown(const json& node, const std::string& path,
                    std::initializer_list<const char*> allowed) {
    const std::set<std::string> keys(allowed.begin(), allowed.end());
    for (const auto& item : node.items())
        if (!keys.contains(item.key())) fail(join(path, item.key()), "unknown key");
}

const json& member(const json& node, const std::string& path, const char* key) {
    const auto it = node.find(key);
    if (it == node.end()) fail(join(path, key), "missing required field");
    return *it;
}

double number(const json& node, const std::string& path, const char* key) {
    const json& value = member(node, path, key);
    if (!value.is_number()) fail(join(path, key), "expected a number");
    return value.get<double>();
}

int integer(const json& node, const std::string& path, const char* key) {
    const json& value = member(node, path, key);
    if (!value.is_number_integer()) fail(join(path, key), "expected an integer");
    return value.get<int>();
}

std::string text(const json& node, const std::string& path, const char* key) {
    const json& value = member(node, path, key);
    if (!value.is_string()) fail(join(path, key), "expected a string");
    return value.get<std::string>();
}

template <class T>
std::vector<T> list(const json& node, const std::string& path, const char* key) {
    const json& value = member(node, path, key);
    if (!value.is_array()) fail(join(path, key), "expected an array");
    std::vector<T> out;
    for (const auto& entry : value) {
        if constexpr (std::is_integral_v<T>) {
            if (!entry.is_number_integer()) fail(join(path, key), "expected integers");
        } else {
            if (!entry.is_number()) fail(join(path, key), "expected numbers");
        }
        out.push_back(entry.get<T>());
    }
    return out;
}

EndpointSpec endpoint_from_json(const json& node) {
    const std::string path = "endpoint";
    require_object(node, path);
    const std::string type = text(node, path, "type");
    if (type == "normal") {
        reject_unknown(node, path, {"type", "means", "sigma"});
        return NormalEndpoint{list<double>(node, path, "means"), number(node, path, "sigma")};
    }
    if (type == "binary") {
        reject_unknown(node, path, {"type", "rates"});
        return BinaryEndpoint{list<double>(node, path, "rates")};
    }
    fail("endpoint.type", "expected \"normal\" or \"binary\", got \"" + type + "\"");
}

RandomizationSpec randomization_from_json(const json& node) {
    const std::string path = "randomization";
    require_object(node, path);
    const std::string type = text(node, path, "type");
    if (type == "fixed") {
        reject_unknown(node, path, {"type", "probs"});
        return FixedRandomization{list<double>(node, path, "probs")};
    }
    if (type == "rabr") {
        reject_unknown(node, path, {"type", "block", "mode"});
        RabrRandomization rabr{list<int>(node, path, "block"), BlockMode::per_subject};
        if (node.contains("mode")) {
            const std::string mode = text(node, path, "mode");
            if (mode == "per-subject")
                rabr.mode = BlockMode::per_subject;
            else if (mode == "permuted-block")
                rabr.mode = BlockMode::permuted_block;
            else
                fail("randomization.mode", "expected \"per-subject\" or \"permuted-block\"");
        }
        return rabr;
    }
    if (type == "dbcd") {
        reject_unknown(node, path, {"type", "eta", "target"});
        DbcdRandomization dbcd;
        dbcd.eta = number(node, path, "eta");
        const json& target = member(node, path, "target");
        const std::string target_path = "randomization.target";
        require_object(target, target_path);
        const std::string kind = text(target, target_path, "type");
        if (kind == "phi-power") {
            reject_unknown(target, target_path, {"type", "lambda"});
            dbcd.target = PhiPowerTarget{number(target, target_path, "lambda")};
        } else if (kind == "neyman") {
            reject_unknown(target, target_path, {"type"});
            dbcd.target = NeymanTarget{};
        } else {
            fail("randomization.target.type", "expected \"phi-power\" or \"neyman\"");
        }
        return dbcd;
    }
    fail("randomization.type", "expected \"fixed\", \"rabr\" or \"dbcd\", got \"" + type + "\"");
}

AnalysisSpec analysis_from_json(const json& node) {
    const std::string path = "analysis";
    require_object(node, path);
    reject_unknown(node, path, {"alpha", "test", "multiplicity"});
    AnalysisSpec analysis;
    analysis.alpha = number(node, path, "alpha");
    const std::string test = text(node, path, "test");
    if (test == "z-known-variance")
        analysis.test = TestKind::z_known_variance;
    else if (test == "proportion")
        analysis.test = TestKind::proportion;
    else if (test == "proportion-corrected")
        analysis.test = TestKind::proportion_corrected;
    else
        fail("analysis.test",
             "expected \"z-known-variance\", \"proportion\" or \"proportion-corrected\"");
    const std::string procedure = text(node, path, "multiplicity");
    if (procedure == "none")
        analysis.multiplicity = Multiplicity::none;
    else if (procedure == "bonferroni")
        analysis.multiplicity = Multiplicity::bonferroni;
    else if (procedure == "dunnett-single-step")
        analysis.multiplicity = Multiplicity::dunnett_single_step;
    else if (procedure == "dunnett-step-down")
        analysis.multiplicity = Multiplicity::dunnett_step_down;
    else
        fail("analysis.multiplicity", "unknown procedure \"" + procedure + "\"");
    return analysis;
}

}  // namespace

DesignConfig config_from_json(const json& doc) {
    require_object(doc, "");
    reject_unknown(doc, "",
                   {"arms", "endpoint", "randomization", "burn_in", "total_n", "analysis"});
    DesignConfig cfg;
    cfg.arms = integer(doc, "", "arms");
    cfg.endpoint = endpoint_from_json(member(doc, "", "endpoint"));
    cfg.randomization = randomization_from_json(member(doc, "", "randomization"));
    cfg.burn_in = integer(doc, "", "burn_in");
    cfg.total_n = integer(doc, "", "total_n");
    cfg.analysis = analysis_from_json(member(doc, "", "analysis"));
    return validate_config(std::move(cfg));
}

DesignConfig parse_config_text(std::string_view text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        std::size_t line = 1;
        std::size_t column = 1;
        const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
        for (std::size_t i = 0; i < end; ++i) {
            if (text[i] == '\n') {
                ++line;
                column = 1;
            } else {
                ++column;
            }
        }
        std::ostringstream msg;
        msg << "parse error at line " << line << ", column " << column << ": " << e.what();
        throw ConfigParseError(msg.str());
    }
    return config_from_json(doc);
}

DesignConfig parse_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open config file " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    try {
        return parse_config_text(buffer.str());
    } catch (const ConfigParseError& e) {
        throw ConfigParseError(path.string() + ": " + e.what());
    }
}

std::string serialize_config(const DesignConfig& cfg) { return config_to_json(cfg).dump(2); }

std::uint64_t config_digest(const DesignConfig& cfg) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char ch : config_to_json(cfg).dump()) {
        hash ^= ch;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

}  // namespace adaptrand
