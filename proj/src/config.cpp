#include "istail/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace istail {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigSchemaError("config field '" + field + "': " + what);
}

double require_number(const json& j, const std::string& field) {
    if (!j.is_number()) fail(field, "must be a number");
    return j.get<double>();
}

int require_int(const json& j, const std::string& field) {
    if (!j.is_number_integer()) fail(field, "must be an integer");
    return j.get<int>();
}

std::string require_string(const json& j, const std::string& field) {
    if (!j.is_string()) fail(field, "must be a string");
    return j.get<std::string>();
}

Algorithm parse_algorithm(const std::string& s) {
    if (s == "standard_mc") return Algorithm::StandardMC;
    if (s == "conditional_mixture") return Algorithm::ConditionalMixture;
    if (s == "scaling_mixture") return Algorithm::ScalingMixture;
    fail("algorithm",
         "must be one of standard_mc, conditional_mixture, scaling_mixture (got '" + s + "')");
}

Mode parse_mode(const std::string& s) {
    if (s == "var") return Mode::VaR;
    if (s == "es") return Mode::ES;
    if (s == "tail_prob") return Mode::TailProb;
    fail("mode", "must be one of var, es, tail_prob (got '" + s + "')");
}

}  // namespace

CliConfig parse_cli_config(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigSchemaError(std::string("config is not valid JSON: ") + e.what());
    }
    if (!root.is_object()) throw ConfigSchemaError("config root must be a JSON object");

    static const std::set<std::string> known = {
        "alpha",        "n",    "levels", "algorithm", "mode",   "num_samples", "replications",
        "seed",         "a",    "sigma",  "mix_p",     "format", "output",      "workers"};
    for (const auto& [key, value] : root.items())
        if (!known.count(key)) fail(key, "unknown key");

    static const std::set<std::string> required = {"alpha",       "n",    "levels",
                                                   "algorithm",   "mode", "num_samples",
                                                   "replications", "seed"};
    for (const auto& key : required)
        if (!root.contains(key)) fail(key, "missing required key");

    CliConfig cli;
    ExperimentConfig& exp = cli.experiment;

    exp.alpha = require_number(root["alpha"], "alpha");
    if (!(exp.alpha > 0.0)) fail("alpha", "must be > 0");

    exp.n = require_int(root["n"], "n");
    if (exp.n < 1) fail("n", "must be >= 1");

    if (!root["levels"].is_array() || root["levels"].empty())
        fail("levels", "must be a non-empty array of numbers");
    for (const auto& item : root["levels"]) {
        const double p = require_number(item, "levels");
        if (!(p > 0.0 && p < 1.0)) fail("levels", "entries must be in (0,1)");
        exp.levels.push_back(p);
    }

    exp.algorithm = parse_algorithm(require_string(root["algorithm"], "algorithm"));
    exp.mode = parse_mode(require_string(root["mode"], "mode"));

    const int num_samples = require_int(root["num_samples"], "num_samples");
    if (num_samples < 1) fail("num_samples", "must be >= 1");
    exp.num_samples = static_cast<std::size_t>(num_samples);

    exp.replications = require_int(root["replications"], "replications");
    if (exp.replications < 1) fail("replications", "must be >= 1");

    if (!root["seed"].is_number_unsigned() && !root["seed"].is_number_integer())
        fail("seed", "must be a non-negative integer");
    if (root["seed"].is_number_integer() && root["seed"].get<std::int64_t>() < 0)
        fail("seed", "must be a non-negative integer");
    exp.seed = root["seed"].get<std::uint64_t>();

    if (root.contains("a")) {
        exp.a = require_number(root["a"], "a");
        if (!(exp.a > 0.0 && exp.a < 1.0)) fail("a", "must be in (0,1)");
    }
    if (root.contains("sigma")) {
        exp.sigma = require_number(root["sigma"], "sigma");
        if (!(exp.sigma > 0.0)) fail("sigma", "must be > 0");
    }
    if (root.contains("mix_p")) {
        if (!root["mix_p"].is_array()) fail("mix_p", "must be an array of numbers");
        for (const auto& item : root["mix_p"]) {
            const double p = require_number(item, "mix_p");
            if (!(p > 0.0 && p < 1.0)) fail("mix_p", "entries must be in (0,1)");
            exp.mix_p.push_back(p);
        }
    }
    if (root.contains("workers")) {
        exp.workers = require_int(root["workers"], "workers");
        if (exp.workers < 0) fail("workers", "must be >= 0");
    }
    if (root.contains("format")) {
        cli.format = require_string(root["format"], "format");
        if (cli.format != "csv" && cli.format != "table")
            fail("format", "must be 'csv' or 'table'");
    }
    if (root.contains("output")) cli.output = require_string(root["output"], "output");

    return cli;
}

CliConfig load_cli_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigFileError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) throw ConfigFileError("cannot read config file: " + path);
    return parse_cli_config(ss.str());
}

}  // namespace istail
