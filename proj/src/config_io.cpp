#include "ngmining/config_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace ngmining {

namespace {

using nlohmann::json;

[[noreturn]] void config_error(const std::string& msg) {
    throw std::runtime_error("config error: " + msg);
}

double require_number(const json& j, const std::string& key) {
    if (!j.contains(key) || !j.at(key).is_number()) {
        config_error("chain." + key + " must be a number");
    }
    return j.at(key).get<double>();
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error& e) {
        config_error(e.what());
    }

    ExperimentConfig cfg;
    if (!j.contains("chain") || !j.at("chain").is_object()) config_error("missing 'chain' object");
    const json& chain = j.at("chain");
    cfg.params.T = require_number(chain, "T");
    cfg.params.T_m = require_number(chain, "T_m");
    cfg.params.T_b = require_number(chain, "T_b");
    cfg.params.L = static_cast<int>(require_number(chain, "L"));
    cfg.params.alpha = require_number(chain, "alpha");
    cfg.params.r = require_number(chain, "r");
    cfg.params.R = require_number(chain, "R");
    cfg.params.d = require_number(chain, "d");

    if (!j.contains("pools") || !j.at("pools").is_array()) config_error("missing 'pools' array");
    double pow2d = std::exp2(cfg.params.d);
    for (const json& jp : j.at("pools")) {
        PoolSpec p;
        if (!jp.contains("id") || !jp.at("id").is_string()) config_error("pool without id");
        p.id = jp.at("id").get<std::string>();
        bool has_w = jp.contains("w");
        bool has_lambda = jp.contains("lambda");
        if (!has_w && !has_lambda) config_error("pool " + p.id + " needs 'w' or 'lambda'");
        if (has_w) p.w = jp.at("w").get<double>();
        if (has_lambda) p.lambda = jp.at("lambda").get<double>();
        if (!has_lambda) p.lambda = p.w / pow2d;
        if (!has_w) p.w = p.lambda * pow2d;
        cfg.pools.pools.push_back(std::move(p));
    }

    cfg.strategy.taus.assign(cfg.pools.size(), cfg.params.T_m);
    if (j.contains("strategy")) {
        const json& js = j.at("strategy");
        if (js.is_string()) {
            if (js.get<std::string>() != "honest") {
                config_error("strategy string must be \"honest\"");
            }
        } else if (js.is_array()) {
            if (static_cast<int>(js.size()) != cfg.pools.size()) {
                config_error("strategy array length must match the pool count");
            }
            for (int n = 0; n < cfg.pools.size(); ++n) {
                const json& e = js.at(n);
                if (e.is_string()) {
                    if (e.get<std::string>() != "honest") {
                        config_error("strategy entries must be numbers or \"honest\"");
                    }
                } else if (e.is_number()) {
                    cfg.strategy.taus[n] = e.get<double>();
                } else {
                    config_error("strategy entries must be numbers or \"honest\"");
                }
            }
        } else {
            config_error("'strategy' must be \"honest\" or an array");
        }
    }

    if (j.contains("sim")) {
        const json& js = j.at("sim");
        if (js.contains("rounds")) cfg.sim.rounds = js.at("rounds").get<std::int64_t>();
        if (js.contains("seed")) cfg.sim.seed = js.at("seed").get<std::uint64_t>();
        if (js.contains("miners_per_pool")) {
            cfg.sim.miners_per_pool = js.at("miners_per_pool").get<std::vector<std::int64_t>>();
            if (static_cast<int>(cfg.sim.miners_per_pool.size()) != cfg.pools.size()) {
                config_error("sim.miners_per_pool length must match the pool count");
            }
        }
        if (js.contains("tie_rule")) cfg.sim.tie_rule = js.at("tie_rule").get<std::string>();
        if (cfg.sim.tie_rule != "uniform") config_error("sim.tie_rule must be \"uniform\"");
        if (js.contains("micro_fraction_mode")) {
            std::string m = js.at("micro_fraction_mode").get<std::string>();
            if (m == "continuous") {
                cfg.sim.micro_fraction_mode = MicroFractionMode::continuous;
            } else if (m == "floored") {
                cfg.sim.micro_fraction_mode = MicroFractionMode::floored;
            } else {
                config_error("sim.micro_fraction_mode must be continuous|floored");
            }
        }
    }

    ValidationReport rep = validate_config(cfg.params, cfg.pools);
    ValidationReport srep = validate_strategy(cfg.params, cfg.pools, cfg.strategy);
    for (const auto& v : srep.violations) rep.fail(v);
    if (!rep.pass) {
        std::ostringstream oss;
        oss << "invalid configuration:";
        for (const auto& v : rep.violations) oss << "\n  - " << v;
        throw std::runtime_error(oss.str());
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) config_error("cannot open " + path);
    std::ostringstream oss;
    oss << in.rdbuf();
    return parse_config(oss.str());
}

std::vector<std::int64_t> resolve_miners(const ExperimentConfig& config) {
    if (!config.sim.miners_per_pool.empty()) return config.sim.miners_per_pool;
    std::vector<std::int64_t> miners;
    double pow2d = std::exp2(config.params.d);
    for (const auto& p : config.pools.pools) {
        miners.push_back(std::max<std::int64_t>(1, std::llround(p.lambda * pow2d)));
    }
    return miners;
}

std::string sim_stats_to_json(const SimStats& stats, const std::vector<std::string>& pool_ids) {
    json j;
    j["rng"] = stats.rng_name;
    j["seed"] = stats.config.seed;
    j["rounds"] = stats.rounds_completed;
    j["pools"] = pool_ids;
    j["miners_per_pool"] = stats.config.miners_per_pool;
    j["tau"] = stats.config.strategies.taus;
    j["wins"] = stats.wins;
    j["win_frequency"] = stats.win_frequency;
    j["total_reward"] = stats.total_reward;
    j["average_reward"] = stats.average_reward;
    j["reward_sum_squares"] = stats.reward_sum_squares;
    j["prev_case_counts"] = stats.prev_case_counts;
    j["avg_micro_blocks_included"] = stats.avg_micro_blocks_included;
    j["avg_micro_blocks_discarded"] = stats.avg_micro_blocks_discarded;
    return j.dump(2) + "\n";
}

}  // namespace ngmining
