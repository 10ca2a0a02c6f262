#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ngmining/params.hpp"
#include "ngmining/sim.hpp"

namespace ngmining {

/// Simulation block of the JSON config.
struct SimSettings {
    std::int64_t rounds = 1000;
    std::uint64_t seed = 1;
    std::vector<std::int64_t> miners_per_pool;  // empty: derived from lambda and d
    std::string tie_rule = "uniform";
    MicroFractionMode micro_fraction_mode = MicroFractionMode::continuous;
};

/// Parsed form of the JSON configuration document:
///   chain     ChainParams fields by name (T, T_m, T_b, L, alpha, r, R, d)
///   pools     array of {id, w} or {id, lambda} (the other is derived via 2^d)
///   strategy  "honest", or an array of per-pool durations / "honest"
///   sim       optional {rounds, seed, miners_per_pool, tie_rule,
///             micro_fraction_mode}
struct ExperimentConfig {
    ChainParams params;
    PoolSet pools;
    StrategyProfile strategy;
    SimSettings sim;
};

/// Parses and validates a configuration document. Throws
/// std::runtime_error listing every violated invariant.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);

/// Miner counts for the simulator: explicit sim.miners_per_pool when
/// given, otherwise round(lambda_n * 2^d) clamped to >= 1.
std::vector<std::int64_t> resolve_miners(const ExperimentConfig& config);

/// SimStats as a flat JSON document (arrays indexed by pool).
std::string sim_stats_to_json(const SimStats& stats, const std::vector<std::string>& pool_ids);

}  // namespace ngmining
