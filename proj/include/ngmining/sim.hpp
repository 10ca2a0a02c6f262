#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ngmining/params.hpp"
#include "ngmining/rng.hpp"

namespace ngmining {

/// Monte Carlo mining race: time advances in unit steps, every active
/// miner performs one Bernoulli hash test per step with success
/// probability 2^-d, and the first step containing a success elects the
/// round's leader.
struct SimConfig {
    ChainParams params;
    std::vector<std::int64_t> miners_per_pool;
    StrategyProfile strategies;  // resolved durations, one per pool
    std::int64_t rounds = 1000;
    std::uint64_t seed = 1;
    std::string tie_rule = "uniform";  // the only supported rule
    MicroFractionMode micro_fraction_mode = MicroFractionMode::continuous;

    int pool_count() const { return static_cast<int>(miners_per_pool.size()); }

    /// Throws std::invalid_argument on malformed configs (fewer than two
    /// miners in total, rounds < 1, durations outside [T_m, T], unknown
    /// tie rule, length mismatches).
    static SimConfig make(ChainParams params, std::vector<std::int64_t> miners_per_pool,
                          StrategyProfile strategies, std::int64_t rounds, std::uint64_t seed,
                          MicroFractionMode mode = MicroFractionMode::continuous);
};

struct RoundOutcome {
    int winner = -1;
    std::int64_t win_time = 0;  // step index since the interval start
    double reward = 0.0;
    double micro_blocks_included = 0.0;
    double micro_blocks_discarded = 0.0;
    int prev_leader = -1;
};

struct SimStats {
    SimConfig config;  // echoed for reproducibility and penalty matching
    std::string rng_name;
    std::int64_t rounds_completed = 0;
    std::vector<std::int64_t> wins;
    std::vector<double> win_frequency;
    std::vector<double> total_reward;
    std::vector<double> average_reward;
    std::vector<double> reward_sum_squares;  // per-pool, for standard errors
    std::vector<std::int64_t> prev_case_counts;
    double avg_micro_blocks_discarded = 0.0;
    double avg_micro_blocks_included = 0.0;

    /// Standard error of the per-round average reward of pool n.
    double reward_standard_error(int n) const;
};

/// Plays one mining race. Pool n's miners begin attempting at step
/// ceil(T - tau_n); the race runs past the nominal interval end until the
/// first success (a 10^6-step cap throws, unreachable for sane configs).
/// Several successes in one step are broken uniformly among the successful
/// miners. The winner's reward uses its nominal duration and the realized
/// previous-leader case.
RoundOutcome run_round(const SimConfig& config, SplitMix64& rng, int prev_leader);

/// Runs config.rounds rounds, threading the previous-leader case (round
/// i's winner leads round i+1; the first leader is drawn proportional to
/// the hash rates). Deterministic given the seed. When outcomes is
/// non-null every RoundOutcome is appended to it.
SimStats run_sim(const SimConfig& config, std::vector<RoundOutcome>* outcomes = nullptr);

struct TpsPenalty {
    double sum_reward_diff = 0.0;       // honest sum reward minus advanced sum reward
    double discarded_per_round = 0.0;   // advanced minus honest average discarded
};

/// Compares an advanced-strategy run against an honest baseline run whose
/// config is identical except for the strategies. Throws
/// std::invalid_argument when the configs differ elsewhere.
TpsPenalty measure_tps_penalty(const SimStats& advanced, const SimStats& honest);

}  // namespace ngmining
