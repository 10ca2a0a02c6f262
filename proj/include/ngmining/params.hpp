#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ngmining {

/// How fractional micro-block counts enter the reward accounting. The
/// analytic formulas use the continuous fraction; flooring is available
/// as an option for the simulator.
enum class MicroFractionMode { continuous, floored };

/// Protocol constants governing every formula.
///   T      key-block interval
///   T_m    default (honest) mining duration; T_b = T - T_m is the
///          micro-block emission window
///   L      micro blocks emitted per interval, each carrying fee r
///   alpha  current-leader share of transaction fees
///   R      mint reward per key block
///   d      difficulty level; a single hash query succeeds w.p. 2^-d
struct ChainParams {
    double T = 10.0;
    double T_m = 2.0;
    double T_b = 8.0;
    int L = 10;
    double alpha = 3.0 / 11.0;
    double r = 1.0;
    double R = 10.0;
    double d = 11.0;

    static ChainParams with_mint(double mint_reward = 10.0) {
        ChainParams p;
        p.R = mint_reward;
        return p;
    }
};

struct PoolSpec {
    std::string id;
    double w = 0.0;       // hash rate, queries per unit time
    double lambda = 0.0;  // success rate, w / 2^d
};

struct PoolSet {
    std::vector<PoolSpec> pools;

    int size() const { return static_cast<int>(pools.size()); }
    double lambda(int n) const { return pools.at(n).lambda; }
    double total_lambda() const;
    /// Index of the pool with the given id; -1 if absent.
    int index_of(const std::string& id) const;
};

/// Identifies the miner of the previous key block; selects the reward
/// branch (full fee share for the previous leader, (1-alpha) otherwise).
struct PrevLeaderCase {
    std::string pool_id;
};

/// One mining-duration length per pool, aligned with PoolSet order.
/// Pure strategies live in [T_m, T].
struct StrategyProfile {
    std::vector<double> taus;
};

struct ValidationReport {
    bool pass = true;
    std::vector<std::string> violations;

    void fail(std::string msg) {
        pass = false;
        violations.push_back(std::move(msg));
    }
};

ValidationReport validate_config(const ChainParams& params, const PoolSet& pools);

/// Checks every tau against [T_m, T] and the profile length against the
/// pool count.
ValidationReport validate_strategy(const ChainParams& params, const PoolSet& pools,
                                   const StrategyProfile& profile);

/// Difficulty level that calibrates the expected key blocks per default
/// mining window to one: 2^d = T_m * sum(w). Integral d is returned
/// exactly when the product is a power of two; otherwise the effective
/// level is real-valued.
double effective_difficulty(double total_hash_rate, double T_m);

/// Builds a PoolSet from raw hash rates with lambda_n = w_n / 2^d chosen
/// so that T_m * sum(lambda) = 1 holds exactly. Rejects an empty list and
/// non-positive rates.
PoolSet enforce_difficulty(const std::vector<std::pair<std::string, double>>& hash_rates,
                           double T_m);

/// Reward collected by the winner of one interval: fee share times the
/// fees of the micro blocks it kept, plus the mint reward. The share is
/// the full fee when the winner also mined the previous key block.
double interval_reward(const ChainParams& params, bool winner_is_prev_leader, double tau,
                       MicroFractionMode mode = MicroFractionMode::continuous);

}  // namespace ngmining
