#include "ngmining/params.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ngmining {

double PoolSet::total_lambda() const {
    double s = 0.0;
    for (const auto& p : pools) s += p.lambda;
    return s;
}

int PoolSet::index_of(const std::string& id) const {
    for (int i = 0; i < size(); ++i) {
        if (pools[i].id == id) return i;
    }
    return -1;
}

ValidationReport validate_config(const ChainParams& params, const PoolSet& pools) {
    ValidationReport rep;

    if (!(params.T_m > 0.0)) rep.fail("T_m must be positive");
    if (!(params.T > params.T_m)) rep.fail("T must exceed T_m");
    if (std::abs(params.T_b - (params.T - params.T_m)) >
        1e-12 * std::max(1.0, std::abs(params.T))) {
        rep.fail("T_b != T - T_m");
    }
    if (!(params.alpha > 0.0 && params.alpha < 1.0)) rep.fail("alpha must lie in (0,1)");
    if (params.L < 1) rep.fail("L must be >= 1");
    if (!(params.r >= 0.0)) rep.fail("r must be >= 0");
    if (!(params.R >= 0.0)) rep.fail("R must be >= 0");
    if (!(params.d >= 1.0)) rep.fail("d must be >= 1");

    if (pools.size() < 2) rep.fail("at least two pools required");
    double pow2d = std::exp2(params.d);
    for (const auto& p : pools.pools) {
        if (!(p.w > 0.0)) rep.fail("pool " + p.id + ": w must be positive");
        if (!(p.lambda > 0.0)) rep.fail("pool " + p.id + ": lambda must be positive");
        if (p.w > 0.0 && p.lambda > 0.0 &&
            std::abs(p.lambda - p.w / pow2d) > 1e-12 * p.lambda) {
            rep.fail("pool " + p.id + ": lambda != w / 2^d");
        }
    }
    for (int i = 0; i < pools.size(); ++i) {
        for (int j = i + 1; j < pools.size(); ++j) {
            if (pools.pools[i].id == pools.pools[j].id) {
                rep.fail("duplicate pool id " + pools.pools[i].id);
            }
        }
    }
    if (pools.size() >= 1) {
        double identity = params.T_m * pools.total_lambda();
        if (std::abs(identity - 1.0) > 1e-9) {
            rep.fail("difficulty identity violated: T_m * sum(lambda) != 1");
        }
    }
    return rep;
}

ValidationReport validate_strategy(const ChainParams& params, const PoolSet& pools,
                                   const StrategyProfile& profile) {
    ValidationReport rep;
    if (static_cast<int>(profile.taus.size()) != pools.size()) {
        rep.fail("strategy length does not match pool count");
        return rep;
    }
    for (int n = 0; n < pools.size(); ++n) {
        double tau = profile.taus[n];
        if (!(tau >= params.T_m && tau <= params.T)) {
            rep.fail("pool " + pools.pools[n].id + ": tau outside [T_m, T]");
        }
    }
    return rep;
}

double effective_difficulty(double total_hash_rate, double T_m) {
    double d = std::log2(T_m * total_hash_rate);
    double rounded = std::round(d);
    if (std::abs(d - rounded) < 1e-9) return rounded;
    return d;
}

PoolSet enforce_difficulty(const std::vector<std::pair<std::string, double>>& hash_rates,
                           double T_m) {
    if (hash_rates.empty()) throw std::invalid_argument("enforce_difficulty: no pools");
    if (!(T_m > 0.0)) throw std::invalid_argument("enforce_difficulty: T_m must be positive");
    double total = 0.0;
    for (const auto& [id, w] : hash_rates) {
        if (!(w > 0.0)) throw std::invalid_argument("enforce_difficulty: pool " + id +
                                                    " has non-positive hash rate");
        total += w;
    }
    // lambda_n = w_n / (T_m * sum w) makes T_m * sum(lambda) = 1 exact,
    // which equals w_n / 2^d for the effective difficulty level.
    PoolSet set;
    set.pools.reserve(hash_rates.size());
    for (const auto& [id, w] : hash_rates) {
        set.pools.push_back({id, w, w / (T_m * total)});
    }
    return set;
}

double interval_reward(const ChainParams& params, bool winner_is_prev_leader, double tau,
                       MicroFractionMode mode) {
    double share = winner_is_prev_leader ? 1.0 : (1.0 - params.alpha);
    double micro_blocks = params.L * (params.T - tau) / params.T_b;
    if (mode == MicroFractionMode::floored) micro_blocks = std::floor(micro_blocks);
    return share * params.r * micro_blocks + params.R;
}

}  // namespace ngmining
