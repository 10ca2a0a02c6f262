#include "ngmining/sim.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

namespace ngmining {

namespace {

constexpr std::int64_t kStepCap = 1'000'000;

/// Exact Binomial(n, p) sample via geometric jumps between successes;
/// costs O(np + 1) uniforms, which is ~1 here since n*p <= T_m per pool.
std::int64_t sample_binomial(SplitMix64& rng, std::int64_t n, double log1mp) {
    std::int64_t successes = 0;
    std::int64_t trial = 0;
    while (true) {
        double u = rng.uniform01();
        trial += static_cast<std::int64_t>(std::log(u) / log1mp) + 1;
        if (trial > n) return successes;
        ++successes;
    }
}

int pick_weighted(SplitMix64& rng, const std::vector<std::int64_t>& weights,
                  std::int64_t total) {
    double u = rng.uniform01() * static_cast<double>(total);
    double acc = 0.0;
    int last = 0;
    for (int i = 0; i < static_cast<int>(weights.size()); ++i) {
        if (weights[i] == 0) continue;
        acc += static_cast<double>(weights[i]);
        last = i;
        if (u < acc) return i;
    }
    return last;
}

}  // namespace

SimConfig SimConfig::make(ChainParams params, std::vector<std::int64_t> miners_per_pool,
                          StrategyProfile strategies, std::int64_t rounds, std::uint64_t seed,
                          MicroFractionMode mode) {
    SimConfig cfg;
    cfg.params = params;
    cfg.miners_per_pool = std::move(miners_per_pool);
    cfg.strategies = std::move(strategies);
    cfg.rounds = rounds;
    cfg.seed = seed;
    cfg.micro_fraction_mode = mode;

    if (cfg.miners_per_pool.size() != cfg.strategies.taus.size()) {
        throw std::invalid_argument("sim: one strategy per pool required");
    }
    std::int64_t total = 0;
    for (auto m : cfg.miners_per_pool) {
        if (m < 1) throw std::invalid_argument("sim: every pool needs at least one miner");
        total += m;
    }
    if (total < 2) throw std::invalid_argument("sim: at least two miners required");
    if (rounds < 1) throw std::invalid_argument("sim: rounds must be >= 1");
    if (!(params.d >= 1.0)) throw std::invalid_argument("sim: d must be >= 1");
    for (double tau : cfg.strategies.taus) {
        if (!(tau >= params.T_m && tau <= params.T)) {
            throw std::invalid_argument("sim: tau outside [T_m, T]");
        }
    }
    if (cfg.tie_rule != "uniform") throw std::invalid_argument("sim: unknown tie rule");
    return cfg;
}

RoundOutcome run_round(const SimConfig& config, SplitMix64& rng, int prev_leader) {
    const ChainParams& p = config.params;
    const int pools = config.pool_count();
    const double success_prob = std::exp2(-p.d);
    const double log1mp = std::log1p(-success_prob);

    std::int64_t first_start = kStepCap;
    std::vector<std::int64_t> start(pools);
    for (int n = 0; n < pools; ++n) {
        start[n] = static_cast<std::int64_t>(std::ceil(p.T - config.strategies.taus[n]));
        first_start = std::min(first_start, start[n]);
    }

    std::vector<std::int64_t> successes(pools);
    std::int64_t step = first_start;
    std::int64_t total = 0;
    while (true) {
        total = 0;
        for (int n = 0; n < pools; ++n) {
            successes[n] =
                step >= start[n] ? sample_binomial(rng, config.miners_per_pool[n], log1mp) : 0;
            total += successes[n];
        }
        if (total > 0) break;
        ++step;
        if (step - first_start > kStepCap) {
            throw std::runtime_error("run_round: no success within the step cap");
        }
    }

    RoundOutcome out;
    out.winner = pick_weighted(rng, successes, total);
    out.win_time = step;
    out.prev_leader = prev_leader;
    double tau = config.strategies.taus[out.winner];
    out.reward = interval_reward(p, out.winner == prev_leader, tau, config.micro_fraction_mode);
    double included = p.L * (p.T - tau) / p.T_b;
    if (config.micro_fraction_mode == MicroFractionMode::floored) included = std::floor(included);
    out.micro_blocks_included = included;
    out.micro_blocks_discarded = p.L - included;
    return out;
}

SimStats run_sim(const SimConfig& config, std::vector<RoundOutcome>* outcomes) {
    const int pools = config.pool_count();
    SplitMix64 rng(config.seed);

    SimStats stats;
    stats.config = config;
    stats.rng_name = std::string(SplitMix64::name);
    stats.wins.assign(pools, 0);
    stats.total_reward.assign(pools, 0.0);
    stats.reward_sum_squares.assign(pools, 0.0);
    stats.prev_case_counts.assign(pools, 0);

    std::int64_t total_miners =
        std::accumulate(config.miners_per_pool.begin(), config.miners_per_pool.end(),
                        std::int64_t{0});
    int prev = pick_weighted(rng, config.miners_per_pool, total_miners);

    double discarded_sum = 0.0;
    double included_sum = 0.0;
    for (std::int64_t round = 0; round < config.rounds; ++round) {
        RoundOutcome out = run_round(config, rng, prev);
        stats.prev_case_counts[prev]++;
        stats.wins[out.winner]++;
        stats.total_reward[out.winner] += out.reward;
        stats.reward_sum_squares[out.winner] += out.reward * out.reward;
        discarded_sum += out.micro_blocks_discarded;
        included_sum += out.micro_blocks_included;
        prev = out.winner;
        if (outcomes) outcomes->push_back(out);
    }

    stats.rounds_completed = config.rounds;
    stats.win_frequency.resize(pools);
    stats.average_reward.resize(pools);
    for (int n = 0; n < pools; ++n) {
        stats.win_frequency[n] =
            static_cast<double>(stats.wins[n]) / static_cast<double>(config.rounds);
        stats.average_reward[n] = stats.total_reward[n] / static_cast<double>(config.rounds);
    }
    stats.avg_micro_blocks_discarded = discarded_sum / static_cast<double>(config.rounds);
    stats.avg_micro_blocks_included = included_sum / static_cast<double>(config.rounds);
    return stats;
}

double SimStats::reward_standard_error(int n) const {
    double rounds = static_cast<double>(rounds_completed);
    double mean = average_reward.at(n);
    double var = reward_sum_squares.at(n) / rounds - mean * mean;
    if (var < 0.0) var = 0.0;
    return std::sqrt(var / rounds);
}

TpsPenalty measure_tps_penalty(const SimStats& advanced, const SimStats& honest) {
    const SimConfig& a = advanced.config;
    const SimConfig& h = honest.config;
    bool same = a.miners_per_pool == h.miners_per_pool && a.rounds == h.rounds &&
                a.tie_rule == h.tie_rule && a.micro_fraction_mode == h.micro_fraction_mode &&
                a.params.T == h.params.T && a.params.T_m == h.params.T_m &&
                a.params.T_b == h.params.T_b && a.params.L == h.params.L &&
                a.params.alpha == h.params.alpha && a.params.r == h.params.r &&
                a.params.R == h.params.R && a.params.d == h.params.d;
    if (!same) {
        throw std::invalid_argument("measure_tps_penalty: configs differ beyond strategies");
    }
    TpsPenalty pen;
    double sum_adv = 0.0;
    double sum_hon = 0.0;
    for (int n = 0; n < a.pool_count(); ++n) {
        sum_adv += advanced.average_reward[n];
        sum_hon += honest.average_reward[n];
    }
    pen.sum_reward_diff = sum_hon - sum_adv;
    pen.discarded_per_round =
        advanced.avg_micro_blocks_discarded - honest.avg_micro_blocks_discarded;
    return pen;
}

}  // namespace ngmining
