#include "ngmining/game.hpp"

#include <cmath>
#include <stdexcept>

#include "ngmining/lambert.hpp"
#include "ngmining/optimize.hpp"
#include "ngmining/race.hpp"

namespace ngmining {

GameSpec GameSpec::make(PoolSet pools, ChainParams params, const PrevLeaderCase& prev) {
    if (pools.size() < 2) throw std::invalid_argument("game needs at least two pools");
    for (const auto& p : pools.pools) {
        if (!(p.lambda > 0.0)) {
            throw std::invalid_argument("pool " + p.id + ": rate must be positive");
        }
    }
    if (std::abs(params.T_m * pools.total_lambda() - 1.0) > 1e-9) {
        throw std::invalid_argument("difficulty identity violated: T_m * sum(lambda) != 1");
    }
    int prev_idx = pools.index_of(prev.pool_id);
    if (prev_idx < 0) {
        throw std::invalid_argument("previous leader '" + prev.pool_id + "' is not a pool");
    }
    return GameSpec{std::move(pools), params, prev_idx};
}

double n_player_win_prob(const GameSpec& spec, const StrategyProfile& profile, int n) {
    if (n < 0 || n >= spec.size()) throw std::out_of_range("pool index out of range");
    if (static_cast<int>(profile.taus.size()) != spec.size()) {
        throw std::invalid_argument("profile length does not match pool count");
    }
    double p = 1.0;
    for (int m = 0; m < spec.size(); ++m) {
        if (m == n) continue;
        p *= pairwise_win_prob(spec.pools.lambda(n), spec.pools.lambda(m),
                               profile.taus[n] - profile.taus[m]);
    }
    return p;
}

double n_player_reward(const GameSpec& spec, int n, double tau_n, MicroFractionMode mode) {
    if (n < 0 || n >= spec.size()) throw std::out_of_range("pool index out of range");
    if (!(tau_n >= spec.params.T_m && tau_n <= spec.params.T)) {
        throw std::invalid_argument("tau outside [T_m, T]");
    }
    return interval_reward(spec.params, n == spec.prev_leader, tau_n, mode);
}

double n_player_utility(const GameSpec& spec, const StrategyProfile& profile, int n) {
    return n_player_reward(spec, n, profile.taus[n]) * n_player_win_prob(spec, profile, n);
}

namespace {

double fee_coefficient(const GameSpec& spec, int n) {
    double share = (n == spec.prev_leader) ? 1.0 : (1.0 - spec.params.alpha);
    return share * spec.params.r * spec.params.L / spec.params.T_b;
}

}  // namespace

StrategyProfile two_player_equilibrium_closed_form(const GameSpec& spec, EarlierPool earlier) {
    if (spec.size() != 2) {
        throw std::invalid_argument("two_player_equilibrium_closed_form needs exactly 2 pools");
    }
    const ChainParams& p = spec.params;
    int early = (earlier == EarlierPool::pool_a) ? 0 : 1;  // longer duration
    int late = 1 - early;                                  // shorter duration

    double lam_early = spec.pools.lambda(early);
    double c_late = fee_coefficient(spec, late);
    double c_early = fee_coefficient(spec, early);

    // The late pool's stationary point does not depend on the early pool's
    // duration, so clamping it first keeps the pair mutually optimal.
    double tau_late = std::clamp(p.T + p.R / c_late - 1.0 / lam_early, p.T_m, p.T);

    // Early pool: best response to tau_late, W argument kept in log space.
    // Interior tau_late recovers exp(2 +/- ...) of the printed equilibria.
    double log_arg = -std::log1p(-lam_early * p.T_m) + lam_early * (p.T - tau_late) +
                     lam_early * p.R / c_early + 1.0;
    double w = lambert_w0_exp(log_arg);
    double tau_early = std::clamp(p.T + p.R / c_early + (1.0 - w) / lam_early, p.T_m, p.T);

    StrategyProfile profile;
    profile.taus.resize(2);
    profile.taus[early] = tau_early;
    profile.taus[late] = tau_late;
    return profile;
}

StrategyProfile two_player_equilibrium(const GameSpec& spec) {
    StrategyProfile a = two_player_equilibrium_closed_form(spec, EarlierPool::pool_a);
    StrategyProfile b = two_player_equilibrium_closed_form(spec, EarlierPool::pool_b);
    bool a_consistent = a.taus[0] >= a.taus[1] - 1e-12;
    bool b_consistent = b.taus[1] >= b.taus[0] - 1e-12;
    if (a_consistent != b_consistent) return a_consistent ? a : b;
    return verify_equilibrium(spec, a) <= verify_equilibrium(spec, b) ? a : b;
}

double best_response(const GameSpec& spec, const StrategyProfile& profile, int n, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("best_response: tol must be positive");
    StrategyProfile scratch = profile;
    return argmax_on_interval(
        [&](double tau) {
            scratch.taus[n] = tau;
            return n_player_utility(spec, scratch, n);
        },
        spec.params.T_m, spec.params.T, 1024, tol);
}

namespace {

struct IbrResult {
    StrategyProfile profile;
    int iterations = 0;
    bool converged = false;
};

IbrResult iterate_best_response(const GameSpec& spec, StrategyProfile start, double tol,
                                int max_iters) {
    double br_tol = std::min(tol * 0.1, 1e-7);
    IbrResult res;
    res.profile = std::move(start);
    for (int it = 1; it <= max_iters; ++it) {
        double change = 0.0;
        for (int n = 0; n < spec.size(); ++n) {
            double next = best_response(spec, res.profile, n, br_tol);
            change = std::max(change, std::abs(next - res.profile.taus[n]));
            res.profile.taus[n] = next;
        }
        res.iterations = it;
        if (change <= tol) {
            res.converged = true;
            break;
        }
    }
    return res;
}

}  // namespace

EquilibriumReport solve_equilibrium(const GameSpec& spec, double tol, int max_iters) {
    if (!(tol > 0.0)) throw std::invalid_argument("solve_equilibrium: tol must be positive");
    const ChainParams& p = spec.params;

    StrategyProfile honest;
    honest.taus.assign(spec.size(), p.T_m);
    StrategyProfile all_t;
    all_t.taus.assign(spec.size(), p.T);

    IbrResult main = iterate_best_response(spec, honest, tol, max_iters);
    IbrResult restart = iterate_best_response(spec, all_t, tol, max_iters);

    double restart_gap = 0.0;
    for (int n = 0; n < spec.size(); ++n) {
        restart_gap = std::max(restart_gap,
                               std::abs(main.profile.taus[n] - restart.profile.taus[n]));
    }

    EquilibriumReport rep;
    rep.profile = main.profile;
    rep.iterations = main.iterations;
    rep.converged = main.converged && restart.converged && restart_gap <= 10.0 * tol;
    rep.utilities.resize(spec.size());
    rep.foc_residuals.resize(spec.size());

    double h = 1e-6 * (p.T - p.T_m);
    for (int n = 0; n < spec.size(); ++n) {
        rep.utilities[n] = n_player_utility(spec, rep.profile, n);
        double tau = rep.profile.taus[n];
        if (tau - p.T_m <= 2.0 * h || p.T - tau <= 2.0 * h) {
            rep.foc_residuals[n] = std::nullopt;  // boundary optimum, KKT case
        } else {
            StrategyProfile scratch = rep.profile;
            rep.foc_residuals[n] = central_difference(
                [&](double x) {
                    scratch.taus[n] = x;
                    return n_player_utility(spec, scratch, n);
                },
                tau, h);
        }
    }
    rep.max_deviation_gain = verify_equilibrium(spec, rep.profile);
    return rep;
}

double verify_equilibrium(const GameSpec& spec, const StrategyProfile& profile) {
    constexpr int kScanPoints = 4096;
    const ChainParams& p = spec.params;
    double gain = 0.0;
    StrategyProfile scratch = profile;
    for (int n = 0; n < spec.size(); ++n) {
        double base = n_player_utility(spec, profile, n);
        for (int i = 0; i < kScanPoints; ++i) {
            double tau = p.T_m + (p.T - p.T_m) * i / (kScanPoints - 1);
            scratch.taus[n] = tau;
            gain = std::max(gain, n_player_utility(spec, scratch, n) - base);
        }
        scratch.taus[n] = profile.taus[n];
    }
    return gain;
}

}  // namespace ngmining
