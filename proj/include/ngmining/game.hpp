#pragma once

#include <optional>
#include <vector>

#include "ngmining/params.hpp"

namespace ngmining {

/// N >= 2 pools that all choose their mining duration strategically.
struct GameSpec {
    PoolSet pools;
    ChainParams params;
    int prev_leader = 0;  // index of the pool that mined the previous key block

    int size() const { return pools.size(); }

    /// Validates the pool set against the params (difficulty identity,
    /// positive rates) and resolves the previous-leader id. Throws
    /// std::invalid_argument.
    static GameSpec make(PoolSet pools, ChainParams params, const PrevLeaderCase& prev);
};

using UtilityVector = std::vector<double>;

struct EquilibriumReport {
    StrategyProfile profile;
    UtilityVector utilities;
    /// Per-pool first-order-condition residual d(utility)/d(own tau);
    /// omitted (nullopt) for strategies clamped at T_m or T, where the
    /// optimum is a boundary point instead.
    std::vector<std::optional<double>> foc_residuals;
    double max_deviation_gain = 0.0;
    bool converged = false;
    int iterations = 0;
};

/// Winning probability of pool n under the product form: the race against
/// each opponent is scored with the pairwise exponential formula and the
/// factors are multiplied. Exact for N = 2; for N >= 3 the pairwise events
/// share pool n's mining time, so this is the model's approximation and
/// the simulator measures the true frequencies.
double n_player_win_prob(const GameSpec& spec, const StrategyProfile& profile, int n);

/// Reward of pool n if it wins with duration tau_n: full fee share when n
/// mined the previous key block, (1-alpha) share otherwise.
double n_player_reward(const GameSpec& spec, int n, double tau_n,
                       MicroFractionMode mode = MicroFractionMode::continuous);

/// n_player_reward(n, tau_n) * n_player_win_prob(n, profile).
double n_player_utility(const GameSpec& spec, const StrategyProfile& profile, int n);

/// Which pool starts mining earlier (i.e. has the longer duration) in the
/// closed-form two-player equilibrium.
enum class EarlierPool { pool_a, pool_b };

/// Closed-form two-player Nash equilibrium for the given ordering, using
/// the Lambert W function and the difficulty-control substitution
/// T_m(lambda_A + lambda_B) = 1; each duration is clamped to [T_m, T] and
/// the later pool's clamped value feeds the earlier pool's best response
/// so the clamped pair remains an equilibrium. Requires N = 2.
StrategyProfile two_player_equilibrium_closed_form(const GameSpec& spec, EarlierPool earlier);

/// Tries both orderings and returns the self-consistent one (the one whose
/// computed durations respect the assumed ordering), breaking ties by the
/// smaller deviation gain.
StrategyProfile two_player_equilibrium(const GameSpec& spec);

/// argmax over tau_n in [T_m, T] of pool n's utility with the opponents
/// held fixed; 1024-point grid plus golden-section refinement to width
/// <= tol. Deterministic.
double best_response(const GameSpec& spec, const StrategyProfile& profile, int n, double tol);

/// Iterated best response from the honest profile (all T_m), cycling
/// pools in index order until the largest per-round strategy change is
/// <= tol or max_iters is hit. A second run restarted from the all-T
/// profile must land on the same fixed point (within 10*tol) for the
/// report to count as converged.
EquilibriumReport solve_equilibrium(const GameSpec& spec, double tol, int max_iters);

/// Scans 4096 unilateral deviations per pool over [T_m, T] and returns
/// the largest utility improvement found (never negative).
double verify_equilibrium(const GameSpec& spec, const StrategyProfile& profile);

}  // namespace ngmining
