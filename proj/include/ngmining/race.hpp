#pragma once

#include "ngmining/params.hpp"

namespace ngmining {

/// Who mined the previous key block in the one-attacker race.
enum class RacePrev { honest, attacker };

/// One strategic miner (rate lambda_a) racing the rest of the network
/// aggregated into a single honest miner (rate lambda_b) that always mines
/// for the default duration T_m.
struct RaceSpec {
    double lambda_a = 0.0;
    double lambda_b = 0.0;
    ChainParams params;
    RacePrev prev = RacePrev::honest;

    /// Validates rates, the difficulty identity T_m(lambda_a+lambda_b)=1,
    /// and that the attacker does not own (essentially) the whole network.
    /// Throws std::invalid_argument.
    static RaceSpec make(double lambda_a, double lambda_b, ChainParams params, RacePrev prev);
};

struct RewardCurvePoint {
    double tau = 0.0;
    double win_prob = 0.0;
    double reward_if_win = 0.0;
    double expected_reward = 0.0;
};

/// P(X_n - X_m < delta) for independent exponentials with rates
/// lambda_n, lambda_m. Continuous at delta = 0 and strictly increasing
/// in delta. Throws on non-positive rates.
double pairwise_win_prob(double lambda_n, double lambda_m, double delta);

/// Probability that the attacker mining for tau beats the honest miner
/// mining for T_m. tau must lie in [T_m, T].
double attacker_win_prob(const RaceSpec& spec, double tau);

/// Reward collected by the attacker when it wins with duration tau; the
/// fee share depends on who mined the previous key block.
double reward_if_win(const ChainParams& params, RacePrev prev, double tau,
                     MicroFractionMode mode = MicroFractionMode::continuous);

/// reward_if_win(tau) * attacker_win_prob(tau).
double expected_reward(const RaceSpec& spec, double tau,
                       MicroFractionMode mode = MicroFractionMode::continuous);

RewardCurvePoint reward_curve_point(const RaceSpec& spec, double tau);

/// Stationary point of the expected reward, expressed through the Lambert
/// W function, clamped to the strategy set [T_m, T].
double optimal_tau_closed_form(const RaceSpec& spec);

/// Independent numerical argmax of the expected reward over [T_m, T]:
/// 1024-point grid scan plus golden-section refinement to width <= tol.
/// Deterministic; serves as the oracle for the closed form.
double optimal_tau_numeric(const RaceSpec& spec, double tol);

}  // namespace ngmining
