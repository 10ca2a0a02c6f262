#include "ngmining/race.hpp"

#include <cmath>
#include <stdexcept>

#include "ngmining/lambert.hpp"
#include "ngmining/optimize.hpp"

namespace ngmining {

namespace {

void require_tau_in_range(const ChainParams& params, double tau) {
    if (!(tau >= params.T_m && tau <= params.T)) {
        throw std::invalid_argument("tau outside [T_m, T]");
    }
}

}  // namespace

RaceSpec RaceSpec::make(double lambda_a, double lambda_b, ChainParams params, RacePrev prev) {
    if (!(lambda_a > 0.0) || !(lambda_b > 0.0)) {
        throw std::invalid_argument("race rates must be positive");
    }
    if (std::abs(params.T_m * (lambda_a + lambda_b) - 1.0) > 1e-9) {
        throw std::invalid_argument("difficulty identity violated: T_m*(lambda_a+lambda_b) != 1");
    }
    if (lambda_a * params.T_m >= 1.0 - 1e-9) {
        throw std::invalid_argument("attacker rate too close to the whole network");
    }
    return RaceSpec{lambda_a, lambda_b, params, prev};
}

double pairwise_win_prob(double lambda_n, double lambda_m, double delta) {
    if (!(lambda_n > 0.0) || !(lambda_m > 0.0)) {
        throw std::invalid_argument("pairwise_win_prob: rates must be positive");
    }
    double total = lambda_n + lambda_m;
    if (delta >= 0.0) return 1.0 - (lambda_m / total) * std::exp(-delta * lambda_n);
    return (lambda_n / total) * std::exp(delta * lambda_m);
}

double attacker_win_prob(const RaceSpec& spec, double tau) {
    require_tau_in_range(spec.params, tau);
    return pairwise_win_prob(spec.lambda_a, spec.lambda_b, tau - spec.params.T_m);
}

double reward_if_win(const ChainParams& params, RacePrev prev, double tau,
                     MicroFractionMode mode) {
    require_tau_in_range(params, tau);
    return interval_reward(params, prev == RacePrev::attacker, tau, mode);
}

double expected_reward(const RaceSpec& spec, double tau, MicroFractionMode mode) {
    return reward_if_win(spec.params, spec.prev, tau, mode) * attacker_win_prob(spec, tau);
}

RewardCurvePoint reward_curve_point(const RaceSpec& spec, double tau) {
    RewardCurvePoint pt;
    pt.tau = tau;
    pt.win_prob = attacker_win_prob(spec, tau);
    pt.reward_if_win = reward_if_win(spec.params, spec.prev, tau);
    pt.expected_reward = pt.win_prob * pt.reward_if_win;
    return pt;
}

double optimal_tau_closed_form(const RaceSpec& spec) {
    const ChainParams& p = spec.params;
    double fee = (spec.prev == RacePrev::attacker) ? 1.0 : (1.0 - p.alpha);
    double fee_total = fee * p.r * p.L;
    double la = spec.lambda_a;
    // log of the W argument: 1/(1 - la*T_m) * exp((R/fee_total + 1)*la*T_b + 1)
    double log_arg = -std::log1p(-la * p.T_m) + (p.R / fee_total + 1.0) * la * p.T_b + 1.0;
    double w = lambert_w0_exp(log_arg);
    double tau = ((p.R / fee_total) * la * p.T_b + la * p.T + 1.0 - w) / la;
    return std::clamp(tau, p.T_m, p.T);
}

double optimal_tau_numeric(const RaceSpec& spec, double tol) {
    if (!(tol > 0.0)) throw std::invalid_argument("optimal_tau_numeric: tol must be positive");
    return argmax_on_interval([&](double tau) { return expected_reward(spec, tau); },
                              spec.params.T_m, spec.params.T, 1024, tol);
}

}  // namespace ngmining
