#include <doctest.h>

#include <cmath>
#include <stdexcept>

#include "ngmining/game.hpp"
#include "ngmining/optimize.hpp"
#include "ngmining/rng.hpp"

using namespace ngmining;

namespace {

PoolSet pools_from_lambdas(const std::vector<double>& lambdas, double d) {
    PoolSet set;
    double pow2d = std::exp2(d);
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        std::string id(1, static_cast<char>('A' + i));
        set.pools.push_back({id, lambdas[i] * pow2d, lambdas[i]});
    }
    return set;
}

GameSpec default_game(const std::vector<double>& lambdas, double mint_reward,
                    const std::string& prev_id) {
    ChainParams p = ChainParams::with_mint(mint_reward);
    return GameSpec::make(pools_from_lambdas(lambdas, p.d), p, PrevLeaderCase{prev_id});
}

}  // namespace

TEST_CASE("two-player win probabilities sum to one") {
    GameSpec spec = default_game({0.2, 0.3}, 10.0, "B");
    SplitMix64 rng(5);
    for (int i = 0; i < 500; ++i) {
        StrategyProfile prof{{2.0 + 8.0 * rng.uniform01(), 2.0 + 8.0 * rng.uniform01()}};
        double sum = n_player_win_prob(spec, prof, 0) + n_player_win_prob(spec, prof, 1);
        CHECK(std::abs(sum - 1.0) <= 1e-12);
    }
}

TEST_CASE("three-player product form at the honest profile") {
    GameSpec spec = default_game({0.1, 0.15, 0.25}, 10.0, "C");
    StrategyProfile honest{{2.0, 2.0, 2.0}};
    // product of the pairwise head-to-head shares at zero offset
    CHECK(n_player_win_prob(spec, honest, 0) ==
          doctest::Approx((0.1 / 0.25) * (0.1 / 0.35)).epsilon(1e-14));
    CHECK(n_player_win_prob(spec, honest, 1) ==
          doctest::Approx((0.15 / 0.25) * (0.15 / 0.4)).epsilon(1e-14));
    CHECK(n_player_win_prob(spec, honest, 2) ==
          doctest::Approx((0.25 / 0.35) * (0.25 / 0.4)).epsilon(1e-14));
    CHECK_THROWS_AS(n_player_win_prob(spec, honest, 3), std::out_of_range);
}

TEST_CASE("three-player product form, ordered durations, term by term") {
    GameSpec spec = default_game({0.1, 0.15, 0.25}, 10.0, "C");
    double l1 = 0.1, l2 = 0.15, l3 = 0.25;
    double t1 = 3.0, t2 = 5.0, t3 = 8.0;  // t1 < t2 < t3
    StrategyProfile prof{{t1, t2, t3}};

    double p1 = (l1 / (l1 + l2)) * std::exp((t1 - t2) * l2) *
                (l1 / (l1 + l3)) * std::exp((t1 - t3) * l3);
    double p2 = (1.0 - (l1 / (l1 + l2)) * std::exp((t1 - t2) * l2)) *
                (l2 / (l2 + l3)) * std::exp((t2 - t3) * l3);
    double p3 = (1.0 - (l1 / (l1 + l3)) * std::exp((t1 - t3) * l3)) *
                (1.0 - (l2 / (l2 + l3)) * std::exp((t2 - t3) * l3));
    CHECK(n_player_win_prob(spec, prof, 0) == doctest::Approx(p1).epsilon(1e-14));
    CHECK(n_player_win_prob(spec, prof, 1) == doctest::Approx(p2).epsilon(1e-14));
    CHECK(n_player_win_prob(spec, prof, 2) == doctest::Approx(p3).epsilon(1e-14));
}

TEST_CASE("per-pool rewards select the fee branch by previous leader") {
    GameSpec spec = default_game({0.25, 0.25}, 10.0, "B");
    CHECK(n_player_reward(spec, 1, 2.0) == doctest::Approx(20.0).epsilon(1e-15));
    CHECK(n_player_reward(spec, 0, 2.0) == doctest::Approx(190.0 / 11.0).epsilon(1e-15));
    CHECK(n_player_reward(spec, 0, 10.0) == doctest::Approx(10.0).epsilon(1e-15));
    CHECK_THROWS_AS(n_player_reward(spec, 0, 1.0), std::invalid_argument);
}

TEST_CASE("utilities compose reward and win probability") {
    GameSpec spec = default_game({0.25, 0.25}, 10.0, "B");
    StrategyProfile honest{{2.0, 2.0}};
    CHECK(n_player_utility(spec, honest, 0) ==
          doctest::Approx(190.0 / 11.0 * 0.5).epsilon(1e-14));
    CHECK(n_player_utility(spec, honest, 1) == doctest::Approx(10.0).epsilon(1e-14));

    GameSpec zero_mint = default_game({0.25, 0.25}, 0.0, "B");
    StrategyProfile at_end{{10.0, 2.0}};
    CHECK(n_player_utility(zero_mint, at_end, 0) == doctest::Approx(0.0).epsilon(1e-15));

    GameSpec three = default_game({0.1, 0.15, 0.25}, 10.0, "C");
    StrategyProfile h3{{2.0, 2.0, 2.0}};
    CHECK(n_player_utility(three, h3, 0) ==
          doctest::Approx(190.0 / 11.0 * (0.1 / 0.25) * (0.1 / 0.35)).epsilon(1e-13));

    // utilities stay within [0, r*L + R]
    SplitMix64 rng(11);
    for (int i = 0; i < 200; ++i) {
        StrategyProfile prof{{2.0 + 8.0 * rng.uniform01(), 2.0 + 8.0 * rng.uniform01(),
                              2.0 + 8.0 * rng.uniform01()}};
        for (int n = 0; n < 3; ++n) {
            double u = n_player_utility(three, prof, n);
            CHECK(u >= 0.0);
            CHECK(u <= 20.0 + 1e-12);
        }
    }
}

TEST_CASE("closed-form two-player equilibrium is deviation-proof") {
    for (double mint : {1.0, 10.0}) {
        for (double la : {0.1, 0.25, 0.4}) {
            for (const char* prev : {"A", "B"}) {
                GameSpec spec = default_game({la, 0.5 - la}, mint, prev);
                StrategyProfile eq = two_player_equilibrium(spec);
                double gain = verify_equilibrium(spec, eq);
                CHECK(gain <= 1e-6 * (10.0 + mint));
            }
        }
    }
}

TEST_CASE("weaker pool mines earlier at the closed-form equilibrium") {
    for (double mint : {1.0, 5.0}) {
        for (double la : {0.05, 0.15, 0.2}) {
            GameSpec spec = default_game({la, 0.5 - la}, mint, "B");
            StrategyProfile eq = two_player_equilibrium(spec);
            CHECK(eq.taus[0] >= eq.taus[1] - 1e-9);  // lambda_A < lambda_B here
        }
    }
    // mirrored rates swap the ordering
    GameSpec spec = default_game({0.4, 0.1}, 1.0, "B");
    StrategyProfile eq = two_player_equilibrium(spec);
    CHECK(eq.taus[1] > eq.taus[0]);
}

TEST_CASE("best_response is a fixed point of the closed-form equilibrium") {
    for (const char* prev : {"A", "B"}) {
        for (double la : {0.15, 0.35}) {  // covers both orderings
            GameSpec spec = default_game({la, 0.5 - la}, 1.0, prev);
            StrategyProfile eq = two_player_equilibrium(spec);
            CHECK(std::abs(best_response(spec, eq, 0, 1e-7) - eq.taus[0]) <= 1e-3);
            CHECK(std::abs(best_response(spec, eq, 1, 1e-7) - eq.taus[1]) <= 1e-3);
        }
    }
}

TEST_CASE("best_response edge cases") {
    // No mint reward and a negligible opponent: honest duration is best.
    ChainParams p = ChainParams::with_mint(0.0);
    PoolSet set = pools_from_lambdas({0.5 - 1e-6, 1e-6}, p.d);
    GameSpec spec = GameSpec::make(set, p, PrevLeaderCase{"A"});
    StrategyProfile prof{{2.0, 2.0}};
    double br = best_response(spec, prof, 0, 1e-7);
    CHECK(br == doctest::Approx(2.0).epsilon(1e-3));
    CHECK(best_response(spec, prof, 0, 1e-7) == br);  // deterministic
}

TEST_CASE("iterated best response reproduces the closed form") {
    for (double mint : {1.0, 10.0}) {
        for (double la : {0.1, 0.25, 0.45}) {
            GameSpec spec = default_game({la, 0.5 - la}, mint, "B");
            StrategyProfile closed = two_player_equilibrium(spec);
            EquilibriumReport rep = solve_equilibrium(spec, 1e-6, 500);
            CHECK(rep.converged);
            CHECK(std::abs(rep.profile.taus[0] - closed.taus[0]) <= 1e-3);
            CHECK(std::abs(rep.profile.taus[1] - closed.taus[1]) <= 1e-3);
            CHECK(rep.max_deviation_gain <= 1e-6 * (10.0 + mint));
            for (int n = 0; n < 2; ++n) {
                if (rep.foc_residuals[n]) {
                    CHECK(std::abs(*rep.foc_residuals[n]) <= 1e-5 * (10.0 + mint));
                }
            }
        }
    }
}

TEST_CASE("three-player equilibrium: stronger pools use shorter durations") {
    GameSpec spec = default_game({0.15, 0.1, 0.25}, 1.0, "C");
    EquilibriumReport rep = solve_equilibrium(spec, 1e-6, 500);
    CHECK(rep.converged);
    // cross-section over the two non-leader pools
    CHECK(rep.profile.taus[0] <= rep.profile.taus[1] + 1e-6);  // lambda 0.15 > 0.1
}

TEST_CASE("honest profile is not an equilibrium and perturbations lose") {
    GameSpec spec = default_game({0.25, 0.25}, 10.0, "B");
    StrategyProfile honest{{2.0, 2.0}};
    CHECK(verify_equilibrium(spec, honest) > 0.0);

    StrategyProfile eq = two_player_equilibrium(spec);
    StrategyProfile bumped = eq;
    bumped.taus[0] = std::max(2.0, bumped.taus[0] - 0.1);
    CHECK(verify_equilibrium(spec, bumped) > 0.0);
}

TEST_CASE("equilibrium utilities fall below honest utilities (symmetric pools)") {
    for (const char* prev : {"A", "B"}) {
        GameSpec spec = default_game({0.25, 0.25}, 10.0, prev);
        StrategyProfile eq = two_player_equilibrium(spec);
        StrategyProfile honest{{2.0, 2.0}};
        for (int n = 0; n < 2; ++n) {
            CHECK(n_player_utility(spec, eq, n) <=
                  n_player_utility(spec, honest, n) + 1e-12);
        }
    }
}

TEST_CASE("own-utility is continuous and unimodal across the kink") {
    GameSpec spec = default_game({0.2, 0.3}, 10.0, "B");
    StrategyProfile prof{{2.0, 6.0}};
    // continuity at tau_0 = tau_1
    auto u0 = [&](double t) {
        StrategyProfile q = prof;
        q.taus[0] = t;
        return n_player_utility(spec, q, 0);
    };
    CHECK(std::abs(u0(6.0 - 1e-9) - u0(6.0 + 1e-9)) <= 1e-7);

    // single sign change of the discrete gradient over a fine grid
    int changes = 0;
    int prev_sign = 0;
    double prev_val = u0(2.0);
    for (int i = 1; i <= 4000; ++i) {
        double t = 2.0 + 8.0 * i / 4000.0;
        double v = u0(t);
        int sign = (v > prev_val + 1e-14) ? 1 : (v < prev_val - 1e-14 ? -1 : prev_sign);
        if (prev_sign == 1 && sign == -1) ++changes;
        CHECK_FALSE((prev_sign == -1 && sign == 1));  // never rises again after falling
        prev_sign = sign;
        prev_val = v;
    }
    CHECK(changes <= 1);

    // concave on the late side of the kink (the saturating branch)
    double h = 8.0 / 1024.0;
    for (double t = 6.0 + h; t + h <= 10.0; t += h) {
        CHECK(u0(t - h) - 2.0 * u0(t) + u0(t + h) <= 1e-9);
    }
}

TEST_CASE("game spec validation") {
    ChainParams p = ChainParams::with_mint();
    CHECK_THROWS_AS(GameSpec::make(pools_from_lambdas({0.5}, p.d), p, PrevLeaderCase{"A"}),
                    std::invalid_argument);
    CHECK_THROWS_AS(GameSpec::make(pools_from_lambdas({0.3, 0.3}, p.d), p, PrevLeaderCase{"A"}),
                    std::invalid_argument);
    CHECK_THROWS_AS(GameSpec::make(pools_from_lambdas({0.25, 0.25}, p.d), p, PrevLeaderCase{"Z"}),
                    std::invalid_argument);
    GameSpec two = default_game({0.25, 0.25}, 10.0, "A");
    CHECK_THROWS_AS(two_player_equilibrium_closed_form(default_game({0.2, 0.2, 0.1}, 10.0, "A"),
                                                       EarlierPool::pool_a),
                    std::invalid_argument);
    CHECK(two.prev_leader == 0);
}
