#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ngmining/params.hpp"
#include "ngmining/rng.hpp"

using namespace ngmining;

namespace {

PoolSet two_pools(double la, double lb, double d) {
    double pow2d = std::exp2(d);
    return PoolSet{{{"A", la * pow2d, la}, {"B", lb * pow2d, lb}}};
}

bool mentions(const ValidationReport& rep, const std::string& needle) {
    return std::any_of(rep.violations.begin(), rep.violations.end(),
                       [&](const std::string& v) { return v.find(needle) != std::string::npos; });
}

}  // namespace

TEST_CASE("bundled default configuration validates") {
    ChainParams p = ChainParams::with_mint();
    ValidationReport rep = validate_config(p, two_pools(0.25, 0.25, p.d));
    CHECK(rep.pass);
    CHECK(rep.violations.empty());
}

TEST_CASE("validate_config flags the named boundary violations") {
    ChainParams p = ChainParams::with_mint();
    PoolSet pools = two_pools(0.25, 0.25, p.d);

    ChainParams bad = p;
    bad.T_m = 0.0;
    ValidationReport rep = validate_config(bad, pools);
    CHECK_FALSE(rep.pass);
    CHECK(mentions(rep, "T_m must be positive"));

    bad = p;
    bad.T_b = 7.0;
    rep = validate_config(bad, pools);
    CHECK_FALSE(rep.pass);
    CHECK(mentions(rep, "T_b != T - T_m"));
}

TEST_CASE("validate_config rejects randomly corrupted configs") {
    ChainParams good = ChainParams::with_mint();
    SplitMix64 rng(7);
    for (int i = 0; i < 200; ++i) {
        ChainParams p = good;
        PoolSet pools = two_pools(0.25, 0.25, p.d);
        switch (rng.next() % 7) {
            case 0: p.alpha = 1.0 + rng.uniform01(); break;
            case 1: p.alpha = -rng.uniform01(); break;
            case 2: p.L = 0; break;
            case 3: p.r = -1.0; break;
            case 4: p.d = 0.5; break;
            case 5: pools.pools[0].lambda = 0.0; break;
            default: pools.pools[1].lambda *= 2.0; break;  // breaks the difficulty identity
        }
        CHECK_FALSE(validate_config(p, pools).pass);
    }
}

TEST_CASE("validate_strategy bounds") {
    ChainParams p = ChainParams::with_mint();
    PoolSet pools = two_pools(0.25, 0.25, p.d);
    CHECK(validate_strategy(p, pools, StrategyProfile{{2.0, 10.0}}).pass);
    CHECK_FALSE(validate_strategy(p, pools, StrategyProfile{{1.9, 10.0}}).pass);
    CHECK_FALSE(validate_strategy(p, pools, StrategyProfile{{2.0, 10.1}}).pass);
    CHECK_FALSE(validate_strategy(p, pools, StrategyProfile{{2.0}}).pass);
}

TEST_CASE("enforce_difficulty on the full-scale calibration") {
    // 2^10 unit-rate miners in two pools, T_m = 2: level 11, sum(lambda) = 0.5.
    PoolSet set = enforce_difficulty({{"A", 512.0}, {"B", 512.0}}, 2.0);
    CHECK(effective_difficulty(1024.0, 2.0) == 11.0);
    CHECK(set.total_lambda() == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(set.lambda(0) == doctest::Approx(512.0 / 2048.0).epsilon(1e-15));
}

TEST_CASE("enforce_difficulty identity and derived cases") {
    // Single pool, unit rate, T_m = 1: effective 2^d = 1.
    PoolSet one = enforce_difficulty({{"solo", 1.0}}, 1.0);
    CHECK(one.lambda(0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(effective_difficulty(1.0, 1.0) == 0.0);

    // w = (3, 7), T_m = 2: 2^d = 20, lambda = (0.15, 0.35).
    PoolSet pair = enforce_difficulty({{"A", 3.0}, {"B", 7.0}}, 2.0);
    CHECK(pair.lambda(0) == doctest::Approx(0.15).epsilon(1e-14));
    CHECK(pair.lambda(1) == doctest::Approx(0.35).epsilon(1e-14));
    CHECK(2.0 * pair.total_lambda() == doctest::Approx(1.0).epsilon(1e-15));

    CHECK_THROWS_AS(enforce_difficulty({}, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(enforce_difficulty({{"A", -1.0}}, 2.0), std::invalid_argument);
}

TEST_CASE("enforce_difficulty properties: identity holds, ordering preserved") {
    SplitMix64 rng(99);
    for (int trial = 0; trial < 200; ++trial) {
        int n = 1 + static_cast<int>(rng.next() % 6);
        std::vector<std::pair<std::string, double>> rates;
        for (int i = 0; i < n; ++i) {
            rates.emplace_back("p" + std::to_string(i), 0.01 + 1000.0 * rng.uniform01());
        }
        double t_m = 0.1 + 10.0 * rng.uniform01();
        PoolSet set = enforce_difficulty(rates, t_m);
        CHECK(std::abs(t_m * set.total_lambda() - 1.0) <= 1e-9);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                if (rates[i].second < rates[j].second) {
                    CHECK(set.lambda(i) < set.lambda(j));
                }
            }
        }
    }
}

TEST_CASE("interval_reward micro-block accounting") {
    ChainParams p = ChainParams::with_mint();
    CHECK(interval_reward(p, false, 2.0) == doctest::Approx(190.0 / 11.0).epsilon(1e-15));
    CHECK(interval_reward(p, true, 2.0) == doctest::Approx(20.0).epsilon(1e-15));
    CHECK(interval_reward(p, true, 10.0) == doctest::Approx(10.0).epsilon(1e-15));
    // floored mode drops the fractional micro block
    CHECK(interval_reward(p, true, 2.5, MicroFractionMode::floored) ==
          doctest::Approx(9.0 + 10.0).epsilon(1e-15));
}
