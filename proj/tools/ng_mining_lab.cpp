// ng-mining-lab: command-line front end for the mining-duration analytics,
// the equilibrium solvers, and the Monte Carlo race simulator. Emits the
// datasets behind the standard experiment figures as CSV or JSON; plotting stays out.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ngmining/config_io.hpp"
#include "ngmining/game.hpp"
#include "ngmining/race.hpp"
#include "ngmining/sim.hpp"
#include "ngmining/table.hpp"

using namespace ngmining;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitNotConverged = 1;
constexpr int kExitConfigError = 2;

struct SweepRange {
    std::string variable;
    double lo = 0.0;
    double hi = -1.0;
    double step = 1.0;
};

SweepRange parse_sweep(const std::string& text) {
    SweepRange r;
    auto eq = text.find('=');
    if (eq == std::string::npos) throw std::runtime_error("sweep must look like name=lo:hi:step");
    r.variable = text.substr(0, eq);
    std::string rest = text.substr(eq + 1);
    double lo, hi, step;
    if (std::sscanf(rest.c_str(), "%lf:%lf:%lf", &lo, &hi, &step) != 3 || step <= 0.0) {
        throw std::runtime_error("sweep must look like name=lo:hi:step with step > 0");
    }
    r.lo = lo;
    r.hi = hi;
    r.step = step;
    return r;
}

std::vector<double> sweep_values(const SweepRange& r) {
    std::vector<double> vals;
    for (double v = r.lo; v <= r.hi + 1e-12; v += r.step) vals.push_back(v);
    return vals;
}

std::vector<double> parse_list(const std::string& text) {
    std::vector<double> vals;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) vals.push_back(std::stod(item));
    }
    return vals;
}

// Evaluates fn over the inputs on a small worker pool; the result order
// follows the input order regardless of completion order.
template <typename In, typename Fn>
auto parallel_map(const std::vector<In>& inputs, Fn fn)
    -> std::vector<decltype(fn(inputs.front()))> {
    using Out = decltype(fn(inputs.front()));
    std::vector<std::future<Out>> futures;
    futures.reserve(inputs.size());
    for (const In& in : inputs) {
        futures.push_back(std::async(std::launch::async, [&fn, in] { return fn(in); }));
    }
    std::vector<Out> out;
    out.reserve(inputs.size());
    for (auto& f : futures) out.push_back(f.get());
    return out;
}

void write_output(const Table& table, const std::string& out_path, const std::string& format,
                  const nlohmann::json* extra = nullptr) {
    std::string payload;
    if (format == "csv") {
        payload = table.to_csv();
    } else {
        if (extra) {
            nlohmann::json j = *extra;
            j["table"] = nlohmann::json::parse(table.to_json());
            payload = j.dump(2) + "\n";
        } else {
            payload = table.to_json();
        }
    }
    if (out_path.empty()) {
        std::cout << payload;
    } else {
        std::ofstream out(out_path, std::ios::binary);
        if (!out) throw std::runtime_error("cannot write " + out_path);
        out << payload;
    }
}

ChainParams with_mint(ChainParams p, double mint) {
    p.R = mint;
    return p;
}

PoolSet two_pool_set(const ExperimentConfig& cfg, double lambda_a) {
    double total = cfg.pools.total_lambda();
    double pow2d = std::exp2(cfg.params.d);
    PoolSet set;
    set.pools.push_back({cfg.pools.pools[0].id, lambda_a * pow2d, lambda_a});
    set.pools.push_back({cfg.pools.pools[1].id, (total - lambda_a) * pow2d, total - lambda_a});
    return set;
}

void require_two_pools(const ExperimentConfig& cfg, const std::string& cmd) {
    if (cfg.pools.size() != 2) {
        throw std::runtime_error(cmd + " needs exactly two pools in the config");
    }
}

void check_lambda_domain(const std::vector<double>& lambdas, double total) {
    for (double v : lambdas) {
        if (!(v > 0.0 && v < total)) {
            throw std::runtime_error("sweep value outside (0, total lambda)");
        }
    }
}

struct CommonOpts {
    std::string config_path;
    std::string prev = "";
    std::string sweep_text;
    std::string mint_list;
    std::string out_path;
    std::string format = "csv";
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
    cmd->add_option("--config", opts.config_path, "configuration JSON")
        ->required()
        ->envname("NGML_CONFIG");
    cmd->add_option("--prev", opts.prev, "previous key-block miner")->envname("NGML_PREV");
    cmd->add_option("--sweep", opts.sweep_text, "sweep spec, e.g. lambda_a=0.05:0.45:0.05")
        ->envname("NGML_SWEEP");
    cmd->add_option("--R", opts.mint_list, "comma list of mint rewards")->envname("NGML_R");
    cmd->add_option("--out", opts.out_path, "output path (default stdout)")->envname("NGML_OUT");
    cmd->add_option("--format", opts.format, "csv|json")
        ->check(CLI::IsMember({"csv", "json"}))
        ->envname("NGML_FORMAT");
}

std::vector<double> lambda_sweep(const ExperimentConfig& cfg, const CommonOpts& opts) {
    if (opts.sweep_text.empty()) return {cfg.pools.pools[0].lambda};
    SweepRange r = parse_sweep(opts.sweep_text);
    if (r.variable != "lambda_a") {
        throw std::runtime_error("only lambda_a sweeps are supported");
    }
    std::vector<double> vals = sweep_values(r);
    check_lambda_domain(vals, cfg.pools.total_lambda());
    return vals;
}

std::vector<double> mint_values(const ExperimentConfig& cfg, const CommonOpts& opts) {
    if (opts.mint_list.empty()) return {cfg.params.R};
    return parse_list(opts.mint_list);
}

RacePrev race_prev(const std::string& prev, const ExperimentConfig& cfg) {
    if (prev.empty() || prev == "honest") return RacePrev::honest;
    if (prev == "attacker" || prev == cfg.pools.pools[0].id) return RacePrev::attacker;
    throw std::runtime_error("--prev must be honest, attacker, or the attacker pool id");
}

std::string game_prev(const std::string& prev, const PoolSet& pools) {
    if (prev.empty()) return pools.pools.back().id;  // the N-player derivation's case
    if (pools.index_of(prev) < 0) throw std::runtime_error("--prev is not a pool id");
    return prev;
}

std::string prev_label(RacePrev prev) {
    return prev == RacePrev::honest ? "honest" : "attacker";
}

Cell foc_cell(const std::optional<double>& res) {
    if (res) return *res;
    return std::string("");  // boundary optimum: residual omitted
}

// ---------------------------------------------------------------------------
// optimize: one-attacker expected-reward curves with closed-form and numeric
// optima.

int cmd_optimize(const ExperimentConfig& cfg, const CommonOpts& opts, int tau_points) {
    require_two_pools(cfg, "optimize");
    RacePrev prev = race_prev(opts.prev, cfg);
    std::vector<double> lambdas = lambda_sweep(cfg, opts);
    std::vector<double> mints = mint_values(cfg, opts);
    double total = cfg.pools.total_lambda();

    struct Point {
        double mint, lambda_a;
    };
    std::vector<Point> points;
    for (double mint : mints) {
        for (double la : lambdas) points.push_back({mint, la});
    }

    auto results = parallel_map(points, [&](const Point& pt) {
        ChainParams params = with_mint(cfg.params, pt.mint);
        RaceSpec spec = RaceSpec::make(pt.lambda_a, total - pt.lambda_a, params, prev);
        double closed = optimal_tau_closed_form(spec);
        double numeric = optimal_tau_numeric(spec, 1e-6);
        std::vector<RewardCurvePoint> curve;
        curve.reserve(tau_points);
        for (int i = 0; i < tau_points; ++i) {
            double tau = params.T_m + (params.T - params.T_m) * i / (tau_points - 1);
            curve.push_back(reward_curve_point(spec, tau));
        }
        double pi_star = expected_reward(spec, closed);
        double pi_honest = expected_reward(spec, params.T_m);
        return std::tuple(closed, numeric, pi_star, pi_honest, curve);
    });

    Table t;
    t.columns = {"lambda_a", "R", "prev", "tau", "win_prob", "reward_if_win",
                 "expected_reward", "tau_star_closed", "tau_star_numeric", "pi_star",
                 "pi_honest"};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& [closed, numeric, pi_star, pi_honest, curve] = results[i];
        for (const RewardCurvePoint& pt : curve) {
            t.add_row({points[i].lambda_a, points[i].mint, prev_label(prev), pt.tau,
                       pt.win_prob, pt.reward_if_win, pt.expected_reward, closed, numeric,
                       pi_star, pi_honest});
        }
    }
    write_output(t, opts.out_path, opts.format);
    return kExitOk;
}

// ---------------------------------------------------------------------------
// game2: closed-form two-player equilibria across the sweep.

int cmd_game2(const ExperimentConfig& cfg, const CommonOpts& opts) {
    require_two_pools(cfg, "game2");
    std::string prev_id = game_prev(opts.prev, cfg.pools);
    std::vector<double> lambdas = lambda_sweep(cfg, opts);
    std::vector<double> mints = mint_values(cfg, opts);

    struct Point {
        double mint, lambda_a;
    };
    std::vector<Point> points;
    for (double mint : mints) {
        for (double la : lambdas) points.push_back({mint, la});
    }

    auto results = parallel_map(points, [&](const Point& pt) {
        GameSpec spec = GameSpec::make(two_pool_set(cfg, pt.lambda_a),
                                       with_mint(cfg.params, pt.mint), PrevLeaderCase{prev_id});
        StrategyProfile eq = two_player_equilibrium(spec);
        double gain = verify_equilibrium(spec, eq);
        double pi_a = n_player_utility(spec, eq, 0);
        double pi_b = n_player_utility(spec, eq, 1);
        return std::tuple(eq, gain, pi_a, pi_b);
    });

    bool all_ok = true;
    Table t;
    t.columns = {"R", "prev", "lambda_a", "lambda_b", "tau_a_star", "tau_b_star",
                 "pi_a", "pi_b", "deviation_gain", "converged"};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& [eq, gain, pi_a, pi_b] = results[i];
        double tol = 1e-6 * (cfg.params.r * cfg.params.L + points[i].mint);
        bool ok = gain <= tol;
        all_ok = all_ok && ok;
        t.add_row({points[i].mint, prev_id, points[i].lambda_a,
                   cfg.pools.total_lambda() - points[i].lambda_a, eq.taus[0], eq.taus[1],
                   pi_a, pi_b, gain, std::int64_t{ok ? 1 : 0}});
    }
    write_output(t, opts.out_path, opts.format);
    return all_ok ? kExitOk : kExitNotConverged;
}

// ---------------------------------------------------------------------------
// gameN: iterated-best-response equilibria; the sweep moves the first
// pool's rate and the last pool absorbs the difference.

int cmd_gamen(const ExperimentConfig& cfg, const CommonOpts& opts, double tol, int max_iters) {
    std::string prev_id = game_prev(opts.prev, cfg.pools);
    std::vector<double> mints = mint_values(cfg, opts);
    double total = cfg.pools.total_lambda();

    std::vector<double> lambdas;
    if (opts.sweep_text.empty()) {
        lambdas = {cfg.pools.pools[0].lambda};
    } else {
        SweepRange r = parse_sweep(opts.sweep_text);
        if (r.variable != "lambda_a") throw std::runtime_error("only lambda_a sweeps are supported");
        double fixed_middle = 0.0;
        for (int n = 1; n + 1 < cfg.pools.size(); ++n) fixed_middle += cfg.pools.pools[n].lambda;
        for (double v : sweep_values(r)) {
            if (v > 0.0 && total - fixed_middle - v > 0.0) lambdas.push_back(v);
        }
    }

    struct Point {
        double mint, lambda_a;
    };
    std::vector<Point> points;
    for (double mint : mints) {
        for (double la : lambdas) points.push_back({mint, la});
    }

    auto results = parallel_map(points, [&](const Point& pt) {
        PoolSet set = cfg.pools;
        double pow2d = std::exp2(cfg.params.d);
        double fixed_middle = 0.0;
        for (int n = 1; n + 1 < set.size(); ++n) fixed_middle += set.pools[n].lambda;
        set.pools.front().lambda = pt.lambda_a;
        set.pools.front().w = pt.lambda_a * pow2d;
        set.pools.back().lambda = total - fixed_middle - pt.lambda_a;
        set.pools.back().w = set.pools.back().lambda * pow2d;
        GameSpec spec =
            GameSpec::make(set, with_mint(cfg.params, pt.mint), PrevLeaderCase{prev_id});
        return std::pair(spec, solve_equilibrium(spec, tol, max_iters));
    });

    bool all_ok = true;
    Table t;
    t.columns = {"R", "prev", "sweep_lambda_a", "pool", "lambda", "tau_star", "utility",
                 "converged", "iterations", "deviation_gain", "foc_residual"};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& [spec, rep] = results[i];
        all_ok = all_ok && rep.converged;
        for (int n = 0; n < spec.size(); ++n) {
            t.add_row({points[i].mint, prev_id, points[i].lambda_a, spec.pools.pools[n].id,
                       spec.pools.lambda(n), rep.profile.taus[n], rep.utilities[n],
                       std::int64_t{rep.converged ? 1 : 0}, std::int64_t{rep.iterations},
                       rep.max_deviation_gain, foc_cell(rep.foc_residuals[n])});
        }
    }
    write_output(t, opts.out_path, opts.format);
    return all_ok ? kExitOk : kExitNotConverged;
}

// ---------------------------------------------------------------------------
// simulate: the four two-pool strategy setups (or three three-pool setups),
// with per-setup statistics and TPS-penalty rows against the honest run.

struct SimSetup {
    std::string name;
    StrategyProfile profile;
};

int cmd_simulate(const ExperimentConfig& cfg, const CommonOpts& opts, std::int64_t rounds,
                 std::uint64_t seed, const std::string& per_round_path) {
    std::string prev_id = game_prev(opts.prev, cfg.pools);
    GameSpec spec = GameSpec::make(cfg.pools, cfg.params, PrevLeaderCase{prev_id});
    double t_m = cfg.params.T_m;

    bool solves_ok = true;
    std::vector<SimSetup> setups;
    if (cfg.pools.size() == 2) {
        StrategyProfile eq = two_player_equilibrium(spec);
        setups.push_back({"eq_eq", eq});
        setups.push_back({"honest_honest", StrategyProfile{{t_m, t_m}}});
        setups.push_back({"eq_honest", StrategyProfile{{eq.taus[0], t_m}}});
        setups.push_back({"honest_eq", StrategyProfile{{t_m, eq.taus[1]}}});
    } else if (cfg.pools.size() == 3) {
        EquilibriumReport rep = solve_equilibrium(spec, 1e-6, 500);
        if (!rep.converged) {
            solves_ok = false;
            std::cerr << "warning: equilibrium solve did not converge\n";
        }
        StrategyProfile eq = rep.profile;
        setups.push_back({"eq_eq_eq", eq});
        setups.push_back({"honest_honest_honest", StrategyProfile{{t_m, t_m, t_m}}});
        setups.push_back({"eq_honest_honest", StrategyProfile{{eq.taus[0], t_m, t_m}}});
    } else {
        setups.push_back({"configured", cfg.strategy});
    }

    std::vector<std::int64_t> miners = resolve_miners(cfg);
    std::vector<std::string> ids;
    for (const auto& p : cfg.pools.pools) ids.push_back(p.id);

    std::vector<SimStats> all_stats;
    all_stats.reserve(setups.size());
    std::ptrdiff_t honest_index = -1;
    nlohmann::json stats_json = nlohmann::json::array();
    for (std::size_t s = 0; s < setups.size(); ++s) {
        SimConfig sim_cfg = SimConfig::make(cfg.params, miners, setups[s].profile, rounds,
                                            seed + s, cfg.sim.micro_fraction_mode);
        std::vector<RoundOutcome> outcomes;
        bool want_rounds = !per_round_path.empty();
        all_stats.push_back(run_sim(sim_cfg, want_rounds ? &outcomes : nullptr));
        stats_json.push_back(
            nlohmann::json::parse(sim_stats_to_json(all_stats.back(), ids)));
        if (setups[s].name.rfind("honest", 0) == 0 && setups[s].name.find("eq") == std::string::npos) {
            honest_index = static_cast<std::ptrdiff_t>(s);
        }
        if (want_rounds) {
            Table rt;
            rt.columns = {"round", "winner", "win_time", "reward", "included", "discarded",
                          "prev_leader"};
            for (std::size_t i = 0; i < outcomes.size(); ++i) {
                const RoundOutcome& o = outcomes[i];
                rt.add_row({static_cast<std::int64_t>(i), std::int64_t{o.winner},
                            o.win_time, o.reward, o.micro_blocks_included,
                            o.micro_blocks_discarded, std::int64_t{o.prev_leader}});
            }
            std::ofstream out(per_round_path + "." + setups[s].name + ".csv", std::ios::binary);
            out << rt.to_csv();
        }
    }

    Table t;
    t.columns = {"setup", "pool", "lambda", "tau", "rounds", "seed", "wins", "win_frequency",
                 "average_reward", "reward_se", "avg_discarded", "reward_penalty_vs_honest",
                 "discarded_penalty_vs_honest"};
    double pow2d = std::exp2(cfg.params.d);
    for (std::size_t s = 0; s < setups.size(); ++s) {
        const SimStats& st = all_stats[s];
        for (int n = 0; n < cfg.pools.size(); ++n) {
            t.add_row({setups[s].name, ids[n], static_cast<double>(miners[n]) / pow2d,
                       setups[s].profile.taus[n], st.rounds_completed,
                       static_cast<std::int64_t>(st.config.seed), st.wins[n],
                       st.win_frequency[n], st.average_reward[n], st.reward_standard_error(n),
                       st.avg_micro_blocks_discarded, std::string(""), std::string("")});
        }
        if (honest_index >= 0 && honest_index != static_cast<std::ptrdiff_t>(s)) {
            TpsPenalty pen = measure_tps_penalty(st, all_stats[honest_index]);
            t.add_row({setups[s].name, std::string("(system)"), 0.0, 0.0, st.rounds_completed,
                       static_cast<std::int64_t>(st.config.seed),
                       std::int64_t{0}, 0.0, 0.0, 0.0, st.avg_micro_blocks_discarded,
                       pen.sum_reward_diff, pen.discarded_per_round});
        }
    }

    nlohmann::json extra;
    extra["stats"] = std::move(stats_json);
    write_output(t, opts.out_path, opts.format, opts.format == "json" ? &extra : nullptr);
    return solves_ok ? kExitOk : kExitNotConverged;
}

// ---------------------------------------------------------------------------
// sweep: one summary row per sweep point combining the one-attacker optimum
// and the two-player equilibrium.

int cmd_sweep(const ExperimentConfig& cfg, const CommonOpts& opts) {
    require_two_pools(cfg, "sweep");
    std::string prev_id = game_prev(opts.prev, cfg.pools);
    RacePrev rprev = prev_id == cfg.pools.pools[0].id ? RacePrev::attacker : RacePrev::honest;
    std::vector<double> lambdas = lambda_sweep(cfg, opts);
    std::vector<double> mints = mint_values(cfg, opts);
    double total = cfg.pools.total_lambda();

    struct Point {
        double mint, lambda_a;
    };
    std::vector<Point> points;
    for (double mint : mints) {
        for (double la : lambdas) points.push_back({mint, la});
    }

    auto results = parallel_map(points, [&](const Point& pt) {
        ChainParams params = with_mint(cfg.params, pt.mint);
        RaceSpec race = RaceSpec::make(pt.lambda_a, total - pt.lambda_a, params, rprev);
        double closed = optimal_tau_closed_form(race);
        double numeric = optimal_tau_numeric(race, 1e-6);
        GameSpec spec =
            GameSpec::make(two_pool_set(cfg, pt.lambda_a), params, PrevLeaderCase{prev_id});
        StrategyProfile eq = two_player_equilibrium(spec);
        return std::tuple(closed, numeric, expected_reward(race, closed),
                          expected_reward(race, params.T_m), eq,
                          n_player_utility(spec, eq, 0), n_player_utility(spec, eq, 1),
                          verify_equilibrium(spec, eq));
    });

    Table t;
    t.columns = {"R", "prev", "lambda_a", "lambda_b", "tau_star_closed", "tau_star_numeric",
                 "pi_star", "pi_honest", "tau_a_eq", "tau_b_eq", "pi_a_eq", "pi_b_eq",
                 "eq_deviation_gain"};
    for (std::size_t i = 0; i < points.size(); ++i) {
        const auto& [closed, numeric, pi_star, pi_honest, eq, pi_a, pi_b, gain] = results[i];
        t.add_row({points[i].mint, prev_id, points[i].lambda_a, total - points[i].lambda_a,
                   closed, numeric, pi_star, pi_honest, eq.taus[0], eq.taus[1], pi_a, pi_b,
                   gain});
    }
    write_output(t, opts.out_path, opts.format);
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Bitcoin-NG advanced-mining analytics, equilibria, and race simulator"};
    app.require_subcommand(1);

    CommonOpts opt_optimize, opt_game2, opt_gamen, opt_sim, opt_sweep;
    int tau_points = 101;
    double gamen_tol = 1e-6;
    int gamen_iters = 500;
    std::int64_t sim_rounds = 0;
    std::int64_t sim_seed = -1;
    std::string per_round_path;

    CLI::App* c_opt = app.add_subcommand("optimize", "one-attacker reward curves and optima");
    add_common(c_opt, opt_optimize);
    c_opt->add_option("--tau-points", tau_points, "points on the tau grid");

    CLI::App* c_g2 = app.add_subcommand("game2", "closed-form two-player equilibria");
    add_common(c_g2, opt_game2);

    CLI::App* c_gn = app.add_subcommand("gameN", "N-player equilibria by iterated best response");
    add_common(c_gn, opt_gamen);
    c_gn->add_option("--tol", gamen_tol, "solver tolerance");
    c_gn->add_option("--max-iters", gamen_iters, "solver iteration cap");

    CLI::App* c_sim = app.add_subcommand("simulate", "Monte Carlo strategy-setup comparison");
    add_common(c_sim, opt_sim);
    c_sim->add_option("--rounds", sim_rounds, "rounds per setup")->envname("NGML_ROUNDS");
    c_sim->add_option("--seed", sim_seed, "base RNG seed")->envname("NGML_SEED");
    c_sim->add_option("--per-round", per_round_path, "per-round CSV path prefix");

    CLI::App* c_sweep = app.add_subcommand("sweep", "summary table across a lambda sweep");
    add_common(c_sweep, opt_sweep);

    CLI11_PARSE(app, argc, argv);

    try {
        if (c_opt->parsed()) {
            return cmd_optimize(load_config(opt_optimize.config_path), opt_optimize, tau_points);
        }
        if (c_g2->parsed()) {
            return cmd_game2(load_config(opt_game2.config_path), opt_game2);
        }
        if (c_gn->parsed()) {
            return cmd_gamen(load_config(opt_gamen.config_path), opt_gamen, gamen_tol,
                             gamen_iters);
        }
        if (c_sim->parsed()) {
            ExperimentConfig cfg = load_config(opt_sim.config_path);
            std::int64_t rounds = sim_rounds > 0 ? sim_rounds : cfg.sim.rounds;
            std::uint64_t seed = sim_seed >= 0 ? static_cast<std::uint64_t>(sim_seed)
                                               : cfg.sim.seed;
            return cmd_simulate(cfg, opt_sim, rounds, seed, per_round_path);
        }
        if (c_sweep->parsed()) {
            return cmd_sweep(load_config(opt_sweep.config_path), opt_sweep);
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitConfigError;
    }
    return kExitConfigError;
}
