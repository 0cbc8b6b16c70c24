// Batch front-end: solve a game's guarantee frontier, extract and evaluate
// the mode automaton, run forecaster benchmarks, and check the closed-form
// two-expert frontier. Emits plot-ready CSV plus JSON artifacts that embed
// their full configuration.

#include "vecgame/baselines.hpp"
#include "vecgame/io.hpp"
#include "vecgame/solver.hpp"
#include "vecgame/strategy.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <optional>
#include <string>
#include <thread>
#include <vector>

namespace fs = std::filesystem;
using namespace vecgame;

namespace {

struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct Options {
  std::string command;
  std::string game = "experts2";
  double beta = 0.9;
  int grid = 100;
  int iters = 0;
  std::optional<double> tol;
  std::uint64_t seed = 1;
  int runs = 10000;
  int horizon = 100;
  std::string adversaries = "A,B,C";
  std::string forecasters = "ours,hedge,gps";
  std::string target = "minmax";
  std::string strategy_path;
  std::string solve_path;
  int samples = 2000;
  int threads = 0;
  std::string out = "out";

  int effective_threads() const {
    if (threads > 0) return threads;
    const unsigned hw = std::thread::hardware_concurrency();
    return hw == 0 ? 2 : static_cast<int>(hw);
  }
};

Json options_to_json(const Options& o) {
  Json j{{"command", o.command}, {"game", o.game},       {"beta", o.beta},
         {"grid", o.grid},       {"iters", o.iters},     {"seed", o.seed},
         {"runs", o.runs},       {"horizon", o.horizon}, {"adversaries", o.adversaries},
         {"forecasters", o.forecasters},                 {"target", o.target},
         {"samples", o.samples}, {"out", o.out},         {"version", kVersion}};
  if (o.tol) j["tol"] = *o.tol;
  if (!o.strategy_path.empty()) j["strategy"] = o.strategy_path;
  if (!o.solve_path.empty()) j["solve"] = o.solve_path;
  return j;
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      if (!cur.empty()) out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  if (!cur.empty()) out.push_back(cur);
  return out;
}

struct GameBundle {
  VectorGame game;                  // raw vector game
  std::optional<ScalarGame> scalar; // present when the game came from a scalar form
};

GameBundle load_game(const std::string& name, double beta) {
  GameBundle b;
  if (name == "experts2" || name == "experts3") {
    b.scalar = experts_game(name == "experts2" ? 2 : 3);
    b.game = regret_game(*b.scalar, beta);
    return b;
  }
  if (name == "demo2x2") {
    b.game = demo_game(beta);
    return b;
  }
  if (!fs::exists(name)) {
    throw ConfigError("unknown game '" + name +
                      "' (builtins: experts2, experts3, demo2x2; or a JSON file path)");
  }
  const Json j = read_json_file(name);
  if (j.contains("k")) {
    b.game = game_from_json(j);
    b.game.beta = beta;
    return b;
  }
  auto [scalar, file_beta] = scalar_game_from_json(j);
  (void)file_beta;  // command-line beta wins; the file's beta is a default
  b.scalar = std::move(scalar);
  b.game = regret_game(*b.scalar, beta);
  return b;
}

InitialTarget parse_target(const std::string& text, int k) {
  if (text == "minmax") return InitialTarget::minmax();
  const auto parse_vec = [&](const std::string& body) {
    const auto parts = split_csv(body);
    Vec v(static_cast<int>(parts.size()));
    for (std::size_t i = 0; i < parts.size(); ++i) v[static_cast<int>(i)] = std::stod(parts[i]);
    if (v.size() != k) throw ConfigError("target vector must have " + std::to_string(k) + " entries");
    return v;
  };
  if (text.rfind("prior:", 0) == 0) return InitialTarget::prior(parse_vec(text.substr(6)));
  if (text.rfind("param:", 0) == 0) return InitialTarget::param(parse_vec(text.substr(6)));
  throw ConfigError("bad --target (minmax | prior:w1,w2,... | param:p1,p2,...)");
}

void ensure_out(const Options& o) { fs::create_directories(o.out); }

std::string out_path(const Options& o, const std::string& name) {
  return (fs::path(o.out) / name).string();
}

SolveResult run_solve(const Options& o, const GameBundle& bundle) {
  if (o.iters < 1 && !o.tol) throw ConfigError("solve needs --iters and/or --tol");
  auto [norm, rec] = normalize(bundle.game);
  StopRule stop;
  stop.max_iterations = o.iters >= 1 ? o.iters : 100000;
  stop.tolerance = o.tol;
  return value_iteration(norm, rec, o.grid, stop, o.effective_threads());
}

Json solve_report(const SolveResult& res) {
  const auto mm = minmax_point(res.frontier);
  const Frontier raw = res.raw_frontier();
  const auto mm_raw = minmax_point(raw);
  // e(G_n, V*) <= beta^n in normalized units; dividing by the uniform scale
  // converts the correction to raw loss units.
  const double e_raw = res.bounds.e_upper / res.record.scale;
  return Json{{"iterations", res.iterations},
              {"final_delta", res.deltas.empty() ? 0.0 : res.deltas.back()},
              {"minmax_normalized", mm.value},
              {"minmax_raw", mm_raw.value},
              {"regret_upper_bound", regret_upper_bound(mm_raw.value, res.game.beta, res.iterations)},
              {"regret_upper_bound_scaled_e", mm_raw.value + e_raw},
              {"bounds",
               {{"e_upper", res.bounds.e_upper},
                {"d_upper", res.bounds.d_upper},
                {"strategy_d_upper", res.bounds.strategy_d_upper}}}};
}

int cmd_solve(const Options& o) {
  ensure_out(o);
  const auto bundle = load_game(o.game, o.beta);
  const auto res = run_solve(o, bundle);

  Json artifact = solve_result_to_json(res);
  artifact["config"] = options_to_json(o);
  write_json_file(out_path(o, "solve.json"), artifact);
  write_text_file(out_path(o, "frontier.csv"),
                  frontier_csv(res.frontier, res.record, res.game.beta));
  Json report = solve_report(res);
  report["config"] = options_to_json(o);
  write_json_file(out_path(o, "report.json"), report);

  std::printf("solve: %d directions, %d iterations, final delta %.3e\n", res.grid.count(),
              res.iterations, res.deltas.back());
  std::printf("minmax readout (raw units): %.6f\n", report["minmax_raw"].get<double>());
  std::printf("regret upper bound: %.6f (d_upper %.4f)\n",
              report["regret_upper_bound"].get<double>(), res.bounds.d_upper);
  return 0;
}

ModeStrategy build_strategy(const Options& o, const SolveResult& res) {
  auto s = extract_strategy(res, o.effective_threads());
  // Refresh the per-mode guarantees with their exact fixed-point values.
  const auto ev = evaluate_strategy(res.game, s, o.tol.value_or(1e-8));
  s.guarantee = ev.guarantees;
  return s;
}

int cmd_strategy(const Options& o) {
  ensure_out(o);
  if (o.solve_path.empty()) throw ConfigError("strategy needs --solve <solve.json>");
  const auto res = solve_result_from_json(read_json_file(o.solve_path));
  const auto s = build_strategy(o, res);
  Json artifact = strategy_to_json(s);
  artifact["config"] = options_to_json(o);
  write_json_file(out_path(o, "strategy.json"), artifact);
  std::printf("strategy: %d modes over grid N=%d, %d actions\n", s.mode_count(), s.grid.n, s.m);
  return 0;
}

int cmd_evaluate(const Options& o) {
  ensure_out(o);
  if (o.solve_path.empty()) throw ConfigError("evaluate needs --solve <solve.json>");
  const auto res = solve_result_from_json(read_json_file(o.solve_path));
  ModeStrategy s = o.strategy_path.empty()
                       ? extract_strategy(res, o.effective_threads())
                       : strategy_from_json(read_json_file(o.strategy_path));
  const auto ev = evaluate_strategy(res.game, s, o.tol.value_or(1e-8));
  write_text_file(out_path(o, "evaluation.csv"), evaluation_csv(s, ev.guarantees));

  // Fixed-point distance to the penultimate iterate against the solver-delta
  // bound, in line coordinates.
  const double gap = mode_sup_gap(res.grid, ev.guarantees, res.prev_frontier.vertices);
  const double bound = res.deltas.back() / (1.0 - res.game.beta);
  Json report{{"sweeps", ev.iterations},
              {"final_delta", ev.final_delta},
              {"eval_vs_prev_gap", gap},
              {"delta_bound", bound},
              {"delta_bound_holds", gap <= bound + 1e-9},
              {"strategy_d_upper", res.bounds.strategy_d_upper},
              {"config", options_to_json(o)}};
  write_json_file(out_path(o, "evaluation_report.json"), report);
  std::printf("evaluate: %d sweeps, |F^pi - F^prev| = %.3e <= %.3e (%s)\n", ev.iterations, gap,
              bound, gap <= bound + 1e-9 ? "ok" : "VIOLATED");
  std::printf("strategy distance bound: %.4f\n", res.bounds.strategy_d_upper);
  return 0;
}

std::unique_ptr<Forecaster> build_forecaster(const std::string& kind, const Options& o,
                                             const GameBundle& bundle,
                                             const std::optional<ModeStrategy>& strat) {
  const int experts = bundle.game.k;
  if (kind == "hedge") return make_hedge(experts, o.beta);
  if (kind == "gps") return make_gps(experts, o.beta);
  if (kind == "ours") {
    if (!strat) throw ConfigError("forecaster 'ours' needs --strategy or --grid/--iters");
    if (!bundle.scalar) throw ConfigError("forecaster 'ours' needs a scalar game");
    const auto initial = initial_modes(*strat, parse_target(o.target, strat->k));
    return make_mode_strategy_forecaster(*strat, *bundle.scalar, initial);
  }
  throw ConfigError("unknown forecaster '" + kind + "' (ours, hedge, gps)");
}

std::optional<ModeStrategy> maybe_strategy(const Options& o, const GameBundle& bundle,
                                           bool needed) {
  if (!o.strategy_path.empty())
    return strategy_from_json(read_json_file(o.strategy_path));
  if (!needed) return std::nullopt;
  if (o.iters < 1) return std::nullopt;
  const auto res = run_solve(o, bundle);
  return build_strategy(o, res);
}

int cmd_simulate_like(const Options& o, bool combined) {
  ensure_out(o);
  const auto bundle = load_game(o.game, o.beta);
  const auto forecaster_names = split_csv(o.forecasters);
  const auto adversary_names = split_csv(o.adversaries);
  if (forecaster_names.empty() || adversary_names.empty())
    throw ConfigError("need at least one forecaster and one adversary");

  const bool needs_ours =
      std::find(forecaster_names.begin(), forecaster_names.end(), "ours") !=
      forecaster_names.end();
  const auto strat = maybe_strategy(o, bundle, needs_ours);

  std::vector<SimRow> rows;
  for (const auto& fname : forecaster_names) {
    const auto forecaster = build_forecaster(fname, o, bundle, strat);
    for (const auto& aname : adversary_names) {
      const auto kind = adversary_from_name(aname);
      const auto adversary = make_adversary(kind, o.beta);
      if (adversary->experts() != bundle.game.k)
        throw ConfigError("adversary " + aname + " plays a " +
                          std::to_string(adversary->experts()) + "-expert game, got k=" +
                          std::to_string(bundle.game.k));
      SimRow row;
      row.forecaster = fname;
      row.adversary = adversary_name(kind);
      row.beta = o.beta;
      row.seed = o.seed;
      row.stats = simulate(*forecaster, *adversary, o.beta, o.horizon, o.runs, o.seed,
                           o.effective_threads());
      std::printf("%-8s vs %s: mean %.4f  (+-%.4f, se %.4f)\n", fname.c_str(),
                  row.adversary.c_str(), row.stats.mean, row.stats.ci_half_width,
                  row.stats.std_error);
      rows.push_back(std::move(row));
    }
  }
  const char* base = combined ? "compare" : "simulate";
  write_text_file(out_path(o, std::string(base) + ".csv"), sim_rows_csv(rows));
  Json artifact{{"results", sim_rows_to_json(rows)}, {"config", options_to_json(o)}};
  write_json_file(out_path(o, std::string(base) + ".json"), artifact);
  return 0;
}

int cmd_oracle_check(const Options& o) {
  ensure_out(o);
  if (std::abs(o.beta - 0.5) > 1e-12)
    throw ConfigError("oracle-check: the closed form holds for beta = 0.5 only");
  Options local = o;
  local.game = "experts2";
  const auto bundle = load_game(local.game, local.beta);
  const auto res = run_solve(local, bundle);

  Frontier oracle = oracle_frontier_k2_half(2 * o.samples + 1);
  for (int j = 0; j < oracle.count(); ++j)
    oracle.vertices.col(j) = normalize_vector(oracle.vertices.col(j), res.record, res.game.beta);
  const double d = d_distance(res.frontier, oracle, o.samples, o.effective_threads());
  const double budget = res.bounds.d_upper + 2.0 / o.samples;
  Json report{{"d_sampled", d},
              {"d_upper", res.bounds.d_upper},
              {"sampling_slack", 2.0 / o.samples},
              {"budget", budget},
              {"within_budget", d <= budget},
              {"config", options_to_json(o)}};
  write_json_file(out_path(o, "oracle_report.json"), report);
  std::printf("oracle-check: sampled d = %.6f, budget = %.6f (%s)\n", d, budget,
              d <= budget ? "ok" : "VIOLATED");
  return d <= budget ? 0 : 3;
}

Json error_json(const std::string& kind, const std::string& message, int code) {
  return Json{{"error", {{"kind", kind}, {"message", message}, {"exit_code", code}}}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Guarantee frontiers and regret-optimal automata for repeated games "
               "with vector losses"};
  app.require_subcommand(1);
  Options o;

  const auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--threads", o.threads, "worker threads (0 = hardware)");
    cmd->add_option("--out", o.out, "output directory")->capture_default_str();
  };
  const auto add_game = [&](CLI::App* cmd) {
    cmd->add_option("--game", o.game, "experts2 | experts3 | demo2x2 | game JSON path")
        ->capture_default_str();
    cmd->add_option("--beta", o.beta, "discount factor in [0,1)")->capture_default_str();
  };
  const auto add_solve = [&](CLI::App* cmd) {
    cmd->add_option("--grid", o.grid, "direction grid level N")->capture_default_str();
    cmd->add_option("--iters", o.iters, "iteration count n");
    cmd->add_option("--tol", [&o](const std::vector<std::string>& vals) {
      o.tol = std::stod(vals[0]);
      return true;
    }, "stop once the sup-norm delta drops below this");
  };

  auto* solve = app.add_subcommand("solve", "iterate the frontier operator");
  add_game(solve);
  add_solve(solve);
  add_common(solve);

  auto* strategy = app.add_subcommand("strategy", "extract the mode automaton from a solve");
  strategy->add_option("--solve", o.solve_path, "solve.json path")->required();
  strategy->add_option("--tol", [&o](const std::vector<std::string>& vals) {
    o.tol = std::stod(vals[0]);
    return true;
  }, "policy evaluation tolerance");
  add_common(strategy);

  auto* evaluate = app.add_subcommand("evaluate", "exact per-mode guarantees of a strategy");
  evaluate->add_option("--solve", o.solve_path, "solve.json path")->required();
  evaluate->add_option("--strategy", o.strategy_path, "strategy.json path (else re-extract)");
  evaluate->add_option("--tol", [&o](const std::vector<std::string>& vals) {
    o.tol = std::stod(vals[0]);
    return true;
  }, "policy evaluation tolerance");
  add_common(evaluate);

  auto* simulate_cmd = app.add_subcommand("simulate", "Monte-Carlo discounted regret");
  add_game(simulate_cmd);
  add_solve(simulate_cmd);
  simulate_cmd->add_option("--forecasters", o.forecasters, "comma list: ours,hedge,gps")
      ->capture_default_str();
  simulate_cmd->add_option("--adversaries", o.adversaries, "comma list from A-F")
      ->capture_default_str();
  simulate_cmd->add_option("--runs", o.runs, "")->capture_default_str();
  simulate_cmd->add_option("--horizon", o.horizon, "")->capture_default_str();
  simulate_cmd->add_option("--seed", o.seed, "")->capture_default_str();
  simulate_cmd->add_option("--strategy", o.strategy_path, "strategy.json for 'ours'");
  simulate_cmd->add_option("--target", o.target, "minmax | prior:... | param:...")
      ->capture_default_str();
  add_common(simulate_cmd);

  auto* compare = app.add_subcommand("compare", "forecaster x adversary table");
  add_game(compare);
  add_solve(compare);
  compare->add_option("--forecasters", o.forecasters, "")->capture_default_str();
  compare->add_option("--adversaries", o.adversaries, "")->capture_default_str();
  compare->add_option("--runs", o.runs, "")->capture_default_str();
  compare->add_option("--horizon", o.horizon, "")->capture_default_str();
  compare->add_option("--seed", o.seed, "")->capture_default_str();
  compare->add_option("--strategy", o.strategy_path, "strategy.json for 'ours'");
  compare->add_option("--target", o.target, "")->capture_default_str();
  add_common(compare);

  auto* oracle = app.add_subcommand("oracle-check", "distance to the closed-form frontier");
  oracle->add_option("--beta", o.beta, "must be 0.5")->default_val(0.5);
  add_solve(oracle);
  oracle->add_option("--samples", o.samples, "direction sampling level M")
      ->capture_default_str();
  add_common(oracle);

  // Defaults matching the closed-form setup.
  if (argc > 1 && std::string(argv[1]) == "oracle-check") {
    o.beta = 0.5;
    o.grid = 100;
    o.iters = 30;
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);  // --help
    std::fprintf(stderr, "%s\n", error_json("config", e.what(), 2).dump().c_str());
    return 2;
  }

  try {
    if (solve->parsed()) {
      o.command = "solve";
      return cmd_solve(o);
    }
    if (strategy->parsed()) {
      o.command = "strategy";
      return cmd_strategy(o);
    }
    if (evaluate->parsed()) {
      o.command = "evaluate";
      return cmd_evaluate(o);
    }
    if (simulate_cmd->parsed()) {
      o.command = "simulate";
      return cmd_simulate_like(o, false);
    }
    if (compare->parsed()) {
      o.command = "compare";
      return cmd_simulate_like(o, true);
    }
    if (oracle->parsed()) {
      o.command = "oracle-check";
      return cmd_oracle_check(o);
    }
    return 2;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "%s\n", error_json("config", e.what(), 2).dump().c_str());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "%s\n", error_json("config", e.what(), 2).dump().c_str());
    return 2;
  } catch (const IoError& e) {
    std::fprintf(stderr, "%s\n", error_json("io", e.what(), 4).dump().c_str());
    return 4;
  } catch (const fs::filesystem_error& e) {
    std::fprintf(stderr, "%s\n", error_json("io", e.what(), 4).dump().c_str());
    return 4;
  } catch (const NumericError& e) {
    std::fprintf(stderr, "%s\n", error_json("numeric", e.what(), 3).dump().c_str());
    return 3;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "%s\n", error_json("internal", e.what(), 1).dump().c_str());
    return 1;
  }
}
