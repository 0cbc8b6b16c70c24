#pragma once

#include "vecgame/baselines.hpp"
#include "vecgame/solver.hpp"
#include "vecgame/strategy.hpp"

#include <json.hpp>

#include <string>

namespace vecgame {

using Json = nlohmann::json;

// Frontier: {"k":..., "beta":..., "vertices":[[...]], "params":[[...]]}
Json frontier_to_json(const Frontier& f, double beta);
Frontier frontier_from_json(const Json& j);

// Vector game: {"m":..., "n":..., "k":..., "beta":..., "losses": r[a][b][k]}
Json game_to_json(const VectorGame& g);
VectorGame game_from_json(const Json& j);

// Scalar game: {"m":..., "n":..., "beta":..., "losses": l[a][b]}
Json scalar_game_to_json(const ScalarGame& g, double beta);
std::pair<ScalarGame, double> scalar_game_from_json(const Json& j);

Json normalization_to_json(const NormalizationRecord& rec);
NormalizationRecord normalization_from_json(const Json& j);

Json solve_result_to_json(const SolveResult& res);
SolveResult solve_result_from_json(const Json& j);

// Strategy: {"k","beta","grid_n","modes":[{"p","alpha","transitions","guarantee"}],
//            "normalization":{...}}; mode order equals grid order.
Json strategy_to_json(const ModeStrategy& s);
ModeStrategy strategy_from_json(const Json& j);

Json run_stats_to_json(const RunStats& stats);

/// One vertex per row: index, direction, normalized and raw coordinates.
std::string frontier_csv(const Frontier& f, const NormalizationRecord& rec, double beta);

/// One row per (forecaster, adversary) cell.
struct SimRow {
  std::string forecaster;
  std::string adversary;
  double beta = 0.0;
  std::uint64_t seed = 0;
  RunStats stats;
};
std::string sim_rows_csv(const std::vector<SimRow>& rows);
Json sim_rows_to_json(const std::vector<SimRow>& rows);

/// Per-mode evaluated guarantees: mode, direction, normalized and raw values.
std::string evaluation_csv(const ModeStrategy& s, const Mat& guarantees);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);
Json read_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace vecgame
