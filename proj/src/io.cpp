#include "vecgame/io.hpp"

#include <fstream>
#include <sstream>

namespace vecgame {

namespace {

Json mat_to_json_cols(const Mat& m) {
  Json out = Json::array();
  for (int j = 0; j < m.cols(); ++j) {
    Json col = Json::array();
    for (int i = 0; i < m.rows(); ++i) col.push_back(m(i, j));
    out.push_back(std::move(col));
  }
  return out;
}

Mat mat_from_json_cols(const Json& j, int rows) {
  Mat m(rows, static_cast<int>(j.size()));
  int c = 0;
  for (const auto& col : j) {
    if (static_cast<int>(col.size()) != rows) throw IoError("matrix column has wrong length");
    for (int i = 0; i < rows; ++i) m(i, c) = col[i].get<double>();
    ++c;
  }
  return m;
}

Json vec_to_json(const Vec& v) {
  Json out = Json::array();
  for (int i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

Vec vec_from_json(const Json& j) {
  Vec v(static_cast<int>(j.size()));
  int i = 0;
  for (const auto& x : j) v[i++] = x.get<double>();
  return v;
}

}  // namespace

Json frontier_to_json(const Frontier& f, double beta) {
  Json j;
  j["k"] = f.dim();
  j["beta"] = beta;
  j["vertices"] = mat_to_json_cols(f.vertices);
  j["params"] = f.has_params() ? mat_to_json_cols(f.params) : Json::array();
  return j;
}

Frontier frontier_from_json(const Json& j) {
  const int k = j.at("k").get<int>();
  Frontier f;
  f.vertices = mat_from_json_cols(j.at("vertices"), k);
  if (f.vertices.cols() == 0) throw IoError("frontier needs at least one vertex");
  if (!f.vertices.allFinite()) throw IoError("frontier vertices must be finite");
  if (j.contains("params") && !j["params"].empty())
    f.params = mat_from_json_cols(j["params"], k);
  return f;
}

Json game_to_json(const VectorGame& g) {
  Json losses = Json::array();
  for (int a = 0; a < g.m; ++a) {
    Json row = Json::array();
    for (int b = 0; b < g.n; ++b) row.push_back(vec_to_json(g.loss(a, b)));
    losses.push_back(std::move(row));
  }
  return Json{{"m", g.m}, {"n", g.n}, {"k", g.k}, {"beta", g.beta}, {"losses", losses}};
}

VectorGame game_from_json(const Json& j) {
  VectorGame g;
  g.m = j.at("m").get<int>();
  g.n = j.at("n").get<int>();
  g.k = j.at("k").get<int>();
  g.beta = j.at("beta").get<double>();
  if (g.m < 1 || g.n < 1 || g.k < 1) throw IoError("game dimensions must be positive");
  if (g.beta < 0.0 || g.beta >= 1.0) throw IoError("beta must be in [0,1)");
  g.losses.resize(g.k, g.m * g.n);
  const auto& losses = j.at("losses");
  if (static_cast<int>(losses.size()) != g.m) throw IoError("losses must have m rows");
  for (int a = 0; a < g.m; ++a) {
    if (static_cast<int>(losses[a].size()) != g.n) throw IoError("losses row has wrong length");
    for (int b = 0; b < g.n; ++b) {
      const Vec r = vec_from_json(losses[a][b]);
      if (r.size() != g.k) throw IoError("loss vector has wrong dimension");
      if (!r.allFinite()) throw IoError("loss entries must be finite");
      g.losses.col(a * g.n + b) = r;
    }
  }
  return g;
}

Json scalar_game_to_json(const ScalarGame& g, double beta) {
  Json losses = Json::array();
  for (int a = 0; a < g.m; ++a) {
    Json row = Json::array();
    for (int b = 0; b < g.n; ++b) row.push_back(g.losses(a, b));
    losses.push_back(std::move(row));
  }
  return Json{{"m", g.m}, {"n", g.n}, {"beta", beta}, {"losses", losses}};
}

std::pair<ScalarGame, double> scalar_game_from_json(const Json& j) {
  ScalarGame g;
  const auto& losses = j.at("losses");
  g.m = static_cast<int>(losses.size());
  if (g.m < 1) throw IoError("scalar game needs at least one row");
  g.n = static_cast<int>(losses[0].size());
  g.losses.resize(g.m, g.n);
  for (int a = 0; a < g.m; ++a) {
    if (static_cast<int>(losses[a].size()) != g.n) throw IoError("ragged loss matrix");
    for (int b = 0; b < g.n; ++b) g.losses(a, b) = losses[a][b].get<double>();
  }
  if (!g.losses.allFinite()) throw IoError("loss entries must be finite");
  const double beta = j.at("beta").get<double>();
  if (beta < 0.0 || beta >= 1.0) throw IoError("beta must be in [0,1)");
  return {std::move(g), beta};
}

Json normalization_to_json(const NormalizationRecord& rec) {
  return Json{{"scale", rec.scale}, {"shifts", vec_to_json(rec.shifts)}};
}

NormalizationRecord normalization_from_json(const Json& j) {
  NormalizationRecord rec;
  rec.scale = j.at("scale").get<double>();
  rec.shifts = vec_from_json(j.at("shifts"));
  if (rec.scale <= 0.0) throw IoError("normalization scale must be positive");
  return rec;
}

Json solve_result_to_json(const SolveResult& res) {
  Json modes = Json::array();
  for (const auto& mode : res.modes) {
    modes.push_back(Json{{"alpha", vec_to_json(mode.alpha)},
                         {"q", mat_to_json_cols(mode.q)},
                         {"t", mode.t}});
  }
  return Json{{"version", kVersion},
              {"game", game_to_json(res.game)},
              {"normalization", normalization_to_json(res.record)},
              {"grid", Json{{"k", res.grid.k}, {"n", res.grid.n},
                            {"count", res.grid.count()},
                            {"nominal_size", res.grid.nominal_size}}},
              {"iterations", res.iterations},
              {"deltas", res.deltas},
              {"frontier", frontier_to_json(res.frontier, res.game.beta)},
              {"prev_frontier", frontier_to_json(res.prev_frontier, res.game.beta)},
              {"modes", modes},
              {"bounds", Json{{"e_upper", res.bounds.e_upper},
                              {"d_upper", res.bounds.d_upper},
                              {"strategy_d_upper", res.bounds.strategy_d_upper}}}};
}

SolveResult solve_result_from_json(const Json& j) {
  SolveResult res;
  res.game = game_from_json(j.at("game"));
  res.record = normalization_from_json(j.at("normalization"));
  res.grid = param_grid(j.at("grid").at("k").get<int>(), j.at("grid").at("n").get<int>());
  if (res.grid.count() != j.at("grid").at("count").get<int>())
    throw IoError("grid count mismatch, file does not match this build");
  res.iterations = j.at("iterations").get<int>();
  res.deltas = j.at("deltas").get<std::vector<double>>();
  res.frontier = frontier_from_json(j.at("frontier"));
  res.prev_frontier = frontier_from_json(j.at("prev_frontier"));
  for (const auto& mode : j.at("modes")) {
    ModeSolution ms;
    ms.alpha = vec_from_json(mode.at("alpha"));
    ms.q = mat_from_json_cols(mode.at("q"), res.game.k);
    ms.t = mode.at("t").get<double>();
    res.modes.push_back(std::move(ms));
  }
  if (static_cast<int>(res.modes.size()) != res.grid.count())
    throw IoError("per-direction solutions do not match the grid");
  res.bounds.e_upper = j.at("bounds").at("e_upper").get<double>();
  res.bounds.d_upper = j.at("bounds").at("d_upper").get<double>();
  res.bounds.strategy_d_upper = j.at("bounds").at("strategy_d_upper").get<double>();
  return res;
}

Json strategy_to_json(const ModeStrategy& s) {
  Json modes = Json::array();
  for (int i = 0; i < s.mode_count(); ++i) {
    Json per_b = Json::array();
    for (int b = 0; b < s.n; ++b) {
      Json list = Json::array();
      for (const auto& tr : s.transitions[i][b]) list.push_back(Json::array({tr.mode, tr.weight}));
      per_b.push_back(std::move(list));
    }
    modes.push_back(Json{{"p", vec_to_json(s.grid.points.col(i))},
                         {"alpha", vec_to_json(s.alpha.col(i))},
                         {"transitions", per_b},
                         {"guarantee", vec_to_json(s.guarantee.col(i))}});
  }
  return Json{{"version", kVersion},
              {"k", s.k},
              {"m", s.m},
              {"n", s.n},
              {"beta", s.beta},
              {"grid_n", s.grid.n},
              {"modes", modes},
              {"normalization", normalization_to_json(s.record)}};
}

ModeStrategy strategy_from_json(const Json& j) {
  ModeStrategy s;
  s.k = j.at("k").get<int>();
  s.m = j.at("m").get<int>();
  s.n = j.at("n").get<int>();
  s.beta = j.at("beta").get<double>();
  s.grid = param_grid(s.k, j.at("grid_n").get<int>());
  s.record = normalization_from_json(j.at("normalization"));
  const auto& modes = j.at("modes");
  if (static_cast<int>(modes.size()) != s.grid.count())
    throw IoError("strategy mode count does not match its grid");
  s.alpha.resize(s.m, s.grid.count());
  s.guarantee.resize(s.k, s.grid.count());
  s.transitions.assign(s.grid.count(), {});
  int i = 0;
  for (const auto& mode : modes) {
    s.alpha.col(i) = vec_from_json(mode.at("alpha"));
    s.guarantee.col(i) = vec_from_json(mode.at("guarantee"));
    auto& per_b = s.transitions[i];
    for (const auto& list : mode.at("transitions")) {
      std::vector<Transition> trs;
      for (const auto& tr : list) {
        const int target = tr[0].get<int>();
        if (target < 0 || target >= s.grid.count()) throw IoError("transition mode out of range");
        trs.push_back({target, tr[1].get<double>()});
      }
      if (trs.empty()) throw IoError("empty transition list");
      per_b.push_back(std::move(trs));
    }
    if (static_cast<int>(per_b.size()) != s.n) throw IoError("transition lists do not cover B");
    ++i;
  }
  return s;
}

Json run_stats_to_json(const RunStats& stats) {
  return Json{{"runs", stats.runs},
              {"horizon", stats.horizon},
              {"mean", stats.mean},
              {"std_error", stats.std_error},
              {"ci_half_width", stats.ci_half_width},
              {"per_run", stats.per_run}};
}

namespace {

void append_csv_number(std::ostringstream& out, double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  out << buf;
}

}  // namespace

std::string frontier_csv(const Frontier& f, const NormalizationRecord& rec, double beta) {
  std::ostringstream out;
  const int k = f.dim();
  out << "vertex";
  for (int r = 0; r < k; ++r) out << ",p" << r + 1;
  for (int r = 0; r < k; ++r) out << ",norm" << r + 1;
  for (int r = 0; r < k; ++r) out << ",raw" << r + 1;
  out << "\n";
  for (int j = 0; j < f.count(); ++j) {
    out << j;
    for (int r = 0; r < k; ++r) {
      out << ",";
      append_csv_number(out, f.has_params() ? f.params(r, j) : 0.0);
    }
    for (int r = 0; r < k; ++r) {
      out << ",";
      append_csv_number(out, f.vertices(r, j));
    }
    const Vec raw = denormalize_vector(f.vertices.col(j), rec, beta);
    for (int r = 0; r < k; ++r) {
      out << ",";
      append_csv_number(out, raw[r]);
    }
    out << "\n";
  }
  return out.str();
}

std::string sim_rows_csv(const std::vector<SimRow>& rows) {
  std::ostringstream out;
  out << "forecaster,adversary,beta,seed,runs,horizon,mean,std_error,ci_half_width\n";
  for (const auto& row : rows) {
    out << row.forecaster << "," << row.adversary << ",";
    append_csv_number(out, row.beta);
    out << "," << row.seed << "," << row.stats.runs << "," << row.stats.horizon << ",";
    append_csv_number(out, row.stats.mean);
    out << ",";
    append_csv_number(out, row.stats.std_error);
    out << ",";
    append_csv_number(out, row.stats.ci_half_width);
    out << "\n";
  }
  return out.str();
}

Json sim_rows_to_json(const std::vector<SimRow>& rows) {
  Json out = Json::array();
  for (const auto& row : rows) {
    Json j = run_stats_to_json(row.stats);
    j["forecaster"] = row.forecaster;
    j["adversary"] = row.adversary;
    j["beta"] = row.beta;
    j["seed"] = row.seed;
    out.push_back(std::move(j));
  }
  return out;
}

std::string evaluation_csv(const ModeStrategy& s, const Mat& guarantees) {
  std::ostringstream out;
  out << "mode";
  for (int r = 0; r < s.k; ++r) out << ",p" << r + 1;
  for (int r = 0; r < s.k; ++r) out << ",norm" << r + 1;
  for (int r = 0; r < s.k; ++r) out << ",raw" << r + 1;
  out << "\n";
  for (int i = 0; i < s.mode_count(); ++i) {
    out << i;
    for (int r = 0; r < s.k; ++r) {
      out << ",";
      append_csv_number(out, s.grid.points(r, i));
    }
    for (int r = 0; r < s.k; ++r) {
      out << ",";
      append_csv_number(out, guarantees(r, i));
    }
    const Vec raw = denormalize_vector(guarantees.col(i), s.record, s.beta);
    for (int r = 0; r < s.k; ++r) {
      out << ",";
      append_csv_number(out, raw[r]);
    }
    out << "\n";
  }
  return out.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << content;
  if (!out) throw IoError("failed writing '" + path + "'");
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::string& path) {
  try {
    return Json::parse(read_text_file(path));
  } catch (const Json::parse_error& e) {
    throw IoError("invalid JSON in '" + path + "': " + e.what());
  }
}

void write_json_file(const std::string& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

}  // namespace vecgame
