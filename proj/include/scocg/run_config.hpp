#pragma once

/// \file run_config.hpp
/// \brief Everything that determines a run, validated up front and echoed
/// verbatim into every JSON output so a report can be regenerated from it.

#include <cstddef>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "scocg/greens.hpp"
#include "scocg/matrix_market.hpp"
#include "scocg/solve_family.hpp"

namespace scocg {

struct ChainSpec {
  std::size_t n = 2048;
  double onsite = 0.0;
  double hopping = -1.0;
  bool periodic = false;
};

struct RunConfig {
  std::string command = "solve";  // solve | greens | bench | check
  std::optional<std::string> matrix_path;
  std::optional<ChainSpec> chain;
  std::optional<EnergyGrid> grid;
  std::vector<Complex> shifts;  // explicit list, used when grid is absent
  std::size_t column = 0;       // right-hand side e_column
  std::optional<std::string> rhs_path;
  std::vector<std::size_t> rows;
  double eps1 = 1e-12;
  double eps2 = 1e-12;
  long seed = -1;  // -1: middle of the shift list
  bool switching = true;
  bool stagnation_switch = false;
  std::size_t max_iter = 0;
  HistoryMode history = HistoryMode::All;
  unsigned threads = 1;
  std::vector<long> bench_seeds;
  bool bench_baseline = true;
  std::string out_json;
  std::string out_csv;
  std::string solutions_path;

  std::vector<Complex> shift_list() const { return grid ? grid->points() : shifts; }

  std::size_t default_seed() const {
    const std::size_t m = grid ? grid->count : shifts.size();
    return m == 0 ? 0 : (m + 1) / 2 - 1;
  }

  void validate() const {
    auto bad = [](const std::string& what) { throw Error(ErrorCode::InvalidArgument, what); };
    if (command != "solve" && command != "greens" && command != "bench" && command != "check") {
      bad("unknown command '" + command + "'");
    }
    if (matrix_path.has_value() == chain.has_value()) bad("give exactly one of a matrix file or a chain generator");
    if (chain && chain->n < 2) bad("chain length must be at least 2");
    if (grid) {
      grid->validate();
      if (!shifts.empty()) bad("give either a grid or an explicit shift list, not both");
    } else if (shifts.empty()) {
      bad("no shifts: give a grid or at least one shift");
    }
    if (!(eps1 > 0.0) || !(eps2 > 0.0)) bad("eps1 and eps2 must be positive");
    const std::size_t m = grid ? grid->count : shifts.size();
    if (seed >= 0 && static_cast<std::size_t>(seed) >= m) bad("initial seed outside the shift list");
    for (long s : bench_seeds) {
      if (s < 0 || static_cast<std::size_t>(s) >= m) bad("bench seed outside the shift list");
    }
    if (command == "greens" && rhs_path) bad("greens always uses a unit right-hand side");
    if (threads == 0) bad("threads must be at least 1");
  }

  FamilyOptions family_options() const {
    FamilyOptions o;
    o.switching = switching;
    o.stagnation_switch = stagnation_switch;
    o.max_iter = max_iter;
    o.history = history;
    o.threads = threads;
    o.snapshot_true_residuals = history == HistoryMode::All;
    return o;
  }
};

inline HistoryMode parse_history_mode(const std::string& s) {
  if (s == "all") return HistoryMode::All;
  if (s == "final") return HistoryMode::Final;
  if (s == "none") return HistoryMode::None;
  throw Error(ErrorCode::InvalidArgument, "history mode '" + s + "' (expected all, final or none)");
}

/// "start:step:count"
inline EnergyGrid parse_grid(const std::string& spec, double delta) {
  std::istringstream ss(spec);
  EnergyGrid g;
  char c1 = 0, c2 = 0;
  long long count = 0;
  if (!(ss >> g.start >> c1 >> g.step >> c2 >> count) || c1 != ':' || c2 != ':' || count < 1 || !ss.eof()) {
    throw Error(ErrorCode::InvalidArgument, "grid '" + spec + "' (expected start:step:count)");
  }
  g.count = static_cast<std::size_t>(count);
  g.delta = delta;
  return g;
}

/// "re" or "re,im"
inline Complex parse_complex(const std::string& spec) {
  std::istringstream ss(spec);
  double re = 0.0, im = 0.0;
  char comma = 0;
  if (!(ss >> re)) throw Error(ErrorCode::InvalidArgument, "shift '" + spec + "'");
  if (ss >> comma) {
    if (comma != ',' || !(ss >> im)) throw Error(ErrorCode::InvalidArgument, "shift '" + spec + "'");
  }
  return {re, im};
}

inline nlohmann::json to_json(const RunConfig& c) {
  nlohmann::json j;
  j["command"] = c.command;
  if (c.matrix_path) j["matrix"] = {{"path", *c.matrix_path}};
  if (c.chain) {
    j["matrix"] = {{"chain", {{"n", c.chain->n}, {"onsite", c.chain->onsite}, {"hopping", c.chain->hopping},
                              {"periodic", c.chain->periodic}}}};
  }
  if (c.grid) {
    j["grid"] = {{"start", c.grid->start}, {"step", c.grid->step}, {"count", c.grid->count}, {"delta", c.grid->delta}};
  } else {
    nlohmann::json s = nlohmann::json::array();
    for (const Complex& z : c.shifts) s.push_back({z.real(), z.imag()});
    j["shifts"] = std::move(s);
  }
  j["column"] = c.column;
  j["rhs_path"] = c.rhs_path ? nlohmann::json(*c.rhs_path) : nlohmann::json(nullptr);
  j["rows"] = c.rows;
  j["eps1"] = c.eps1;
  j["eps2"] = c.eps2;
  j["seed"] = c.seed;
  j["switching"] = c.switching;
  j["stagnation_switch"] = c.stagnation_switch;
  j["max_iter"] = c.max_iter;
  j["history"] = to_string(c.history);
  j["threads"] = c.threads;
  j["bench_seeds"] = c.bench_seeds;
  j["bench_baseline"] = c.bench_baseline;
  j["outputs"] = {{"json", c.out_json}, {"csv", c.out_csv}, {"solutions", c.solutions_path}};
  return j;
}

inline RunConfig run_config_from_json(const nlohmann::json& j) {
  RunConfig c;
  c.command = j.at("command").get<std::string>();
  const auto& m = j.at("matrix");
  if (m.contains("path")) c.matrix_path = m.at("path").get<std::string>();
  if (m.contains("chain")) {
    const auto& ch = m.at("chain");
    c.chain = ChainSpec{ch.at("n").get<std::size_t>(), ch.at("onsite").get<double>(), ch.at("hopping").get<double>(),
                        ch.at("periodic").get<bool>()};
  }
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    c.grid = EnergyGrid{g.at("start").get<double>(), g.at("step").get<double>(), g.at("count").get<std::size_t>(),
                        g.at("delta").get<double>()};
  }
  if (j.contains("shifts")) {
    for (const auto& z : j.at("shifts")) c.shifts.emplace_back(z.at(0).get<double>(), z.at(1).get<double>());
  }
  c.column = j.value("column", std::size_t{0});
  if (j.contains("rhs_path") && !j.at("rhs_path").is_null()) c.rhs_path = j.at("rhs_path").get<std::string>();
  c.rows = j.value("rows", std::vector<std::size_t>{});
  c.eps1 = j.value("eps1", 1e-12);
  c.eps2 = j.value("eps2", 1e-12);
  c.seed = j.value("seed", -1L);
  c.switching = j.value("switching", true);
  c.stagnation_switch = j.value("stagnation_switch", false);
  c.max_iter = j.value("max_iter", std::size_t{0});
  c.history = parse_history_mode(j.value("history", std::string("all")));
  c.threads = j.value("threads", 1U);
  c.bench_seeds = j.value("bench_seeds", std::vector<long>{});
  c.bench_baseline = j.value("bench_baseline", true);
  if (j.contains("outputs")) {
    const auto& o = j.at("outputs");
    c.out_json = o.value("json", std::string());
    c.out_csv = o.value("csv", std::string());
    c.solutions_path = o.value("solutions", std::string());
  }
  return c;
}

/// Matrix from file or generator, as configured.
inline SparseSymmetricMatrix load_matrix(const RunConfig& c) {
  if (c.matrix_path) return read_matrix_market(*c.matrix_path);
  return make_tight_binding_chain(c.chain->n, c.chain->onsite, c.chain->hopping, c.chain->periodic);
}

/// Right-hand side: e_column, or whitespace-separated "re [im]" lines from rhs_path.
inline Vector load_rhs(const RunConfig& c, std::size_t dim) {
  if (!c.rhs_path) return unit_vector(dim, c.column);
  std::ifstream in(*c.rhs_path);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + *c.rhs_path);
  Vector b;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '%' || line[0] == '#') continue;
    std::istringstream ss(line);
    double re = 0.0, im = 0.0;
    if (!(ss >> re)) throw Error(ErrorCode::MalformedEntry, "right-hand side line '" + line + "'");
    ss >> im;
    b.emplace_back(re, im);
  }
  if (b.size() != dim) {
    throw Error(ErrorCode::DimensionMismatch,
                "right-hand side has " + std::to_string(b.size()) + " entries, matrix is " + std::to_string(dim));
  }
  return b;
}

/// `solve`: the matrix is A itself and the family is (A + sigma_k I) x = b.
inline FamilySolution execute_solve(const RunConfig& c) {
  c.validate();
  const SparseSymmetricMatrix a = load_matrix(c);
  ShiftFamily fam;
  fam.shifts = c.shift_list();
  fam.b = load_rhs(c, a.dim());
  fam.seed = c.seed < 0 ? c.default_seed() : static_cast<std::size_t>(c.seed);
  fam.eps1 = c.eps1;
  fam.eps2 = c.eps2;
  return solve_family(a, fam, c.family_options());
}

/// `greens`: the matrix is H and the family is (z_k I - H) x = e_column.
inline GreensResult execute_greens(const RunConfig& c) {
  c.validate();
  const SparseSymmetricMatrix h = load_matrix(c);
  if (!c.grid) throw Error(ErrorCode::InvalidArgument, "greens needs an energy grid");
  GreensOptions o;
  o.seed = c.seed;
  o.eps1 = c.eps1;
  o.eps2 = c.eps2;
  o.family = c.family_options();
  return compute_green_column(h, *c.grid, c.column, c.rows, o);
}

}  // namespace scocg
