#pragma once

// Command-line front end: solve, greens, bench, check.
// Exit codes: 0 all systems converged, 2 partial or numerical failure, 1 error.

#include <chrono>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "scocg/invariants.hpp"
#include "scocg/oracle.hpp"
#include "scocg/report.hpp"
#include "scocg/run_config.hpp"

namespace scocg::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitError = 1;
inline constexpr int kExitPartial = 2;

struct RawArgs {
  std::string matrix;
  std::size_t chain = 0;
  double onsite = 0.0;
  double hopping = -1.0;
  bool periodic = false;
  std::string grid;
  double delta = 1e-3;
  std::vector<std::string> shifts;
  std::size_t column = 0;
  std::string rhs;
  std::vector<std::size_t> rows;
  double eps1 = 1e-12;
  double eps2 = 1e-12;
  long seed = -1;
  bool no_switch = false;
  bool stagnation_switch = false;
  std::size_t max_iter = 0;
  std::string history = "all";
  unsigned threads = 1;
  std::vector<long> seeds;
  bool no_baseline = false;
  std::string out_json;
  std::string out_csv;
  std::string solutions;
  std::string config;
};

inline void add_common(CLI::App* sub, RawArgs& a, bool chain_allowed) {
  sub->add_option("--matrix", a.matrix, "Matrix Market file (complex or real symmetric)");
  if (chain_allowed) {
    sub->add_option("--chain", a.chain, "Generate a tight-binding chain of this length instead of reading a file");
    sub->add_option("--onsite", a.onsite, "Chain on-site energy")->capture_default_str();
    sub->add_option("--hopping", a.hopping, "Chain hopping")->capture_default_str();
    sub->add_flag("--periodic", a.periodic, "Close the chain into a ring");
  }
  sub->add_option("--grid", a.grid, "Shift grid start:step:count (imaginary part from --delta)");
  sub->add_option("--delta", a.delta, "Imaginary part of every grid shift")->capture_default_str();
  sub->add_option("--col", a.column, "Right-hand side e_col (0-based)")->capture_default_str();
  sub->add_option("--eps1", a.eps1, "Seed stopping tolerance")->capture_default_str();
  sub->add_option("--eps2", a.eps2, "Shifted-system stopping tolerance")->capture_default_str();
  sub->add_option("--seed", a.seed, "Initial seed index, 0-based (default: middle)");
  sub->add_flag("--no-switch", a.no_switch, "Stop when the seed converges instead of switching seeds");
  sub->add_flag("--stagnation-switch", a.stagnation_switch,
                "Also switch seeds when the seed residual stagnates (off by default)");
  sub->add_option("--max-iter", a.max_iter, "Iteration cap (default 4N)");
  sub->add_option("--history", a.history, "Residual history: all, final or none")->capture_default_str();
  sub->add_option("--threads", a.threads, "Worker threads for the per-shift updates")->capture_default_str();
  sub->add_option("--out-json", a.out_json, "Write the JSON report here");
  sub->add_option("--out-csv", a.out_csv, "Write the CSV output here");
}

inline RunConfig to_config(const std::string& command, const RawArgs& a) {
  RunConfig c;
  c.command = command;
  if (!a.matrix.empty()) c.matrix_path = a.matrix;
  if (a.chain != 0) c.chain = ChainSpec{a.chain, a.onsite, a.hopping, a.periodic};
  if (!a.grid.empty()) c.grid = parse_grid(a.grid, a.delta);
  for (const auto& s : a.shifts) c.shifts.push_back(parse_complex(s));
  c.column = a.column;
  if (!a.rhs.empty()) c.rhs_path = a.rhs;
  c.rows = a.rows;
  c.eps1 = a.eps1;
  c.eps2 = a.eps2;
  c.seed = a.seed;
  c.switching = !a.no_switch;
  c.stagnation_switch = a.stagnation_switch;
  c.max_iter = a.max_iter;
  c.history = parse_history_mode(a.history);
  c.threads = a.threads;
  c.bench_seeds = a.seeds;
  c.bench_baseline = !a.no_baseline;
  c.out_json = a.out_json;
  c.out_csv = a.out_csv;
  c.solutions_path = a.solutions;
  return c;
}

inline void print_summary(std::ostream& out, const FamilySolveReport& r) {
  out << "status: " << to_string(r.status) << '\n'
      << "converged: " << r.converged_count() << '/' << r.shifts.size() << '\n'
      << "total_mvs: " << r.total_mvs << '\n'
      << "switches: " << r.switches.size();
  if (!r.switches.empty()) {
    out << " (seeds " << r.initial_seed;
    for (const auto& e : r.switches) out << " -> " << e.new_seed << "@" << e.iteration;
    out << ')';
  }
  out << '\n';
}

// Machine-readable line on stderr for anything short of full convergence.
inline int finish(const FamilySolveReport& r, std::ostream& err) {
  if (r.all_converged()) return kExitOk;
  Json d = {{"status", to_string(r.status)}, {"unsolved", r.unsolved()}, {"seed_iterations", r.seed_iterations}};
  err << d.dump() << '\n';
  return kExitPartial;
}

inline void write_solutions(const std::string& path, const std::vector<Vector>& x) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << "shift_index,row,re,im\n";
  for (std::size_t k = 0; k < x.size(); ++k) {
    for (std::size_t i = 0; i < x[k].size(); ++i) {
      out << k << ',' << i << ',' << scocg::detail::sci(x[k][i].real()) << ',' << scocg::detail::sci(x[k][i].imag())
          << '\n';
    }
  }
}

inline Json report_json_for(const RunConfig& c, Json body) {
  body["config"] = to_json(c);
  return body;
}

inline void write_json(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  out << j.dump(1) << '\n';
}

inline int run_solve(const RunConfig& c, std::ostream& out, std::ostream& err) {
  FamilySolution sol = execute_solve(c);
  print_summary(out, sol.report);
  const bool hist = c.history != HistoryMode::None;
  if (!c.out_json.empty()) write_json(c.out_json, report_json_for(c, to_json(sol.report, hist)));
  if (!c.out_csv.empty()) write_report(sol.report, c.out_csv, ReportFormat::Csv);
  if (!c.solutions_path.empty()) write_solutions(c.solutions_path, sol.x);
  return finish(sol.report, err);
}

inline int run_greens(const RunConfig& c, std::ostream& out, std::ostream& err) {
  GreensResult g = execute_greens(c);
  print_summary(out, g.report);
  const bool hist = c.history != HistoryMode::None;
  if (!c.out_json.empty()) write_json(c.out_json, report_json_for(c, to_json(g, hist)));
  if (!c.out_csv.empty()) write_report(g, c.out_csv, ReportFormat::Csv);
  if (c.out_csv.empty() && c.out_json.empty()) write_greens_csv(g, out);
  return finish(g.report, err);
}

inline int run_bench(const RunConfig& c, std::ostream& out) {
  c.validate();
  const SparseSymmetricMatrix h = load_matrix(c);
  if (!c.grid) throw Error(ErrorCode::InvalidArgument, "bench needs an energy grid");
  std::vector<long> seeds = c.bench_seeds;
  if (seeds.empty()) seeds.push_back(static_cast<long>(c.grid->middle()));

  std::uint64_t baseline = 0;
  if (c.bench_baseline) {
    GreensProblem prob = build_shift_family(h, *c.grid, c.column, seeds.front(), c.eps1, c.eps2);
    const auto base = oracle::per_shift_cocg_baseline(prob.a, prob.family.shifts, prob.family.b,
                                                      std::min(c.eps1, c.eps2), c.max_iter, false);
    baseline = base.total_mvs;
  }

  Json rows = Json::array();
  bool all_ok = true;
  out << "initial_seed,switches,seed_sequence,converged,shift_count,total_mvs,sum_of_individual_cocg_mvs,ratio\n";
  for (long s : seeds) {
    GreensOptions o;
    o.seed = s;
    o.eps1 = c.eps1;
    o.eps2 = c.eps2;
    o.family = c.family_options();
    o.family.history = HistoryMode::None;
    o.family.snapshot_true_residuals = false;
    GreensResult g = compute_green_column(h, *c.grid, c.column, {c.column}, o);
    const auto& r = g.report;
    std::string sequence = std::to_string(r.initial_seed);
    for (const auto& e : r.switches) sequence += "|" + std::to_string(e.new_seed);
    const double ratio = baseline > 0 ? static_cast<double>(r.total_mvs) / static_cast<double>(baseline) : 0.0;
    out << s << ',' << r.switches.size() << ',' << sequence << ',' << r.converged_count() << ',' << r.shifts.size()
        << ',' << r.total_mvs << ',' << baseline << ',' << scocg::detail::sci(ratio) << '\n';
    all_ok = all_ok && r.all_converged();
    Json row = to_json(r, false);
    row.erase("shifts");
    row["sum_of_individual_cocg_mvs"] = baseline;
    row["ratio"] = ratio;
    rows.push_back(std::move(row));
  }
  if (!c.out_json.empty()) write_json(c.out_json, Json{{"config", to_json(c)}, {"runs", rows}});
  if (!c.out_csv.empty()) {
    std::ofstream f(c.out_csv);
    f << "initial_seed,switches,total_mvs,sum_of_individual_cocg_mvs,ratio\n";
    for (const auto& r : rows) {
      f << r["initial_seed"] << ',' << r["switch_count"] << ',' << r["total_mvs"] << ','
        << r["sum_of_individual_cocg_mvs"] << ',' << scocg::detail::sci(r["ratio"].get<double>()) << '\n';
    }
  }
  return all_ok ? kExitOk : kExitPartial;
}

inline Json strip_volatile(Json j) {
  j.erase("wall_time_seconds");
  j.erase("config");
  return j;
}

inline int run_check(RawArgs raw, std::ostream& out) {
  bool ok = true;
  RunConfig c;
  if (!raw.config.empty()) {
    std::ifstream in(raw.config);
    if (!in) throw Error(ErrorCode::Io, "cannot open " + raw.config);
    Json stored = Json::parse(in);
    c = run_config_from_json(stored.at("config"));
    Json fresh;
    if (c.command == "greens") {
      fresh = to_json(execute_greens(c), c.history != HistoryMode::None);
    } else if (c.command == "solve") {
      fresh = to_json(execute_solve(c).report, c.history != HistoryMode::None);
    } else {
      throw Error(ErrorCode::InvalidArgument, "check --config needs a solve or greens report");
    }
    const bool same = strip_volatile(stored) == strip_volatile(fresh);
    out << (same ? "PASS" : "FAIL") << " reproduce_from_config\n";
    ok = ok && same;
  } else {
    c = to_config("check", raw);
  }
  // Hamiltonians (greens runs, generated chains) are checked as A = -H.
  const bool hamiltonian = c.command == "greens" || (c.command == "check" && c.chain.has_value());
  c.command = "check";
  c.validate();

  const SparseSymmetricMatrix loaded = load_matrix(c);
  ShiftFamily fam;
  fam.shifts = c.shift_list();
  fam.seed = c.seed < 0 ? c.default_seed() : static_cast<std::size_t>(c.seed);
  fam.eps1 = c.eps1;
  fam.eps2 = c.eps2;
  const SparseSymmetricMatrix a = hamiltonian ? loaded.scaled(Complex(-1.0, 0.0)) : loaded;
  fam.b = load_rhs(c, a.dim());

  for (const CheckResult& r : run_invariant_checks(a, fam)) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.3e (tol %.1e)", r.worst, r.tolerance);
    out << (r.pass ? "PASS " : "FAIL ") << r.name << ' ' << buf << "  " << r.detail << '\n';
    ok = ok && r.pass;
  }
  return ok ? kExitOk : kExitPartial;
}

inline int cli_main(int argc, char** argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"Shifted COCG with seed switching for complex symmetric shifted systems"};
  app.require_subcommand(1);
  RawArgs a;

  auto* solve = app.add_subcommand("solve", "Solve (A + sigma_k I) x = b for a matrix file and a shift list");
  add_common(solve, a, false);
  solve->add_option("--shift", a.shifts, "Shift 're' or 're,im' (repeatable; alternative to --grid)");
  solve->add_option("--rhs", a.rhs, "Right-hand side file, one 're [im]' per line (default e_col)");
  solve->add_option("--solutions", a.solutions, "Write every solution vector as CSV");

  auto* greens = app.add_subcommand("greens", "Green's function column G_ij(z_k) = e_i^T (z_k I - H)^-1 e_j");
  add_common(greens, a, true);
  greens->add_option("--rows", a.rows, "Rows i to extract (default: the column itself)")->delimiter(',');

  auto* bench = app.add_subcommand("bench", "Shifted COCG vs independent COCG per shift on a generated chain");
  add_common(bench, a, true);
  bench->add_option("--seeds", a.seeds, "Initial seeds to compare, 0-based")->delimiter(',');
  bench->add_flag("--no-baseline", a.no_baseline, "Skip the per-shift COCG baseline");

  auto* check = app.add_subcommand("check", "Run the invariant suite on a matrix, or re-run a report's config");
  add_common(check, a, true);
  check->add_option("--shift", a.shifts, "Shift 're' or 're,im' (repeatable)");
  check->add_option("--rhs", a.rhs, "Right-hand side file");
  check->add_option("--config", a.config, "JSON report whose embedded config is re-run and compared");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitError;
  }

  try {
    if (*solve) return run_solve(to_config("solve", a), out, err);
    if (*greens) return run_greens(to_config("greens", a), out, err);
    if (*bench) {
      RunConfig c = to_config("bench", a);
      if (!c.matrix_path && !c.chain) c.chain = ChainSpec{};
      if (!c.grid) c.grid = parse_grid("0.4:0.001:1001", a.delta);
      return run_bench(c, out);
    }
    if (*check) return run_check(a, out);
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    if (e.code() == ErrorCode::PiVanished || e.code() == ErrorCode::Singular) return kExitPartial;
    return kExitError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

}  // namespace scocg::cli
