#pragma once

/// \file report.hpp
/// \brief JSON and CSV serialization of solve reports and Green's-function
/// results. The JSON layout is documented in docs/report_schema.md.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>
#include <string>

#include "json.hpp"
#include "scocg/greens.hpp"
#include "scocg/solve_family.hpp"

namespace scocg {

using Json = nlohmann::json;

inline constexpr const char* kReportSchema = "scocg-report/1";

namespace detail {

// Scientific notation, 17 significant digits.
inline std::string sci(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

inline Json finite_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace detail

inline Json to_json(const SwitchEvent& e) {
  Json j = {{"iteration", e.iteration},           {"old_seed", e.old_seed},
            {"new_seed", e.new_seed},             {"unsolved_before", e.unsolved_before},
            {"unsolved_after", e.unsolved_after}, {"trigger", to_string(e.trigger)}};
  if (!e.true_residuals.empty()) {
    Json t = Json::array();
    for (double v : e.true_residuals) t.push_back(detail::finite_or_null(v));
    j["true_residuals"] = std::move(t);
  }
  return j;
}

inline Json to_json(const FamilySolveReport& r, bool include_history = true) {
  Json shifts = Json::array();
  for (std::size_t i = 0; i < r.shifts.size(); ++i) {
    const ShiftReport& s = r.shifts[i];
    Json js = {{"index", i},
               {"shift", {s.shift.real(), s.shift.imag()}},
               {"status", to_string(s.status)},
               {"iterations", s.iterations},
               {"recursive_residual", detail::finite_or_null(s.recursive_residual)},
               {"true_residual", detail::finite_or_null(s.true_residual)}};
    if (include_history && !s.history.empty()) {
      Json h = Json::array();
      for (double v : s.history) h.push_back(detail::finite_or_null(v));
      js["history"] = std::move(h);
    }
    shifts.push_back(std::move(js));
  }
  Json switches = Json::array();
  for (const SwitchEvent& e : r.switches) switches.push_back(to_json(e));
  return Json{{"schema", kReportSchema},
              {"status", to_string(r.status)},
              {"total_mvs", r.total_mvs},
              {"verification_mvs", r.verification_mvs},
              {"seed_iterations", r.seed_iterations},
              {"initial_seed", r.initial_seed},
              {"final_seed", r.final_seed},
              {"switch_count", r.switches.size()},
              {"stagnation_switch_used", r.stagnation_switch_used},
              {"converged_count", r.converged_count()},
              {"shift_count", r.shifts.size()},
              {"b_norm", r.b_norm},
              {"eps1", r.eps1},
              {"eps2", r.eps2},
              {"switches", std::move(switches)},
              {"shifts", std::move(shifts)},
              {"wall_time_seconds", r.wall_time_seconds}};
}

inline Json to_json(const GreensResult& g, bool include_history = true) {
  Json j = to_json(g.report, include_history);
  Json values = Json::array();
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    const Complex z = g.grid.z(k);
    for (std::size_t r = 0; r < g.rows.size(); ++r) {
      values.push_back({{"k", k},
                        {"z", {z.real(), z.imag()}},
                        {"row", g.rows[r]},
                        {"g", {g.values[k][r].real(), g.values[k][r].imag()}}});
    }
  }
  j["greens"] = {{"column", g.column},
                 {"rows", g.rows},
                 {"grid", {{"start", g.grid.start}, {"step", g.grid.step}, {"count", g.grid.count}, {"delta", g.grid.delta}}},
                 {"values", std::move(values)}};
  return j;
}

/// One row per (shift, iteration). true_residual is filled on each shift's
/// final row and at iterations where a switch snapshot was taken.
inline void write_residual_csv(const FamilySolveReport& r, std::ostream& out) {
  out << "shift_index,shift_re,shift_im,iteration,recursive_residual,true_residual\n";
  for (std::size_t i = 0; i < r.shifts.size(); ++i) {
    const ShiftReport& s = r.shifts[i];
    const std::size_t count = s.history.size();
    for (std::size_t k = 0; k < count; ++k) {
      const std::size_t iteration = count == 1 ? s.iterations : k;
      std::string truth;
      if (k + 1 == count) {
        truth = detail::sci(s.true_residual);
      } else {
        for (const SwitchEvent& e : r.switches) {
          if (e.iteration == iteration && e.true_residuals.size() == r.shifts.size()) {
            truth = detail::sci(e.true_residuals[i]);
          }
        }
      }
      out << i << ',' << detail::sci(s.shift.real()) << ',' << detail::sci(s.shift.imag()) << ',' << iteration << ','
          << detail::sci(s.history[k]) << ',' << truth << '\n';
    }
  }
}

/// k,z_re,z_im,row,column,g_re,g_im,status
inline void write_greens_csv(const GreensResult& g, std::ostream& out) {
  out << "k,z_re,z_im,row,column,g_re,g_im,status\n";
  for (std::size_t k = 0; k < g.values.size(); ++k) {
    const Complex z = g.grid.z(k);
    const char* status = k < g.report.shifts.size() ? to_string(g.report.shifts[k].status) : "unknown";
    for (std::size_t r = 0; r < g.rows.size(); ++r) {
      out << k << ',' << detail::sci(z.real()) << ',' << detail::sci(z.imag()) << ',' << g.rows[r] << ',' << g.column
          << ',' << detail::sci(g.values[k][r].real()) << ',' << detail::sci(g.values[k][r].imag()) << ',' << status
          << '\n';
    }
  }
}

enum class ReportFormat { Csv, Json };

/// Writes `report` to `path`; JSON output embeds `config` verbatim.
inline void write_report(const FamilySolveReport& report, const std::string& path, ReportFormat format,
                         const Json& config = Json::object(), bool include_history = true) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  if (format == ReportFormat::Csv) {
    write_residual_csv(report, out);
  } else {
    Json j = to_json(report, include_history);
    j["config"] = config;
    out << j.dump(1) << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

inline void write_report(const GreensResult& result, const std::string& path, ReportFormat format,
                         const Json& config = Json::object(), bool include_history = true) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot write " + path);
  if (format == ReportFormat::Csv) {
    write_greens_csv(result, out);
  } else {
    Json j = to_json(result, include_history);
    j["config"] = config;
    out << j.dump(1) << '\n';
  }
  if (!out) throw Error(ErrorCode::Io, "write failed for " + path);
}

}  // namespace scocg
