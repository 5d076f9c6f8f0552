#include <cstdio>
#include <json.hpp>
#include <ostream>

#include "roughlab/lab.hpp"

namespace roughlab::lab {
namespace {

using nlohmann::json;

json fit_json(const RateFit& fit) {
  json points = json::array();
  for (const auto& p : fit.points) points.push_back({{"scale", p.scale}, {"error", p.error}});
  json j = {{"points", points}, {"used", fit.used}, {"degenerate", fit.degenerate}};
  if (!fit.degenerate) {
    j["slope"] = fit.slope;
    j["intercept"] = fit.intercept;
    j["r2"] = fit.r2;
  }
  return j;
}

std::string slope_cell(const RateFit& fit) { return fit.degenerate ? "degenerate" : format_number(fit.slope); }

json window_json(const WindowRecord& w) {
  return {{"window_start", w.start}, {"window_end", w.end},   {"iters", w.iterations},
          {"ratio", w.ratio},        {"residual", w.residual}, {"accepted", w.accepted},
          {"reason", w.reason},      {"gaps", w.gaps},         {"ball_radius", w.ball_radius},
          {"center_distance", w.center_distance}, {"ball_exceeded", w.ball_exceeded}};
}

json row_json(const StabilityRow& r) {
  return {{"factor", r.factor}, {"x_dist", r.x_dist},   {"z_dist", r.z_dist},
          {"y_dist", r.y_dist}, {"y0_gap", r.y0_gap},   {"z0_gap", r.z0_gap},
          {"terminal_gap", r.terminal_gap}};
}

void stability_line(std::ostream& out, const std::string& trial, const StabilityRow& r) {
  out << trial << ',' << r.factor << ',' << format_number(r.x_dist) << ',' << format_number(r.z_dist) << ','
      << format_number(r.y_dist) << ',' << format_number(r.y0_gap) << ',' << format_number(r.z0_gap) << ','
      << format_number(r.terminal_gap) << '\n';
}

}  // namespace

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_rates_csv(std::ostream& out, const RatesResult& r) {
  out << "trial,level,mesh,error\n";
  for (const auto& t : r.trials) {
    for (std::size_t k = 0; k < t.mesh.points.size(); ++k) {
      const auto& p = t.mesh.points[k];
      out << t.trial << ',' << t.mesh_factors[k] << ',' << format_number(p.scale) << ',' << format_number(p.error)
          << '\n';
    }
    for (std::size_t k = 0; k < t.local.points.size(); ++k) {
      const auto& p = t.local.points[k];
      out << t.trial << ",local_" << t.local_cells[k] << ',' << format_number(p.scale) << ','
          << format_number(p.error) << '\n';
    }
    out << t.trial << ",slope_mesh,," << slope_cell(t.mesh) << '\n';
    out << t.trial << ",slope_local,," << slope_cell(t.local) << '\n';
  }
  out << "median,slope_mesh,," << (r.median_mesh ? format_number(*r.median_mesh) : "degenerate") << '\n';
  out << "median,slope_local,," << (r.median_local ? format_number(*r.median_local) : "degenerate") << '\n';
}

void write_contraction_csv(std::ostream& out, const ContractionResult& r) {
  out << "window_start,window_end,iters,ratio,residual,accepted\n";
  for (const auto& w : r.report.windows) {
    out << w.start << ',' << w.end << ',' << w.iterations << ',' << format_number(w.ratio) << ','
        << format_number(w.residual) << ',' << (w.accepted ? 1 : 0) << '\n';
  }
}

void write_stability_csv(std::ostream& out, const StabilityResult& r) {
  out << "trial,factor,x_dist,z_dist,y_dist,y0_gap,z0_gap,terminal_gap\n";
  for (const auto& row : r.rows) stability_line(out, std::to_string(row.trial), row);
  for (const auto& row : r.medians) stability_line(out, "median", row);
}

std::string rates_json(const RatesResult& r) {
  json trials = json::array();
  for (const auto& t : r.trials) {
    trials.push_back({{"trial", t.trial},
                      {"mesh", fit_json(t.mesh)},
                      {"local", fit_json(t.local)},
                      {"mesh_factors", t.mesh_factors},
                      {"local_cells", t.local_cells}});
  }
  json j = {{"trials", trials}};
  j["median_slope_mesh"] = r.median_mesh ? json(*r.median_mesh) : json(nullptr);
  j["median_slope_local"] = r.median_local ? json(*r.median_local) : json(nullptr);
  return j.dump(2) + "\n";
}

std::string contraction_json(const ContractionResult& r) {
  json windows = json::array();
  for (const auto& w : r.report.windows) windows.push_back(window_json(w));
  json j = {{"windows", windows},
            {"total_picard_iters", r.report.total_picard_iters},
            {"halvings", r.report.halvings},
            {"final_residual", r.report.final_residual},
            {"success", r.report.success}};
  if (r.failure) j["failure"] = *r.failure;
  return j.dump(2) + "\n";
}

std::string stability_json(const StabilityResult& r) {
  json rows = json::array();
  for (const auto& row : r.rows) {
    json j = row_json(row);
    j["trial"] = row.trial;
    rows.push_back(j);
  }
  json medians = json::array();
  for (const auto& row : r.medians) medians.push_back(row_json(row));
  json j = {{"rows", rows},
            {"medians", medians},
            {"verdict",
             {{"y_decreasing", r.verdict.y_decreasing},
              {"final_over_initial", r.verdict.final_over_initial},
              {"inputs_decreasing", r.verdict.inputs_decreasing}}}};
  if (r.failure) {
    j["failure"] = *r.failure;
    j["failure_module"] = r.failure_module;
  }
  return j.dump(2) + "\n";
}

}  // namespace roughlab::lab
