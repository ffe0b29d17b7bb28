/**
 * @file   report.cpp
 */
#include "parf/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "parf/io.hpp"

namespace parf {

namespace {

nlohmann::ordered_json number(double v) { return std::isfinite(v) ? nlohmann::ordered_json(v) : nullptr; }

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string colour(double t) {
  t = std::clamp(t, 0.0, 1.0);
  char buf[8];
  std::snprintf(buf, sizeof buf, "#%02x%02x%02x", static_cast<int>(std::lround(255 * t)),
                static_cast<int>(std::lround(64 * (1 - std::abs(2 * t - 1)))), static_cast<int>(std::lround(255 * (1 - t))));
  return buf;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

}  // namespace

std::string report_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["schema"]    = kReportSchema;
  j["design"]    = r.design;
  j["seed"]      = r.seed;
  j["threads"]   = r.threads;
  j["status"]    = r.status;
  j["exit_code"] = r.exit_code;
  j["prt_s"]     = number(r.prt);
  j["rrt_s"]     = number(r.rrt);
  j["hpwl"]      = number(r.hpwl);
  j["rwl"]       = r.rwl;

  auto& place            = j["placement"];
  place["iterations"]    = r.gp_iterations;
  place["converged"]     = r.gp_converged;
  place["hpwl_global"]   = number(r.hpwl_global);
  place["hpwl_legal"]    = number(r.hpwl_legal);
  auto& over             = place["overflow"];
  for (int f = 0; f < kNumFields; ++f) over[std::string(to_string(static_cast<Field>(f)))] = number(r.overflow[f]);

  auto& clk             = j["clock"];
  clk["plan_feasible"]  = r.clock_plan_feasible;
  clk["cr_ok"]          = r.cr_ok;
  clk["hc_ok"]          = r.hc_ok;
  clk["max_cr_demand"]  = r.max_cr_demand;
  clk["max_hc_demand"]  = r.max_hc_demand;

  auto& route              = j["routing"];
  route["global_success"]  = r.gr_success;
  route["global_iterations"] = r.gr_iterations;
  route["global_wirelength"] = r.gr_wirelength;
  route["detailed_success"]  = r.dr_success;
  route["detailed_iterations"] = r.dr_iterations;
  route["routable_nets"]   = r.routable_nets;
  route["routed_nets"]     = r.routed_nets;
  route["completion_pct"]  = number(r.completion());
  route["permuted_luts"]   = r.permuted_luts;
  return j.dump(2) + "\n";
}

std::string heatmap_svg(std::span<const double> values, int cols, int rows, std::string_view title) {
  if (cols <= 0 || rows <= 0 || values.size() != static_cast<std::size_t>(cols) * static_cast<std::size_t>(rows))
    throw std::invalid_argument("heatmap_svg: value count does not match the grid");
  double lo = values.empty() ? 0.0 : values[0], hi = lo;
  for (double v : values) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  const int cell = std::max(4, 480 / std::max(cols, rows));
  const int w = cols * cell, h = rows * cell, legend = 40, top = 24;

  std::string s;
  s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(w) + "\" height=\"" +
       std::to_string(h + top + legend) + "\">\n";
  s += "<title>" + xml_escape(title) + "</title>\n";
  s += "<text x=\"4\" y=\"16\" font-size=\"14\">" + xml_escape(title) + "</text>\n";
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      double v = values[static_cast<std::size_t>(r) * cols + c];
      double t = hi > lo ? (v - lo) / (hi - lo) : 0.0;
      s += "<rect x=\"" + std::to_string(c * cell) + "\" y=\"" + std::to_string(top + (rows - 1 - r) * cell) +
           "\" width=\"" + std::to_string(cell) + "\" height=\"" + std::to_string(cell) + "\" fill=\"" + colour(t) +
           "\"/>\n";
    }
  int ly = top + h + 8;
  s += "<g class=\"legend\">\n";
  s += "<text x=\"4\" y=\"" + std::to_string(ly + 20) + "\" font-size=\"12\">min " + fmt(lo) + "</text>\n";
  s += "<text x=\"" + std::to_string(std::max(w - 100, 90)) + "\" y=\"" + std::to_string(ly + 20) +
       "\" font-size=\"12\">max " + fmt(hi) + "</text>\n";
  s += "</g>\n</svg>\n";
  return s;
}

void emit_heatmap_svg(std::span<const double> values, int cols, int rows, const std::string& path,
                      std::string_view title) {
  write_file(path, heatmap_svg(values, cols, rows, title));
}

}  // namespace parf
