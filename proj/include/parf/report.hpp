/**
 * @file   report.hpp
 * @brief  Run metrics, the versioned JSON report and SVG heatmaps.
 */
#ifndef PARF_REPORT_HPP
#define PARF_REPORT_HPP

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>

#include "parf/types.hpp"

namespace parf {

inline constexpr std::string_view kReportSchema = "parf-report/1";

struct RunReport {
  std::string   design;
  std::uint64_t seed    = 1;
  int           threads = 1;
  std::string   status  = "ok";  ///< "ok" or the failing stage's message
  int           exit_code = 0;

  double prt = 0.0;  ///< placement wall time, seconds
  double rrt = 0.0;  ///< routing wall time, seconds

  int                            gp_iterations = 0;
  bool                           gp_converged  = false;
  std::array<double, kNumFields> overflow{};
  double                         hpwl_global = 0.0;
  double                         hpwl_legal  = 0.0;
  double                         hpwl        = 0.0;  ///< after detailed placement

  bool clock_plan_feasible = true;
  bool cr_ok               = true;
  bool hc_ok               = true;
  int  max_cr_demand       = 0;
  int  max_hc_demand       = 0;

  bool gr_success    = false;
  int  gr_iterations = 0;
  int  gr_wirelength = 0;
  bool dr_success    = false;
  int  dr_iterations = 0;
  int  rwl           = 0;
  int  routable_nets = 0;
  int  routed_nets   = 0;
  int  permuted_luts = 0;

  /// Percentage of routable nets routed without overuse, in [0, 100].
  double completion() const { return routable_nets == 0 ? 100.0 : 100.0 * routed_nets / routable_nets; }
};

/// Pretty-printed JSON object tagged with kReportSchema. Non-finite numbers
/// are written as null.
std::string report_json(const RunReport& report);

/// One rect per bin (row 0 at the bottom), linear blue-to-red scale, legend
/// with the minimum and maximum value. A constant grid maps to one colour.
std::string heatmap_svg(std::span<const double> values, int cols, int rows, std::string_view title);

/// heatmap_svg written to `path`; I/O errors propagate.
void emit_heatmap_svg(std::span<const double> values, int cols, int rows, const std::string& path,
                      std::string_view title);

}  // namespace parf

#endif
