/**
 * @file   flow.hpp
 * @brief  Place-and-route pipeline: global placement, legalization,
 *         detailed placement, global and detailed routing, pin
 *         rearrangement, validation and artifact emission.
 */
#ifndef PARF_FLOW_HPP
#define PARF_FLOW_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "parf/arch.hpp"
#include "parf/droute.hpp"
#include "parf/gp.hpp"
#include "parf/groute.hpp"
#include "parf/io.hpp"
#include "parf/legalize.hpp"
#include "parf/netlist.hpp"
#include "parf/placement.hpp"
#include "parf/report.hpp"

namespace parf {

enum ExitCode : int { kExitOk = 0, kExitUsage = 1, kExitPlace = 2, kExitRoute = 3, kExitValidate = 4 };

struct FlowConfig {
  std::uint64_t seed    = 1;
  int           threads = 1;
  GpConfig      gp;  ///< seed and threads are overwritten from above
  IsmConfig     ism;
  GrConfig      gr;
  DrConfig      dr;
  bool          guided = true;  ///< restrict detailed routing to global-route corridors

  std::ostream* log   = nullptr;  ///< stage progress
  bool          debug = false;    ///< also stream the placer's iteration log
};

struct FlowResult {
  RunReport             report;
  PlacementState        placement;  ///< legal once placement succeeded
  bool                  placed = false;
  bool                  routed = false;
  Netlist               netlist;  ///< truth tables rewritten for the physical pins
  std::vector<NetRoute> routes;

  // per site, row-major (x + y * width)
  std::vector<double> density;     ///< occupied slots
  std::vector<double> congestion;  ///< global-route usage / capacity
  std::vector<double> wire_usage;  ///< detailed-route wires on incident channels
};

/// Global placement, legalization and detailed placement. On failure the
/// report carries exit code kExitPlace and a message prefixed with the stage.
FlowResult place_design(const Architecture& arch, const Netlist& netlist, const FlowConfig& config);

/// Routes a legal placement into `result` (placement and netlist taken from
/// `placement` and `netlist`). Failure: kExitRoute; invalid routes or a LUT
/// whose rewritten table changes its function: kExitValidate.
void route_design(const Architecture& arch, const Netlist& netlist, const PlacementState& placement,
                  const FlowConfig& config, FlowResult& result);

/// place_design followed by route_design when placement succeeded.
FlowResult run_flow(const Architecture& arch, const Netlist& netlist, const FlowConfig& config);

/// Writes whatever the result holds into `dir` (created if missing):
/// design.pl, design.routes, design.net, report.json and the heatmaps.
void write_flow_outputs(const FlowResult& result, const Architecture& arch, const std::string& dir);

/// Trees from routes-file records, in netlist net order. Throws
/// std::invalid_argument on unknown nets or node ids and on edges whose
/// tail is not already in the tree.
std::vector<RouteTree> import_routes(const RoutingResourceGraph& rrg, const Netlist& netlist,
                                     const std::vector<NetRoute>& routes);

/// LUTs whose rewritten table is not the logical table under `phys_of`,
/// checked over every input vector.
std::vector<std::string> check_lut_functions(const Netlist& logical, const RewriteResult& rewrite);

/// Occupied slots per site of a legal placement.
std::vector<double> site_density(const Architecture& arch, const PlacementState& state);

}  // namespace parf

#endif
