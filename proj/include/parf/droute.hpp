/**
 * @file   droute.hpp
 * @brief  Negotiated-congestion detailed routing on the routing resource
 *         graph, with guide-restricted search regions, net reordering and
 *         LUT input pin rearrangement.
 */
#ifndef PARF_DROUTE_HPP
#define PARF_DROUTE_HPP

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "parf/groute.hpp"
#include "parf/io.hpp"
#include "parf/netlist.hpp"
#include "parf/placement.hpp"
#include "parf/rrg.hpp"

namespace parf {

/// A net in RRG terms. Sinks are distinct; `weight` counts how many logical
/// pins of the net land on that sink (a LUT input group may take several).
struct DrNet {
  int              source = -1;  ///< -1: nothing to route
  std::vector<int> sinks;
  std::vector<int> weight;
};

/// RRG vertex of a netlist pin under a legal placement.
int pin_vertex(const RoutingResourceGraph& rrg, const Architecture& arch, const Netlist& netlist,
               const PlacementState& state, int pin);

/// One DrNet per netlist net, in net order. Nets without a driver or
/// without sinks get source -1.
std::vector<DrNet> detailed_nets(const RoutingResourceGraph& rrg, const Architecture& arch, const Netlist& netlist,
                                 const PlacementState& state);

/// Sets every LUT-input group capacity to the input count of the LUT-like
/// instance in that slot; groups of empty slots get capacity 0.
void rearrange_pins(RoutingResourceGraph& rrg, const Architecture& arch, const Netlist& netlist,
                    const PlacementState& state);

struct RouteTree {
  int              net = -1;
  std::vector<int> vertices;  ///< root first; every parent precedes its children
  std::vector<int> parent;    ///< index into `vertices`, -1 for the root
};

/// Sites a net may use. `all` means the whole layout.
struct SearchRegion {
  int               margin = 0;
  bool              all    = false;
  std::vector<char> site;  ///< row-major, width * height
};

/// Corridor sites dilated by 2^attempt cells (Chebyshev), clipped to the
/// layout. Becomes `all` once the margin reaches the layout size.
SearchRegion expand_search_space(int width, int height, std::span<const int> corridor, int attempt);

struct NetStats {
  int failures = 0;  ///< times the net failed inside its region or ended on overuse
  int overuse  = 0;  ///< overused vertices met, cumulative
  int bbox     = 0;  ///< half-perimeter of the pin bounding box in sites
};

/// Net indices sorted by descending (failures, overuse, bbox), ties by
/// ascending index.
std::vector<int> reorder_nets(std::span<const NetStats> stats);

struct DrConfig {
  int    max_iters = 50;
  double pfac0     = 0.5;
  double pfac_grow = 1.5;
  double pfac_max  = 1e4;
  double hfac      = 0.5;
};

struct DetailedRouteResult {
  std::vector<RouteTree> trees;  ///< per net; empty trees for nets with source -1
  bool                   success    = false;
  int                    iterations = 0;
  std::vector<int>       overuse_history;
  std::vector<int>       failed_nets;
  std::vector<int>       attempts;  ///< final search-space attempt per net
  long long              visited = 0;  ///< vertices expanded by all searches
  int                    rwl     = 0;  ///< channel wires used, summed over nets
};

/// Routes every net. `corridors` (per net, site indices) restrict the search
/// as described by expand_search_space; an empty list routes unguided.
/// Vertices with capacity 0 are never entered. Updates rrg usage and history.
DetailedRouteResult route_detailed(RoutingResourceGraph& rrg, std::span<const DrNet> nets,
                                   std::span<const std::vector<int>> corridors, const DrConfig& config = {});

/// Corridor per net from global-route guides plus the net's own pin sites.
std::vector<std::vector<int>> guide_corridors(const RoutingResourceGraph& rrg, std::span<const DrNet> nets,
                                              std::span<const RouteGuide> guides);

/// Problems with a routing: bad root, non-edge hops, repeated vertices,
/// missing sinks, capacity violations and vertices shared between nets
/// (LUT-input groups may be shared up to capacity).
std::vector<std::string> validate_routes(const RoutingResourceGraph& rrg, std::span<const DrNet> nets,
                                         std::span<const RouteTree> trees);

/// Channel wires used, summed over nets.
int routed_wirelength(const RoutingResourceGraph& rrg, std::span<const RouteTree> trees);

/// Output bit of `table` for input vector `bits` (bit p = input p).
inline bool evaluate_lut(std::uint64_t table, unsigned bits) { return (table >> bits) & 1u; }

/// Table over physical pins such that physical pin `phys_of[p]` carries
/// logical input p: T'[b'] = T[b] with b_p = b'_{phys_of[p]}.
std::uint64_t permute_truth_table(std::uint64_t table, int k, std::span<const int> phys_of);

struct RewriteResult {
  Netlist                       netlist;
  std::vector<std::vector<int>> phys_of;  ///< per instance; empty for non-LUTs
};

/// Derives each LUT's physical pin assignment from the routed trees: the nets
/// entering a group take physical pins in order of the vertex they arrive
/// from, and the truth table is rewritten to keep the logical function.
RewriteResult rewrite_truth_tables(const RoutingResourceGraph& rrg, const Architecture& arch, const Netlist& netlist,
                                   const PlacementState& state, std::span<const RouteTree> trees);

/// Routes-file records: per routed net, edges in tree pre-order.
std::vector<NetRoute> export_routes(const RoutingResourceGraph& rrg, const Netlist& netlist,
                                    std::span<const RouteTree> trees);

}  // namespace parf

#endif
