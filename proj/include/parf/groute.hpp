/**
 * @file   groute.hpp
 * @brief  Negotiated-congestion global routing on the site grid graph.
 *
 * Vertices are sites (id = y * width + x). Horizontal edges come first,
 * id = y * (width - 1) + x for the edge (x, y)-(x + 1, y); vertical edges
 * follow, id = h_count + y * width + x for (x, y)-(x, y + 1).
 */
#ifndef PARF_GROUTE_HPP
#define PARF_GROUTE_HPP

#include <array>
#include <span>
#include <string>
#include <vector>

#include "parf/arch.hpp"
#include "parf/netlist.hpp"
#include "parf/placement.hpp"

namespace parf {

class GridGraph {
 public:
  GridGraph(int width, int height, int cap_h, int cap_v);

  int width() const { return width_; }
  int height() const { return height_; }
  int num_vertices() const { return width_ * height_; }
  int num_edges() const { return static_cast<int>(capacity.size()); }
  int num_h_edges() const { return (width_ - 1) * height_; }
  int vertex(int x, int y) const { return y * width_ + x; }
  int vx(int v) const { return v % width_; }
  int vy(int v) const { return v / width_; }

  /// Edge between two adjacent vertices, -1 when not adjacent.
  int                edge_between(int a, int b) const;
  std::array<int, 2> endpoints(int e) const;
  /// (neighbour, edge) pairs of `v`; at most four.
  int                neighbours(int v, std::array<std::pair<int, int>, 4>& out) const;

  /// (1 + history) * (1 + max(0, usage + 1 - capacity) * pfac); the
  /// history factor is dropped when `with_history` is false.
  double cost(int e, double pfac, bool with_history = true) const;
  int    overuse() const;

  std::vector<int>    capacity;
  std::vector<int>    usage;
  std::vector<double> history;

 private:
  int width_, height_;
};

GridGraph build_grid_graph(const Architecture& arch);

struct PathResult {
  double           cost = 0.0;
  std::vector<int> vertices;  ///< source end first; empty when unreachable
};

/// Cheapest path from any of `sources` to `target` under the current
/// congestion costs. `astar` adds the Manhattan lower bound to the target.
PathResult shortest_path(const GridGraph& g, std::span<const int> sources, int target, double pfac,
                         bool astar = true, bool with_history = true);

struct RouteGuide {
  std::vector<int> vertices;  ///< tree order, root first
  std::vector<int> edges;
};

struct GrConfig {
  int    max_iters  = 50;
  double pfac0      = 1.0;
  double pfac_grow  = 2.0;
  double pfac_max   = 1e4;
  double hfac       = 1.0;
  int    refine     = 2;  ///< wirelength passes after success, overuse forbidden
};

struct GlobalRouteResult {
  std::vector<RouteGuide> guides;  ///< per net
  bool                    success    = false;
  int                     iterations = 0;
  std::vector<int>        overuse_history;
  int                     wirelength = 0;  ///< total tree edges
  std::vector<int>        failed_nets;     ///< nets on overused edges at the end
};

/// Routes each net (list of vertices, driver first) over `g`, updating its
/// usage and history. Nets with fewer than two distinct vertices get empty trees.
GlobalRouteResult route_global(GridGraph& g, const std::vector<std::vector<int>>& nets, const GrConfig& config = {});

/// Distinct pin sites of every net, driver site first.
std::vector<std::vector<int>> net_sites(const GridGraph& g, const Netlist& netlist, const PlacementState& state);

/// Problems with a tree: cycle, disconnection, missing pin site, non-edge hop.
std::vector<std::string> check_guide(const GridGraph& g, std::span<const int> pins, const RouteGuide& guide);

/// Per-site mean usage/capacity over incident edges (row-major x + y * width).
std::vector<double> congestion_map(const GridGraph& g);

/// Text dump: one line per routed net, `net NAME x,y x,y ...` in tree order.
std::string dump_guides(const GridGraph& g, const Netlist& netlist, const std::vector<RouteGuide>& guides);

}  // namespace parf

#endif
