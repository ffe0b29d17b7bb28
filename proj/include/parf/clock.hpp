/**
 * @file   clock.hpp
 * @brief  Clock-region demand, per-net allowed regions and the quadratic
 *         penalty that pulls clock sinks into their regions.
 *
 * Demand is measured on the bounding box of each clock net's sinks; the
 * driver (usually a fixed IO at the layout edge) is left out so that it does
 * not stretch every clock across the device.
 */
#ifndef PARF_CLOCK_HPP
#define PARF_CLOCK_HPP

#include <span>
#include <string>
#include <vector>

#include "parf/arch.hpp"
#include "parf/netlist.hpp"

namespace parf {

/// Inclusive range of clock regions [c0, c1] x [r0, r1].
struct CrRect {
  int c0 = 0, r0 = 0, c1 = -1, r1 = -1;

  bool empty() const { return c1 < c0 || r1 < r0; }
  bool contains(CrIndex cr) const { return cr.col >= c0 && cr.col <= c1 && cr.row >= r0 && cr.row <= r1; }
  int  area() const { return empty() ? 0 : (c1 - c0 + 1) * (r1 - r0 + 1); }
  bool operator==(const CrRect&) const = default;
};

/// Site-coordinate extent of a CR rectangle.
struct SiteRect {
  double x0 = 0, y0 = 0, x1 = 0, y1 = 0;
};
SiteRect site_extent(const Architecture& arch, const CrRect& r);
CrRect   full_cr_rect(const Architecture& arch);

struct ClockNetPlan {
  int    net = -1;
  bool   shrunk = false;  ///< false: region is the whole layout
  CrRect region;
};

struct ClockPlan {
  std::vector<ClockNetPlan> nets;    ///< one per clock net, ascending net id
  std::vector<int>          demand;  ///< per CR (flat index), effective spans
  bool                      feasible = true;
  int                       rounds   = 0;

  /// Entry for `net`, or nullptr if it is not a clock net.
  const ClockNetPlan* find(int net) const;
};

/// CR span of the sink bounding box of clock net `net`; empty when it has no sinks.
CrRect sink_span(const Architecture& arch, const Netlist& netlist, int net, std::span<const double> x,
                 std::span<const double> y);

/// Per-CR count of clock nets whose sink bounding box intersects the CR.
std::vector<int> clock_demand(const Architecture& arch, const Netlist& netlist, std::span<const double> x,
                              std::span<const double> y);

/// Plans allowed regions so that every CR is touched by at most cr_limit
/// clock nets. A net's effective span is its region once shrunk, else its
/// sink span. Regions of `previous` are kept (regions only ever move to
/// relieve a violation).
ClockPlan plan_regions(const Architecture& arch, const Netlist& netlist, std::span<const double> x,
                       std::span<const double> y, const ClockPlan* previous = nullptr);

/// Effective per-CR demand of a plan at the given positions.
std::vector<int> plan_demand(const Architecture& arch, const Netlist& netlist, const ClockPlan& plan,
                             std::span<const double> x, std::span<const double> y);

struct ClockPenalty {
  double              value = 0.0;
  std::vector<double> grad_x;  ///< per instance
  std::vector<double> grad_y;
};

/// Sum over sinks of shrunk clock nets of the squared distance to the region.
ClockPenalty clock_penalty(const Architecture& arch, const Netlist& netlist, std::span<const double> x,
                           std::span<const double> y, const ClockPlan& plan);

/// Whether an instance may sit in site (sx, sy) with respect to the allowed
/// regions of all clock nets it is a sink of.
bool site_in_regions(const Architecture& arch, const ClockPlan& plan, std::span<const int> clock_nets, int sx,
                     int sy);

/// JSON text: feasibility, per-CR demand grid and per-net regions.
std::string dump_clock_plan(const Architecture& arch, const Netlist& netlist, const ClockPlan& plan);

}  // namespace parf

#endif
