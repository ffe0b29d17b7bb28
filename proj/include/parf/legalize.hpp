/**
 * @file   legalize.hpp
 * @brief  Direct legalization into sites and slots, the legality checker and
 *         independent-set-matching detailed placement.
 */
#ifndef PARF_LEGALIZE_HPP
#define PARF_LEGALIZE_HPP

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "parf/arch.hpp"
#include "parf/clock.hpp"
#include "parf/netlist.hpp"
#include "parf/placement.hpp"

namespace parf {

enum class SliceMode : std::uint8_t { kUnset, kLut, kMem };

class LegalizationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Incremental site bookkeeping: slot occupancy, SLICEM mode and the clock
/// nets seen per half column and per clock region (sink bounding boxes).
class SiteOccupancy {
 public:
  SiteOccupancy(const Architecture& arch, const Netlist& netlist, const ClockPlan* plan = nullptr);

  /// Whether `inst` may go to site (sx, sy) under every legality rule.
  bool can_place(int inst, int sx, int sy) const;
  /// Puts `inst` in the site, in `slot` when given and free, else the lowest
  /// free slot of its range. Returns the slot. Does not check clock rules.
  int  place(int inst, int sx, int sy, int slot = -1);

  SliceMode mode(int sx, int sy) const { return mode_[site(sx, sy)]; }
  int       free_slots(int sx, int sy, InstKind kind) const;
  int       cr_count(int flat_cr) const { return cr_count_[flat_cr]; }
  int       hc_count(int flat_hc) const;

 private:
  const Architecture&           arch_;
  const Netlist&                nl_;
  const ClockPlan*              plan_;
  std::vector<std::vector<int>> clocks_;     // per instance
  std::vector<std::vector<int>> slots_;      // per site: occupant per slot, -1 free
  std::vector<SliceMode>        mode_;
  std::vector<std::vector<std::pair<int, int>>> hc_nets_;  // per HC: (net, sinks)
  std::vector<CrRect>           span_;       // per net, placed sinks
  std::vector<int>              cr_count_;

  int  site(int sx, int sy) const { return arch_.site_index(sx, sy); }
  int  slot_begin(InstKind k) const;
  int  slot_end(InstKind k, SiteType t) const;
  bool clock_ok(int inst, int sx, int sy) const;
};

struct LegalizeResult {
  PlacementState      state;         ///< site_assign set, x/y at site centres
  std::vector<double> displacement;  ///< per instance, Manhattan, 0 for fixed
  double              max_displacement  = 0.0;
  double              mean_displacement = 0.0;
};

/// Greedy legalization: fixed instances first, then movables by descending
/// area (ties by id), each to the nearest feasible site by Manhattan distance
/// from its continuous position (ties by Euclidean distance, then y, then x).
/// Sinks of shrunk clock nets must stay inside their allowed regions.
/// Throws LegalizationError naming the first instance that cannot be placed.
LegalizeResult legalize_direct(const Architecture& arch, const Netlist& netlist, const PlacementState& state,
                               const ClockPlan* plan = nullptr);

/// Every rule broken by a discrete placement, one message per violation:
/// assignment, position, site-type, slot, overlap, fixed, mode, hc-limit, cr-limit.
std::vector<std::string> validate_legality(const PlacementState& state, const Architecture& arch,
                                           const Netlist& netlist);

/// Per-CR count of clock nets whose legal sink bounding box touches the CR,
/// and per-HC count of clock nets with a sink inside the HC.
std::vector<int> legal_cr_demand(const Architecture& arch, const Netlist& netlist, const PlacementState& state);
std::vector<int> legal_hc_demand(const Architecture& arch, const Netlist& netlist, const PlacementState& state);

/// Minimum-cost perfect assignment of rows to columns of a square matrix.
/// Returns the column of each row.
std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost);

struct IsmConfig {
  int           rounds  = 5;
  int           max_set = 64;
  std::uint64_t seed    = 1;
};

struct IsmResult {
  PlacementState      state;
  std::vector<double> hpwl;  ///< before, then after each round
  int                 moved = 0;
};

/// Independent-set matching. Sets hold instances of one kind and one clock
/// signature that share no signal net; each set is reassigned optimally over
/// its own slots and applied only when its HPWL does not rise.
IsmResult ism_refine(const Architecture& arch, const Netlist& netlist, const PlacementState& legal,
                     const IsmConfig& config = {});

}  // namespace parf

#endif
