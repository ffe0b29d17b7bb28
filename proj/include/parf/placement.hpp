/**
 * @file   placement.hpp
 * @brief  Continuous and discrete placement state.
 */
#ifndef PARF_PLACEMENT_HPP
#define PARF_PLACEMENT_HPP

#include <optional>
#include <vector>

#include "parf/arch.hpp"
#include "parf/netlist.hpp"

namespace parf {

struct SiteSlot {
  int  x    = -1;
  int  y    = -1;
  int  slot = -1;
  bool operator==(const SiteSlot&) const = default;
};

/// Instance centres in site units. Site (sx, sy) covers [sx, sx+1) x [sy, sy+1);
/// a legalized instance sits at the site centre.
struct PlacementState {
  std::vector<double> x;
  std::vector<double> y;
  std::vector<double> inflate;
  std::optional<std::vector<SiteSlot>> site_assign;

  std::size_t size() const { return x.size(); }
};

/// Fixed instances at their site centres, movables at the layout centre.
PlacementState make_initial_state(const Architecture& arch, const Netlist& netlist);

/// Sets x/y of every instance to the centre of its assigned site.
void snap_to_sites(PlacementState& state);

/// Slot layout of slices: LUT slots [0, lut_slots), FF slots after that.
inline int ff_slot_base(const Architecture& arch) { return arch.lut_slots; }

}  // namespace parf

#endif
