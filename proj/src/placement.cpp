/**
 * @file   placement.cpp
 */
#include "parf/placement.hpp"

namespace parf {

PlacementState make_initial_state(const Architecture& arch, const Netlist& netlist) {
  PlacementState s;
  auto n = static_cast<std::size_t>(netlist.num_instances());
  s.x.assign(n, 0.5 * arch.width);
  s.y.assign(n, 0.5 * arch.height);
  s.inflate.assign(n, 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    const auto& inst = netlist.instances[i];
    if (inst.fixed) {
      s.x[i] = static_cast<int>(inst.fixed_x) + 0.5;
      s.y[i] = static_cast<int>(inst.fixed_y) + 0.5;
    }
  }
  return s;
}

void snap_to_sites(PlacementState& state) {
  if (!state.site_assign) return;
  for (std::size_t i = 0; i < state.size(); ++i) {
    const auto& a = (*state.site_assign)[i];
    if (a.x < 0) continue;
    state.x[i] = a.x + 0.5;
    state.y[i] = a.y + 0.5;
  }
}

}  // namespace parf
