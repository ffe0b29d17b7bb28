/**
 * @file   wirelength.hpp
 * @brief  Half-perimeter wirelength and the weighted-average smooth
 *         wirelength model with analytic gradient.
 */
#ifndef PARF_WIRELENGTH_HPP
#define PARF_WIRELENGTH_HPP

#include <span>
#include <vector>

#include "parf/netlist.hpp"
#include "parf/placement.hpp"

namespace parf {

struct WirelengthParams {
  double              gamma = 1.0;  ///< smoothing length in site units, > 0
  std::vector<double> net_weight;   ///< empty means 1.0 for every net
  int                 threads = 1;

  double weight(int net) const { return net_weight.empty() ? 1.0 : net_weight[static_cast<std::size_t>(net)]; }
};

struct WirelengthResult {
  double              value = 0.0;
  std::vector<double> grad_x;  ///< per instance
  std::vector<double> grad_y;
};

double hpwl_net(std::span<const double> x, std::span<const double> y, const Netlist& netlist, int net);
double hpwl(std::span<const double> x, std::span<const double> y, const Netlist& netlist);
inline double hpwl(const PlacementState& s, const Netlist& netlist) { return hpwl(s.x, s.y, netlist); }

/// Weighted-average wirelength. Per-net exponentials are shifted by the net
/// extreme so no term overflows. Gradients are reduced per instance in pin
/// order, independent of `params.threads`.
WirelengthResult smooth_wl(std::span<const double> x, std::span<const double> y, const Netlist& netlist,
                           const WirelengthParams& params);
inline WirelengthResult smooth_wl(const PlacementState& s, const Netlist& netlist, const WirelengthParams& params) {
  return smooth_wl(s.x, s.y, netlist, params);
}

}  // namespace parf

#endif
