/**
 * @file   wirelength.cpp
 */
#include "parf/wirelength.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "parf/parallel.hpp"

namespace parf {

namespace {

/// One axis of the WA model for a single net. Writes d/dcoord per pin into `grad`.
double wa_axis(const std::vector<double>& c, double gamma, std::vector<double>& grad) {
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (double v : c) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  double sp = 0, sxp = 0, sn = 0, sxn = 0;
  std::vector<double> ep(c.size()), en(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    ep[i] = std::exp((c[i] - hi) / gamma);
    en[i] = std::exp((lo - c[i]) / gamma);
    sp += ep[i];
    sxp += c[i] * ep[i];
    sn += en[i];
    sxn += c[i] * en[i];
  }
  double a = sxp / sp;
  double b = sxn / sn;
  grad.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) {
    grad[i] = ep[i] / sp * (1.0 + (c[i] - a) / gamma) - en[i] / sn * (1.0 - (c[i] - b) / gamma);
  }
  return a - b;
}

}  // namespace

double hpwl_net(std::span<const double> x, std::span<const double> y, const Netlist& netlist, int net) {
  const auto& n = netlist.nets[net];
  if (n.pins.empty()) return 0.0;
  double xl = std::numeric_limits<double>::infinity(), xh = -xl, yl = xl, yh = -xl;
  for (int p : n.pins) {
    const auto& pin = netlist.pins[p];
    double      px  = x[pin.inst] + pin.offset_x;
    double      py  = y[pin.inst] + pin.offset_y;
    xl = std::min(xl, px);
    xh = std::max(xh, px);
    yl = std::min(yl, py);
    yh = std::max(yh, py);
  }
  return (xh - xl) + (yh - yl);
}

double hpwl(std::span<const double> x, std::span<const double> y, const Netlist& netlist) {
  double total = 0.0;
  for (int n = 0; n < netlist.num_nets(); ++n) total += hpwl_net(x, y, netlist, n);
  return total;
}

WirelengthResult smooth_wl(std::span<const double> x, std::span<const double> y, const Netlist& netlist,
                           const WirelengthParams& params) {
  if (!(params.gamma > 0.0)) throw std::invalid_argument("gamma must be positive");
  std::vector<double> net_value(netlist.nets.size(), 0.0);
  std::vector<double> pin_gx(netlist.pins.size(), 0.0), pin_gy(netlist.pins.size(), 0.0);

  parallel_for(netlist.nets.size(), params.threads, [&](std::size_t ni) {
    const auto& net = netlist.nets[ni];
    double      w   = params.weight(static_cast<int>(ni));
    if (net.pins.size() < 2 || w == 0.0) return;
    std::vector<double> cx(net.pins.size()), cy(net.pins.size()), gx, gy;
    for (std::size_t k = 0; k < net.pins.size(); ++k) {
      const auto& pin = netlist.pins[net.pins[k]];
      cx[k]           = x[pin.inst] + pin.offset_x;
      cy[k]           = y[pin.inst] + pin.offset_y;
    }
    net_value[ni] = w * (wa_axis(cx, params.gamma, gx) + wa_axis(cy, params.gamma, gy));
    for (std::size_t k = 0; k < net.pins.size(); ++k) {
      pin_gx[net.pins[k]] = w * gx[k];
      pin_gy[net.pins[k]] = w * gy[k];
    }
  });

  WirelengthResult r;
  for (double v : net_value) r.value += v;
  r.grad_x.assign(netlist.instances.size(), 0.0);
  r.grad_y.assign(netlist.instances.size(), 0.0);
  parallel_for(netlist.instances.size(), params.threads, [&](std::size_t i) {
    for (int p : netlist.instances[i].pins) {
      r.grad_x[i] += pin_gx[p];
      r.grad_y[i] += pin_gy[p];
    }
  });
  return r;
}

}  // namespace parf
