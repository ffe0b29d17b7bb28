/**
 * @file   clock.cpp
 */
#include "parf/clock.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <tuple>

#include "json.hpp"

namespace parf {

namespace {

double clamp_coord(double v, double extent) { return std::clamp(v, 0.0, std::nextafter(extent, 0.0)); }

CrIndex cr_at(const Architecture& arch, double x, double y) {
  return clock_region_of(arch, clamp_coord(x, arch.width), clamp_coord(y, arch.height));
}

bool is_sink(const Netlist& nl, int net, int pin) { return pin != nl.nets[net].driver; }

template <typename Fn>
void for_each_sink(const Netlist& nl, int net, Fn&& fn) {
  for (int p : nl.nets[net].pins) {
    if (is_sink(nl, net, p)) fn(nl.pins[p]);
  }
}

/// Squared distance from (px, py) to the closed rectangle, with its gradient.
double rect_distance2(const SiteRect& r, double px, double py, double& gx, double& gy) {
  double dx = px < r.x0 ? px - r.x0 : (px > r.x1 ? px - r.x1 : 0.0);
  double dy = py < r.y0 ? py - r.y0 : (py > r.y1 ? py - r.y1 : 0.0);
  gx        = 2.0 * dx;
  gy        = 2.0 * dy;
  return dx * dx + dy * dy;
}

void add_span(const Architecture& arch, const CrRect& r, std::vector<int>& demand) {
  if (r.empty()) return;
  for (int c = r.c0; c <= r.c1; ++c)
    for (int rr = r.r0; rr <= r.r1; ++rr) ++demand[flat_index(arch, CrIndex{c, rr})];
}

CrRect effective_span(const Architecture& arch, const Netlist& nl, const ClockNetPlan& p, std::span<const double> x,
                      std::span<const double> y) {
  return p.shrunk ? p.region : sink_span(arch, nl, p.net, x, y);
}

}  // namespace

SiteRect site_extent(const Architecture& arch, const CrRect& r) {
  return {r.c0 * arch.cr_width(), r.r0 * arch.cr_height(), (r.c1 + 1) * arch.cr_width(),
          (r.r1 + 1) * arch.cr_height()};
}

CrRect full_cr_rect(const Architecture& arch) { return {0, 0, arch.clock.cr_cols - 1, arch.clock.cr_rows - 1}; }

const ClockNetPlan* ClockPlan::find(int net) const {
  auto it = std::lower_bound(nets.begin(), nets.end(), net, [](const ClockNetPlan& p, int n) { return p.net < n; });
  return it != nets.end() && it->net == net ? &*it : nullptr;
}

CrRect sink_span(const Architecture& arch, const Netlist& nl, int net, std::span<const double> x,
                 std::span<const double> y) {
  double xl = std::numeric_limits<double>::infinity(), xh = -xl, yl = xl, yh = -xl;
  for_each_sink(nl, net, [&](const Pin& pin) {
    xl = std::min(xl, x[pin.inst] + pin.offset_x);
    xh = std::max(xh, x[pin.inst] + pin.offset_x);
    yl = std::min(yl, y[pin.inst] + pin.offset_y);
    yh = std::max(yh, y[pin.inst] + pin.offset_y);
  });
  if (xl > xh) return {};
  CrIndex lo = cr_at(arch, xl, yl), hi = cr_at(arch, xh, yh);
  return {lo.col, lo.row, hi.col, hi.row};
}

std::vector<int> clock_demand(const Architecture& arch, const Netlist& nl, std::span<const double> x,
                              std::span<const double> y) {
  std::vector<int> demand(static_cast<std::size_t>(arch.num_crs()), 0);
  for (int n = 0; n < nl.num_nets(); ++n) {
    if (nl.nets[n].is_clock) add_span(arch, sink_span(arch, nl, n, x, y), demand);
  }
  return demand;
}

std::vector<int> plan_demand(const Architecture& arch, const Netlist& nl, const ClockPlan& plan,
                             std::span<const double> x, std::span<const double> y) {
  std::vector<int> demand(static_cast<std::size_t>(arch.num_crs()), 0);
  for (const auto& p : plan.nets) add_span(arch, effective_span(arch, nl, p, x, y), demand);
  return demand;
}

ClockPlan plan_regions(const Architecture& arch, const Netlist& nl, std::span<const double> x,
                       std::span<const double> y, const ClockPlan* previous) {
  ClockPlan plan;
  for (int n = 0; n < nl.num_nets(); ++n) {
    if (!nl.nets[n].is_clock) continue;
    ClockNetPlan p{n, false, full_cr_rect(arch)};
    if (previous) {
      if (const auto* old = previous->find(n); old && old->shrunk) p = *old;
    }
    plan.nets.push_back(p);
  }

  // every CR-aligned rectangle, in a fixed order
  std::vector<CrRect> rects;
  const int           cols = arch.clock.cr_cols, rows = arch.clock.cr_rows, limit = arch.clock.cr_limit;
  for (int c0 = 0; c0 < cols; ++c0)
    for (int c1 = c0; c1 < cols; ++c1)
      for (int r0 = 0; r0 < rows; ++r0)
        for (int r1 = r0; r1 < rows; ++r1) rects.push_back({c0, r0, c1, r1});

  std::vector<char> stuck(static_cast<std::size_t>(arch.num_crs()), 0);
  const long        max_rounds = static_cast<long>(arch.num_crs()) * std::max<std::size_t>(1, plan.nets.size());
  for (long round = 0; round < max_rounds; ++round) {
    plan.demand = plan_demand(arch, nl, plan, x, y);
    int bad     = -1;
    for (int k = 0; k < arch.num_crs(); ++k) {
      if (plan.demand[k] > limit && !stuck[k]) {
        bad = k;
        break;
      }
    }
    if (bad < 0) break;
    ++plan.rounds;
    CrIndex bad_cr{bad % cols, bad / cols};

    // the net touching the CR with the fewest sinks inside it
    int best = -1, best_inside = 0;
    for (std::size_t k = 0; k < plan.nets.size(); ++k) {
      auto& p = plan.nets[k];
      if (!effective_span(arch, nl, p, x, y).contains(bad_cr)) continue;
      bool movable = true;
      int  inside  = 0;
      for_each_sink(nl, p.net, [&](const Pin& pin) {
        bool in = cr_at(arch, x[pin.inst], y[pin.inst]) == bad_cr;
        inside += in;
        if (in && nl.instances[pin.inst].fixed) movable = false;
      });
      if (!movable) continue;
      if (best < 0 || inside < best_inside) {
        best        = static_cast<int>(k);
        best_inside = inside;
      }
    }
    if (best < 0) {
      stuck[bad] = 1;
      continue;
    }

    auto&            p = plan.nets[best];
    std::vector<int> others(plan.demand);
    CrRect           cur = effective_span(arch, nl, p, x, y);
    if (!cur.empty()) {
      for (int c = cur.c0; c <= cur.c1; ++c)
        for (int r = cur.r0; r <= cur.r1; ++r) --others[flat_index(arch, CrIndex{c, r})];
    }
    int sinks = 0;
    for_each_sink(nl, p.net, [&](const Pin&) { ++sinks; });

    using Key = std::tuple<int, int, double, double, std::size_t>;
    Key    best_key{};
    int    chosen = -1;
    for (std::size_t ri = 0; ri < rects.size(); ++ri) {
      const auto& r = rects[ri];
      if (r.contains(bad_cr)) continue;
      SiteRect ext = site_extent(arch, r);
      bool     ok  = true;
      int      covered = 0;
      double   pen     = 0.0, gx, gy;
      for_each_sink(nl, p.net, [&](const Pin& pin) {
        bool in = r.contains(cr_at(arch, x[pin.inst], y[pin.inst]));
        covered += in;
        if (!in && nl.instances[pin.inst].fixed) ok = false;
        pen += rect_distance2(ext, x[pin.inst], y[pin.inst], gx, gy);
      });
      if (!ok) continue;
      int over = 0;
      for (int c = r.c0; c <= r.c1; ++c)
        for (int rr = r.r0; rr <= r.r1; ++rr) over += others[flat_index(arch, CrIndex{c, rr})] + 1 > limit;
      bool enough = covered >= 0.9 * sinks;
      Key  key    = enough ? Key{over, 0, r.area(), pen, ri} : Key{over, 1, pen, r.area(), ri};
      if (chosen < 0 || key < best_key) {
        best_key = key;
        chosen   = static_cast<int>(ri);
      }
    }
    if (chosen < 0) {
      stuck[bad] = 1;
      continue;
    }
    p.shrunk = true;
    p.region = rects[chosen];
  }
  plan.demand   = plan_demand(arch, nl, plan, x, y);
  plan.feasible = std::all_of(plan.demand.begin(), plan.demand.end(), [&](int d) { return d <= limit; });
  return plan;
}

ClockPenalty clock_penalty(const Architecture& arch, const Netlist& nl, std::span<const double> x,
                           std::span<const double> y, const ClockPlan& plan) {
  ClockPenalty out;
  out.grad_x.assign(nl.instances.size(), 0.0);
  out.grad_y.assign(nl.instances.size(), 0.0);
  for (const auto& p : plan.nets) {
    if (!p.shrunk) continue;
    SiteRect ext = site_extent(arch, p.region);
    for_each_sink(nl, p.net, [&](const Pin& pin) {
      double gx, gy;
      out.value += rect_distance2(ext, x[pin.inst] + pin.offset_x, y[pin.inst] + pin.offset_y, gx, gy);
      out.grad_x[pin.inst] += gx;
      out.grad_y[pin.inst] += gy;
    });
  }
  return out;
}

bool site_in_regions(const Architecture& arch, const ClockPlan& plan, std::span<const int> clock_nets, int sx,
                     int sy) {
  CrIndex cr = clock_region_of(arch, sx + 0.5, sy + 0.5);
  for (int n : clock_nets) {
    const auto* p = plan.find(n);
    if (p && p->shrunk && !p->region.contains(cr)) return false;
  }
  return true;
}

std::string dump_clock_plan(const Architecture& arch, const Netlist& nl, const ClockPlan& plan) {
  nlohmann::json j;
  j["feasible"] = plan.feasible;
  j["cr_limit"] = arch.clock.cr_limit;
  j["cr_cols"]  = arch.clock.cr_cols;
  j["cr_rows"]  = arch.clock.cr_rows;
  nlohmann::json grid = nlohmann::json::array();
  for (int r = 0; r < arch.clock.cr_rows; ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (int c = 0; c < arch.clock.cr_cols; ++c) {
      row.push_back(plan.demand.empty() ? 0 : plan.demand[flat_index(arch, CrIndex{c, r})]);
    }
    grid.push_back(row);
  }
  j["demand"] = grid;
  nlohmann::json nets = nlohmann::json::array();
  for (const auto& p : plan.nets) {
    nets.push_back({{"net", nl.nets[p.net].name},
                    {"shrunk", p.shrunk},
                    {"region", {p.region.c0, p.region.r0, p.region.c1, p.region.r1}}});
  }
  j["nets"] = nets;
  return j.dump(2) + "\n";
}

}  // namespace parf
