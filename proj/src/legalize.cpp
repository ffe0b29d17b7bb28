/**
 * @file   legalize.cpp
 */
#include "parf/legalize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "parf/wirelength.hpp"

namespace parf {

namespace {

double total_area(const Architecture& arch, InstKind k) {
  double a = 0.0;
  for (double v : arch.area[index_of(k)]) a += v;
  return a;
}

int site_hc(const Architecture& arch, int sx, int sy) {
  return flat_index(arch, half_column_of(arch, sx + 0.5, sy + 0.5));
}

CrRect grow(CrRect r, CrIndex c) {
  if (r.empty()) return {c.col, c.row, c.col, c.row};
  return {std::min(r.c0, c.col), std::min(r.r0, c.row), std::max(r.c1, c.col), std::max(r.r1, c.row)};
}

std::string site_str(int sx, int sy) { return "(" + std::to_string(sx) + "," + std::to_string(sy) + ")"; }

}  // namespace

// -- SiteOccupancy ------------------------------------------------------------

SiteOccupancy::SiteOccupancy(const Architecture& arch, const Netlist& netlist, const ClockPlan* plan)
    : arch_(arch), nl_(netlist), plan_(plan), clocks_(netlist.clock_nets_by_instance()) {
  slots_.resize(static_cast<std::size_t>(arch.num_sites()));
  for (int sy = 0; sy < arch.height; ++sy) {
    for (int sx = 0; sx < arch.width; ++sx) slots_[site(sx, sy)].assign(arch.site_slots(arch.site_type(sx)), -1);
  }
  mode_.assign(slots_.size(), SliceMode::kUnset);
  hc_nets_.resize(static_cast<std::size_t>(arch.num_hcs()));
  span_.resize(netlist.nets.size());
  cr_count_.assign(static_cast<std::size_t>(arch.num_crs()), 0);
}

int SiteOccupancy::slot_begin(InstKind k) const { return k == InstKind::kFf ? arch_.lut_slots : 0; }

int SiteOccupancy::slot_end(InstKind k, SiteType t) const {
  if (is_lut_like(k)) return arch_.lut_slots;
  if (k == InstKind::kFf) return arch_.lut_slots + arch_.ff_slots;
  return arch_.site_slots(t);
}

int SiteOccupancy::free_slots(int sx, int sy, InstKind kind) const {
  SiteType t = arch_.site_type(sx);
  if (!site_accepts(t, kind)) return 0;
  const auto& s = slots_[site(sx, sy)];
  int         n = 0;
  for (int k = slot_begin(kind); k < slot_end(kind, t); ++k) n += s[k] < 0;
  return n;
}

int SiteOccupancy::hc_count(int flat_hc) const { return static_cast<int>(hc_nets_[flat_hc].size()); }

bool SiteOccupancy::clock_ok(int inst, int sx, int sy) const {
  const auto& nets = clocks_[inst];
  if (nets.empty()) return true;
  const auto& hc    = hc_nets_[site_hc(arch_, sx, sy)];
  int         fresh = 0;
  for (int n : nets) {
    bool seen = std::any_of(hc.begin(), hc.end(), [n](const auto& e) { return e.first == n; });
    fresh += !seen;
  }
  if (static_cast<int>(hc.size()) + fresh > arch_.clock.hc_limit) return false;

  CrIndex            cr = clock_region_of(arch_, sx + 0.5, sy + 0.5);
  std::map<int, int> need;
  for (int n : nets) {
    CrRect old = span_[n], now = grow(old, cr);
    if (now == old) continue;
    for (int r = now.r0; r <= now.r1; ++r) {
      for (int c = now.c0; c <= now.c1; ++c) {
        if (!old.contains({c, r})) ++need[flat_index(arch_, CrIndex{c, r})];
      }
    }
  }
  for (auto [c, k] : need) {
    if (cr_count_[c] + k > arch_.clock.cr_limit) return false;
  }
  return true;
}

bool SiteOccupancy::can_place(int inst, int sx, int sy) const {
  const auto& in = nl_.instances[inst];
  SiteType    t  = arch_.site_type(sx);
  if (!site_accepts(t, in.kind) || free_slots(sx, sy, in.kind) == 0) return false;
  if (t == SiteType::kSliceM) {
    SliceMode m = mode_[site(sx, sy)];
    if (is_memory_lut(in.kind) && m == SliceMode::kLut) return false;
    if (in.kind == InstKind::kLut && m == SliceMode::kMem) return false;
  }
  if (plan_ && !site_in_regions(arch_, *plan_, clocks_[inst], sx, sy)) return false;
  return clock_ok(inst, sx, sy);
}

int SiteOccupancy::place(int inst, int sx, int sy, int slot) {
  const auto& in = nl_.instances[inst];
  SiteType    t  = arch_.site_type(sx);
  auto&       s  = slots_[site(sx, sy)];
  int         b = slot_begin(in.kind), e = slot_end(in.kind, t);
  if (slot < b || slot >= e || s[slot] >= 0) {
    slot = -1;
    for (int k = b; k < e && slot < 0; ++k) {
      if (s[k] < 0) slot = k;
    }
  }
  if (slot < 0) {
    throw LegalizationError("legalization: site " + site_str(sx, sy) + " has no free slot for '" + in.name + "'");
  }
  s[slot] = inst;
  if (t == SiteType::kSliceM) {
    if (is_memory_lut(in.kind)) mode_[site(sx, sy)] = SliceMode::kMem;
    if (in.kind == InstKind::kLut) mode_[site(sx, sy)] = SliceMode::kLut;
  }
  if (!clocks_[inst].empty()) {
    auto&   hc = hc_nets_[site_hc(arch_, sx, sy)];
    CrIndex cr = clock_region_of(arch_, sx + 0.5, sy + 0.5);
    for (int n : clocks_[inst]) {
      auto it = std::find_if(hc.begin(), hc.end(), [n](const auto& p) { return p.first == n; });
      if (it == hc.end()) {
        hc.emplace_back(n, 1);
      } else {
        ++it->second;
      }
      CrRect old = span_[n], now = grow(old, cr);
      for (int r = now.r0; r <= now.r1; ++r) {
        for (int c = now.c0; c <= now.c1; ++c) {
          if (!old.contains({c, r})) ++cr_count_[flat_index(arch_, CrIndex{c, r})];
        }
      }
      span_[n] = now;
    }
  }
  return slot;
}

// -- legalization ---------------------------------------------------------------

LegalizeResult legalize_direct(const Architecture& arch, const Netlist& netlist, const PlacementState& input,
                               const ClockPlan* plan) {
  const int      n = netlist.num_instances();
  SiteOccupancy  occ(arch, netlist, plan);
  LegalizeResult res;
  res.state = input;
  if (res.state.inflate.size() != static_cast<std::size_t>(n)) res.state.inflate.assign(n, 1.0);
  res.state.site_assign.emplace(static_cast<std::size_t>(n));
  auto& assign = *res.state.site_assign;
  res.displacement.assign(n, 0.0);

  auto preferred = [&](int i, int sx, int sy) {
    if (!input.site_assign || input.site_assign->size() != static_cast<std::size_t>(n)) return -1;
    const auto& a = (*input.site_assign)[i];
    return a.x == sx && a.y == sy ? a.slot : -1;
  };

  for (int i = 0; i < n; ++i) {
    const auto& in = netlist.instances[i];
    if (!in.fixed) continue;
    int sx = static_cast<int>(std::floor(in.fixed_x)), sy = static_cast<int>(std::floor(in.fixed_y));
    if (sx < 0 || sx >= arch.width || sy < 0 || sy >= arch.height || !site_accepts(arch.site_type(sx), in.kind)) {
      throw LegalizationError("legalization: fixed instance '" + in.name + "' has no valid site at " +
                              site_str(sx, sy));
    }
    assign[i] = {sx, sy, occ.place(i, sx, sy, preferred(i, sx, sy))};
  }

  std::vector<int> order;
  for (int i = 0; i < n; ++i) {
    if (!netlist.instances[i].fixed) order.push_back(i);
  }
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return total_area(arch, netlist.instances[a].kind) > total_area(arch, netlist.instances[b].kind);
  });

  const int max_d = arch.width + arch.height;
  for (int i : order) {
    double cx = std::clamp(input.x[i], 0.0, std::nextafter(static_cast<double>(arch.width), 0.0));
    double cy = std::clamp(input.y[i], 0.0, std::nextafter(static_cast<double>(arch.height), 0.0));
    int    bx = static_cast<int>(std::floor(cx)), by = static_cast<int>(std::floor(cy));
    int    best_x = -1, best_y = -1;
    double best_e = std::numeric_limits<double>::infinity();
    for (int d = 0; d <= max_d && best_x < 0; ++d) {
      for (int dx = -d; dx <= d; ++dx) {
        int sx = bx + dx;
        if (sx < 0 || sx >= arch.width || !site_accepts(arch.site_type(sx), netlist.instances[i].kind)) continue;
        int rem = d - std::abs(dx);
        for (int dy : {-rem, rem}) {
          int sy = by + dy;
          if (sy < 0 || sy >= arch.height || !occ.can_place(i, sx, sy)) continue;
          double ex = sx + 0.5 - cx, ey = sy + 0.5 - cy, e = ex * ex + ey * ey;
          if (e < best_e || (e == best_e && (sy < best_y || (sy == best_y && sx < best_x)))) {
            best_e = e;
            best_x = sx;
            best_y = sy;
          }
          if (rem == 0) break;
        }
      }
    }
    if (best_x < 0) {
      throw LegalizationError("legalization: no feasible site for instance '" + netlist.instances[i].name + "'");
    }
    assign[i]          = {best_x, best_y, occ.place(i, best_x, best_y, preferred(i, best_x, best_y))};
    res.displacement[i] = std::abs(best_x + 0.5 - input.x[i]) + std::abs(best_y + 0.5 - input.y[i]);
  }
  snap_to_sites(res.state);
  for (double d : res.displacement) {
    res.max_displacement = std::max(res.max_displacement, d);
    res.mean_displacement += d;
  }
  if (!order.empty()) res.mean_displacement /= static_cast<double>(order.size());
  return res;
}

// -- checking -------------------------------------------------------------------

std::vector<int> legal_cr_demand(const Architecture& arch, const Netlist& netlist, const PlacementState& state) {
  std::vector<double> x(state.x), y(state.y);
  if (state.site_assign) {
    for (std::size_t i = 0; i < x.size(); ++i) {
      const auto& a = (*state.site_assign)[i];
      if (a.x < 0) continue;
      x[i] = a.x + 0.5;
      y[i] = a.y + 0.5;
    }
  }
  return clock_demand(arch, netlist, x, y);
}

std::vector<int> legal_hc_demand(const Architecture& arch, const Netlist& netlist, const PlacementState& state) {
  std::vector<std::set<int>> nets(static_cast<std::size_t>(arch.num_hcs()));
  auto                       clocks = netlist.clock_nets_by_instance();
  for (int i = 0; i < netlist.num_instances(); ++i) {
    if (clocks[i].empty()) continue;
    int hc;
    if (state.site_assign && (*state.site_assign)[i].x >= 0) {
      hc = site_hc(arch, (*state.site_assign)[i].x, (*state.site_assign)[i].y);
    } else {
      hc = flat_index(arch, half_column_of(arch, state.x[i], state.y[i]));
    }
    nets[hc].insert(clocks[i].begin(), clocks[i].end());
  }
  std::vector<int> out;
  for (const auto& s : nets) out.push_back(static_cast<int>(s.size()));
  return out;
}

std::vector<std::string> validate_legality(const PlacementState& state, const Architecture& arch,
                                           const Netlist& netlist) {
  std::vector<std::string> out;
  const int                n = netlist.num_instances();
  if (!state.site_assign || state.site_assign->size() != static_cast<std::size_t>(n)) {
    out.emplace_back("assignment: placement has no site assignment for every instance");
    return out;
  }
  const auto&                          assign = *state.site_assign;
  std::map<std::pair<int, int>, int>   by_slot;
  std::vector<std::array<int, 3>>      counts(static_cast<std::size_t>(arch.num_sites()), {0, 0, 0});
  std::vector<int>                     mem_at(static_cast<std::size_t>(arch.num_sites()), -1);
  std::vector<int>                     lut_at(static_cast<std::size_t>(arch.num_sites()), -1);
  for (int i = 0; i < n; ++i) {
    const auto& in = netlist.instances[i];
    const auto& a  = assign[i];
    if (a.x < 0 || a.y < 0 || a.x >= arch.width || a.y >= arch.height) {
      out.push_back("assignment: instance '" + in.name + "' has no site inside the layout");
      continue;
    }
    if (static_cast<int>(std::floor(state.x[i])) != a.x || static_cast<int>(std::floor(state.y[i])) != a.y) {
      out.push_back("position: instance '" + in.name + "' is not inside its site " + site_str(a.x, a.y));
    }
    SiteType t = arch.site_type(a.x);
    if (!site_accepts(t, in.kind)) {
      out.push_back("site-type: instance '" + in.name + "' (" + std::string(to_string(in.kind)) + ") cannot use " +
                    std::string(to_string(t)) + " site " + site_str(a.x, a.y));
      continue;
    }
    int b = 0, e = arch.site_slots(t);
    if (is_lut_like(in.kind)) e = arch.lut_slots;
    if (in.kind == InstKind::kFf) b = arch.lut_slots;
    if (a.slot < b || a.slot >= e) {
      out.push_back("slot: instance '" + in.name + "' uses slot " + std::to_string(a.slot) + " of site " +
                    site_str(a.x, a.y) + " outside its range");
    }
    int s = arch.site_index(a.x, a.y);
    auto [it, fresh] = by_slot.emplace(std::make_pair(s, a.slot), i);
    if (!fresh) {
      out.push_back("overlap: instances '" + netlist.instances[it->second].name + "' and '" + in.name +
                    "' share slot " + std::to_string(a.slot) + " of site " + site_str(a.x, a.y));
    }
    counts[s][is_lut_like(in.kind) ? 0 : in.kind == InstKind::kFf ? 1 : 2]++;
    if (is_memory_lut(in.kind)) mem_at[s] = i;
    if (in.kind == InstKind::kLut) lut_at[s] = i;
    if (in.fixed && (a.x != static_cast<int>(std::floor(in.fixed_x)) ||
                     a.y != static_cast<int>(std::floor(in.fixed_y)))) {
      out.push_back("fixed: instance '" + in.name + "' moved away from its fixed site");
    }
  }
  for (int sy = 0; sy < arch.height; ++sy) {
    for (int sx = 0; sx < arch.width; ++sx) {
      int      s = arch.site_index(sx, sy);
      SiteType t = arch.site_type(sx);
      int      lim[3] = {arch.lut_slots, arch.ff_slots, is_slice(t) ? 0 : arch.site_slots(t)};
      if (!is_slice(t)) lim[0] = lim[1] = 0;
      const char* what[3] = {"LUT-like", "FF", "block"};
      for (int k = 0; k < 3; ++k) {
        if (counts[s][k] > lim[k]) {
          out.push_back("capacity: site " + site_str(sx, sy) + " holds " + std::to_string(counts[s][k]) + " " +
                        what[k] + " instances, limit " + std::to_string(lim[k]));
        }
      }
      if (mem_at[s] >= 0 && lut_at[s] >= 0) {
        out.push_back("mode: SLICEM site " + site_str(sx, sy) + " in LUT mode holds memory LUT '" +
                      netlist.instances[mem_at[s]].name + "'");
      }
    }
  }
  if (!out.empty()) return out;
  auto hc = legal_hc_demand(arch, netlist, state);
  for (std::size_t h = 0; h < hc.size(); ++h) {
    if (hc[h] > arch.clock.hc_limit) {
      out.push_back("hc-limit: half column " + std::to_string(h) + " has " + std::to_string(hc[h]) +
                    " clock nets, limit " + std::to_string(arch.clock.hc_limit));
    }
  }
  auto cr = legal_cr_demand(arch, netlist, state);
  for (std::size_t c = 0; c < cr.size(); ++c) {
    if (cr[c] > arch.clock.cr_limit) {
      out.push_back("cr-limit: clock region " + std::to_string(c) + " has " + std::to_string(cr[c]) +
                    " clock nets, limit " + std::to_string(arch.clock.cr_limit));
    }
  }
  return out;
}

// -- assignment -----------------------------------------------------------------

std::vector<int> solve_assignment(const std::vector<std::vector<double>>& cost) {
  // shortest augmenting path with potentials, 1-based internally
  const int           n   = static_cast<int>(cost.size());
  const double        inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0);
  std::vector<int>    p(n + 1, 0), way(n + 1, 0);
  for (int i = 1; i <= n; ++i) {
    p[0]    = i;
    int j0  = 0;
    std::vector<double> minv(n + 1, inf);
    std::vector<char>   used(n + 1, 0);
    do {
      used[j0]    = 1;
      int    i0   = p[j0], j1 = 0;
      double delta = inf;
      for (int j = 1; j <= n; ++j) {
        if (used[j]) continue;
        double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j]  = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1    = j;
        }
      }
      for (int j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      int j1 = way[j0];
      p[j0]  = p[j1];
      j0     = j1;
    } while (j0 != 0);
  }
  std::vector<int> col(n, -1);
  for (int j = 1; j <= n; ++j) {
    if (p[j] > 0) col[p[j] - 1] = j - 1;
  }
  return col;
}

// -- independent set matching ------------------------------------------------------

IsmResult ism_refine([[maybe_unused]] const Architecture& arch, const Netlist& netlist, const PlacementState& legal,
                     const IsmConfig& config) {
  IsmResult res;
  res.state = legal;
  if (!res.state.site_assign) throw LegalizationError("legalization: detailed placement needs a legal input");
  auto&     st     = res.state;
  auto&     assign = *st.site_assign;
  const int n      = netlist.num_instances();

  std::vector<std::vector<int>> signal_nets(n);
  for (int i = 0; i < n; ++i) {
    for (int p : netlist.instances[i].pins) {
      int net = netlist.pins[p].net;
      if (net < 0 || netlist.nets[net].is_clock) continue;
      auto& v = signal_nets[i];
      if (std::find(v.begin(), v.end(), net) == v.end()) v.push_back(net);
    }
  }

  auto                                              clocks = netlist.clock_nets_by_instance();
  std::map<std::pair<int, std::vector<int>>, std::vector<int>> groups;
  for (int i = 0; i < n; ++i) {
    const auto& in = netlist.instances[i];
    if (in.fixed || assign[i].x < 0) continue;
    groups[{index_of(in.kind), clocks[i]}].push_back(i);
  }

  res.hpwl.push_back(hpwl(st.x, st.y, netlist));
  std::vector<int> net_stamp(netlist.nets.size(), -1);
  int              stamp = 0;
  for (int round = 0; round < config.rounds; ++round) {
    std::mt19937_64   rng(config.seed * 1000003ULL + static_cast<std::uint64_t>(round));
    std::vector<char> used(n, 0);
    for (auto& [key, members] : groups) {
      std::vector<int> seeds(members);
      std::shuffle(seeds.begin(), seeds.end(), rng);
      for (int s : seeds) {
        if (used[s]) continue;
        std::vector<int> cand;
        for (int m : members) {
          if (!used[m]) cand.push_back(m);
        }
        auto dist = [&](int m) { return std::abs(assign[m].x - assign[s].x) + std::abs(assign[m].y - assign[s].y); };
        std::stable_sort(cand.begin(), cand.end(), [&](int a, int b) { return dist(a) < dist(b); });
        ++stamp;
        std::vector<int> set;
        for (int c : cand) {
          if (static_cast<int>(set.size()) >= config.max_set) break;
          bool clash = false;
          for (int net : signal_nets[c]) clash = clash || net_stamp[net] == stamp;
          if (clash) continue;
          for (int net : signal_nets[c]) net_stamp[net] = stamp;
          set.push_back(c);
        }
        for (int m : set) used[m] = 1;
        if (set.size() < 2) continue;

        const int                        k = static_cast<int>(set.size());
        std::vector<std::vector<double>> cost(k, std::vector<double>(k, 0.0));
        for (int a = 0; a < k; ++a) {
          int    i = set[a];
          double ox = st.x[i], oy = st.y[i];
          for (int b = 0; b < k; ++b) {
            st.x[i] = assign[set[b]].x + 0.5;
            st.y[i] = assign[set[b]].y + 0.5;
            for (int net : signal_nets[i]) cost[a][b] += hpwl_net(st.x, st.y, netlist, net);
          }
          st.x[i] = ox;
          st.y[i] = oy;
        }
        auto   perm = solve_assignment(cost);
        double before = 0.0, after = 0.0;
        for (int a = 0; a < k; ++a) {
          before += cost[a][a];
          after += cost[a][perm[a]];
        }
        if (!(after < before - 1e-9)) continue;
        std::vector<SiteSlot> old(k);
        for (int a = 0; a < k; ++a) old[a] = assign[set[a]];
        for (int a = 0; a < k; ++a) {
          int i     = set[a];
          assign[i] = old[perm[a]];
          st.x[i]   = assign[i].x + 0.5;
          st.y[i]   = assign[i].y + 0.5;
          res.moved += perm[a] != a;
        }
      }
    }
    res.hpwl.push_back(hpwl(st.x, st.y, netlist));
  }
  return res;
}

}  // namespace parf
