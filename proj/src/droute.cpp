/**
 * @file   droute.cpp
 */
#include "parf/droute.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <tuple>
#include <unordered_map>
#include <cstdlib>

namespace parf {

namespace {

std::string pin_node_name(const Architecture& arch, const Instance& inst, const PinRole& role, int slot) {
  switch (inst.kind) {
    case InstKind::kLut:
    case InstKind::kDram:
    case InstKind::kShift: return "L" + std::to_string(slot) + (role.output ? "_O" : "_IN");
    case InstKind::kFf: {
      std::string f = "F" + std::to_string(slot - ff_slot_base(arch));
      return f + (role.output ? "_Q" : role.clock ? "_CK" : "_D");
    }
    case InstKind::kDsp:
    case InstKind::kBram: return "S0_" + std::string(role.output ? "O" : "I") + std::to_string(role.index);
    case InstKind::kIo: return "S" + std::to_string(slot) + (role.output ? "_O0" : "_I0");
  }
  return {};
}

int manhattan_sites(int width, int a, int b) { return std::abs(a % width - b % width) + std::abs(a / width - b / width); }

}  // namespace

int pin_vertex(const RoutingResourceGraph& rrg, const Architecture& arch, const Netlist& netlist,
               const PlacementState& state, int pin) {
  if (!state.site_assign) throw std::invalid_argument("pin_vertex: placement has no site assignment");
  const Pin&      p    = netlist.pins[static_cast<std::size_t>(pin)];
  const Instance& inst = netlist.instances[static_cast<std::size_t>(p.inst)];
  const SiteSlot& ss   = (*state.site_assign)[static_cast<std::size_t>(p.inst)];
  int             v    = rrg.site_node(ss.x, ss.y, pin_node_name(arch, inst, p.role, ss.slot));
  if (v < 0) throw std::invalid_argument("pin " + inst.name + "." + p.name + " has no routing node at its site");
  return v;
}

std::vector<DrNet> detailed_nets(const RoutingResourceGraph& rrg, const Architecture& arch, const Netlist& netlist,
                                 const PlacementState& state) {
  std::vector<DrNet> out(static_cast<std::size_t>(netlist.num_nets()));
  for (int n = 0; n < netlist.num_nets(); ++n) {
    const Net& net = netlist.nets[static_cast<std::size_t>(n)];
    if (net.driver < 0) continue;
    DrNet d;
    d.source = pin_vertex(rrg, arch, netlist, state, net.driver);
    for (int p : net.pins) {
      if (p == net.driver) continue;
      int  v  = pin_vertex(rrg, arch, netlist, state, p);
      auto it = std::find(d.sinks.begin(), d.sinks.end(), v);
      if (it == d.sinks.end()) {
        d.sinks.push_back(v);
        d.weight.push_back(1);
      } else {
        ++d.weight[static_cast<std::size_t>(it - d.sinks.begin())];
      }
    }
    if (!d.sinks.empty()) out[static_cast<std::size_t>(n)] = std::move(d);
  }
  return out;
}

void rearrange_pins(RoutingResourceGraph& rrg, const Architecture& arch, const Netlist& netlist,
                    const PlacementState& state) {
  if (!state.site_assign) throw std::invalid_argument("rearrange_pins: placement has no site assignment");
  for (int s = 0; s < rrg.width * rrg.height; ++s) {
    if (!is_slice(static_cast<SiteType>(rrg.site_type_index[s]))) continue;
    for (int j = 0; j < arch.lut_slots; ++j) rrg.capacity[rrg.site_node(s % rrg.width, s / rrg.width, "L" + std::to_string(j) + "_IN")] = 0;
  }
  for (int i = 0; i < netlist.num_instances(); ++i) {
    const Instance& inst = netlist.instances[static_cast<std::size_t>(i)];
    if (!is_lut_like(inst.kind)) continue;
    const SiteSlot& ss = (*state.site_assign)[static_cast<std::size_t>(i)];
    int             v  = rrg.site_node(ss.x, ss.y, "L" + std::to_string(ss.slot) + "_IN");
    if (v >= 0) rrg.capacity[v] = lut_group_inputs(inst.kind, inst.lut_inputs);
  }
}

SearchRegion expand_search_space(int width, int height, std::span<const int> corridor, int attempt) {
  SearchRegion r;
  r.margin = attempt >= 30 ? INT_MAX : 1 << attempt;
  if (r.margin >= std::max(width, height) || corridor.empty()) {
    r.all = true;
    return r;
  }
  std::vector<char> mark(static_cast<std::size_t>(width * height), 0);
  for (int s : corridor) mark[static_cast<std::size_t>(s)] = 1;
  // separable Chebyshev dilation: rows, then columns
  auto dilate = [&](int n_lines, int len, auto at) {
    std::vector<char> line(static_cast<std::size_t>(len));
    for (int l = 0; l < n_lines; ++l) {
      int last = INT_MIN / 2;
      for (int i = 0; i < len; ++i) {
        if (at(l, i)) last = i;
        line[i] = i - last <= r.margin;
      }
      last = INT_MAX / 2;
      for (int i = len - 1; i >= 0; --i) {
        if (at(l, i)) last = i;
        line[i] = line[i] || last - i <= r.margin;
      }
      for (int i = 0; i < len; ++i) at(l, i) = line[i];
    }
  };
  dilate(height, width, [&](int y, int x) -> char& { return mark[static_cast<std::size_t>(y * width + x)]; });
  dilate(width, height, [&](int x, int y) -> char& { return mark[static_cast<std::size_t>(y * width + x)]; });
  r.site = std::move(mark);
  return r;
}

std::vector<int> reorder_nets(std::span<const NetStats> stats) {
  std::vector<int> order(stats.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    const auto &x = stats[static_cast<std::size_t>(a)], &y = stats[static_cast<std::size_t>(b)];
    return std::tie(x.failures, x.overuse, x.bbox) > std::tie(y.failures, y.overuse, y.bbox);
  });
  return order;
}

namespace {

class Router {
 public:
  Router(RoutingResourceGraph& g, std::span<const DrNet> nets, std::span<const std::vector<int>> corridors,
         const DrConfig& cfg)
      : g_(g), nets_(nets), corridors_(corridors), cfg_(cfg) {
    auto n = static_cast<std::size_t>(g.num_vertices());
    dist_.assign(n, 0.0);
    prev_.assign(n, -1);
    seen_.assign(n, 0);
    closed_.assign(n, 0);
    tree_mark_.assign(n, 0);
    tree_idx_.assign(n, -1);
  }

  DetailedRouteResult run() {
    const int           nn = static_cast<int>(nets_.size());
    DetailedRouteResult res;
    res.trees.resize(static_cast<std::size_t>(nn));
    res.attempts.assign(static_cast<std::size_t>(nn), 0);
    std::vector<NetStats> stats(static_cast<std::size_t>(nn));
    std::vector<char>     hard_fail(static_cast<std::size_t>(nn), 0);
    for (int n = 0; n < nn; ++n) {
      res.trees[n].net = n;
      stats[n].bbox    = bbox(nets_[n]);
    }
    double pfac = cfg_.pfac0;
    for (int it = 1; it <= cfg_.max_iters; ++it) {
      res.iterations = it;
      // every net is ripped up and rerouted, legal ones included, so that
      // nets next to a conflict can give way
      for (int n : reorder_nets(stats)) {
        if (nets_[n].source < 0) continue;
        hard_fail[n] = !route_with_expansion(n, pfac, res.trees[n], res.attempts[n], stats[n]);
      }
      int over = 0;
      for (int v = 0; v < g_.num_vertices(); ++v) {
        int o = g_.usage[v] - g_.capacity[v];
        if (o <= 0) continue;
        over          += o;
        g_.history[v] += cfg_.hfac * o;
      }
      res.overuse_history.push_back(over);
      bool any_hard = std::find(hard_fail.begin(), hard_fail.end(), 1) != hard_fail.end();
      if (over == 0 && !any_hard) {
        res.success = true;
        break;
      }
      for (int n = 0; n < nn; ++n) {
        int hits = 0;
        for (int v : res.trees[n].vertices) hits += g_.usage[v] > g_.capacity[v];
        if (hits == 0 && !hard_fail[n]) continue;
        ++stats[n].failures;
        stats[n].overuse += hits;
        if (!expand_done(res.attempts[n])) ++res.attempts[n];
      }
      pfac = std::min(pfac * cfg_.pfac_grow, cfg_.pfac_max);
    }
    for (int n = 0; n < nn; ++n) {
      bool bad = hard_fail[n];
      for (int v : res.trees[n].vertices) bad = bad || g_.usage[v] > g_.capacity[v];
      if (bad) res.failed_nets.push_back(n);
    }
    res.visited = visited_;
    res.rwl     = routed_wirelength(g_, res.trees);
    return res;
  }

 private:
  int bbox(const DrNet& n) const {
    if (n.source < 0) return 0;
    int x0 = INT_MAX, x1 = INT_MIN, y0 = INT_MAX, y1 = INT_MIN;
    auto add = [&](int v) {
      int s = g_.site_a[v];
      x0 = std::min(x0, s % g_.width), x1 = std::max(x1, s % g_.width);
      y0 = std::min(y0, s / g_.width), y1 = std::max(y1, s / g_.width);
    };
    add(n.source);
    for (int v : n.sinks) add(v);
    return x1 - x0 + y1 - y0;
  }

  bool expand_done(int attempt) const {
    return attempt >= 30 || (1 << attempt) >= std::max(g_.width, g_.height);
  }

  int weight_of(const DrNet& n, int v) const {
    if (g_.kind[v] != NodeKind::kSink) return 1;
    auto it = std::find(n.sinks.begin(), n.sinks.end(), v);
    return it == n.sinks.end() ? 1 : n.weight[static_cast<std::size_t>(it - n.sinks.begin())];
  }

  void rip_up(int n, RouteTree& t) {
    for (int v : t.vertices) g_.usage[v] -= weight_of(nets_[n], v);
    t.vertices.clear();
    t.parent.clear();
  }

  bool route_with_expansion(int n, double pfac, RouteTree& tree, int& attempt, NetStats& st) {
    const bool guided = !corridors_.empty();
    for (;;) {
      SearchRegion region;
      if (guided) region = expand_search_space(g_.width, g_.height, corridors_[n], attempt);
      else region.all = true;
      rip_up(n, tree);
      if (route_net(n, pfac, region, tree)) return true;
      if (region.all) return false;
      ++st.failures;
      ++attempt;
    }
  }

  double base_cost(int v) const {
    switch (g_.kind[v]) {
      case NodeKind::kWire: return 1.0;
      case NodeKind::kLocal: return 0.5;
      default: return 0.1;
    }
  }

  int dist_to(int v, int ts) const {
    return std::min(manhattan_sites(g_.width, g_.site_a[v], ts), manhattan_sites(g_.width, g_.site_b[v], ts));
  }

  bool route_net(int n, double pfac, const SearchRegion& region, RouteTree& tree) {
    const DrNet& net = nets_[n];
    ++tree_stamp_;
    auto add_vertex = [&](int v, int parent_idx, int w) {
      tree_mark_[v] = tree_stamp_;
      tree_idx_[v]  = static_cast<int>(tree.vertices.size());
      tree.vertices.push_back(v);
      tree.parent.push_back(parent_idx);
      g_.usage[v] += w;
    };
    add_vertex(net.source, -1, 1);

    std::vector<int> order(net.sinks.size());
    std::iota(order.begin(), order.end(), 0);
    const int src_site = g_.site_a[net.source];
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      int da = manhattan_sites(g_.width, src_site, g_.site_a[net.sinks[a]]);
      int db = manhattan_sites(g_.width, src_site, g_.site_a[net.sinks[b]]);
      return std::tie(da, net.sinks[a]) < std::tie(db, net.sinks[b]);
    });
    auto allowed = [&](int v) {
      return region.all || (region.site[static_cast<std::size_t>(g_.site_a[v])] &&
                            region.site[static_cast<std::size_t>(g_.site_b[v])]);
    };

    using Item = std::tuple<double, int>;
    for (int k : order) {
      const int target = net.sinks[k], tw = net.weight[k], ts = g_.site_a[target];
      if (g_.capacity[target] <= 0 || !allowed(target)) return false;
      ++search_stamp_;
      std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
      for (int v : tree.vertices) {
        seen_[v]  = search_stamp_;
        dist_[v]  = 0.0;
        prev_[v]  = -1;
        open.emplace(static_cast<double>(dist_to(v, ts)), v);
      }
      bool found = false;
      while (!open.empty()) {
        auto [f, v] = open.top();
        open.pop();
        if (closed_[v] == search_stamp_) continue;
        closed_[v] = search_stamp_;
        ++visited_;
        if (v == target) {
          found = true;
          break;
        }
        for (int w : g_.out(v)) {
          if (g_.kind[w] == NodeKind::kSink && w != target) continue;
          if (g_.capacity[w] <= 0 || closed_[w] == search_stamp_ || tree_mark_[w] == tree_stamp_) continue;
          if (!allowed(w)) continue;
          int    demand = w == target ? tw : 1;
          double over   = std::max(0, g_.usage[w] + demand - g_.capacity[w]);
          double c      = base_cost(w) * (1.0 + g_.history[w]) * (1.0 + over * pfac);
          double d      = dist_[v] + c;
          if (seen_[w] == search_stamp_ && d >= dist_[w]) continue;
          seen_[w] = search_stamp_;
          dist_[w] = d;
          prev_[w] = v;
          open.emplace(d + dist_to(w, ts), w);
        }
      }
      if (!found) return false;
      std::vector<int> path;
      for (int v = target; tree_mark_[v] != tree_stamp_; v = prev_[v]) path.push_back(v);
      int parent = tree_idx_[prev_[path.back()]];
      for (auto it = path.rbegin(); it != path.rend(); ++it) {
        int v = *it;
        add_vertex(v, parent, v == target ? tw : 1);
        parent = tree_idx_[v];
      }
    }
    return true;
  }

  RoutingResourceGraph&             g_;
  std::span<const DrNet>            nets_;
  std::span<const std::vector<int>> corridors_;
  DrConfig                          cfg_;
  std::vector<double>               dist_;
  std::vector<int>                  prev_, seen_, closed_, tree_mark_, tree_idx_;
  int                               search_stamp_ = 0, tree_stamp_ = 0;
  long long                         visited_      = 0;
};

}  // namespace

DetailedRouteResult route_detailed(RoutingResourceGraph& rrg, std::span<const DrNet> nets,
                                   std::span<const std::vector<int>> corridors, const DrConfig& config) {
  if (!corridors.empty() && corridors.size() != nets.size())
    throw std::invalid_argument("route_detailed: one corridor per net required");
  return Router(rrg, nets, corridors, config).run();
}

std::vector<std::vector<int>> guide_corridors(const RoutingResourceGraph& rrg, std::span<const DrNet> nets,
                                              std::span<const RouteGuide> guides) {
  std::vector<std::vector<int>> out(nets.size());
  for (std::size_t n = 0; n < nets.size(); ++n) {
    auto& c = out[n];
    if (n < guides.size()) c = guides[n].vertices;
    if (nets[n].source >= 0) {
      c.push_back(rrg.site_a[nets[n].source]);
      for (int v : nets[n].sinks) c.push_back(rrg.site_a[v]);
    }
    std::sort(c.begin(), c.end());
    c.erase(std::unique(c.begin(), c.end()), c.end());
  }
  return out;
}

std::vector<std::string> validate_routes(const RoutingResourceGraph& rrg, std::span<const DrNet> nets,
                                         std::span<const RouteTree> trees) {
  std::vector<std::string> out;
  if (trees.size() != nets.size()) {
    out.push_back("expected " + std::to_string(nets.size()) + " trees, got " + std::to_string(trees.size()));
    return out;
  }
  std::vector<int> use(static_cast<std::size_t>(rrg.num_vertices()), 0), owner(use.size(), -1);
  std::vector<int> mark(use.size(), -1);
  for (std::size_t n = 0; n < nets.size(); ++n) {
    const DrNet&     net = nets[n];
    const RouteTree& t   = trees[n];
    std::string      tag = "net " + std::to_string(n) + ": ";
    if (net.source < 0) {
      if (!t.vertices.empty()) out.push_back(tag + "tree for a net with nothing to route");
      continue;
    }
    if (t.vertices.empty() || t.vertices.front() != net.source || t.parent.size() != t.vertices.size() ||
        t.parent.front() != -1) {
      out.push_back(tag + "root is not the driver pin");
      continue;
    }
    for (std::size_t i = 0; i < t.vertices.size(); ++i) {
      int v = t.vertices[i];
      if (v < 0 || v >= rrg.num_vertices()) {
        out.push_back(tag + "vertex out of range");
        continue;
      }
      if (mark[v] == static_cast<int>(n)) out.push_back(tag + "vertex " + rrg.id(v) + " repeated");
      mark[v] = static_cast<int>(n);
      if (i > 0) {
        int p = t.parent[i];
        if (p < 0 || p >= static_cast<int>(i)) out.push_back(tag + "bad parent at " + rrg.id(v));
        else if (!rrg.has_edge(t.vertices[p], v))
          out.push_back(tag + "connectivity: no edge " + rrg.id(t.vertices[p]) + " -> " + rrg.id(v));
      }
      auto it = std::find(net.sinks.begin(), net.sinks.end(), v);
      use[v] += it == net.sinks.end() ? 1 : net.weight[static_cast<std::size_t>(it - net.sinks.begin())];
      if (owner[v] >= 0 && owner[v] != static_cast<int>(n) &&
          !(rrg.kind[v] == NodeKind::kSink && rrg.capacity[v] > 1))
        out.push_back(tag + "shares " + rrg.id(v) + " with net " + std::to_string(owner[v]));
      owner[v] = static_cast<int>(n);
    }
    for (int s : net.sinks)
      if (mark[s] != static_cast<int>(n)) out.push_back(tag + "sink " + rrg.id(s) + " not reached");
  }
  for (int v = 0; v < rrg.num_vertices(); ++v)
    if (use[v] > rrg.capacity[v])
      out.push_back("capacity: " + rrg.id(v) + " used " + std::to_string(use[v]) + " > " +
                    std::to_string(rrg.capacity[v]));
  return out;
}

int routed_wirelength(const RoutingResourceGraph& rrg, std::span<const RouteTree> trees) {
  int w = 0;
  for (const auto& t : trees)
    for (int v : t.vertices) w += rrg.is_wire(v);
  return w;
}

std::uint64_t permute_truth_table(std::uint64_t table, int k, std::span<const int> phys_of) {
  std::uint64_t out = 0;
  for (unsigned bp = 0; bp < (1u << k); ++bp) {
    unsigned b = 0;
    for (int p = 0; p < k; ++p) b |= ((bp >> phys_of[p]) & 1u) << p;
    out |= static_cast<std::uint64_t>(evaluate_lut(table, b)) << bp;
  }
  return out;
}

RewriteResult rewrite_truth_tables(const RoutingResourceGraph& rrg, const Architecture& arch, const Netlist& netlist,
                                   const PlacementState& state, std::span<const RouteTree> trees) {
  RewriteResult res{netlist, std::vector<std::vector<int>>(static_cast<std::size_t>(netlist.num_instances()))};
  for (int i = 0; i < netlist.num_instances(); ++i) {
    const Instance& inst = netlist.instances[static_cast<std::size_t>(i)];
    if (inst.kind != InstKind::kLut) continue;
    const int k = inst.lut_inputs;
    // key: (vertex the net arrives from, logical index); unrouted inputs last
    std::vector<std::pair<int, int>> key(static_cast<std::size_t>(k));
    for (int p = 0; p < k; ++p) key[p] = {INT_MAX, p};
    for (int pid : inst.pins) {
      const Pin& pin = netlist.pins[static_cast<std::size_t>(pid)];
      if (pin.role.output || pin.net < 0 || static_cast<std::size_t>(pin.net) >= trees.size()) continue;
      int         g = pin_vertex(rrg, arch, netlist, state, pid);
      const auto& t = trees[static_cast<std::size_t>(pin.net)];
      for (std::size_t j = 1; j < t.vertices.size(); ++j)
        if (t.vertices[j] == g) key[pin.role.index].first = t.vertices[static_cast<std::size_t>(t.parent[j])];
    }
    std::vector<int> by_rank(static_cast<std::size_t>(k));
    std::iota(by_rank.begin(), by_rank.end(), 0);
    std::sort(by_rank.begin(), by_rank.end(), [&](int a, int b) { return key[a] < key[b]; });
    auto& phys = res.phys_of[static_cast<std::size_t>(i)];
    phys.assign(static_cast<std::size_t>(k), 0);
    for (int r = 0; r < k; ++r) phys[by_rank[r]] = r;
    res.netlist.instances[static_cast<std::size_t>(i)].truth_table = permute_truth_table(inst.truth_table, k, phys);
  }
  return res;
}

std::vector<NetRoute> export_routes(const RoutingResourceGraph& rrg, const Netlist& netlist,
                                    std::span<const RouteTree> trees) {
  std::vector<NetRoute> out;
  for (std::size_t n = 0; n < trees.size(); ++n) {
    const auto& t = trees[n];
    if (t.vertices.size() < 2) continue;
    std::vector<std::vector<int>> kids(t.vertices.size());
    for (std::size_t i = 1; i < t.vertices.size(); ++i) kids[static_cast<std::size_t>(t.parent[i])].push_back(static_cast<int>(i));
    NetRoute r;
    r.net = netlist.nets[n].name;
    std::vector<int> stack{0};
    while (!stack.empty()) {
      int i = stack.back();
      stack.pop_back();
      for (auto it = kids[i].rbegin(); it != kids[i].rend(); ++it) stack.push_back(*it);
      if (i > 0) r.edges.emplace_back(rrg.id(t.vertices[static_cast<std::size_t>(t.parent[i])]), rrg.id(t.vertices[i]));
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace parf
