/**
 * @file   groute.cpp
 */
#include "parf/groute.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numeric>
#include <queue>
#include <sstream>

namespace parf {

GridGraph::GridGraph(int width, int height, int cap_h, int cap_v) : width_(width), height_(height) {
  int nh = (width - 1) * height, nv = width * (height - 1);
  capacity.assign(static_cast<std::size_t>(nh), cap_h);
  capacity.insert(capacity.end(), static_cast<std::size_t>(nv), cap_v);
  usage.assign(capacity.size(), 0);
  history.assign(capacity.size(), 0.0);
}

int GridGraph::edge_between(int a, int b) const {
  if (a > b) std::swap(a, b);
  int ax = vx(a), ay = vy(a), bx = vx(b), by = vy(b);
  if (ay == by && bx == ax + 1) return ay * (width_ - 1) + ax;
  if (ax == bx && by == ay + 1) return num_h_edges() + ay * width_ + ax;
  return -1;
}

std::array<int, 2> GridGraph::endpoints(int e) const {
  if (e < num_h_edges()) {
    int y = e / (width_ - 1), x = e % (width_ - 1);
    return {vertex(x, y), vertex(x + 1, y)};
  }
  int k = e - num_h_edges();
  int y = k / width_, x = k % width_;
  return {vertex(x, y), vertex(x, y + 1)};
}

int GridGraph::neighbours(int v, std::array<std::pair<int, int>, 4>& out) const {
  int x = vx(v), y = vy(v), n = 0;
  if (x > 0) out[n++] = {v - 1, y * (width_ - 1) + x - 1};
  if (x + 1 < width_) out[n++] = {v + 1, y * (width_ - 1) + x};
  if (y > 0) out[n++] = {v - width_, num_h_edges() + (y - 1) * width_ + x};
  if (y + 1 < height_) out[n++] = {v + width_, num_h_edges() + y * width_ + x};
  return n;
}

double GridGraph::cost(int e, double pfac, bool with_history) const {
  double over = std::max(0, usage[e] + 1 - capacity[e]);
  return (with_history ? 1.0 + history[e] : 1.0) * (1.0 + over * pfac);
}

int GridGraph::overuse() const {
  int o = 0;
  for (std::size_t e = 0; e < usage.size(); ++e) o += std::max(0, usage[e] - capacity[e]);
  return o;
}

GridGraph build_grid_graph(const Architecture& arch) {
  return GridGraph(arch.width, arch.height, arch.channel_width_h, arch.channel_width_v);
}

PathResult shortest_path(const GridGraph& g, std::span<const int> sources, int target, double pfac, bool astar,
                         bool with_history) {
  const double        inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(static_cast<std::size_t>(g.num_vertices()), inf);
  std::vector<int>    prev(dist.size(), -1);
  std::vector<char>   done(dist.size(), 0);
  const int           tx = g.vx(target), ty = g.vy(target);
  auto h = [&](int v) { return astar ? static_cast<double>(std::abs(g.vx(v) - tx) + std::abs(g.vy(v) - ty)) : 0.0; };

  using Item = std::pair<double, int>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> open;
  for (int s : sources) {
    if (dist[s] == 0.0) continue;
    dist[s] = 0.0;
    open.emplace(h(s), s);
  }
  std::array<std::pair<int, int>, 4> nb;
  while (!open.empty()) {
    auto [f, v] = open.top();
    open.pop();
    if (done[v]) continue;
    done[v] = 1;
    if (v == target) break;
    int k = g.neighbours(v, nb);
    for (int i = 0; i < k; ++i) {
      auto [w, e] = nb[i];
      double d    = dist[v] + g.cost(e, pfac, with_history);
      if (d < dist[w]) {
        dist[w] = d;
        prev[w] = v;
        open.emplace(d + h(w), w);
      }
    }
  }
  PathResult r;
  if (dist[target] == inf) return r;
  r.cost = dist[target];
  for (int v = target; v >= 0; v = prev[v]) r.vertices.push_back(v);
  std::reverse(r.vertices.begin(), r.vertices.end());
  return r;
}

namespace {

int half_perimeter(const GridGraph& g, const std::vector<int>& pins) {
  if (pins.empty()) return 0;
  int xl = g.width(), xh = -1, yl = g.height(), yh = -1;
  for (int v : pins) {
    xl = std::min(xl, g.vx(v));
    xh = std::max(xh, g.vx(v));
    yl = std::min(yl, g.vy(v));
    yh = std::max(yh, g.vy(v));
  }
  return (xh - xl) + (yh - yl);
}

/// Rips up and reroutes one net as a sequential tree.
void route_net(GridGraph& g, const std::vector<int>& pins, int hp, RouteGuide& guide, std::vector<int>& in_tree,
               int stamp, double pfac, bool with_history) {
  for (int e : guide.edges) --g.usage[e];
  guide = {};
  if (hp == 0) return;
  int root = pins.front();
  guide.vertices.push_back(root);
  in_tree[root] = stamp;
  std::vector<int> sinks(pins.begin() + 1, pins.end());
  auto             md = [&](int v) { return std::abs(g.vx(v) - g.vx(root)) + std::abs(g.vy(v) - g.vy(root)); };
  std::stable_sort(sinks.begin(), sinks.end(), [&](int a, int b) { return md(a) < md(b); });
  for (int s : sinks) {
    if (in_tree[s] == stamp) continue;
    auto path = shortest_path(g, guide.vertices, s, pfac, true, with_history);
    for (std::size_t k = 1; k < path.vertices.size(); ++k) {
      int a = path.vertices[k - 1], b = path.vertices[k], e = g.edge_between(a, b);
      guide.edges.push_back(e);
      ++g.usage[e];
      if (in_tree[b] != stamp) {
        in_tree[b] = stamp;
        guide.vertices.push_back(b);
      }
    }
  }
}

}  // namespace

GlobalRouteResult route_global(GridGraph& g, const std::vector<std::vector<int>>& nets, const GrConfig& config) {
  GlobalRouteResult res;
  const int         n = static_cast<int>(nets.size());
  res.guides.resize(static_cast<std::size_t>(n));

  std::vector<int> hp(n), order(n);
  for (int i = 0; i < n; ++i) hp[i] = half_perimeter(g, nets[i]);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return hp[a] > hp[b]; });

  std::vector<int> in_tree(static_cast<std::size_t>(g.num_vertices()), -1);
  int              stamp = 0;
  double           pfac  = config.pfac0;
  for (int it = 1; it <= config.max_iters; ++it) {
    for (int ni : order) route_net(g, nets[ni], hp[ni], res.guides[ni], in_tree, ++stamp, pfac, true);
    res.iterations = it;
    int over       = g.overuse();
    res.overuse_history.push_back(over);
    if (over == 0) {
      res.success = true;
      break;
    }
    for (int e = 0; e < g.num_edges(); ++e) {
      g.history[e] += std::max(0, g.usage[e] - g.capacity[e]) * config.hfac;
    }
    pfac = std::min(pfac * config.pfac_grow, config.pfac_max);
  }
  auto total = [&] {
    std::size_t w = 0;
    for (const auto& gd : res.guides) w += gd.edges.size();
    return w;
  };
  if (res.success && config.refine > 0) {
    // one full resequencing in reverse order, kept only if legal and shorter
    auto keep_guides = res.guides;
    auto keep_usage  = g.usage;
    auto before      = total();
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      for (int e : res.guides[*it].edges) --g.usage[e];
      res.guides[*it] = {};
    }
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      route_net(g, nets[*it], hp[*it], res.guides[*it], in_tree, ++stamp, 1e9, false);
    }
    if (g.overuse() > 0 || total() >= before) {
      res.guides = std::move(keep_guides);
      g.usage    = std::move(keep_usage);
    }
  }
  // with every edge legal, a net rerouted against the others never gets longer
  for (int pass = 0; res.success && pass < config.refine; ++pass) {
    for (int ni : order) {
      RouteGuide keep = res.guides[ni];
      route_net(g, nets[ni], hp[ni], res.guides[ni], in_tree, ++stamp, 1e9, false);
      if (g.overuse() > 0 || res.guides[ni].edges.size() > keep.edges.size()) {
        for (int e : res.guides[ni].edges) --g.usage[e];
        res.guides[ni] = keep;
        for (int e : keep.edges) ++g.usage[e];
      }
    }
  }
  for (int i = 0; i < n; ++i) {
    res.wirelength += static_cast<int>(res.guides[i].edges.size());
    for (int e : res.guides[i].edges) {
      if (g.usage[e] > g.capacity[e]) {
        res.failed_nets.push_back(i);
        break;
      }
    }
  }
  return res;
}

std::vector<std::vector<int>> net_sites(const GridGraph& g, const Netlist& netlist, const PlacementState& state) {
  auto site_of = [&](int inst) {
    if (state.site_assign && (*state.site_assign)[inst].x >= 0) {
      const auto& a = (*state.site_assign)[inst];
      return g.vertex(a.x, a.y);
    }
    int x = std::clamp(static_cast<int>(std::floor(state.x[inst])), 0, g.width() - 1);
    int y = std::clamp(static_cast<int>(std::floor(state.y[inst])), 0, g.height() - 1);
    return g.vertex(x, y);
  };
  std::vector<std::vector<int>> out(netlist.nets.size());
  for (std::size_t n = 0; n < netlist.nets.size(); ++n) {
    const auto& net = netlist.nets[n];
    auto&       v   = out[n];
    if (net.driver >= 0) v.push_back(site_of(netlist.pins[net.driver].inst));
    for (int p : net.pins) {
      int s = site_of(netlist.pins[p].inst);
      if (std::find(v.begin(), v.end(), s) == v.end()) v.push_back(s);
    }
  }
  return out;
}

std::vector<std::string> check_guide(const GridGraph& g, std::span<const int> pins, const RouteGuide& guide) {
  std::vector<std::string> out;
  std::vector<int>         distinct(pins.begin(), pins.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) {
    if (!guide.edges.empty()) out.emplace_back("tree: single-site net has edges");
    return out;
  }
  std::vector<int> verts(guide.vertices);
  std::sort(verts.begin(), verts.end());
  if (std::adjacent_find(verts.begin(), verts.end()) != verts.end()) out.emplace_back("tree: repeated vertex");
  auto in_tree = [&](int v) { return std::binary_search(verts.begin(), verts.end(), v); };
  for (int p : distinct) {
    if (!in_tree(p)) out.push_back("tree: pin site " + std::to_string(p) + " not reached");
  }
  std::vector<int> parent(static_cast<std::size_t>(g.num_vertices()));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<int(int)> find = [&](int v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (int e : guide.edges) {
    if (e < 0 || e >= g.num_edges()) {
      out.emplace_back("connectivity: hop over a non-edge");
      continue;
    }
    auto [a, b] = g.endpoints(e);
    if (!in_tree(a) || !in_tree(b)) out.emplace_back("connectivity: edge leaves the tree's vertex set");
    int ra = find(a), rb = find(b);
    if (ra == rb) {
      out.emplace_back("tree: cycle");
    } else {
      parent[ra] = rb;
    }
  }
  if (guide.edges.size() + 1 != guide.vertices.size()) out.emplace_back("tree: edge count does not match vertices");
  for (int v : guide.vertices) {
    if (find(v) != find(guide.vertices.front())) {
      out.emplace_back("connectivity: tree is disconnected");
      break;
    }
  }
  return out;
}

std::vector<double> congestion_map(const GridGraph& g) {
  std::vector<double> sum(static_cast<std::size_t>(g.num_vertices()), 0.0);
  std::vector<int>    cnt(sum.size(), 0);
  for (int e = 0; e < g.num_edges(); ++e) {
    double u = g.capacity[e] > 0 ? static_cast<double>(g.usage[e]) / g.capacity[e] : 0.0;
    for (int v : g.endpoints(e)) {
      sum[v] += u;
      ++cnt[v];
    }
  }
  for (std::size_t v = 0; v < sum.size(); ++v) {
    if (cnt[v] > 0) sum[v] /= cnt[v];
  }
  return sum;
}

std::string dump_guides(const GridGraph& g, const Netlist& netlist, const std::vector<RouteGuide>& guides) {
  std::ostringstream os;
  for (std::size_t n = 0; n < guides.size(); ++n) {
    if (guides[n].vertices.empty()) continue;
    os << "net " << netlist.nets[n].name;
    for (int v : guides[n].vertices) os << ' ' << g.vx(v) << ',' << g.vy(v);
    os << '\n';
  }
  return os.str();
}

}  // namespace parf
