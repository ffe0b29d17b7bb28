/** @file droute_cases.hpp @brief IO-grid fixtures and the random capacity-1 conflict cases for the detailed router. */
#ifndef PARF_DROUTE_CASES_HPP
#define PARF_DROUTE_CASES_HPP

#include <algorithm>
#include <numeric>
#include <optional>
#include <queue>
#include <random>
#include <span>
#include <vector>

#include "parf/droute.hpp"
#include "parf/rrg.hpp"
#include "test_util.hpp"

namespace parf::test {

/// All-IO layout: every site has `slots` single-pin in/out slot pairs.
inline Architecture io_grid(int w, int h, int cw, int slots = 1) {
  Architecture a = make_arch(w, h, {}, cw);
  a.columns.assign(static_cast<std::size_t>(w), SiteType::kIo);
  a.io_slots = slots;
  return a;
}

inline bool reachable(const RoutingResourceGraph& g, int from, int to) {
  std::vector<char> seen(static_cast<std::size_t>(g.num_vertices()), 0);
  std::queue<int>   q;
  q.push(from);
  seen[from] = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    if (v == to) return true;
    for (int w : g.out(v))
      if (!seen[w]) seen[w] = 1, q.push(w);
  }
  return false;
}

/// Usage recomputed from the trees alone.
inline std::vector<int> recount(const RoutingResourceGraph& g, std::span<const DrNet> nets, std::span<const RouteTree> trees) {
  std::vector<int> use(static_cast<std::size_t>(g.num_vertices()), 0);
  for (std::size_t n = 0; n < nets.size(); ++n)
    for (int v : trees[n].vertices) {
      auto it = std::find(nets[n].sinks.begin(), nets[n].sinks.end(), v);
      use[v] += it == nets[n].sinks.end() ? 1 : nets[n].weight[it - nets[n].sinks.begin()];
    }
  return use;
}

/// Sequential BFS over free vertices in the given order; true if every net fits.
inline bool fits_in_order(const RoutingResourceGraph& g, std::span<const DrNet> nets, const std::vector<int>& order) {
  std::vector<int> use(static_cast<std::size_t>(g.num_vertices()), 0);
  for (int n : order) {
    const auto&       net = nets[n];
    std::vector<int>  prev(use.size(), -2);
    std::queue<int>   q;
    q.push(net.source);
    prev[net.source] = -1;
    while (!q.empty() && prev[net.sinks[0]] == -2) {
      int v = q.front();
      q.pop();
      for (int w : g.out(v)) {
        if (prev[w] != -2 || use[w] >= g.capacity[w]) continue;
        if (g.kind[w] == NodeKind::kSink && w != net.sinks[0]) continue;
        prev[w] = v;
        q.push(w);
      }
    }
    if (prev[net.sinks[0]] == -2) return false;
    for (int v = net.sinks[0]; v >= 0; v = prev[v]) ++use[v];
  }
  return true;
}

struct ConflictCase {
  RoutingResourceGraph rrg;
  std::vector<DrNet>   nets;
};

/// Small IO grid (3..5 per side, one or two tracks) with 2..5 point-to-point
/// nets between distinct random sites. Returns nullopt unless at least two
/// nets exist and some sequential order routes them all disjointly, so every
/// returned case is feasible.
inline std::optional<ConflictCase> random_conflict_case(std::mt19937_64& rng, int index) {
  int  w = 3 + static_cast<int>(rng() % 3), h = 3 + static_cast<int>(rng() % 3);
  auto arch = io_grid(w, h, index % 3 == 0 ? 2 : 1);
  ConflictCase c{build_rrg(arch), {}};
  auto&        g     = c.rrg;
  int          sites = w * h, m = 2 + static_cast<int>(rng() % 4);
  std::vector<int> src(sites), dst(sites);
  std::iota(src.begin(), src.end(), 0);
  std::iota(dst.begin(), dst.end(), 0);
  std::shuffle(src.begin(), src.end(), rng);
  std::shuffle(dst.begin(), dst.end(), rng);
  for (int k = 0; k < m; ++k) {
    if (src[k] == dst[k]) continue;
    DrNet n;
    n.source = g.site_node(src[k] % w, src[k] / w, "S0_O0");
    n.sinks  = {g.site_node(dst[k] % w, dst[k] / w, "S0_I0")};
    n.weight = {1};
    c.nets.push_back(n);
  }
  if (c.nets.size() < 2) return std::nullopt;
  std::vector<int> order(c.nets.size());
  std::iota(order.begin(), order.end(), 0);
  for (int t = 0; t < 30; ++t) {
    std::shuffle(order.begin(), order.end(), rng);
    if (fits_in_order(g, c.nets, order)) return c;
  }
  return std::nullopt;
}

}  // namespace parf::test

#endif
