#include <algorithm>
#include <random>
#include <tuple>

#include "doctest.h"
#include "groute_oracle.hpp"
#include "parf/groute.hpp"
#include "test_util.hpp"

using namespace parf;
using namespace parf::test;

TEST_CASE("grid graph counts and capacities") {
  GridGraph g(3, 3, 2, 3);
  CHECK(g.num_vertices() == 9);
  CHECK(g.num_edges() == 12);
  CHECK(g.capacity[g.edge_between(0, 1)] == 2);
  CHECK(g.capacity[g.edge_between(0, 3)] == 3);

  auto arch = make_arch(6, 4, {}, 5);
  CHECK(build_grid_graph(arch).num_edges() == 5 * 4 + 6 * 3);

  std::mt19937_64 rng(2);
  for (int k = 0; k < 50; ++k) {
    int       w = 2 + static_cast<int>(rng() % 12), h = 2 + static_cast<int>(rng() % 12);
    GridGraph r(w, h, 1, 1);
    CHECK(r.num_edges() == (w - 1) * h + w * (h - 1));
    int adjacent = 0;
    for (int a = 0; a < r.num_vertices(); ++a)
      for (int b = a + 1; b < r.num_vertices(); ++b) {
        int e = r.edge_between(a, b);
        if (e < 0) continue;
        ++adjacent;
        auto ends = r.endpoints(e);
        CHECK(ends[0] == a);
        CHECK(ends[1] == b);
      }
    CHECK(adjacent == r.num_edges());
  }
}

TEST_CASE("a lone two-pin net takes a Manhattan-shortest path") {
  GridGraph g(10, 8, 1, 1);
  auto      r = route_global(g, {{g.vertex(1, 2), g.vertex(7, 6)}});
  CHECK(r.success);
  CHECK(r.guides[0].edges.size() == 10);
  CHECK(check_guide(g, std::vector<int>{g.vertex(1, 2), g.vertex(7, 6)}, r.guides[0]).empty());
}

TEST_CASE("single-site nets get empty trees") {
  GridGraph g(4, 4, 1, 1);
  auto      r = route_global(g, {{5, 5}, {6}});
  CHECK(r.success);
  CHECK(r.guides[0].edges.empty());
  CHECK(r.guides[1].edges.empty());
  CHECK(r.wirelength == 0);
}

TEST_CASE("A* agrees with Dijkstra under congestion costs") {
  GridGraph                              g(12, 9, 2, 1);
  std::mt19937_64                        rng(4);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  for (int e = 0; e < g.num_edges(); ++e) {
    g.history[e] = u(rng);
    g.usage[e]   = static_cast<int>(rng() % 3);
  }
  for (int q = 0; q < 100; ++q) {
    int  s = static_cast<int>(rng() % g.num_vertices()), t = static_cast<int>(rng() % g.num_vertices());
    std::vector<int> src{s};
    auto a = shortest_path(g, src, t, 4.0, true);
    auto d = shortest_path(g, src, t, 4.0, false);
    CHECK(a.cost == doctest::Approx(d.cost).epsilon(1e-12));
    CHECK(a.vertices.front() == s);
    CHECK(a.vertices.back() == t);
  }
}

TEST_CASE("negotiation matches the joint optimum on a 5x5 grid") {
  auto cases = canonical_cases(5);
  CHECK(cases.size() > 1000);
  int optimal = 0, total = 0, worse = 0, failed = 0;
  for (std::size_t k = 0; k < cases.size(); ++k) {
    auto [a, b, c, d] = cases[k];
    GridGraph g(5, 5, 1, 1);
    int       opt = joint_optimum(g, a, b, c, d);
    if (opt == INT_MAX) continue;
    auto r = route_global(g, {{a, b}, {c, d}});
    ++total;
    if (!r.success) {
      ++failed;
      continue;
    }
    optimal += r.wirelength == opt;
    worse += r.wirelength > opt + 2;
  }
  CHECK(failed == 0);
  CHECK(worse == 0);
  CHECK(optimal >= 0.99 * total);
}

TEST_CASE("multi-pin nets route to valid trees without overuse") {
  std::mt19937_64               rng(8);
  GridGraph                     g(16, 16, 3, 3);
  std::vector<std::vector<int>> nets;
  for (int n = 0; n < 90; ++n) {
    int              k = 2 + static_cast<int>(rng() % 6);
    std::vector<int> pins;
    int              cx = static_cast<int>(rng() % 16), cy = static_cast<int>(rng() % 16);
    for (int i = 0; i < k; ++i) {
      int x = std::clamp(cx + static_cast<int>(rng() % 7) - 3, 0, 15);
      int y = std::clamp(cy + static_cast<int>(rng() % 7) - 3, 0, 15);
      int v = g.vertex(x, y);
      if (std::find(pins.begin(), pins.end(), v) == pins.end()) pins.push_back(v);
    }
    nets.push_back(pins);
  }
  auto r = route_global(g, nets);
  CHECK(r.success);
  for (std::size_t n = 0; n < nets.size(); ++n) CHECK(check_guide(g, nets[n], r.guides[n]).empty());
  for (int e = 0; e < g.num_edges(); ++e) CHECK(g.usage[e] <= g.capacity[e]);
  int used = 0;
  for (int u : g.usage) used += u;
  CHECK(used == r.wirelength);
}

TEST_CASE("history only grows and unroutable demand is reported") {
  GridGraph g(3, 1, 1, 1);
  auto      r = route_global(g, {{0, 2}, {0, 2}}, GrConfig{5});
  CHECK_FALSE(r.success);
  CHECK(r.iterations == 5);
  CHECK(r.failed_nets.size() == 2);
  CHECK(r.overuse_history.back() == 2);
  for (double h : g.history) CHECK(h == 5.0);
}

TEST_CASE("guide checker catches broken trees") {
  GridGraph  g(4, 4, 1, 1);
  RouteGuide t;
  t.vertices = {0, 1, 2};
  t.edges    = {g.edge_between(0, 1)};
  std::vector<int> pins{0, 2};
  CHECK_FALSE(check_guide(g, pins, t).empty());
  t.edges.push_back(g.edge_between(1, 2));
  CHECK(check_guide(g, pins, t).empty());
  t.edges.push_back(99);
  CHECK_FALSE(check_guide(g, pins, t).empty());
}

TEST_CASE("net sites put the driver first and guides dump in tree order") {
  auto    arch = make_arch(6, 6);
  Netlist nl;
  int     a = nl.add_instance(make_inst("a", InstKind::kLut, 1));
  int     b = nl.add_instance(make_inst("b", InstKind::kLut, 1));
  int     n = nl.add_net("n", false);
  nl.add_pin(n, b, "I0");
  nl.add_pin(n, a, "O");
  auto s = make_initial_state(arch, nl);
  s.x    = {1.5, 4.5};
  s.y    = {1.5, 1.5};
  GridGraph g     = build_grid_graph(arch);
  auto      sites = net_sites(g, nl, s);
  REQUIRE(sites[0].size() == 2);
  CHECK(sites[0][0] == g.vertex(1, 1));
  auto r = route_global(g, sites);
  CHECK(dump_guides(g, nl, r.guides) == "net n 1,1 2,1 3,1 4,1\n");
  auto cong = congestion_map(g);
  CHECK(cong[g.vertex(2, 1)] > 0.0);
  CHECK(cong[g.vertex(5, 5)] == 0.0);
}
