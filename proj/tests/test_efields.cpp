#include <cmath>
#include <numeric>
#include <random>

#include "doctest.h"
#include "parf/efields.hpp"
#include "test_util.hpp"

using namespace parf;

namespace {

double sum(const std::vector<double>& v) { return std::accumulate(v.begin(), v.end(), 0.0); }

double max_abs(const std::vector<double>& v) {
  double m = 0;
  for (double a : v) m = std::max(m, std::abs(a));
  return m;
}

// 64 x 64 sites so that every bin is exactly one site.
Architecture unit_arch(std::vector<int> slicem = {}) { return test::make_arch(64, 64, std::move(slicem)); }

double energy_of(const PoissonSolver& s, const BinGrid& g, const std::vector<double>& x, const std::vector<double>& y,
                 const std::vector<double>& q, const std::vector<double>& cap) {
  return solve_poisson(s, rasterize(g, x, y, q), cap, false).energy;
}

}  // namespace

TEST_CASE("bin grid is a power of two of at least 64") {
  auto g = make_bin_grid(test::make_arch(10, 10));
  CHECK(g.nx == 64);
  CHECK(g.ny == 64);
  CHECK(g.bin_w == doctest::Approx(10.0 / 64));
  auto h = make_bin_grid(test::make_arch(100, 70));
  CHECK(h.nx == 128);
  CHECK(h.ny == 128);
}

TEST_CASE("capacity per field") {
  auto a = unit_arch({10, 20});
  auto g = make_bin_grid(a);
  // closed form: slots times supplying columns times height
  CHECK(sum(build_capacity(a, Field::kLutL, g)) == doctest::Approx(8.0 * 62 * 64));
  CHECK(sum(build_capacity(a, Field::kLutMAl, g)) == doctest::Approx(8.0 * 2 * 64));
  CHECK(sum(build_capacity(a, Field::kFf, g)) == doctest::Approx(16.0 * 62 * 64));
  CHECK(sum(build_capacity(a, Field::kDsp, g)) == 0.0);

  auto m = build_capacity(a, Field::kLutMAl, g);
  CHECK(m[g.index(10, 5)] == 8.0);
  CHECK(m[g.index(11, 5)] == 0.0);
  auto l = build_capacity(a, Field::kLutL, g);
  CHECK(l[g.index(0, 5)] == 0.0);
  CHECK(l[g.index(11, 5)] == 8.0);

  // coarse layouts: bins cover fractions of sites
  auto small = test::make_arch(16, 16, {4});
  auto sg    = make_bin_grid(small);
  auto sc    = build_capacity(small, Field::kLutMAl, sg);
  CHECK(sum(sc) == doctest::Approx(8.0 * 16));
  CHECK(sc[sg.index(4 * 4, 0)] == doctest::Approx(8.0 / 16));
}

TEST_CASE("capacity of single-type layouts") {
  auto plain = test::make_arch(12, 12);
  auto g     = make_bin_grid(plain);
  for (double c : build_capacity(plain, Field::kLutMAl, g)) CHECK(c == 0.0);

  auto mem = test::make_arch(12, 12);
  for (int x = 0; x < 12; ++x) mem.columns[x] = SiteType::kSliceM;
  auto lut = build_capacity(mem, Field::kLutL, g);
  CHECK(lut.front() > 0.0);
  for (double c : lut) CHECK(c == doctest::Approx(lut.front()));
}

TEST_CASE("fixed instances consume capacity") {
  auto    a = unit_arch({10});
  Netlist nl;
  auto    d = test::make_fixed("d", InstKind::kDram, 10.5, 3.5);
  nl.add_instance(d);
  auto g   = make_bin_grid(a);
  auto cap = build_capacity(a, Field::kLutMAl, g);
  subtract_fixed_instances(cap, a, nl, Field::kLutMAl, g);
  CHECK(cap[g.index(10, 3)] == 7.0);
  CHECK(cap[g.index(10, 4)] == 8.0);
}

TEST_CASE("rasterization examples") {
  auto g = make_bin_grid(unit_arch());
  std::vector<double> x{10.5}, y{20.5}, q{1.0};
  auto                r = rasterize(g, x, y, q);
  CHECK(r[g.index(10, 20)] == doctest::Approx(1.0));
  CHECK(sum(r) == doctest::Approx(1.0));

  x = {10.0};
  y = {20.0};
  r = rasterize(g, x, y, q);
  for (int ix : {9, 10})
    for (int iy : {19, 20}) CHECK(r[g.index(ix, iy)] == doctest::Approx(0.25));

  // stamp shifted inside the layout at the corner
  x = {0.2};
  y = {0.2};
  q = {4.0};
  r = rasterize(g, x, y, q);
  for (int ix : {0, 1})
    for (int iy : {0, 1}) CHECK(r[g.index(ix, iy)] == doctest::Approx(1.0));

  // straddling one vertical bin edge
  x = {11.0};
  y = {20.5};
  q = {1.0};
  r = rasterize(g, x, y, q);
  CHECK(r[g.index(10, 20)] == doctest::Approx(0.5));
  CHECK(r[g.index(11, 20)] == doctest::Approx(0.5));
  CHECK(sum(r) == doctest::Approx(1.0));
}

TEST_CASE("rasterization conserves charge") {
  std::mt19937_64 rng(3);
  for (auto dims : {std::pair{64, 64}, std::pair{20, 37}, std::pair{130, 90}}) {
    auto                                   g = make_bin_grid(test::make_arch(dims.first, dims.second));
    std::uniform_real_distribution<double> ux(-2, dims.first + 2), uy(-2, dims.second + 2), uq(0.01, 6);
    std::vector<double>                    x(500), y(500), q(500);
    for (int i = 0; i < 500; ++i) {
      x[i] = ux(rng);
      y[i] = uy(rng);
      q[i] = uq(rng);
    }
    auto r = rasterize(g, x, y, q);
    CHECK(std::abs(sum(r) - sum(q)) <= 1e-12 * sum(q));
  }
}

TEST_CASE("uniform charge at capacity has zero energy") {
  auto a   = unit_arch({10, 30});
  auto g   = make_bin_grid(a);
  auto cap = build_capacity(a, Field::kLutMAl, g);
  PoissonSolver s(g);
  auto          sol = solve_poisson(s, cap, cap, true);
  CHECK(std::abs(sol.energy) <= 1e-9);
  CHECK(max_abs(sol.psi) <= 1e-9);

  std::vector<double> flat(g.size(), 3.0);
  CHECK(std::abs(s.solve(flat, false).energy) <= 1e-9);
}

TEST_CASE("potential satisfies the Neumann five-point stencil") {
  for (auto dims : {std::pair{64, 64}, std::pair{40, 100}}) {
    auto                                   g = make_bin_grid(test::make_arch(dims.first, dims.second));
    PoissonSolver                          s(g);
    std::mt19937_64                        rng(11);
    std::uniform_real_distribution<double> u(0, 5);
    std::vector<double>                    rho(g.size());
    for (auto& v : rho) v = u(rng);
    auto   sol  = s.solve(rho, true);
    double mean = sum(rho) / g.size();
    auto   psi  = [&](int ix, int iy) {
      ix = std::clamp(ix, 0, g.nx - 1);
      iy = std::clamp(iy, 0, g.ny - 1);
      return sol.psi[g.index(ix, iy)];
    };
    double worst = 0, scale = 0;
    for (int ix = 0; ix < g.nx; ++ix) {
      for (int iy = 0; iy < g.ny; ++iy) {
        double lap = (psi(ix + 1, iy) - 2 * psi(ix, iy) + psi(ix - 1, iy)) / (g.bin_w * g.bin_w) +
                     (psi(ix, iy + 1) - 2 * psi(ix, iy) + psi(ix, iy - 1)) / (g.bin_h * g.bin_h);
        double rhs = -(rho[g.index(ix, iy)] - mean) / g.bin_area();
        worst      = std::max(worst, std::abs(lap - rhs));
        scale      = std::max(scale, std::abs(rhs));
      }
    }
    CHECK(worst <= 1e-6 * scale);

    // field is minus the central difference of the potential
    double fworst = 0;
    for (int ix = 1; ix + 1 < g.nx; ++ix) {
      for (int iy = 1; iy + 1 < g.ny; ++iy) {
        double ex = -(psi(ix + 1, iy) - psi(ix - 1, iy)) / (2 * g.bin_w);
        double ey = -(psi(ix, iy + 1) - psi(ix, iy - 1)) / (2 * g.bin_h);
        fworst    = std::max({fworst, std::abs(ex - sol.xi_x[g.index(ix, iy)]),
                              std::abs(ey - sol.xi_y[g.index(ix, iy)])});
      }
    }
    CHECK(fworst <= 1e-8 * std::max(1.0, max_abs(sol.xi_x)));
  }
}

TEST_CASE("point charge field is antisymmetric and points outward") {
  auto                g = make_bin_grid(unit_arch());
  PoissonSolver       s(g);
  std::vector<double> rho(g.size(), 0.0);
  for (int ix : {31, 32})
    for (int iy : {31, 32}) rho[g.index(ix, iy)] = 1.0;
  auto sol = s.solve(rho, true);
  for (int k = 0; k < 32; ++k) {
    for (int iy = 0; iy < 64; ++iy) {
      CHECK(std::abs(sol.xi_x[g.index(31 - k, iy)] + sol.xi_x[g.index(32 + k, iy)]) <= 1e-9);
      CHECK(std::abs(sol.xi_y[g.index(iy, 31 - k)] + sol.xi_y[g.index(iy, 32 + k)]) <= 1e-9);
    }
  }
  CHECK(sol.xi_x[g.index(40, 32)] > 0);
  CHECK(sol.xi_x[g.index(20, 32)] < 0);
  CHECK(sol.energy > 0);
}

TEST_CASE("density gradient matches finite differences") {
  auto                                   a = unit_arch({10, 30, 50});
  auto                                   g = make_bin_grid(a);
  PoissonSolver                          s(g);
  auto                                   cap = build_capacity(a, Field::kLutMAl, g);
  std::mt19937_64                        rng(17);
  std::uniform_real_distribution<double> u(3, 61), uq(0.5, 3);
  std::vector<double>                    x(60), y(60), q(60);
  for (int i = 0; i < 60; ++i) {
    x[i] = u(rng);
    y[i] = u(rng);
    q[i] = uq(rng);
  }
  auto         sol = solve_poisson(s, rasterize(g, x, y, q), cap, false);
  const double h   = 1e-4;
  int          checked = 0;
  for (int i = 0; i < 60; ++i) {
    auto gr = stamp_energy_gradient(g, sol.psi, x[i], y[i], q[i]);
    for (int axis = 0; axis < 2; ++axis) {
      auto&  c    = axis == 0 ? x : y;
      double keep = c[i];
      // skip stamps sitting within h of a bin edge, where the energy has a kink
      double side = std::sqrt(q[i]);
      double lo = keep - side / 2, hi = keep + side / 2;
      auto   near_edge = [&](double v) { return std::abs(v - std::round(v)) < 2 * h; };
      if (near_edge(lo) || near_edge(hi)) continue;
      c[i]      = keep + h;
      double fp = energy_of(s, g, x, y, q, cap);
      c[i]      = keep - h;
      double fm = energy_of(s, g, x, y, q, cap);
      c[i]      = keep;
      double fd = (fp - fm) / (2 * h);
      CHECK(std::abs(gr[axis] - fd) <= 1e-3 * std::max(std::abs(fd), 1e-3));
      ++checked;
    }
  }
  CHECK(checked > 100);
}

TEST_CASE("equal charges repel symmetrically") {
  auto                g = make_bin_grid(unit_arch());
  PoissonSolver       s(g);
  std::vector<double> x{28.3, 35.7}, y{32.0, 32.0}, q{2.0, 2.0};
  auto                sol = s.solve(rasterize(g, x, y, q), false);
  auto                left  = stamp_energy_gradient(g, sol.psi, x[0], y[0], q[0]);
  auto                right = stamp_energy_gradient(g, sol.psi, x[1], y[1], q[1]);
  CHECK(std::abs(left[0] + right[0]) <= 1e-9);
  CHECK(std::abs(left[1]) <= 1e-9);
  std::vector<double> apart{26.3, 37.7};
  CHECK(s.solve(rasterize(g, apart, y, q), false).energy < sol.energy);
}

TEST_CASE("memory LUTs are pulled toward SLICEM columns") {
  auto                a   = unit_arch({40});
  auto                g   = make_bin_grid(a);
  PoissonSolver       s(g);
  auto                cap = build_capacity(a, Field::kLutMAl, g);
  std::vector<double> x{20.3}, y{32.3}, q{1.0};
  auto                sol = solve_poisson(s, rasterize(g, x, y, q), cap, false);
  auto                gr  = stamp_energy_gradient(g, sol.psi, x[0], y[0], q[0]);
  CHECK(gr[0] < 0);

  x[0] = 55.3;
  sol  = solve_poisson(s, rasterize(g, x, y, q), cap, false);
  CHECK(stamp_energy_gradient(g, sol.psi, x[0], y[0], q[0])[0] > 0);
}

TEST_CASE("field membership is asymmetric") {
  auto    a = unit_arch({20, 40});
  Netlist nl;
  nl.add_instance(test::make_inst("l", InstKind::kLut, 4));
  nl.add_instance(test::make_inst("m", InstKind::kDram));
  FieldSystem fs(a, nl, {});
  REQUIRE(fs.field(Field::kLutL).active);
  REQUIRE(fs.field(Field::kLutMAl).active);
  CHECK_FALSE(fs.field(Field::kFf).active);
  std::vector<double> x(fs.num_objects(), 32.0), y(fs.num_objects(), 32.0);
  x[0] = 10.3;
  x[1] = 50.3;
  fs.evaluate(x, y);
  double l0 = fs.energy(Field::kLutL), m0 = fs.energy(Field::kLutMAl);

  x[0] = 12.7;  // LUT moves: only the LUT field changes
  fs.evaluate(x, y);
  CHECK(std::abs(fs.energy(Field::kLutL) - l0) > 1e-6);
  CHECK(fs.energy(Field::kLutMAl) == m0);

  x[1] = 47.1;  // DRAM moves: both fields change
  double l1 = fs.energy(Field::kLutL);
  fs.evaluate(x, y);
  CHECK(std::abs(fs.energy(Field::kLutL) - l1) > 1e-6);
  CHECK(std::abs(fs.energy(Field::kLutMAl) - m0) > 1e-6);
}

TEST_CASE("filler insertion") {
  CHECK(insert_fillers(100.0, 100.0, 1.0, Field::kFf).count == 0);
  auto all = insert_fillers(100.0, 0.0, 1.0, Field::kFf);
  CHECK(all.count == 100);
  CHECK(all.count * all.area == doctest::Approx(100.0));
  CHECK_THROWS_WITH_AS(insert_fillers(10.0, 11.0, 1.0, Field::kDsp), doctest::Contains("capacity"), InfeasibleError);
  CHECK_THROWS_WITH_AS(insert_fillers(10.0, 11.0, 1.0, Field::kDsp), doctest::Contains("DSP"), InfeasibleError);

  std::mt19937_64 rng(5);
  for (int t = 0; t < 200; ++t) {
    std::uniform_real_distribution<double> u(0, 1);
    double                                 cap = 10 + 1000 * u(rng), demand = cap * u(rng), area = 0.2 + 3 * u(rng);
    auto                                   f = insert_fillers(cap, demand, area, Field::kLutL);
    CHECK(std::abs(f.count * f.area + demand - cap) <= 1e-9 * cap);
  }

  auto    a = unit_arch({20});
  Netlist nl;
  for (int i = 0; i < 50; ++i) nl.add_instance(test::make_inst("f" + std::to_string(i), InstKind::kFf));
  FieldSystem fs(a, nl, {});
  const auto& ff = fs.field(Field::kFf);
  double      filled = 0;
  for (auto [o, q] : ff.members) filled += q;
  CHECK(filled == doctest::Approx(ff.capacity_total).epsilon(1e-9));
  CHECK(ff.capacity_total == doctest::Approx(16.0 * 62 * 64));
}

TEST_CASE("overflow examples") {
  std::vector<double> rho{2, 0}, cap{1, 1};
  CHECK(overflow(rho, cap) == doctest::Approx(0.5));
  std::vector<double> zero{0, 0};
  CHECK(overflow(zero, cap) == 0.0);
  std::vector<double> fit{1, 1};
  CHECK(overflow(fit, cap) == 0.0);
  std::vector<double> stuck{3, 0}, none{0, 1};
  CHECK(overflow(stuck, none) == 1.0);
}

TEST_CASE("a small step against the gradient lowers the energy") {
  auto                                   a = unit_arch({16, 32, 48});
  std::mt19937_64                        rng(23);
  std::uniform_real_distribution<double> u(20, 44);
  Netlist                                nl;
  for (int i = 0; i < 80; ++i) nl.add_instance(test::make_inst("l" + std::to_string(i), InstKind::kLut, 6));
  FieldSystem         fs(a, nl, {});
  std::vector<double> x(fs.num_objects()), y(fs.num_objects());
  for (int o = 0; o < fs.num_objects(); ++o) {
    x[o] = u(rng);
    y[o] = u(rng);
  }
  fs.evaluate(x, y);
  double              e0 = fs.energy(Field::kLutL);
  std::vector<double> gx, gy;
  fs.energy_gradient(Field::kLutL, x, y, gx, gy);
  double norm = std::max(max_abs(gx), max_abs(gy));
  REQUIRE(norm > 0);
  for (int o = 0; o < fs.num_objects(); ++o) {
    x[o] -= 1e-3 * gx[o] / norm;
    y[o] -= 1e-3 * gy[o] / norm;
  }
  fs.evaluate(x, y);
  CHECK(fs.energy(Field::kLutL) < e0);
}
