/**
 * @file   acceptance.cpp
 * @brief  Acceptance run: one PASS/FAIL line per criterion, exit status 1
 *         if any criterion fails.
 *
 * Usage: acceptance [--parf PATH] [--only N]...
 * With --parf the end-to-end criterion drives the command-line tool;
 * otherwise it calls the flow library directly.
 */
#include <chrono>
#include <climits>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numeric>
#include <sys/wait.h>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "droute_cases.hpp"
#include "test_util.hpp"
#include "groute_oracle.hpp"
#include "parf/clock.hpp"
#include "parf/droute.hpp"
#include "parf/efields.hpp"
#include "parf/flow.hpp"
#include "parf/gen.hpp"
#include "parf/legalize.hpp"
#include "parf/wirelength.hpp"

using namespace parf;
using Clock = std::chrono::steady_clock;

namespace {

struct Outcome {
  bool        pass = true;
  std::string detail;
};

struct Options {
  std::string parf;
};

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

/// The 2,000-instance design used by the convergence and end-to-end runs.
GenConfig big_design() {
  GenConfig g;
  g.width  = 32;
  g.height = 32;
  g.luts   = 996;
  g.ffs    = 700;
  g.drams  = 100;
  g.shifts = 50;
  g.dsps   = 20;
  g.brams  = 10;
  g.ios    = 120;
  g.clocks = 4;
  g.seed   = 1;
  return g;
}

// ---------------------------------------------------------------------------

/// Central difference of `f` in coordinate `c`, restoring it afterwards.
double central(double& c, double h, const std::function<double()>& f) {
  double keep = c;
  c           = keep + h;
  double fp   = f();
  c           = keep - h;
  double fm   = f();
  c           = keep;
  return (fp - fm) / (2 * h);
}

GeneratedDesign small_mixed(std::uint64_t seed) {
  GenConfig g;
  g.width  = 12;
  g.height = 12;
  g.luts   = 22;
  g.ffs    = 12;
  g.drams  = 4;
  g.shifts = 2;
  g.dsps   = 2;
  g.brams  = 2;
  g.ios    = 4;
  g.clocks = 2;
  g.seed   = seed;
  return generate_design(g);
}

Outcome gradients() {
  const auto t0       = Clock::now();
  double     worst_wl = 0, worst_pen = 0, worst_field = 0;
  long       checked_field = 0;
  for (int cfg = 0; cfg < 20; ++cfg) {
    auto        d  = small_mixed(100 + static_cast<std::uint64_t>(cfg));
    const auto& nl = d.netlist;
    const int   n  = nl.num_instances();

    std::mt19937_64                        rng(static_cast<std::uint64_t>(cfg));
    std::uniform_real_distribution<double> ux(1.5, d.arch.width - 1.5), uy(1.5, d.arch.height - 1.5);
    std::vector<double>                    x(n), y(n);
    for (int i = 0; i < n; ++i) {
      const auto& in = nl.instances[i];
      x[i]           = in.fixed ? in.fixed_x : ux(rng);
      y[i]           = in.fixed ? in.fixed_y : uy(rng);
    }

    // smooth wirelength, error relative to the largest component
    WirelengthParams wp{1.0, {}, 1};
    auto             wl   = smooth_wl(x, y, nl, wp);
    double           gmax = 0;
    for (int i = 0; i < n; ++i) gmax = std::max({gmax, std::abs(wl.grad_x[i]), std::abs(wl.grad_y[i])});
    for (int i = 0; i < n; ++i)
      for (int axis = 0; axis < 2; ++axis) {
        double fd = central(axis ? y[i] : x[i], 1e-4, [&] { return smooth_wl(x, y, nl, wp).value; });
        worst_wl  = std::max(worst_wl, std::abs((axis ? wl.grad_y[i] : wl.grad_x[i]) - fd) / gmax);
      }

    // clock penalty against random regions
    ClockPlan   plan;
    const auto& ck = d.arch.clock;
    for (int net = 0; net < nl.num_nets(); ++net) {
      if (!nl.nets[net].is_clock) continue;
      int c0 = static_cast<int>(rng() % ck.cr_cols), r0 = static_cast<int>(rng() % ck.cr_rows);
      int c1 = c0 + static_cast<int>(rng() % (ck.cr_cols - c0)), r1 = r0 + static_cast<int>(rng() % (ck.cr_rows - r0));
      plan.nets.push_back({net, true, CrRect{c0, r0, c1, r1}});
    }
    auto pen = clock_penalty(d.arch, nl, x, y, plan);
    for (int i = 0; i < n; ++i)
      for (int axis = 0; axis < 2; ++axis) {
        double fd = central(axis ? y[i] : x[i], 1e-6, [&] { return clock_penalty(d.arch, nl, x, y, plan).value; });
        double g  = axis ? pen.grad_y[i] : pen.grad_x[i];
        worst_pen = std::max(worst_pen, std::abs(g - fd) / std::max(1.0, std::abs(g)));
      }

    // field energies: re-solve one field with a single stamp moved
    FieldSystem         fs(d.arch, nl, {});
    const auto&         grid = fs.grid();
    PoissonSolver       solver(grid);
    std::vector<double> ox(fs.num_objects()), oy(fs.num_objects());
    for (int o = 0; o < fs.num_objects(); ++o) {
      int i = fs.instance_of(o);
      ox[o] = i >= 0 ? x[i] : ux(rng);
      oy[o] = i >= 0 ? y[i] : uy(rng);
    }
    fs.evaluate(ox, oy);
    const double h = 1e-4;
    for (const auto& fd : fs.fields()) {
      if (!fd.active) continue;
      std::vector<double> gx, gy;
      fs.energy_gradient(fd.id, ox, oy, gx, gy);
      // a handful of members per field keeps the solve count bounded
      for (int k = 0; k < std::min(fd.num_instance_members, 8); ++k) {
        auto [o, q] = fd.members[k];
        auto st     = make_stamp(grid, ox[o], oy[o], q);
        if (st.clamped_x || st.clamped_y) continue;
        std::vector<double> base = fd.rho, own(fd.rho.size(), 0.0);
        rasterize_into(grid, ox[o], oy[o], q, own);
        for (std::size_t b = 0; b < base.size(); ++b) base[b] -= own[b];
        for (int axis = 0; axis < 2; ++axis) {
          double lo = axis ? st.y0 : st.x0, bin = axis ? grid.bin_h : grid.bin_w;
          auto   near_edge = [&](double v) { return std::abs(v / bin - std::round(v / bin)) * bin < 2 * h; };
          if (near_edge(lo) || near_edge(lo + st.side)) continue;
          double num = central(axis ? oy[o] : ox[o], h, [&] {
            std::vector<double> rho = base;
            rasterize_into(grid, ox[o], oy[o], q, rho);
            return solve_poisson(solver, rho, fd.capacity, false).energy;
          });
          double g    = axis ? gy[o] : gx[o];
          worst_field = std::max(worst_field, std::abs(g - num) / std::max(std::abs(num), 1e-3));
          ++checked_field;
        }
      }
    }
  }
  double  secs = since(t0);
  Outcome out;
  out.pass   = worst_wl <= 1e-5 && worst_pen <= 1e-5 && worst_field <= 1e-3 && checked_field >= 200 && secs < 10;
  out.detail = "20 designs, worst relative error: wirelength " + fmt("%.1e", worst_wl) + ", clock penalty " +
               fmt("%.1e", worst_pen) + ", density energy " + fmt("%.1e", worst_field) + " (" +
               std::to_string(checked_field) + " field components); " + fmt("%.1f s", secs);
  return out;
}

// ---------------------------------------------------------------------------

Outcome poisson() {
  Outcome out;
  // uniform density at capacity
  auto          arch = test::make_arch(64, 64, {10, 30});
  auto          grid = make_bin_grid(arch);
  PoissonSolver s(grid);
  auto          cap  = build_capacity(arch, Field::kLutMAl, grid);
  double        e0   = std::abs(solve_poisson(s, cap, cap, false).energy);
  std::vector<double> flat(grid.size(), 3.0);
  e0 = std::max(e0, std::abs(s.solve(flat, false).energy));

  // five-point stencil residual on random densities
  double worst_res = 0;
  for (auto dims : {std::pair{64, 64}, std::pair{40, 100}, std::pair{32, 32}}) {
    auto                                   g = make_bin_grid(test::make_arch(dims.first, dims.second));
    PoissonSolver                          sv(g);
    std::mt19937_64                        rng(dims.first * 131 + dims.second);
    std::uniform_real_distribution<double> u(0, 5);
    for (int rep = 0; rep < 3; ++rep) {
      std::vector<double> rho(g.size());
      for (auto& v : rho) v = u(rng);
      auto   sol  = sv.solve(rho, false);
      double mean = 0;
      for (double v : rho) mean += v;
      mean /= g.size();
      auto psi = [&](int ix, int iy) {
        return sol.psi[g.index(std::clamp(ix, 0, g.nx - 1), std::clamp(iy, 0, g.ny - 1))];
      };
      double worst = 0, scale = 0;
      for (int ix = 0; ix < g.nx; ++ix)
        for (int iy = 0; iy < g.ny; ++iy) {
          double lap = (psi(ix + 1, iy) - 2 * psi(ix, iy) + psi(ix - 1, iy)) / (g.bin_w * g.bin_w) +
                       (psi(ix, iy + 1) - 2 * psi(ix, iy) + psi(ix, iy - 1)) / (g.bin_h * g.bin_h);
          double rhs = -(rho[g.index(ix, iy)] - mean) / g.bin_area();
          worst      = std::max(worst, std::abs(lap - rhs));
          scale      = std::max(scale, std::abs(rhs));
        }
      worst_res = std::max(worst_res, worst / scale);
    }
  }

  // centred point charge: mirrored field components cancel
  std::vector<double> rho(grid.size(), 0.0);
  for (int ix : {31, 32})
    for (int iy : {31, 32}) rho[grid.index(ix, iy)] = 1.0;
  auto   sol  = s.solve(rho, true);
  double anti = 0;
  for (int k = 0; k < 32; ++k)
    for (int iy = 0; iy < 64; ++iy) {
      anti = std::max(anti, std::abs(sol.xi_x[grid.index(31 - k, iy)] + sol.xi_x[grid.index(32 + k, iy)]));
      anti = std::max(anti, std::abs(sol.xi_y[grid.index(iy, 31 - k)] + sol.xi_y[grid.index(iy, 32 + k)]));
    }
  out.pass   = e0 <= 1e-9 && worst_res <= 1e-6 && anti <= 1e-9;
  out.detail = "uniform energy " + fmt("%.1e", e0) + ", stencil residual " + fmt("%.1e", worst_res) +
               ", antisymmetry " + fmt("%.1e", anti);
  return out;
}

// ---------------------------------------------------------------------------

Outcome asymmetric_fields() {
  GenConfig g;
  g.width  = 20;
  g.height = 20;
  g.luts   = 300;
  g.ffs    = 160;
  g.drams  = 36;
  g.shifts = 16;
  g.ios    = 16;
  g.clocks = 1;
  g.seed   = 3;
  auto d   = generate_design(g);
  auto res = place_design(d.arch, d.netlist, FlowConfig{});
  if (!res.placed) return {false, res.report.status};
  const auto& nl    = d.netlist;
  auto        legal = validate_legality(res.placement, d.arch, nl);
  int         mem_total = 0, mem_in_m = 0, lut_in_l = 0, lut_in_m = 0;
  for (int i = 0; i < nl.num_instances(); ++i) {
    auto kind = nl.instances[i].kind;
    auto site = d.arch.site_type((*res.placement.site_assign)[i].x);
    if (kind == InstKind::kDram || kind == InstKind::kShift) {
      ++mem_total;
      mem_in_m += site == SiteType::kSliceM;
    } else if (kind == InstKind::kLut) {
      lut_in_l += site == SiteType::kSliceL;
      lut_in_m += site == SiteType::kSliceM;
    }
  }
  Outcome out;
  out.pass   = legal.empty() && mem_in_m == mem_total && lut_in_l > 0 && lut_in_m > 0;
  out.detail = std::to_string(mem_in_m) + "/" + std::to_string(mem_total) + " memory LUTs on SLICEM, plain LUTs " +
               std::to_string(lut_in_l) + " on SLICEL and " + std::to_string(lut_in_m) + " on SLICEM, " +
               std::to_string(legal.size()) + " legality errors";
  if (!legal.empty()) out.detail += " (" + legal.front() + ")";
  return out;
}

// ---------------------------------------------------------------------------

Outcome gp_convergence() {
  auto d  = generate_design(big_design());
  auto t0 = Clock::now();
  auto gp = run_global_placement(d.arch, d.netlist, GpConfig{});
  double gp_secs = since(t0);
  auto   lg      = legalize_direct(d.arch, d.netlist, gp.state, &gp.clock_plan);
  auto   ism     = ism_refine(d.arch, d.netlist, lg.state);
  double final_hpwl = hpwl(ism.state, d.netlist);

  // uniform-random legal baseline
  auto                                   rnd = make_initial_state(d.arch, d.netlist);
  std::mt19937_64                        rng(99);
  std::uniform_real_distribution<double> ux(0.0, d.arch.width), uy(0.0, d.arch.height);
  for (int i = 0; i < d.netlist.num_instances(); ++i) {
    if (d.netlist.instances[i].fixed) continue;
    rnd.x[i] = std::min(ux(rng), d.arch.width - 1e-9);
    rnd.y[i] = std::min(uy(rng), d.arch.height - 1e-9);
  }
  double random_hpwl = hpwl(legalize_direct(d.arch, d.netlist, rnd).state, d.netlist);

  Outcome out;
  out.pass   = gp.converged && gp.max_overflow <= 0.10 && gp.iterations <= 3000 && gp_secs < 300 &&
               final_hpwl <= 0.5 * random_hpwl;
  out.detail = "overflow " + fmt("%.3f", gp.max_overflow) + " after " + std::to_string(gp.iterations) +
               " iterations in " + fmt("%.1f s", gp_secs) + "; HPWL " + fmt("%.0f", final_hpwl) + " vs random " +
               fmt("%.0f", random_hpwl) + " (" + fmt("%.3f", final_hpwl / random_hpwl) + "x)";
  return out;
}

// ---------------------------------------------------------------------------

Outcome clock_feasibility() {
  GenConfig g;
  g.width   = 24;
  g.height  = 24;
  g.luts    = 360;
  g.ffs     = 360;
  g.ios     = 16;
  g.clocks  = 30;
  g.cr_cols = 2;
  g.cr_rows = 2;
  g.seed    = 5;
  auto d    = generate_design(g);
  auto res  = place_design(d.arch, d.netlist, FlowConfig{});
  if (!res.placed) return {false, res.report.status};
  auto cr = legal_cr_demand(d.arch, d.netlist, res.placement);
  auto hc = legal_hc_demand(d.arch, d.netlist, res.placement);
  int  max_cr = cr.empty() ? 0 : *std::max_element(cr.begin(), cr.end());
  int  max_hc = hc.empty() ? 0 : *std::max_element(hc.begin(), hc.end());
  Outcome out;
  out.pass   = d.arch.clock.cr_limit == 24 && max_cr <= 24 && max_hc <= 12 &&
               validate_legality(res.placement, d.arch, d.netlist).empty();
  out.detail = "30 clocks on " + std::to_string(d.arch.clock.cr_cols) + "x" + std::to_string(d.arch.clock.cr_rows) +
               " regions: max CR demand " + std::to_string(max_cr) + " (limit 24), max HC demand " +
               std::to_string(max_hc) + " (limit 12)";
  return out;
}

// ---------------------------------------------------------------------------

Outcome legalization() {
  int  invalid = 0, increases = 0, not_idempotent = 0, rounds = 0;
  for (int seed = 1; seed <= 10; ++seed) {
    GenConfig g;
    g.width  = 12;
    g.height = 12;
    g.luts   = 90;
    g.ffs    = 60;
    g.drams  = 6;
    g.ios    = 8;
    g.clocks = 1;
    g.seed   = static_cast<std::uint64_t>(seed);
    auto d   = generate_design(g);
    auto gp  = run_global_placement(d.arch, d.netlist, GpConfig{});
    auto lg  = legalize_direct(d.arch, d.netlist, gp.state, &gp.clock_plan);
    invalid += !validate_legality(lg.state, d.arch, d.netlist).empty();
    IsmConfig ic;
    ic.rounds = 5;
    ic.seed   = static_cast<std::uint64_t>(seed);
    auto ism  = ism_refine(d.arch, d.netlist, lg.state, ic);
    for (std::size_t r = 1; r < ism.hpwl.size(); ++r, ++rounds) increases += ism.hpwl[r] > ism.hpwl[r - 1] + 1e-9;
    invalid += !validate_legality(ism.state, d.arch, d.netlist).empty();
    auto again = legalize_direct(d.arch, d.netlist, ism.state, &gp.clock_plan);
    not_idempotent += again.max_displacement != 0.0;
  }
  Outcome out;
  out.pass   = invalid == 0 && increases == 0 && not_idempotent == 0 && rounds == 50;
  out.detail = "10 seeds: " + std::to_string(invalid) + " invalid placements, " + std::to_string(increases) + "/" +
               std::to_string(rounds) + " detailed-placement rounds raised HPWL, " + std::to_string(not_idempotent) +
               " non-idempotent re-legalizations";
  return out;
}

// ---------------------------------------------------------------------------

Outcome global_router_oracle() {
  auto cases = test::canonical_cases(5);
  int  total = 0, optimal = 0, worse = 0, failed = 0;
  for (auto [a, b, c, dd] : cases) {
    GridGraph g(5, 5, 1, 1);
    int       opt = test::joint_optimum(g, a, b, c, dd);
    if (opt == INT_MAX) continue;
    auto r = route_global(g, {{a, b}, {c, dd}});
    ++total;
    if (!r.success) {
      ++failed;
      continue;
    }
    optimal += r.wirelength == opt;
    worse += r.wirelength > opt + 2;
  }
  Outcome out;
  out.pass   = failed == 0 && worse == 0 && optimal >= 0.99 * total && total > 0;
  out.detail = std::to_string(optimal) + "/" + std::to_string(total) + " optimal (" +
               fmt("%.2f%%", 100.0 * optimal / std::max(total, 1)) + "), " + std::to_string(failed) +
               " with overuse, " + std::to_string(worse) + " beyond optimum + 2";
  return out;
}

// ---------------------------------------------------------------------------

Outcome detailed_router() {
  std::mt19937_64 rng(21);
  int             cases = 0, conflicted = 0, bad = 0, max_iters = 0;
  while (cases < 150) {
    auto c = test::random_conflict_case(rng, cases);
    if (!c) continue;
    ++cases;
    auto r = route_detailed(c->rrg, c->nets, {});
    conflicted += r.overuse_history.front() > 0;
    max_iters = std::max(max_iters, r.iterations);
    auto use  = test::recount(c->rrg, c->nets, r.trees);
    int  over = 0;
    for (int v = 0; v < c->rrg.num_vertices(); ++v) over += use[v] > c->rrg.capacity[v] || use[v] != c->rrg.usage[v];
    bad += !r.success || r.iterations > 50 || over > 0 || !validate_routes(c->rrg, c->nets, r.trees).empty();
  }
  Outcome out;
  out.pass   = bad == 0 && conflicted >= 10;
  out.detail = std::to_string(cases) + " capacity-1 cases (" + std::to_string(conflicted) +
               " start with conflicts): " + std::to_string(bad) + " failures, worst " + std::to_string(max_iters) +
               " iterations";
  return out;
}

// ---------------------------------------------------------------------------

Outcome pin_rearrangement() {
  std::mt19937_64 rng(77);
  int             mismatches = 0;
  for (int t = 0; t < 1000; ++t) {
    int              k     = 2 + t % 5;
    std::uint64_t    table = rng() & (k == 6 ? ~0ull : (1ull << (1u << k)) - 1);
    std::vector<int> phys(k);
    std::iota(phys.begin(), phys.end(), 0);
    std::shuffle(phys.begin(), phys.end(), rng);
    auto rewritten = permute_truth_table(table, k, phys);
    // physical pin phys[p] carries logical input p
    for (unsigned logical = 0; logical < (1u << k); ++logical) {
      unsigned physical = 0;
      for (int p = 0; p < k; ++p) physical |= ((logical >> p) & 1u) << phys[p];
      mismatches += evaluate_lut(rewritten, physical) != evaluate_lut(table, logical);
    }
  }
  return {mismatches == 0, "1000 LUTs (k = 2..6), " + std::to_string(mismatches) + " mismatching input vectors"};
}

// ---------------------------------------------------------------------------

struct FlowRun {
  int            exit_code = -1;
  double         secs      = 0;
  nlohmann::json report;
};

FlowRun flow_via_cli(const std::string& parf, const std::filesystem::path& dir, int threads) {
  FlowRun r;
  auto    out = dir / ("t" + std::to_string(threads));
  std::string cmd = "\"" + parf + "\" flow --arch \"" + (dir / "design.arch").string() + "\" --netlist \"" +
                    (dir / "design.net").string() + "\" --out \"" + out.string() + "\" --seed 1 --threads " +
                    std::to_string(threads);
  auto t0    = Clock::now();
  int  st    = std::system(cmd.c_str());
  r.secs     = since(t0);
  r.exit_code = st == -1 ? -1 : WEXITSTATUS(st);
  if (std::filesystem::exists(out / "report.json")) r.report = nlohmann::json::parse(read_file((out / "report.json").string()));
  return r;
}

FlowRun flow_via_library(const GeneratedDesign& d, int threads) {
  FlowRun    r;
  FlowConfig cfg;
  cfg.threads = threads;
  auto t0     = Clock::now();
  auto res    = run_flow(d.arch, d.netlist, cfg);
  r.secs      = since(t0);
  r.exit_code = res.report.exit_code;
  r.report    = nlohmann::json::parse(report_json(res.report));
  return r;
}

Outcome end_to_end(const Options& opt) {
  std::vector<FlowRun> runs;
  auto                 dir = std::filesystem::temp_directory_path() / "parf_acceptance_flow";
  if (!opt.parf.empty()) {
    std::filesystem::remove_all(dir);
    auto g   = big_design();
    auto cmd = "\"" + opt.parf + "\" gen --sites 32 32 --luts " + std::to_string(g.luts) + " --ffs " +
               std::to_string(g.ffs) + " --drams " + std::to_string(g.drams) + " --shifts " + std::to_string(g.shifts) +
               " --dsps " + std::to_string(g.dsps) + " --brams " + std::to_string(g.brams) + " --ios " +
               std::to_string(g.ios) + " --clocks " + std::to_string(g.clocks) + " --seed 1 --out \"" +
               dir.string() + "\"";
    if (std::system(cmd.c_str()) != 0) return {false, "parf gen failed"};
    for (int t : {1, 2}) runs.push_back(flow_via_cli(opt.parf, dir, t));
  } else {
    auto d = generate_design(big_design());
    for (int t : {1, 2}) runs.push_back(flow_via_library(d, t));
  }
  Outcome out;
  std::ostringstream ss;
  for (std::size_t i = 0; i < runs.size(); ++i) {
    const auto& r   = runs[i];
    bool        ok  = r.exit_code == 0 && !r.report.is_null() && r.report["routing"]["completion_pct"] == 100.0 &&
               r.secs < 900;
    out.pass = out.pass && ok;
    ss << (i ? "; " : "") << "threads " << (i + 1) << ": exit " << r.exit_code;
    if (!r.report.is_null())
      ss << ", routed " << r.report["routing"]["completion_pct"].get<double>() << "%, RWL " << r.report["rwl"].get<int>();
    ss << ", " << fmt("%.1f s", r.secs);
  }
  bool same = runs.size() == 2 && !runs[0].report.is_null() && !runs[1].report.is_null() &&
              runs[0].report["rwl"] == runs[1].report["rwl"];
  out.pass   = out.pass && same;
  out.detail = (opt.parf.empty() ? "library flow, " : "parf flow, ") + ss.str() + (same ? "; identical RWL" : "; RWL differs");
  if (!opt.parf.empty() && out.pass) std::filesystem::remove_all(dir);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  Options       opt;
  std::set<int> only;
  for (int i = 1; i < argc; ++i) {
    std::string a = argv[i];
    if (a == "--parf" && i + 1 < argc) opt.parf = argv[++i];
    else if (a == "--only" && i + 1 < argc) only.insert(std::atoi(argv[++i]));
    else {
      std::cerr << "usage: acceptance [--parf PATH] [--only N]...\n";
      return 2;
    }
  }

  struct Criterion {
    int                           id;
    const char*                   name;
    std::function<Outcome()>      run;
  };
  std::vector<Criterion> all = {
      {1, "gradient correctness", gradients},
      {2, "Poisson solver", poisson},
      {3, "asymmetric fields", asymmetric_fields},
      {4, "global placement convergence", gp_convergence},
      {5, "clock feasibility", clock_feasibility},
      {6, "legalization and detailed placement", legalization},
      {7, "global router optimality", global_router_oracle},
      {8, "detailed router", detailed_router},
      {9, "pin rearrangement", pin_rearrangement},
      {10, "end-to-end flow", [&] { return end_to_end(opt); }},
  };

  int failed = 0;
  for (const auto& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::cout << (o.pass ? "PASS" : "FAIL") << "  [" << c.id << "] " << c.name << ": " << o.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
