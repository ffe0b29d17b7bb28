/**
 * @file   flow.cpp
 */
#include "parf/flow.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <ostream>
#include <stdexcept>
#include <unordered_map>

#include "parf/rrg.hpp"
#include "parf/wirelength.hpp"

namespace parf {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

void note(const FlowConfig& c, const std::string& msg) {
  if (c.log) *c.log << "[parf] " << msg << '\n';
}

void fail(RunReport& r, int code, std::string msg) {
  r.exit_code = code;
  r.status    = std::move(msg);
}

int max_of(const std::vector<int>& v) { return v.empty() ? 0 : *std::max_element(v.begin(), v.end()); }

}  // namespace

std::vector<double> site_density(const Architecture& arch, const PlacementState& state) {
  std::vector<double> d(static_cast<std::size_t>(arch.num_sites()), 0.0);
  if (!state.site_assign) return d;
  for (const auto& s : *state.site_assign)
    if (s.x >= 0 && s.y >= 0) d[static_cast<std::size_t>(arch.site_index(s.x, s.y))] += 1.0;
  return d;
}

FlowResult place_design(const Architecture& arch, const Netlist& netlist, const FlowConfig& config) {
  FlowResult res;
  RunReport& rep = res.report;
  rep.seed       = config.seed;
  rep.threads    = config.threads;
  res.netlist    = netlist;
  const auto t0  = Clock::now();

  GpConfig gp = config.gp;
  gp.seed     = config.seed;
  gp.threads  = config.threads;
  if (config.debug) gp.log = config.log;
  GpResult gpr;
  try {
    note(config, "global placement");
    gpr = run_global_placement(arch, netlist, gp);
  } catch (const std::exception& e) {
    fail(rep, kExitPlace, std::string("placement: ") + e.what());
    rep.prt = seconds_since(t0);
    return res;
  }
  rep.gp_iterations       = gpr.iterations;
  rep.gp_converged        = gpr.converged;
  rep.overflow            = gpr.overflow;
  rep.hpwl_global         = gpr.hpwl;
  rep.clock_plan_feasible = gpr.clock_plan.feasible;
  note(config, "  iterations " + std::to_string(gpr.iterations) + ", max overflow " +
                   std::to_string(gpr.max_overflow) + ", hpwl " + std::to_string(gpr.hpwl));

  try {
    note(config, "legalization");
    auto lg        = legalize_direct(arch, netlist, gpr.state, &gpr.clock_plan);
    rep.hpwl_legal = hpwl(lg.state, netlist);
    note(config, "detailed placement");
    auto ism      = ism_refine(arch, netlist, lg.state, config.ism);
    res.placement = std::move(ism.state);
  } catch (const std::exception& e) {
    fail(rep, kExitPlace, e.what());
    rep.prt = seconds_since(t0);
    return res;
  }
  rep.hpwl = hpwl(res.placement, netlist);
  rep.prt  = seconds_since(t0);

  auto problems = validate_legality(res.placement, arch, netlist);
  if (!problems.empty()) {
    fail(rep, kExitPlace, "legalization: " + problems.front());
    return res;
  }
  rep.max_cr_demand = max_of(legal_cr_demand(arch, netlist, res.placement));
  rep.max_hc_demand = max_of(legal_hc_demand(arch, netlist, res.placement));
  rep.cr_ok         = rep.max_cr_demand <= arch.clock.cr_limit;
  rep.hc_ok         = rep.max_hc_demand <= arch.clock.hc_limit;
  res.density       = site_density(arch, res.placement);
  res.placed        = true;
  note(config, "  legal hpwl " + std::to_string(rep.hpwl) + " in " + std::to_string(rep.prt) + " s");
  return res;
}

void route_design(const Architecture& arch, const Netlist& netlist, const PlacementState& placement,
                  const FlowConfig& config, FlowResult& res) {
  RunReport& rep = res.report;
  res.placement  = placement;
  res.netlist    = netlist;
  const auto t0  = Clock::now();
  try {
    note(config, "global routing");
    auto gg        = build_grid_graph(arch);
    auto gr        = route_global(gg, net_sites(gg, netlist, placement), config.gr);
    res.congestion = congestion_map(gg);
    rep.gr_success    = gr.success;
    rep.gr_iterations = gr.iterations;
    rep.gr_wirelength = gr.wirelength;
    note(config, "  iterations " + std::to_string(gr.iterations) + ", wirelength " + std::to_string(gr.wirelength) +
                     (gr.success ? "" : ", overused"));

    note(config, "detailed routing");
    auto rrg = build_rrg(arch);
    rearrange_pins(rrg, arch, netlist, placement);
    auto                          nets = detailed_nets(rrg, arch, netlist, placement);
    std::vector<std::vector<int>> corridors;
    if (config.guided) corridors = guide_corridors(rrg, nets, gr.guides);
    auto dr = route_detailed(rrg, nets, corridors, config.dr);
    rep.rrt = seconds_since(t0);

    rep.dr_success    = dr.success;
    rep.dr_iterations = dr.iterations;
    rep.rwl           = dr.rwl;
    rep.routable_nets = static_cast<int>(std::count_if(nets.begin(), nets.end(), [](const DrNet& n) { return n.source >= 0; }));
    rep.routed_nets   = rep.routable_nets - static_cast<int>(dr.failed_nets.size());
    note(config, "  iterations " + std::to_string(dr.iterations) + ", rwl " + std::to_string(dr.rwl) + ", routed " +
                     std::to_string(rep.routed_nets) + "/" + std::to_string(rep.routable_nets));

    res.wire_usage.assign(static_cast<std::size_t>(arch.num_sites()), 0.0);
    for (int v = rrg.wire_base; v < rrg.num_vertices(); ++v) {
      if (rrg.usage[v] == 0) continue;
      res.wire_usage[static_cast<std::size_t>(rrg.site_a[v])] += 0.5 * rrg.usage[v];
      res.wire_usage[static_cast<std::size_t>(rrg.site_b[v])] += 0.5 * rrg.usage[v];
    }

    auto rw     = rewrite_truth_tables(rrg, arch, netlist, placement, dr.trees);
    res.netlist = rw.netlist;
    res.routes  = export_routes(rrg, netlist, dr.trees);
    for (const auto& p : rw.phys_of)
      rep.permuted_luts += !std::is_sorted(p.begin(), p.end());

    if (!dr.success) {
      fail(rep, kExitRoute,
           "routing: " + std::to_string(rep.routable_nets - rep.routed_nets) + " nets left on overused resources");
      return;
    }
    note(config, "validation");
    // validate what was written, not the in-memory trees
    auto problems = validate_routes(rrg, nets, import_routes(rrg, netlist, res.routes));
    auto luts     = check_lut_functions(netlist, rw);
    problems.insert(problems.end(), luts.begin(), luts.end());
    if (!problems.empty()) {
      fail(rep, kExitValidate, "validation: " + problems.front());
      return;
    }
    res.routed = true;
  } catch (const std::exception& e) {
    rep.rrt = seconds_since(t0);
    fail(rep, kExitRoute, std::string("routing: ") + e.what());
  }
}

FlowResult run_flow(const Architecture& arch, const Netlist& netlist, const FlowConfig& config) {
  FlowResult res = place_design(arch, netlist, config);
  if (!res.placed) return res;
  PlacementState legal = res.placement;
  route_design(arch, netlist, legal, config, res);
  return res;
}

void write_flow_outputs(const FlowResult& res, const Architecture& arch, const std::string& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto path = [&](const char* name) { return (fs::path(dir) / name).string(); };
  if (res.placed) write_file(path("design.pl"), write_placement(res.placement, res.netlist, PlacementKind::kLegal));
  if (!res.routes.empty() || res.routed) {
    write_file(path("design.routes"), write_routes(res.routes));
    write_file(path("design.net"), write_netlist(res.netlist));
  }
  write_file(path("report.json"), report_json(res.report));
  if (!res.density.empty()) emit_heatmap_svg(res.density, arch.width, arch.height, path("density.svg"), "placement density");
  if (!res.congestion.empty())
    emit_heatmap_svg(res.congestion, arch.width, arch.height, path("congestion.svg"), "global route congestion");
  if (!res.wire_usage.empty())
    emit_heatmap_svg(res.wire_usage, arch.width, arch.height, path("wire_usage.svg"), "detailed route wire usage");
}

std::vector<RouteTree> import_routes(const RoutingResourceGraph& rrg, const Netlist& netlist,
                                     const std::vector<NetRoute>& routes) {
  std::vector<RouteTree> trees(static_cast<std::size_t>(netlist.num_nets()));
  for (int n = 0; n < netlist.num_nets(); ++n) trees[static_cast<std::size_t>(n)].net = n;
  auto vertex = [&](const std::string& id) {
    auto v = rrg.find(id);
    if (!v) throw std::invalid_argument("routes: unknown routing node '" + id + "'");
    return *v;
  };
  for (const auto& r : routes) {
    auto n = netlist.find_net(r.net);
    if (!n) throw std::invalid_argument("routes: unknown net '" + r.net + "'");
    auto&                        t = trees[static_cast<std::size_t>(*n)];
    std::unordered_map<int, int> at;
    for (const auto& [su, sv] : r.edges) {
      int u = vertex(su), v = vertex(sv);
      if (t.vertices.empty()) {
        at[u] = 0;
        t.vertices.push_back(u);
        t.parent.push_back(-1);
      }
      auto it = at.find(u);
      if (it == at.end()) throw std::invalid_argument("routes: net '" + r.net + "' edge from '" + su + "' before it is reached");
      at[v] = static_cast<int>(t.vertices.size());
      t.vertices.push_back(v);
      t.parent.push_back(it->second);
    }
  }
  return trees;
}

std::vector<std::string> check_lut_functions(const Netlist& logical, const RewriteResult& rewrite) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < rewrite.phys_of.size(); ++i) {
    const auto& phys = rewrite.phys_of[i];
    if (phys.empty()) continue;
    const auto& inst = logical.instances[i];
    const auto  tt   = rewrite.netlist.instances[i].truth_table;
    const int   k    = static_cast<int>(phys.size());
    for (unsigned b = 0; b < (1u << k); ++b) {
      unsigned logical_bits = 0;
      for (int p = 0; p < k; ++p) logical_bits |= ((b >> phys[p]) & 1u) << p;
      if (evaluate_lut(tt, b) != evaluate_lut(inst.truth_table, logical_bits)) {
        out.push_back("LUT '" + inst.name + "' changes function on input " + std::to_string(b));
        break;
      }
    }
  }
  return out;
}

}  // namespace parf
