/**
 * @file   parf_main.cpp
 * @brief  `parf` command-line driver: flow, place, route, eval, gen.
 *
 * Exit codes: 0 ok, 1 usage or input error, 2 placement failure,
 * 3 routing failure, 4 validation failure. PARF_LOG=info|debug turns on
 * progress messages on stderr (debug adds the placer's iteration log).
 */
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "parf/flow.hpp"
#include "parf/gen.hpp"
#include "parf/io.hpp"
#include "parf/wirelength.hpp"

using namespace parf;

namespace {

struct Inputs {
  std::string arch, netlist, placement, routes, out;
};

struct Knobs {
  std::uint64_t seed = 1;
  int threads = 1, gp_iters = 3000, dr_iters = 50, checkpoint_every = 0;
  bool unguided = false;
  std::string log_path;
};

void add_design(CLI::App* c, Inputs& in) {
  c->add_option("--arch", in.arch, "architecture file")->required()->check(CLI::ExistingFile);
  c->add_option("--netlist", in.netlist, "netlist file")->required()->check(CLI::ExistingFile);
}

void add_knobs(CLI::App* c, Knobs& k, bool routing) {
  c->add_option("--seed", k.seed, "random seed");
  c->add_option("--threads", k.threads, "worker threads (speed only)")->check(CLI::PositiveNumber);
  if (routing) {
    c->add_option("--dr-iters", k.dr_iters, "detailed router iteration cap")->check(CLI::PositiveNumber);
    c->add_flag("--unguided", k.unguided, "route without global-route corridors");
  }
}

void add_place_knobs(CLI::App* c, Knobs& k) {
  c->add_option("--gp-iters", k.gp_iters, "global placement iteration cap")->check(CLI::PositiveNumber);
  c->add_option("--log", k.log_path, "TSV iteration log of global placement");
  c->add_option("--checkpoint-every", k.checkpoint_every, "write a placement checkpoint every K iterations");
}

FlowConfig make_config(const Knobs& k, std::ostream* gp_log, const std::string& checkpoint_prefix) {
  FlowConfig c;
  c.seed        = k.seed;
  c.threads     = k.threads;
  c.gp.max_iters = k.gp_iters;
  c.dr.max_iters = k.dr_iters;
  c.guided      = !k.unguided;
  if (const char* lv = std::getenv("PARF_LOG")) {
    std::string level = lv;
    if (level == "info" || level == "debug") c.log = &std::cerr;
    c.debug = level == "debug";
  }
  if (gp_log) c.gp.log = gp_log;
  c.gp.checkpoint_every  = k.checkpoint_every;
  c.gp.checkpoint_prefix = checkpoint_prefix;
  return c;
}

int finish(const RunReport& r) {
  if (r.exit_code != kExitOk) std::cerr << "parf: " << r.status << '\n';
  return r.exit_code;
}

int cmd_flow(const Inputs& in, const Knobs& k) {
  auto arch    = parse_arch(read_file(in.arch));
  auto netlist = parse_netlist(read_file(in.netlist));
  std::filesystem::create_directories(in.out);
  std::ofstream tsv;
  if (!k.log_path.empty()) tsv.open(k.log_path);
  auto cfg = make_config(k, tsv.is_open() ? &tsv : nullptr, (std::filesystem::path(in.out) / "checkpoint").string());
  auto res = run_flow(arch, netlist, cfg);
  res.report.design = std::filesystem::path(in.netlist).stem().string();
  write_flow_outputs(res, arch, in.out);
  return finish(res.report);
}

int cmd_place(const Inputs& in, const Knobs& k) {
  auto arch    = parse_arch(read_file(in.arch));
  auto netlist = parse_netlist(read_file(in.netlist));
  std::ofstream tsv;
  if (!k.log_path.empty()) tsv.open(k.log_path);
  auto cfg = make_config(k, tsv.is_open() ? &tsv : nullptr, in.out + ".checkpoint");
  auto res = place_design(arch, netlist, cfg);
  if (res.placed) write_file(in.out, write_placement(res.placement, netlist, PlacementKind::kLegal));
  return finish(res.report);
}

int cmd_route(const Inputs& in, const Knobs& k) {
  auto arch      = parse_arch(read_file(in.arch));
  auto netlist   = parse_netlist(read_file(in.netlist));
  auto placement = read_placement(read_file(in.placement), netlist);
  if (!placement.site_assign) {
    std::cerr << "parf: routing needs a legal placement file\n";
    return kExitUsage;
  }
  auto       cfg = make_config(k, nullptr, "");
  FlowResult res;
  res.report.seed    = k.seed;
  res.report.threads = k.threads;
  res.report.design  = std::filesystem::path(in.netlist).stem().string();
  res.placed         = true;
  res.density        = site_density(arch, placement);
  route_design(arch, netlist, placement, cfg, res);
  write_flow_outputs(res, arch, in.out);
  return finish(res.report);
}

int cmd_eval(const Inputs& in) {
  auto arch      = parse_arch(read_file(in.arch));
  auto netlist   = parse_netlist(read_file(in.netlist));
  auto placement = read_placement(read_file(in.placement), netlist);

  nlohmann::ordered_json j;
  j["hpwl"]            = hpwl(placement, netlist);
  auto legality        = placement.site_assign ? validate_legality(placement, arch, netlist)
                                               : std::vector<std::string>{"placement is not legal (no site assignment)"};
  j["legality_errors"] = legality;
  std::vector<std::string> route_errors;
  if (!in.routes.empty() && placement.site_assign) {
    auto rrg = build_rrg(arch);
    rearrange_pins(rrg, arch, netlist, placement);
    auto nets  = detailed_nets(rrg, arch, netlist, placement);
    auto trees = import_routes(rrg, netlist, read_routes(read_file(in.routes)));
    route_errors = validate_routes(rrg, nets, trees);
    j["rwl"]     = routed_wirelength(rrg, trees);
    int routed = 0, routable = 0;
    for (std::size_t n = 0; n < nets.size(); ++n) {
      if (nets[n].source < 0) continue;
      ++routable;
      routed += !trees[n].vertices.empty();
    }
    j["routed_nets"]   = routed;
    j["routable_nets"] = routable;
    j["route_errors"]  = route_errors;
  }
  std::cout << j.dump(2) << '\n';
  return legality.empty() && route_errors.empty() ? kExitOk : kExitValidate;
}

int cmd_gen(const GenConfig& g, const std::string& out) {
  auto d = generate_design(g);
  std::filesystem::create_directories(out);
  write_file((std::filesystem::path(out) / "design.arch").string(), write_arch(d.arch));
  write_file((std::filesystem::path(out) / "design.net").string(), write_netlist(d.netlist));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"parf: analytical FPGA placement and negotiated-congestion routing"};
  app.require_subcommand(1);

  Inputs in;
  Knobs  k;

  auto* flow = app.add_subcommand("flow", "place, route, validate and write all artifacts");
  add_design(flow, in);
  flow->add_option("--out", in.out, "output directory")->required();
  add_knobs(flow, k, true);
  add_place_knobs(flow, k);

  auto* place = app.add_subcommand("place", "global placement, legalization and detailed placement");
  add_design(place, in);
  place->add_option("--out", in.out, "placement file to write")->required();
  add_knobs(place, k, false);
  add_place_knobs(place, k);

  auto* route = app.add_subcommand("route", "global and detailed routing of a legal placement");
  add_design(route, in);
  route->add_option("--placement", in.placement, "legal placement file")->required()->check(CLI::ExistingFile);
  route->add_option("--out", in.out, "output directory")->required();
  add_knobs(route, k, true);

  auto* eval = app.add_subcommand("eval", "check a placement and optional routes, print metrics as JSON");
  add_design(eval, in);
  eval->add_option("--placement", in.placement, "placement file")->required()->check(CLI::ExistingFile);
  eval->add_option("--routes", in.routes, "routes file")->check(CLI::ExistingFile);

  GenConfig   g;
  std::string gen_out;
  auto*       gen = app.add_subcommand("gen", "write a synthetic design");
  std::pair<int, int> sites{16, 16};
  gen->add_option("--sites", sites, "layout width and height")->required();
  gen->add_option("--luts", g.luts, "LUT count");
  gen->add_option("--ffs", g.ffs, "flip-flop count");
  gen->add_option("--drams", g.drams, "distributed RAM count");
  gen->add_option("--shifts", g.shifts, "shift register count");
  gen->add_option("--dsps", g.dsps, "DSP count");
  gen->add_option("--brams", g.brams, "block RAM count");
  gen->add_option("--ios", g.ios, "data IO count");
  gen->add_option("--clocks", g.clocks, "clock net count");
  gen->add_option("--rent", g.rent, "Rent exponent of the connectivity")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--slicem-frac", g.slicem_frac, "fraction of SLICEM columns")->check(CLI::Range(0.0, 1.0));
  gen->add_option("--channel-width", g.channel_width, "routing tracks per channel")->check(CLI::PositiveNumber);
  gen->add_option("--seed", g.seed, "random seed");
  gen->add_option("--out", gen_out, "output directory")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*flow) return cmd_flow(in, k);
    if (*place) return cmd_place(in, k);
    if (*route) return cmd_route(in, k);
    if (*eval) return cmd_eval(in);
    if (*gen) {
      std::tie(g.width, g.height) = sites;
      return cmd_gen(g, gen_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "parf: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
