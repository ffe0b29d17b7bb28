/**
 * @file   module.cpp
 * @brief  Python bindings: design generation and I/O, the full flow,
 *         placement-only runs, wirelength models, validation and heatmaps.
 */
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "parf/flow.hpp"
#include "parf/gen.hpp"
#include "parf/io.hpp"
#include "parf/wirelength.hpp"

namespace py = pybind11;
using namespace parf;

namespace {

struct Design {
  Architecture arch;
  Netlist      netlist;
};

FlowConfig flow_config(std::uint64_t seed, int threads, int dr_iters, bool guided) {
  FlowConfig c;
  c.seed         = seed;
  c.threads      = threads;
  c.dr.max_iters = dr_iters;
  c.guided       = guided;
  return c;
}

py::dict flow_dict(const FlowResult& r, const Design& d) {
  py::dict out;
  out["report"]    = report_json(r.report);
  out["exit_code"] = r.report.exit_code;
  out["placement"] = r.placed ? write_placement(r.placement, d.netlist, PlacementKind::kLegal) : std::string();
  out["routes"]    = write_routes(r.routes);
  out["netlist"]   = r.routed ? write_netlist(r.netlist) : std::string();
  return out;
}

void check_positions(const Design& d, const std::vector<double>& x, const std::vector<double>& y) {
  if (static_cast<int>(x.size()) != d.netlist.num_instances() || x.size() != y.size())
    throw std::invalid_argument("x and y need one entry per instance");
}

}  // namespace

PYBIND11_MODULE(_parf, m) {
  m.doc() = "FPGA placement and routing core";

  py::register_exception<GenerationError>(m, "GenerationError", PyExc_ValueError);

  py::class_<Design>(m, "Design")
      .def_static(
          "from_text",
          [](const std::string& arch, const std::string& netlist) {
            return Design{parse_arch(arch), parse_netlist(netlist)};
          },
          py::arg("arch"), py::arg("netlist"))
      .def_static(
          "load",
          [](const std::string& arch_path, const std::string& netlist_path) {
            return Design{parse_arch(read_file(arch_path)), parse_netlist(read_file(netlist_path))};
          },
          py::arg("arch_path"), py::arg("netlist_path"))
      .def_property_readonly("width", [](const Design& d) { return d.arch.width; })
      .def_property_readonly("height", [](const Design& d) { return d.arch.height; })
      .def_property_readonly("num_instances", [](const Design& d) { return d.netlist.num_instances(); })
      .def_property_readonly("num_nets", [](const Design& d) { return d.netlist.num_nets(); })
      .def("arch_text", [](const Design& d) { return write_arch(d.arch); })
      .def("netlist_text", [](const Design& d) { return write_netlist(d.netlist); });

  m.def(
      "generate",
      [](int width, int height, int luts, int ffs, int drams, int shifts, int dsps, int brams, int ios, int clocks,
         double rent, double slicem_frac, int channel_width, std::uint64_t seed) {
        GenConfig g;
        g.width         = width;
        g.height        = height;
        g.luts          = luts;
        g.ffs           = ffs;
        g.drams         = drams;
        g.shifts        = shifts;
        g.dsps          = dsps;
        g.brams         = brams;
        g.ios           = ios;
        g.clocks        = clocks;
        g.rent          = rent;
        g.slicem_frac   = slicem_frac;
        g.channel_width = channel_width;
        g.seed          = seed;
        auto gd         = generate_design(g);
        return Design{std::move(gd.arch), std::move(gd.netlist)};
      },
      py::arg("width"), py::arg("height"), py::arg("luts") = 0, py::arg("ffs") = 0, py::arg("drams") = 0,
      py::arg("shifts") = 0, py::arg("dsps") = 0, py::arg("brams") = 0, py::arg("ios") = 0, py::arg("clocks") = 0,
      py::arg("rent") = 0.6, py::arg("slicem_frac") = 0.25, py::arg("channel_width") = 40, py::arg("seed") = 1,
      "Synthetic design; raises GenerationError when it cannot fit the layout.");

  m.def(
      "run_flow",
      [](const Design& d, std::uint64_t seed, int threads, int dr_iters, bool guided, const std::string& out_dir) {
        FlowResult r;
        {
          py::gil_scoped_release nogil;
          r = run_flow(d.arch, d.netlist, flow_config(seed, threads, dr_iters, guided));
          if (!out_dir.empty()) write_flow_outputs(r, d.arch, out_dir);
        }
        return flow_dict(r, d);
      },
      py::arg("design"), py::arg("seed") = 1, py::arg("threads") = 1, py::arg("dr_iters") = 50,
      py::arg("guided") = true, py::arg("out_dir") = "",
      "Place, route and validate. Returns the report JSON, exit code and file texts.");

  m.def(
      "place",
      [](const Design& d, std::uint64_t seed, int threads) {
        FlowResult r;
        {
          py::gil_scoped_release nogil;
          r = place_design(d.arch, d.netlist, flow_config(seed, threads, 50, true));
        }
        return flow_dict(r, d);
      },
      py::arg("design"), py::arg("seed") = 1, py::arg("threads") = 1);

  m.def(
      "hpwl",
      [](const Design& d, const std::vector<double>& x, const std::vector<double>& y) {
        check_positions(d, x, y);
        return hpwl(x, y, d.netlist);
      },
      py::arg("design"), py::arg("x"), py::arg("y"));

  m.def(
      "smooth_wirelength",
      [](const Design& d, const std::vector<double>& x, const std::vector<double>& y, double gamma) {
        check_positions(d, x, y);
        if (!(gamma > 0)) throw std::invalid_argument("gamma must be positive");
        auto r = smooth_wl(x, y, d.netlist, WirelengthParams{gamma, {}, 1});
        return py::make_tuple(r.value, r.grad_x, r.grad_y);
      },
      py::arg("design"), py::arg("x"), py::arg("y"), py::arg("gamma") = 1.0,
      "Weighted-average wirelength and its gradient per instance.");

  m.def(
      "positions",
      [](const Design& d, const std::string& placement) {
        auto s = read_placement(placement, d.netlist);
        return py::make_tuple(s.x, s.y);
      },
      py::arg("design"), py::arg("placement"));

  m.def(
      "check_placement",
      [](const Design& d, const std::string& placement) {
        auto s = read_placement(placement, d.netlist);
        if (!s.site_assign) return std::vector<std::string>{"placement is not legal (no site assignment)"};
        return validate_legality(s, d.arch, d.netlist);
      },
      py::arg("design"), py::arg("placement"), "Legality problems of a placement text; empty when legal.");

  m.def(
      "heatmap_svg",
      [](const std::vector<double>& values, int cols, int rows, const std::string& title) {
        return heatmap_svg(values, cols, rows, title);
      },
      py::arg("values"), py::arg("cols"), py::arg("rows"), py::arg("title") = "");

  m.def(
      "permute_truth_table",
      [](std::uint64_t table, int k, const std::vector<int>& phys_of) {
        if (k < 0 || k > 6 || static_cast<int>(phys_of.size()) != k)
          throw std::invalid_argument("need 0 <= k <= 6 and one physical pin per input");
        return permute_truth_table(table, k, phys_of);
      },
      py::arg("table"), py::arg("k"), py::arg("phys_of"));

  m.attr("REPORT_SCHEMA") = kReportSchema;
}
