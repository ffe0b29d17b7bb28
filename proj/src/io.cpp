/**
 * @file   io.cpp
 */
#include "parf/io.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace parf {

namespace {

constexpr int kMaxDim   = 4096;
constexpr int kMaxSlots = 64;

using Line = std::pair<int, std::vector<std::string_view>>;

int to_int(const Line& ln, std::size_t idx, int lo, int hi) {
  if (idx >= ln.second.size()) throw ParseError(ln.first, "missing integer argument");
  auto s = ln.second[idx];
  int  v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) {
    throw ParseError(ln.first, "expected integer, got '" + std::string(s) + "'");
  }
  if (v < lo || v > hi) {
    throw ParseError(ln.first, "value " + std::to_string(v) + " out of range [" + std::to_string(lo) + ", " +
                                   std::to_string(hi) + "]");
  }
  return v;
}

double to_double(const Line& ln, std::size_t idx) {
  if (idx >= ln.second.size()) throw ParseError(ln.first, "missing numeric argument");
  auto   s = ln.second[idx];
  double v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v)) {
    throw ParseError(ln.first, "expected number, got '" + std::string(s) + "'");
  }
  return v;
}

void expect_args(const Line& ln, std::size_t n) {
  if (ln.second.size() != n) {
    throw ParseError(ln.first, "'" + std::string(ln.second[0]) + "' expects " + std::to_string(n - 1) +
                                   " argument(s)");
  }
}

void expect_header(const std::vector<Line>& lines, std::string_view magic) {
  if (lines.empty()) throw ParseError(1, "empty input, expected header '" + std::string(magic) + " 1'");
  const auto& h = lines.front();
  if (h.second.size() < 2 || h.second[0] != magic || h.second[1] != "1") {
    throw ParseError(h.first, "expected header '" + std::string(magic) + " 1'");
  }
}

std::string fmt6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

}  // namespace

std::vector<Line> tokenize_lines(std::string_view text) {
  std::vector<Line> out;
  int               lineno = 0;
  std::size_t       pos    = 0;
  while (pos <= text.size()) {
    auto end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    ++lineno;
    auto line = text.substr(pos, end - pos);
    if (auto c = line.find('#'); c != std::string_view::npos) line = line.substr(0, c);
    std::vector<std::string_view> toks;
    std::size_t                   i = 0;
    while (i < line.size()) {
      while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
      std::size_t j = i;
      while (j < line.size() && !std::isspace(static_cast<unsigned char>(line[j]))) ++j;
      if (j > i) toks.push_back(line.substr(i, j - i));
      i = j;
    }
    if (!toks.empty()) out.emplace_back(lineno, std::move(toks));
    if (end == text.size()) break;
    pos = end + 1;
  }
  return out;
}

Architecture parse_arch(std::string_view text) {
  auto lines = tokenize_lines(text);
  expect_header(lines, "parfkit-arch");
  Architecture arch;
  bool         have_size = false, have_channel = false;
  std::vector<bool> column_set;
  int last_line = lines.back().first;

  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& ln = lines[li];
    auto        kw = ln.second[0];
    if (kw == "size") {
      expect_args(ln, 3);
      if (have_size) throw ParseError(ln.first, "duplicate 'size'");
      arch.width  = to_int(ln, 1, 4, kMaxDim);
      arch.height = to_int(ln, 2, 4, kMaxDim);
      arch.columns.assign(static_cast<std::size_t>(arch.width), SiteType::kSliceL);
      column_set.assign(static_cast<std::size_t>(arch.width), false);
      have_size = true;
    } else if (kw == "column") {
      expect_args(ln, 3);
      if (!have_size) throw ParseError(ln.first, "'column' before 'size'");
      int  x = to_int(ln, 1, 0, arch.width - 1);
      auto t = parse_site_type(ln.second[2]);
      if (!t) throw ParseError(ln.first, "unknown site type '" + std::string(ln.second[2]) + "'");
      if (column_set[x]) throw ParseError(ln.first, "column " + std::to_string(x) + " declared twice");
      arch.columns[x] = *t;
      column_set[x]   = true;
    } else if (kw == "slice_slots") {
      expect_args(ln, 5);
      if (ln.second[1] != "LUT" || ln.second[3] != "FF") throw ParseError(ln.first, "expected 'slice_slots LUT N FF M'");
      arch.lut_slots = to_int(ln, 2, 1, kMaxSlots);
      arch.ff_slots  = to_int(ln, 4, 0, kMaxSlots);
    } else if (kw == "channel_width") {
      expect_args(ln, 3);
      arch.channel_width_h = to_int(ln, 1, 1, 1024);
      arch.channel_width_v = to_int(ln, 2, 1, 1024);
      have_channel         = true;
    } else if (kw == "cr_grid") {
      expect_args(ln, 3);
      arch.clock.cr_cols = to_int(ln, 1, 1, kMaxDim);
      arch.clock.cr_rows = to_int(ln, 2, 1, kMaxDim);
    } else if (kw == "hc_width") {
      expect_args(ln, 2);
      arch.clock.hc_width = to_int(ln, 1, 1, kMaxDim);
    } else if (kw == "clock_limits") {
      expect_args(ln, 3);
      arch.clock.cr_limit = to_int(ln, 1, 1, 100000);
      arch.clock.hc_limit = to_int(ln, 2, 1, 100000);
    } else if (kw == "io_slots") {
      expect_args(ln, 2);
      arch.io_slots = to_int(ln, 1, 1, kMaxSlots);
    } else if (kw == "local_tracks") {
      expect_args(ln, 2);
      arch.local_tracks = to_int(ln, 1, 0, kMaxSlots);
    } else if (kw == "area") {
      expect_args(ln, 4);
      int  k    = 0;
      auto kind = parse_inst_kind(ln.second[1], k);
      auto fld  = parse_field(ln.second[2]);
      if (!kind) throw ParseError(ln.first, "unknown instance kind");
      if (!fld) throw ParseError(ln.first, "unknown field '" + std::string(ln.second[2]) + "'");
      if (!field_member(*kind, *fld)) {
        throw ParseError(ln.first, std::string(ln.second[1]) + " is not a member of field " + std::string(ln.second[2]));
      }
      double v = to_double(ln, 3);
      if (!(v > 0.0) || v > 64.0) throw ParseError(ln.first, "area must lie in (0, 64]");
      arch.area[index_of(*kind)][index_of(*fld)] = v;
    } else if (kw == "tedge") {
      expect_args(ln, 4);
      auto t = parse_site_type(ln.second[1]);
      if (!t) throw ParseError(ln.first, "unknown site type '" + std::string(ln.second[1]) + "'");
      arch.template_edges.push_back({*t, std::string(ln.second[2]), std::string(ln.second[3]), ln.first});
    } else {
      throw ParseError(ln.first, "unknown keyword '" + std::string(kw) + "'");
    }
  }
  if (!have_size) throw ParseError(last_line + 1, "missing required 'size' line");
  if (!have_channel) throw ParseError(last_line + 1, "missing required 'channel_width' line");
  for (int x = 0; x < arch.width; ++x) {
    if (!column_set[x]) throw ParseError(last_line + 1, "column " + std::to_string(x) + " has no site type");
  }
  if (auto problems = check_architecture(arch); !problems.empty()) {
    throw ParseError(last_line + 1, problems.front());
  }
  return arch;
}

std::string write_arch(const Architecture& arch) {
  std::ostringstream os;
  os << "parfkit-arch 1\n";
  os << "size " << arch.width << ' ' << arch.height << '\n';
  for (int x = 0; x < arch.width; ++x) os << "column " << x << ' ' << to_string(arch.columns[x]) << '\n';
  os << "slice_slots LUT " << arch.lut_slots << " FF " << arch.ff_slots << '\n';
  os << "io_slots " << arch.io_slots << '\n';
  os << "channel_width " << arch.channel_width_h << ' ' << arch.channel_width_v << '\n';
  os << "local_tracks " << arch.local_tracks << '\n';
  os << "cr_grid " << arch.clock.cr_cols << ' ' << arch.clock.cr_rows << '\n';
  os << "hc_width " << arch.clock.hc_width << '\n';
  os << "clock_limits " << arch.clock.cr_limit << ' ' << arch.clock.hc_limit << '\n';
  auto defaults = default_area_table();
  for (int k = 0; k < kNumInstKinds; ++k) {
    for (auto f : kAllFields) {
      double v = arch.area[k][index_of(f)];
      if (v != defaults[k][index_of(f)]) {
        auto kind = static_cast<InstKind>(k);
        os << "area " << (kind == InstKind::kLut ? "LUT6" : std::string(to_string(kind))) << ' ' << to_string(f)
           << ' ' << v << '\n';
      }
    }
  }
  for (const auto& e : arch.template_edges) os << "tedge " << to_string(e.site) << ' ' << e.from << ' ' << e.to << '\n';
  return os.str();
}

std::string truth_table_hex(std::uint64_t table, int inputs) {
  int  bits   = 1 << inputs;
  int  digits = (bits + 3) / 4;
  if (bits < 64) table &= (std::uint64_t{1} << bits) - 1;
  std::string s(static_cast<std::size_t>(digits), '0');
  for (int i = digits - 1; i >= 0; --i) {
    s[i] = "0123456789abcdef"[table & 0xF];
    table >>= 4;
  }
  return s;
}

Netlist parse_netlist(std::string_view text) {
  auto lines = tokenize_lines(text);
  expect_header(lines, "parfkit-netlist");
  Netlist nl;
  int     current_net = -1;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& ln = lines[li];
    auto        kw = ln.second[0];
    if (kw == "inst") {
      if (ln.second.size() != 3 && ln.second.size() != 6) {
        throw ParseError(ln.first, "expected 'inst NAME KIND [FIXED x y]'");
      }
      Instance inst;
      inst.name = std::string(ln.second[1]);
      auto kind = parse_inst_kind(ln.second[2], inst.lut_inputs);
      if (!kind) throw ParseError(ln.first, "unknown instance kind '" + std::string(ln.second[2]) + "'");
      inst.kind = *kind;
      if (ln.second.size() == 6) {
        if (ln.second[3] != "FIXED") throw ParseError(ln.first, "expected FIXED");
        inst.fixed   = true;
        inst.fixed_x = to_double(ln, 4);
        inst.fixed_y = to_double(ln, 5);
        if (inst.fixed_x < 0 || inst.fixed_y < 0 || inst.fixed_x >= kMaxDim || inst.fixed_y >= kMaxDim) {
          throw ParseError(ln.first, "fixed location out of range");
        }
      }
      try {
        nl.add_instance(std::move(inst));
      } catch (const std::invalid_argument& e) {
        throw ParseError(ln.first, e.what());
      }
    } else if (kw == "inst_tt") {
      expect_args(ln, 3);
      auto id = nl.find_instance(std::string(ln.second[1]));
      if (!id) throw ParseError(ln.first, "inst_tt for undeclared instance '" + std::string(ln.second[1]) + "'");
      auto& inst = nl.instances[*id];
      if (inst.kind != InstKind::kLut) throw ParseError(ln.first, "inst_tt on a non-LUT instance");
      auto hex = ln.second[2];
      int  digits = ((1 << inst.lut_inputs) + 3) / 4;
      if (static_cast<int>(hex.size()) != digits) {
        throw ParseError(ln.first, "truth table needs " + std::to_string(digits) + " hex digits");
      }
      std::uint64_t v = 0;
      auto [p, ec]    = std::from_chars(hex.data(), hex.data() + hex.size(), v, 16);
      if (ec != std::errc() || p != hex.data() + hex.size()) throw ParseError(ln.first, "bad hex truth table");
      inst.truth_table = v;
    } else if (kw == "net") {
      if (ln.second.size() != 2 && !(ln.second.size() == 3 && ln.second[2] == "CLOCK")) {
        throw ParseError(ln.first, "expected 'net NAME [CLOCK]'");
      }
      try {
        current_net = nl.add_net(std::string(ln.second[1]), ln.second.size() == 3);
      } catch (const std::invalid_argument& e) {
        throw ParseError(ln.first, e.what());
      }
    } else if (kw == "pin") {
      expect_args(ln, 3);
      if (current_net < 0) throw ParseError(ln.first, "'pin' before any 'net'");
      auto inst = nl.find_instance(std::string(ln.second[1]));
      if (!inst) {
        throw ParseError(ln.first, "net '" + nl.nets[current_net].name + "' references undeclared instance '" +
                                       std::string(ln.second[1]) + "'");
      }
      try {
        nl.add_pin(current_net, *inst, std::string(ln.second[2]));
      } catch (const std::invalid_argument& e) {
        throw ParseError(ln.first, "net '" + nl.nets[current_net].name + "': " + e.what());
      }
    } else {
      throw ParseError(ln.first, "unknown keyword '" + std::string(kw) + "'");
    }
  }
  return nl;
}

std::string write_netlist(const Netlist& netlist) {
  std::ostringstream os;
  os << "parfkit-netlist 1\n";
  for (const auto& inst : netlist.instances) {
    os << "inst " << inst.name << ' ';
    if (inst.kind == InstKind::kLut) {
      os << "LUT" << inst.lut_inputs;
    } else {
      os << to_string(inst.kind);
    }
    if (inst.fixed) os << " FIXED " << inst.fixed_x << ' ' << inst.fixed_y;
    os << '\n';
  }
  for (const auto& inst : netlist.instances) {
    if (inst.kind == InstKind::kLut) {
      os << "inst_tt " << inst.name << ' ' << truth_table_hex(inst.truth_table, inst.lut_inputs) << '\n';
    }
  }
  for (const auto& net : netlist.nets) {
    os << "net " << net.name << (net.is_clock ? " CLOCK" : "") << '\n';
    for (int p : net.pins) {
      os << "pin " << netlist.instances[netlist.pins[p].inst].name << ' ' << netlist.pins[p].name << '\n';
    }
  }
  return os.str();
}

std::string write_placement(const PlacementState& state, const Netlist& netlist, PlacementKind kind) {
  if (kind == PlacementKind::kLegal && !state.site_assign) {
    throw std::invalid_argument("legal placement output requires a site assignment");
  }
  std::string out = kind == PlacementKind::kLegal ? "parfkit-placement 1 legal\n" : "parfkit-placement 1 continuous\n";
  for (int i = 0; i < netlist.num_instances(); ++i) {
    out += netlist.instances[i].name;
    if (kind == PlacementKind::kLegal) {
      const auto& a = (*state.site_assign)[i];
      out += ' ' + fmt6(a.x) + ' ' + fmt6(a.y) + ' ' + std::to_string(a.slot) + '\n';
    } else {
      out += ' ' + fmt6(state.x[i]) + ' ' + fmt6(state.y[i]) + " -1\n";
    }
  }
  return out;
}

PlacementState read_placement(std::string_view text, const Netlist& netlist, PlacementKind* kind_out) {
  auto lines = tokenize_lines(text);
  if (lines.empty()) throw ParseError(1, "empty input, expected header 'parfkit-placement 1'");
  const auto& h = lines.front();
  if (h.second.size() != 3 || h.second[0] != "parfkit-placement" || h.second[1] != "1" ||
      (h.second[2] != "legal" && h.second[2] != "continuous")) {
    throw ParseError(h.first, "expected header 'parfkit-placement 1 legal|continuous'");
  }
  PlacementKind kind = h.second[2] == "legal" ? PlacementKind::kLegal : PlacementKind::kContinuous;
  if (kind_out) *kind_out = kind;

  auto              n = static_cast<std::size_t>(netlist.num_instances());
  PlacementState    st;
  st.x.assign(n, 0.0);
  st.y.assign(n, 0.0);
  st.inflate.assign(n, 1.0);
  std::vector<SiteSlot> assign(n);
  std::vector<bool>     seen(n, false);
  for (std::size_t li = 1; li < lines.size(); ++li) {
    const auto& ln = lines[li];
    if (ln.second.size() != 4) throw ParseError(ln.first, "expected 'name x y slot'");
    auto id = netlist.find_instance(std::string(ln.second[0]));
    if (!id) throw ParseError(ln.first, "unknown instance '" + std::string(ln.second[0]) + "'");
    if (seen[*id]) throw ParseError(ln.first, "instance '" + std::string(ln.second[0]) + "' listed twice");
    seen[*id] = true;
    double x  = to_double(ln, 1);
    double y  = to_double(ln, 2);
    int    slot = to_int(ln, 3, -1, 1 << 20);
    if (kind == PlacementKind::kLegal) {
      if (x != std::floor(x) || y != std::floor(y) || x < 0 || y < 0 || x > kMaxDim || y > kMaxDim || slot < 0) {
        throw ParseError(ln.first, "legal placement needs integer site coordinates and a slot");
      }
      assign[*id] = {static_cast<int>(x), static_cast<int>(y), slot};
      st.x[*id]   = x + 0.5;
      st.y[*id]   = y + 0.5;
    } else {
      st.x[*id] = x;
      st.y[*id] = y;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (!seen[i]) {
      throw ParseError(lines.back().first + 1, "instance '" + netlist.instances[i].name + "' missing from placement");
    }
  }
  if (kind == PlacementKind::kLegal) st.site_assign = std::move(assign);
  return st;
}

std::string write_routes(const std::vector<NetRoute>& routes) {
  std::string out;
  for (const auto& r : routes) {
    out += "net " + r.net + '\n';
    for (const auto& [u, v] : r.edges) out += "edge " + u + ' ' + v + '\n';
  }
  return out;
}

std::vector<NetRoute> read_routes(std::string_view text) {
  std::vector<NetRoute> out;
  for (const auto& ln : tokenize_lines(text)) {
    if (ln.second[0] == "net") {
      expect_args(ln, 2);
      out.push_back({std::string(ln.second[1]), {}});
    } else if (ln.second[0] == "edge") {
      expect_args(ln, 3);
      if (out.empty()) throw ParseError(ln.first, "'edge' before any 'net'");
      out.back().edges.emplace_back(std::string(ln.second[1]), std::string(ln.second[2]));
    } else {
      throw ParseError(ln.first, "unknown keyword '" + std::string(ln.second[0]) + "'");
    }
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, std::string_view content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path + "'");
  out << content;
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

}  // namespace parf
