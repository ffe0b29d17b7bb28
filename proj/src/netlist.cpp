/**
 * @file   netlist.cpp
 */
#include "parf/netlist.hpp"

#include <charconv>
#include <stdexcept>

namespace parf {

namespace {

std::optional<int> parse_index(std::string_view s) {
  if (s.empty() || s.size() > 3) return std::nullopt;
  int v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  if (s.size() > 1 && s[0] == '0') return std::nullopt;
  return v;
}

std::optional<PinRole> indexed(std::string_view name, char prefix, int count, bool output) {
  if (name.size() < 2 || name[0] != prefix) return std::nullopt;
  auto idx = parse_index(name.substr(1));
  if (!idx || *idx >= count) return std::nullopt;
  return PinRole{output, false, *idx};
}

}  // namespace

int lut_group_inputs(InstKind kind, int lut_inputs) {
  switch (kind) {
    case InstKind::kLut: return lut_inputs;
    case InstKind::kDram: return kDramInputs;
    case InstKind::kShift: return kShiftInputs;
    default: return 0;
  }
}

std::optional<PinRole> pin_role(InstKind kind, int lut_inputs, std::string_view name) {
  switch (kind) {
    case InstKind::kLut:
    case InstKind::kDram:
    case InstKind::kShift:
      if (name == "O") return PinRole{true, false, 0};
      return indexed(name, 'I', lut_group_inputs(kind, lut_inputs), false);
    case InstKind::kFf:
      if (name == "D") return PinRole{false, false, 0};
      if (name == "CK") return PinRole{false, true, 0};
      if (name == "Q") return PinRole{true, false, 0};
      return std::nullopt;
    case InstKind::kDsp:
    case InstKind::kBram:
      if (auto r = indexed(name, 'I', kDspBramInputs, false)) return r;
      return indexed(name, 'O', kDspBramOutputs, true);
    case InstKind::kIo:
      if (name == "I0") return PinRole{false, false, 0};
      if (name == "O0") return PinRole{true, false, 0};
      return std::nullopt;
  }
  return std::nullopt;
}

std::optional<int> Netlist::find_instance(const std::string& name) const {
  auto it = inst_by_name_.find(name);
  if (it == inst_by_name_.end()) return std::nullopt;
  return it->second;
}

std::optional<int> Netlist::find_net(const std::string& name) const {
  auto it = net_by_name_.find(name);
  if (it == net_by_name_.end()) return std::nullopt;
  return it->second;
}

int Netlist::add_instance(Instance inst) {
  int id = num_instances();
  if (!inst_by_name_.emplace(inst.name, id).second) {
    throw std::invalid_argument("duplicate instance name '" + inst.name + "'");
  }
  inst.pins.clear();
  instances.push_back(std::move(inst));
  return id;
}

int Netlist::add_net(std::string name, bool is_clock) {
  int id = num_nets();
  if (!net_by_name_.emplace(name, id).second) {
    throw std::invalid_argument("duplicate net name '" + name + "'");
  }
  nets.push_back(Net{std::move(name), is_clock, {}, -1});
  return id;
}

int Netlist::add_pin(int net, int inst, const std::string& pin_name) {
  auto& in   = instances.at(static_cast<std::size_t>(inst));
  auto  role = pin_role(in.kind, in.lut_inputs, pin_name);
  if (!role) {
    throw std::invalid_argument("pin '" + pin_name + "' is not defined for instance '" + in.name + "'");
  }
  int id = static_cast<int>(pins.size());
  pins.push_back(Pin{inst, pin_name, net, *role, 0.0, 0.0});
  in.pins.push_back(id);
  auto& n = nets.at(static_cast<std::size_t>(net));
  n.pins.push_back(id);
  if (role->output) n.driver = (n.driver == -1) ? id : -2;
  return id;
}

std::vector<std::vector<int>> Netlist::clock_nets_by_instance() const {
  std::vector<std::vector<int>> out(instances.size());
  for (int n = 0; n < num_nets(); ++n) {
    if (!nets[n].is_clock) continue;
    for (int p : nets[n].pins) {
      if (p == nets[n].driver) continue;
      auto& v = out[pins[p].inst];
      if (v.empty() || v.back() != n) v.push_back(n);
    }
  }
  return out;
}

std::vector<std::string> validate_netlist(const Architecture& arch, const Netlist& netlist) {
  std::vector<std::string> out;
  std::array<bool, kNumSiteTypes> present{};
  for (auto t : arch.columns) present[index_of(t)] = true;
  for (const auto& inst : netlist.instances) {
    bool ok = false;
    for (int t = 0; t < kNumSiteTypes; ++t) ok = ok || (present[t] && site_accepts(static_cast<SiteType>(t), inst.kind));
    if (!ok) {
      out.push_back("instance '" + inst.name + "' of kind " + std::string(to_string(inst.kind)) +
                    " has no compatible site in the architecture");
    }
    if (inst.kind == InstKind::kIo && !inst.fixed) {
      out.push_back("IO instance '" + inst.name + "' must be fixed");
    }
    if (inst.fixed) {
      int x = static_cast<int>(inst.fixed_x);
      int y = static_cast<int>(inst.fixed_y);
      if (inst.fixed_x < 0 || inst.fixed_y < 0 || x >= arch.width || y >= arch.height) {
        out.push_back("fixed instance '" + inst.name + "' lies outside the layout");
      } else if (!site_accepts(arch.site_type(x), inst.kind)) {
        out.push_back("fixed instance '" + inst.name + "' sits on an incompatible site");
      }
    }
    for (int p : inst.pins) {
      const auto& pin = netlist.pins[p];
      if (!pin_role(inst.kind, inst.lut_inputs, pin.name)) {
        out.push_back("pin '" + pin.name + "' not in template of '" + inst.name + "'");
      }
    }
  }
  for (const auto& net : netlist.nets) {
    if (net.pins.size() < 2) out.push_back("net '" + net.name + "' has fewer than 2 pins");
    int drivers = 0;
    for (int p : net.pins) drivers += netlist.pins[p].role.output ? 1 : 0;
    if (drivers != 1) {
      out.push_back("net '" + net.name + "' has " + std::to_string(drivers) + " drivers");
    }
  }
  return out;
}

}  // namespace parf
