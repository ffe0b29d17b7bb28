/**
 * @file   netlist.hpp
 * @brief  Instances, pins and nets. Immutable once parsed; file order is
 *         iteration order everywhere downstream.
 */
#ifndef PARF_NETLIST_HPP
#define PARF_NETLIST_HPP

#include <cstdint>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "parf/arch.hpp"

namespace parf {

inline constexpr int kDspBramInputs  = 16;
inline constexpr int kDspBramOutputs = 8;
inline constexpr int kDramInputs     = 6;
inline constexpr int kShiftInputs    = 2;

/// What a pin name means for a given instance kind.
struct PinRole {
  bool output = false;
  bool clock  = false;
  int  index  = 0;  ///< logical input/output index
};

/// Resolves a pin name against the site template of `kind`:
///   LUTk: I0..I(k-1), O   DRAM: I0..I5, O   SHIFT: I0..I1, O
///   FF: D, CK, Q          DSP/BRAM: I0..I15, O0..O7     IO: I0, O0
std::optional<PinRole> pin_role(InstKind kind, int lut_inputs, std::string_view name);

/// Number of logical inputs that feed the LUT-input group of a LUT-like slot.
int lut_group_inputs(InstKind kind, int lut_inputs);

struct Instance {
  std::string      name;
  InstKind         kind       = InstKind::kLut;
  int              lut_inputs = 0;
  bool             fixed      = false;
  double           fixed_x    = 0.0;  ///< site coordinates when fixed
  double           fixed_y    = 0.0;
  std::uint64_t    truth_table = 0;   ///< bit b = output for input vector b (LUT only)
  std::vector<int> pins;
};

struct Pin {
  int         inst = -1;
  std::string name;
  int         net = -1;
  PinRole     role;
  double      offset_x = 0.0;
  double      offset_y = 0.0;
};

struct Net {
  std::string      name;
  bool             is_clock = false;
  std::vector<int> pins;
  int              driver = -1;  ///< pin id of the driver, -1 if none or ambiguous
};

class Netlist {
 public:
  std::vector<Instance> instances;
  std::vector<Pin>      pins;
  std::vector<Net>      nets;

  int num_instances() const { return static_cast<int>(instances.size()); }
  int num_nets() const { return static_cast<int>(nets.size()); }

  std::optional<int> find_instance(const std::string& name) const;
  std::optional<int> find_net(const std::string& name) const;

  /// Adds an instance; returns its id. Throws std::invalid_argument on duplicates.
  int add_instance(Instance inst);
  /// Adds a net; returns its id. Throws std::invalid_argument on duplicates.
  int add_net(std::string name, bool is_clock);
  /// Connects `inst.pin_name` to `net`. Throws std::invalid_argument if the
  /// pin name is not defined for the instance kind.
  int add_pin(int net, int inst, const std::string& pin_name);

  /// Clock nets each instance is a sink of, in net-id order.
  std::vector<std::vector<int>> clock_nets_by_instance() const;

 private:
  std::unordered_map<std::string, int> inst_by_name_;
  std::unordered_map<std::string, int> net_by_name_;
};

/// Empty iff every instance kind has a compatible site type in `arch`,
/// every net has >= 2 pins with exactly one driver, and pin names are valid.
std::vector<std::string> validate_netlist(const Architecture& arch, const Netlist& netlist);

}  // namespace parf

#endif
