/**
 * @file   gen.hpp
 * @brief  Deterministic synthetic designs: column architecture plus a
 *         hierarchically clustered netlist.
 */
#ifndef PARF_GEN_HPP
#define PARF_GEN_HPP

#include <cstdint>
#include <stdexcept>

#include "parf/arch.hpp"
#include "parf/netlist.hpp"

namespace parf {

struct GenConfig {
  int           width  = 16;
  int           height = 16;
  int           luts   = 0;
  int           ffs    = 0;
  int           drams  = 0;
  int           shifts = 0;
  int           dsps   = 0;
  int           brams  = 0;
  int           ios    = 0;  ///< data IOs (half inputs, half outputs)
  int           clocks = 0;  ///< each clock adds one fixed IO driver
  double        rent   = 0.6;
  double        slicem_frac   = 0.25;
  int           channel_width = 40;
  int           cr_cols = 0;  ///< 0: 2 when the layout divides evenly, else 1
  int           cr_rows = 0;
  double        max_utilization = 0.8;
  std::uint64_t seed = 1;
};

struct GeneratedDesign {
  Architecture arch;
  Netlist      netlist;
};

class GenerationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Builds the architecture and netlist. Throws GenerationError when the
/// requested resources exceed `max_utilization` of any field's capacity.
GeneratedDesign generate_design(const GenConfig& config);

/// Architecture alone (columns, channels, clock grid) for `config`.
Architecture generate_arch(const GenConfig& config);

}  // namespace parf

#endif
