/**
 * @file   arch.hpp
 * @brief  FPGA architecture model: columns of typed sites, slot capacities,
 *         routing channels and the clock-region / half-column grid.
 */
#ifndef PARF_ARCH_HPP
#define PARF_ARCH_HPP

#include <array>
#include <string>
#include <vector>

#include "parf/types.hpp"

namespace parf {

struct ClockArchitecture {
  int cr_cols  = 1;
  int cr_rows  = 1;
  int cr_limit = 24;
  int hc_limit = 12;
  int hc_width = 2;
};

/// Extra intra-site connection declared in the architecture file
/// (`tedge TYPE FROM TO`). Node names refer to the site template.
struct TemplateEdge {
  SiteType    site;
  std::string from;
  std::string to;
  int         line = 0;
};

using AreaTable = std::array<std::array<double, kNumFields>, kNumInstKinds>;

/// Default per-kind field areas: one slot per LUT-like or FF instance, one
/// site per DSP/BRAM.
AreaTable default_area_table();

struct Architecture {
  int                   width  = 0;
  int                   height = 0;
  std::vector<SiteType> columns;
  int                   lut_slots       = 8;
  int                   ff_slots        = 16;
  int                   io_slots        = 4;
  int                   channel_width_h = 0;
  int                   channel_width_v = 0;
  int                   local_tracks    = 8;
  ClockArchitecture     clock;
  AreaTable             area = default_area_table();
  std::vector<TemplateEdge> template_edges;

  SiteType site_type(int x) const { return columns.at(static_cast<std::size_t>(x)); }
  int      num_sites() const { return width * height; }
  int      site_index(int x, int y) const { return y * width + x; }

  /// Field resource supplied by one site of type `t`.
  double site_capacity(SiteType t, Field f) const;
  /// Instance slots of a site of type `t` (LUT + FF slots for slices).
  int    site_slots(SiteType t) const;

  double cr_width() const { return static_cast<double>(width) / clock.cr_cols; }
  double cr_height() const { return static_cast<double>(height) / clock.cr_rows; }
  int    num_crs() const { return clock.cr_cols * clock.cr_rows; }
  /// Half-column groups per clock region (the last one may be narrower).
  int    hc_groups_per_cr() const;
  int    num_hcs() const { return num_crs() * hc_groups_per_cr() * 2; }
};

struct CrIndex {
  int  col = 0;
  int  row = 0;
  bool operator==(const CrIndex&) const = default;
};

struct HcIndex {
  CrIndex cr;
  int     group = 0;
  bool    upper = false;
  bool    operator==(const HcIndex&) const = default;
};

/// Clock region containing (x, y). Regions are half-open cells
/// [c*w, (c+1)*w) x [r*h, (r+1)*h). Throws std::domain_error outside the layout.
CrIndex clock_region_of(const Architecture& arch, double x, double y);
/// Half column containing (x, y): hc_width columns wide, half a CR tall.
HcIndex half_column_of(const Architecture& arch, double x, double y);

int flat_index(const Architecture& arch, CrIndex cr);
int flat_index(const Architecture& arch, HcIndex hc);

/// Checks structural invariants. Returns a list of human-readable problems.
std::vector<std::string> check_architecture(const Architecture& arch);

}  // namespace parf

#endif
