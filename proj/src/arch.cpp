/**
 * @file   arch.cpp
 */
#include "parf/arch.hpp"

#include <cmath>
#include <stdexcept>

namespace parf {

std::string_view to_string(SiteType t) {
  switch (t) {
    case SiteType::kSliceL: return "SLICEL";
    case SiteType::kSliceM: return "SLICEM";
    case SiteType::kDsp: return "DSP";
    case SiteType::kBram: return "BRAM";
    case SiteType::kIo: return "IO";
  }
  return "?";
}

std::string_view to_string(InstKind k) {
  switch (k) {
    case InstKind::kLut: return "LUT";
    case InstKind::kFf: return "FF";
    case InstKind::kDsp: return "DSP";
    case InstKind::kBram: return "BRAM";
    case InstKind::kDram: return "DRAM";
    case InstKind::kShift: return "SHIFT";
    case InstKind::kIo: return "IO";
  }
  return "?";
}

std::string_view to_string(Field f) {
  switch (f) {
    case Field::kLutL: return "LUTL";
    case Field::kLutMAl: return "LUTM-AL";
    case Field::kFf: return "FF";
    case Field::kDsp: return "DSP";
    case Field::kBram: return "BRAM";
  }
  return "?";
}

std::optional<SiteType> parse_site_type(std::string_view s) {
  for (int i = 0; i < kNumSiteTypes; ++i) {
    auto t = static_cast<SiteType>(i);
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

std::optional<Field> parse_field(std::string_view s) {
  for (auto f : kAllFields) {
    if (to_string(f) == s) return f;
  }
  return std::nullopt;
}

std::optional<InstKind> parse_inst_kind(std::string_view s, int& lut_inputs) {
  lut_inputs = 0;
  if (s.size() == 4 && s.substr(0, 3) == "LUT" && s[3] >= '2' && s[3] <= '6') {
    lut_inputs = s[3] - '0';
    return InstKind::kLut;
  }
  for (int i = 0; i < kNumInstKinds; ++i) {
    auto k = static_cast<InstKind>(i);
    if (k != InstKind::kLut && to_string(k) == s) return k;
  }
  return std::nullopt;
}

AreaTable default_area_table() {
  AreaTable t{};
  for (int k = 0; k < kNumInstKinds; ++k) {
    for (auto f : kAllFields) {
      t[k][index_of(f)] = field_member(static_cast<InstKind>(k), f) ? 1.0 : 0.0;
    }
  }
  return t;
}

double Architecture::site_capacity(SiteType t, Field f) const {
  switch (f) {
    case Field::kLutL: return is_slice(t) ? lut_slots : 0.0;
    case Field::kLutMAl: return t == SiteType::kSliceM ? lut_slots : 0.0;
    case Field::kFf: return is_slice(t) ? ff_slots : 0.0;
    case Field::kDsp: return t == SiteType::kDsp ? 1.0 : 0.0;
    case Field::kBram: return t == SiteType::kBram ? 1.0 : 0.0;
  }
  return 0.0;
}

int Architecture::site_slots(SiteType t) const {
  if (is_slice(t)) return lut_slots + ff_slots;
  if (t == SiteType::kIo) return io_slots;
  return 1;
}

int Architecture::hc_groups_per_cr() const {
  int crw = width / clock.cr_cols;
  return (crw + clock.hc_width - 1) / clock.hc_width;
}

namespace {

void check_inside(const Architecture& arch, double x, double y) {
  if (!(x >= 0.0 && x < arch.width && y >= 0.0 && y < arch.height)) {
    throw std::domain_error("coordinate (" + std::to_string(x) + ", " + std::to_string(y) +
                            ") outside layout " + std::to_string(arch.width) + "x" +
                            std::to_string(arch.height));
  }
}

}  // namespace

CrIndex clock_region_of(const Architecture& arch, double x, double y) {
  check_inside(arch, x, y);
  int col = static_cast<int>(std::floor(x / arch.cr_width()));
  int row = static_cast<int>(std::floor(y / arch.cr_height()));
  return {std::min(col, arch.clock.cr_cols - 1), std::min(row, arch.clock.cr_rows - 1)};
}

HcIndex half_column_of(const Architecture& arch, double x, double y) {
  CrIndex cr    = clock_region_of(arch, x, y);
  double  lx    = x - cr.col * arch.cr_width();
  double  ly    = y - cr.row * arch.cr_height();
  int     group = std::min(static_cast<int>(std::floor(lx / arch.clock.hc_width)), arch.hc_groups_per_cr() - 1);
  return {cr, group, ly >= 0.5 * arch.cr_height()};
}

int flat_index(const Architecture& arch, CrIndex cr) { return cr.row * arch.clock.cr_cols + cr.col; }

int flat_index(const Architecture& arch, HcIndex hc) {
  return (flat_index(arch, hc.cr) * arch.hc_groups_per_cr() + hc.group) * 2 + (hc.upper ? 1 : 0);
}

std::vector<std::string> check_architecture(const Architecture& arch) {
  std::vector<std::string> out;
  if (arch.width < 4 || arch.height < 4) out.emplace_back("layout must be at least 4x4 sites");
  if (static_cast<int>(arch.columns.size()) != arch.width) {
    out.emplace_back("every column needs exactly one site type");
  }
  if (arch.channel_width_h < 1 || arch.channel_width_v < 1) out.emplace_back("channel widths must be >= 1");
  if (arch.lut_slots < 1 || arch.ff_slots < 0 || arch.io_slots < 1) out.emplace_back("bad slot counts");
  const auto& c = arch.clock;
  if (c.cr_cols < 1 || c.cr_rows < 1 || arch.width % c.cr_cols != 0 || arch.height % c.cr_rows != 0) {
    out.emplace_back("clock-region grid does not tile the layout");
  }
  if (c.hc_width < 1 || c.cr_limit < 1 || c.hc_limit < 1) out.emplace_back("bad clock limits");
  return out;
}

}  // namespace parf
