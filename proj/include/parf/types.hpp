/**
 * @file   types.hpp
 * @brief  Site types, instance kinds and electric-field identifiers.
 */
#ifndef PARF_TYPES_HPP
#define PARF_TYPES_HPP

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace parf {

enum class SiteType : std::uint8_t { kSliceL, kSliceM, kDsp, kBram, kIo };
inline constexpr int kNumSiteTypes = 5;

enum class InstKind : std::uint8_t { kLut, kFf, kDsp, kBram, kDram, kShift, kIo };
inline constexpr int kNumInstKinds = 7;

/// Electric fields of the placer. LUTL models LUT resources of both slice
/// flavours; LUTM-AL models the additional logic only SLICEM supplies.
enum class Field : std::uint8_t { kLutL, kLutMAl, kFf, kDsp, kBram };
inline constexpr int kNumFields = 5;
inline constexpr std::array<Field, kNumFields> kAllFields = {Field::kLutL, Field::kLutMAl, Field::kFf,
                                                             Field::kDsp, Field::kBram};

std::string_view to_string(SiteType t);
std::string_view to_string(InstKind k);
std::string_view to_string(Field f);

std::optional<SiteType> parse_site_type(std::string_view s);
std::optional<Field>    parse_field(std::string_view s);

/// Parses `LUT2`..`LUT6`, `FF`, `DSP`, `BRAM`, `DRAM`, `SHIFT`, `IO`.
/// `lut_inputs` receives k for LUTs and 0 otherwise.
std::optional<InstKind> parse_inst_kind(std::string_view s, int& lut_inputs);

inline constexpr bool is_lut_like(InstKind k) {
  return k == InstKind::kLut || k == InstKind::kDram || k == InstKind::kShift;
}
inline constexpr bool is_memory_lut(InstKind k) { return k == InstKind::kDram || k == InstKind::kShift; }
inline constexpr bool is_slice(SiteType t) { return t == SiteType::kSliceL || t == SiteType::kSliceM; }

/// Field-membership table. IO instances belong to no field.
inline constexpr bool field_member(InstKind k, Field f) {
  switch (k) {
    case InstKind::kLut: return f == Field::kLutL;
    case InstKind::kDram:
    case InstKind::kShift: return f == Field::kLutL || f == Field::kLutMAl;
    case InstKind::kFf: return f == Field::kFf;
    case InstKind::kDsp: return f == Field::kDsp;
    case InstKind::kBram: return f == Field::kBram;
    case InstKind::kIo: return false;
  }
  return false;
}

/// Whether a site of type `t` can host an instance of kind `k`.
inline constexpr bool site_accepts(SiteType t, InstKind k) {
  switch (k) {
    case InstKind::kLut:
    case InstKind::kFf: return is_slice(t);
    case InstKind::kDram:
    case InstKind::kShift: return t == SiteType::kSliceM;
    case InstKind::kDsp: return t == SiteType::kDsp;
    case InstKind::kBram: return t == SiteType::kBram;
    case InstKind::kIo: return t == SiteType::kIo;
  }
  return false;
}

constexpr int index_of(Field f) { return static_cast<int>(f); }
constexpr int index_of(InstKind k) { return static_cast<int>(k); }
constexpr int index_of(SiteType t) { return static_cast<int>(t); }

/// Parse failure located at a 1-based line number.
class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ": " + what), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

/// Resource demand that the architecture cannot supply.
class InfeasibleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace parf

#endif
