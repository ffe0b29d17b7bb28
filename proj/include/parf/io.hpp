/**
 * @file   io.hpp
 * @brief  Line-oriented text formats for architectures, netlists,
 *         placements and routes.
 *
 * All formats are UTF-8, one record per line, whitespace-separated tokens,
 * and `#` starts a comment. Every parser reports problems as ParseError with
 * the offending 1-based line number.
 */
#ifndef PARF_IO_HPP
#define PARF_IO_HPP

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "parf/arch.hpp"
#include "parf/netlist.hpp"
#include "parf/placement.hpp"

namespace parf {

/// Architecture file, header `parfkit-arch 1`. Keywords:
///   size W H | column X TYPE | slice_slots LUT N FF M | channel_width H V
///   cr_grid C R | hc_width N | clock_limits CR HC | io_slots N
///   local_tracks N | area KIND FIELD VALUE | tedge TYPE FROM TO
Architecture parse_arch(std::string_view text);
std::string  write_arch(const Architecture& arch);

/// Netlist file, header `parfkit-netlist 1`. Keywords:
///   inst NAME KIND [FIXED x y] | inst_tt NAME HEXBITS | net NAME [CLOCK]
///   pin INST PINNAME   (attaches to the most recent net)
Netlist     parse_netlist(std::string_view text);
std::string write_netlist(const Netlist& netlist);

std::string truth_table_hex(std::uint64_t table, int inputs);

enum class PlacementKind { kLegal, kContinuous };

/// Placement file, header `parfkit-placement 1 legal|continuous`, then one
/// `name x y slot` line per instance. Legal files carry integer site
/// coordinates; continuous checkpoints carry centres and slot -1.
std::string write_placement(const PlacementState& state, const Netlist& netlist, PlacementKind kind);
/// Reads a placement for `netlist`. Every instance must appear exactly once.
PlacementState read_placement(std::string_view text, const Netlist& netlist, PlacementKind* kind = nullptr);

struct NetRoute {
  std::string                                      net;
  std::vector<std::pair<std::string, std::string>> edges;  ///< tree pre-order
  bool operator==(const NetRoute&) const = default;
};

/// Routes file: `net NAME` followed by `edge U V` lines per net.
std::string           write_routes(const std::vector<NetRoute>& routes);
std::vector<NetRoute> read_routes(std::string_view text);

/// Splits text into lines of tokens, dropping `#` comments. Line numbers
/// are preserved as the first member of each pair.
std::vector<std::pair<int, std::vector<std::string_view>>> tokenize_lines(std::string_view text);

std::string read_file(const std::string& path);
void        write_file(const std::string& path, std::string_view content);

}  // namespace parf

#endif
