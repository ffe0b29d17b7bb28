/**
 * @file   rrg.hpp
 * @brief  Pin-level routing resource graph: per-site templates plus
 *         channel wires, directed edges, per-vertex capacities.
 *
 * Vertex ids are deterministic. Site nodes come first, sites in row-major
 * order (y, then x) and nodes in template order; horizontal channel wires
 * follow (edge-major, then track), then vertical wires. String ids are
 * `site_X_Y/NODE`, `chan_h_X_Y_K` (between (X,Y) and (X+1,Y)) and
 * `chan_v_X_Y_K` (between (X,Y) and (X,Y+1)).
 */
#ifndef PARF_RRG_HPP
#define PARF_RRG_HPP

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "parf/arch.hpp"

namespace parf {

/// Architecture inconsistency found while instantiating templates.
class ArchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class NodeKind : std::uint8_t { kSource, kSink, kLocal, kWire };

struct TemplateNode {
  std::string name;
  NodeKind    kind     = NodeKind::kLocal;
  int         capacity = 1;
};

/// Intra-site nodes and connections of one site type.
struct SiteTemplate {
  std::vector<TemplateNode>            nodes;
  std::vector<std::pair<int, int>>     edges;
  std::unordered_map<std::string, int> index;

  int find(std::string_view name) const;
};

/// Built-in template for `type` plus the architecture's `tedge` lines.
/// Throws ArchError when an extra edge names an unknown node.
SiteTemplate site_template(const Architecture& arch, SiteType type);

/// Maximum inputs of a LUT-input group (the widest LUT-like instance).
inline constexpr int kLutGroupMax = 6;

class RoutingResourceGraph {
 public:
  int width  = 0;
  int height = 0;
  int cw_h   = 0;
  int cw_v   = 0;

  std::vector<SiteTemplate> templates;    ///< indexed by site type
  std::vector<int>          site_type_index;  ///< per site, into `templates`
  std::vector<int>          site_base;        ///< first vertex of each site
  int                       wire_base = 0;

  std::vector<NodeKind> kind;
  std::vector<int>      capacity;
  std::vector<int>      usage;
  std::vector<double>   history;
  /// Sites a vertex touches: both equal for site nodes, the two channel
  /// endpoints for wires (row-major site index).
  std::vector<int> site_a;
  std::vector<int> site_b;

  std::vector<int> offsets;  ///< CSR out-edges
  std::vector<int> targets;

  int num_vertices() const { return static_cast<int>(kind.size()); }
  int num_edges() const { return static_cast<int>(targets.size()); }
  std::span<const int> out(int v) const {
    return {targets.data() + offsets[v], static_cast<std::size_t>(offsets[v + 1] - offsets[v])};
  }
  bool has_edge(int u, int v) const;
  bool is_wire(int v) const { return v >= wire_base; }
  int  num_h_edges() const { return (width - 1) * height; }

  /// Vertex of template node `name` at site (x, y); -1 when absent.
  int site_node(int x, int y, std::string_view name) const;
  /// Track `track` of the channel crossing global-grid edge `e`.
  int wire(int e, int track) const;

  std::string        id(int v) const;
  std::optional<int> find(std::string_view id) const;
};

RoutingResourceGraph build_rrg(const Architecture& arch);

}  // namespace parf

#endif
