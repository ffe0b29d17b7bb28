/**
 * @file   rrg.cpp
 */
#include "parf/rrg.hpp"

#include <algorithm>
#include <charconv>

#include "parf/netlist.hpp"

namespace parf {

int SiteTemplate::find(std::string_view name) const {
  auto it = index.find(std::string(name));
  return it == index.end() ? -1 : it->second;
}

SiteTemplate site_template(const Architecture& arch, SiteType type) {
  SiteTemplate t;
  auto add = [&t](std::string name, NodeKind kind, int cap = 1) {
    t.index.emplace(name, static_cast<int>(t.nodes.size()));
    t.nodes.push_back({std::move(name), kind, cap});
    return static_cast<int>(t.nodes.size()) - 1;
  };
  if (is_slice(type)) {
    std::vector<int> lut_in, lut_out, sources, sinks, fb;
    for (int j = 0; j < arch.lut_slots; ++j) {
      lut_in.push_back(add("L" + std::to_string(j) + "_IN", NodeKind::kSink, kLutGroupMax));
      lut_out.push_back(add("L" + std::to_string(j) + "_O", NodeKind::kSource));
    }
    std::vector<int> ff_d;
    for (int m = 0; m < arch.ff_slots; ++m) {
      ff_d.push_back(add("F" + std::to_string(m) + "_D", NodeKind::kSink));
      sinks.push_back(ff_d.back());
      sinks.push_back(add("F" + std::to_string(m) + "_CK", NodeKind::kSink));
      sources.push_back(add("F" + std::to_string(m) + "_Q", NodeKind::kSource));
    }
    for (int k = 0; k < arch.local_tracks; ++k) fb.push_back(add("FB" + std::to_string(k), NodeKind::kLocal));
    sources.insert(sources.begin(), lut_out.begin(), lut_out.end());
    sinks.insert(sinks.begin(), lut_in.begin(), lut_in.end());
    // LUT output bypass into the flip-flops paired with its slot
    if (arch.lut_slots > 0)
      for (int m = 0; m < arch.ff_slots; ++m) {
        int j = static_cast<int>(static_cast<long>(m) * arch.lut_slots / arch.ff_slots);
        t.edges.emplace_back(lut_out[j], ff_d[m]);
      }
    for (int s : sources)
      for (int f : fb) t.edges.emplace_back(s, f);
    for (int f : fb)
      for (int s : sinks) t.edges.emplace_back(f, s);
  } else {
    int slots = type == SiteType::kIo ? arch.io_slots : 1;
    int ins = type == SiteType::kIo ? 1 : kDspBramInputs, outs = type == SiteType::kIo ? 1 : kDspBramOutputs;
    for (int s = 0; s < slots; ++s) {
      std::string p = "S" + std::to_string(s) + "_";
      for (int i = 0; i < ins; ++i) add(p + "I" + std::to_string(i), NodeKind::kSink);
      for (int o = 0; o < outs; ++o) add(p + "O" + std::to_string(o), NodeKind::kSource);
    }
  }
  for (const auto& e : arch.template_edges) {
    if (e.site != type) continue;
    int u = t.find(e.from), v = t.find(e.to);
    if (u < 0 || v < 0)
      throw ArchError("tedge on line " + std::to_string(e.line) + ": unknown node '" + (u < 0 ? e.from : e.to) +
                      "' in " + std::string(to_string(type)) + " template");
    t.edges.emplace_back(u, v);
  }
  return t;
}

namespace {

/// Global-grid edges around site (x, y): left, right, down, up where present.
int incident_edges(int w, int h, int x, int y, int out[4]) {
  int nh = (w - 1) * h, n = 0;
  if (x > 0) out[n++] = y * (w - 1) + x - 1;
  if (x + 1 < w) out[n++] = y * (w - 1) + x;
  if (y > 0) out[n++] = nh + (y - 1) * w + x;
  if (y + 1 < h) out[n++] = nh + y * w + x;
  return n;
}

bool parse_int(std::string_view s, int& v) {
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  return ec == std::errc() && p == s.data() + s.size() && !s.empty();
}

/// Splits on '_' into exactly `n` parts.
bool split_parts(std::string_view s, std::size_t n, std::vector<std::string_view>& out) {
  out.clear();
  while (out.size() + 1 < n) {
    auto k = s.find('_');
    if (k == std::string_view::npos) return false;
    out.push_back(s.substr(0, k));
    s.remove_prefix(k + 1);
  }
  out.push_back(s);
  return true;
}

}  // namespace

bool RoutingResourceGraph::has_edge(int u, int v) const {
  auto o = out(u);
  return std::binary_search(o.begin(), o.end(), v);
}

int RoutingResourceGraph::site_node(int x, int y, std::string_view name) const {
  if (x < 0 || y < 0 || x >= width || y >= height) return -1;
  int s = y * width + x;
  int n = templates[static_cast<std::size_t>(site_type_index[s])].find(name);
  return n < 0 ? -1 : site_base[s] + n;
}

int RoutingResourceGraph::wire(int e, int track) const {
  int nh = num_h_edges();
  return e < nh ? wire_base + e * cw_h + track : wire_base + nh * cw_h + (e - nh) * cw_v + track;
}

std::string RoutingResourceGraph::id(int v) const {
  if (v >= wire_base) {
    int k = v - wire_base, nh = num_h_edges();
    if (k < nh * cw_h) {
      int e = k / cw_h;
      return "chan_h_" + std::to_string(e % (width - 1)) + "_" + std::to_string(e / (width - 1)) + "_" +
             std::to_string(k % cw_h);
    }
    k -= nh * cw_h;
    int e = k / cw_v;
    return "chan_v_" + std::to_string(e % width) + "_" + std::to_string(e / width) + "_" + std::to_string(k % cw_v);
  }
  int s = static_cast<int>(std::upper_bound(site_base.begin(), site_base.end(), v) - site_base.begin()) - 1;
  const auto& t = templates[static_cast<std::size_t>(site_type_index[s])];
  return "site_" + std::to_string(s % width) + "_" + std::to_string(s / width) + "/" +
         t.nodes[static_cast<std::size_t>(v - site_base[s])].name;
}

std::optional<int> RoutingResourceGraph::find(std::string_view sid) const {
  std::vector<std::string_view> parts;
  int                           x = 0, y = 0, k = 0;
  if (sid.starts_with("site_")) {
    auto slash = sid.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    if (!split_parts(sid.substr(5, slash - 5), 2, parts) || !parse_int(parts[0], x) || !parse_int(parts[1], y))
      return std::nullopt;
    int v = site_node(x, y, sid.substr(slash + 1));
    return v < 0 ? std::nullopt : std::optional<int>(v);
  }
  bool h = sid.starts_with("chan_h_");
  if (!h && !sid.starts_with("chan_v_")) return std::nullopt;
  if (!split_parts(sid.substr(7), 3, parts) || !parse_int(parts[0], x) || !parse_int(parts[1], y) ||
      !parse_int(parts[2], k))
    return std::nullopt;
  if (x < 0 || y < 0 || k < 0) return std::nullopt;
  if (h) {
    if (x >= width - 1 || y >= height || k >= cw_h) return std::nullopt;
    return wire(y * (width - 1) + x, k);
  }
  if (x >= width || y >= height - 1 || k >= cw_v) return std::nullopt;
  return wire(num_h_edges() + y * width + x, k);
}

RoutingResourceGraph build_rrg(const Architecture& arch) {
  RoutingResourceGraph g;
  g.width  = arch.width;
  g.height = arch.height;
  g.cw_h   = arch.channel_width_h;
  g.cw_v   = arch.channel_width_v;
  for (int t = 0; t < kNumSiteTypes; ++t) g.templates.push_back(site_template(arch, static_cast<SiteType>(t)));

  const int ns = arch.num_sites();
  int       next = 0;
  for (int s = 0; s < ns; ++s) {
    int ti = index_of(arch.site_type(s % arch.width));
    g.site_type_index.push_back(ti);
    g.site_base.push_back(next);
    for (const auto& n : g.templates[static_cast<std::size_t>(ti)].nodes) {
      g.kind.push_back(n.kind);
      g.capacity.push_back(n.capacity);
      g.site_a.push_back(s);
      g.site_b.push_back(s);
    }
    next += static_cast<int>(g.templates[static_cast<std::size_t>(ti)].nodes.size());
  }
  g.wire_base  = next;
  const int nh = g.num_h_edges(), nv = arch.width * (arch.height - 1);
  for (int e = 0; e < nh + nv; ++e) {
    int a = 0, b = 0;
    if (e < nh) {
      a = (e / (arch.width - 1)) * arch.width + e % (arch.width - 1);
      b = a + 1;
    } else {
      a = e - nh;
      b = a + arch.width;
    }
    for (int k = 0, cw = e < nh ? g.cw_h : g.cw_v; k < cw; ++k) {
      g.kind.push_back(NodeKind::kWire);
      g.capacity.push_back(1);
      g.site_a.push_back(a);
      g.site_b.push_back(b);
    }
  }
  const int nvtx = g.num_vertices();
  g.usage.assign(static_cast<std::size_t>(nvtx), 0);
  g.history.assign(static_cast<std::size_t>(nvtx), 0.0);

  // two passes over the same generator: count, then fill
  std::vector<int> count(static_cast<std::size_t>(nvtx) + 1, 0);
  auto             generate = [&](auto&& emit) {
    for (int s = 0; s < ns; ++s) {
      const auto& t    = g.templates[static_cast<std::size_t>(g.site_type_index[s])];
      int         base = g.site_base[s];
      for (auto [u, v] : t.edges) emit(base + u, base + v);
      int inc[4];
      int ni = incident_edges(arch.width, arch.height, s % arch.width, s / arch.width, inc);
      for (int i = 0; i < ni; ++i) {
        int cw = inc[i] < nh ? g.cw_h : g.cw_v;
        for (int k = 0; k < cw; ++k) {
          int w = g.wire(inc[i], k);
          for (std::size_t n = 0; n < t.nodes.size(); ++n) {
            if (t.nodes[n].kind == NodeKind::kSource) emit(base + static_cast<int>(n), w);
            if (t.nodes[n].kind == NodeKind::kSink) emit(w, base + static_cast<int>(n));
          }
          // switch box: same track and the next one on every other side
          for (int j = 0; j < ni; ++j) {
            if (j == i) continue;
            int cj = inc[j] < nh ? g.cw_h : g.cw_v;
            emit(w, g.wire(inc[j], k % cj));
            if (cj > 1) emit(w, g.wire(inc[j], (k + 1) % cj));
          }
        }
      }
    }
  };
  generate([&](int u, int) { ++count[static_cast<std::size_t>(u) + 1]; });
  for (int v = 0; v < nvtx; ++v) count[v + 1] += count[v];
  g.offsets = count;
  g.targets.assign(static_cast<std::size_t>(count.back()), 0);
  generate([&](int u, int v) { g.targets[static_cast<std::size_t>(count[u]++)] = v; });

  // sort and drop duplicate edges per vertex
  int write = 0;
  for (int v = 0; v < nvtx; ++v) {
    auto b = g.targets.begin() + g.offsets[v], e = g.targets.begin() + g.offsets[v + 1];
    std::sort(b, e);
    auto last     = std::unique(b, e);
    g.offsets[v]  = write;
    write        += static_cast<int>(std::copy(b, last, g.targets.begin() + write) - (g.targets.begin() + write));
  }
  g.offsets[nvtx] = write;
  g.targets.resize(static_cast<std::size_t>(write));
  return g;
}

}  // namespace parf
