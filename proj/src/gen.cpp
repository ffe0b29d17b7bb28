/**
 * @file   gen.cpp
 *
 * Connectivity follows a binary hierarchy over a linear order of instances:
 * a sink picks a level l with P(level >= l) = 2^(l (p - 1)) and draws its
 * driver from the sibling block of size 2^(l-1). Larger Rent exponents give
 * longer connections.
 */
#include "parf/gen.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <string>
#include <vector>

namespace parf {

namespace {

struct Source {
  int         inst;
  std::string pin;
};

struct Sink {
  int         inst;
  std::string pin;
};

int slice_columns(const Architecture& a, SiteType t) {
  return static_cast<int>(std::count(a.columns.begin(), a.columns.end(), t));
}

void place_special_column(Architecture& a, SiteType t, int count, int anchor) {
  for (int k = 0; k < count; ++k) {
    // nearest SLICEL column to the anchor, scanning outward
    for (int d = 0; d < a.width; ++d) {
      int x = anchor + ((d % 2) ? -(d + 1) / 2 : d / 2);
      if (x > 0 && x < a.width - 1 && a.columns[x] == SiteType::kSliceL) {
        a.columns[x] = t;
        break;
      }
    }
  }
}

}  // namespace

Architecture generate_arch(const GenConfig& c) {
  if (c.width < 4 || c.height < 4) throw GenerationError("generation: layout must be at least 4x4");
  Architecture a;
  a.width  = c.width;
  a.height = c.height;
  a.columns.assign(c.width, SiteType::kSliceL);
  a.columns.front() = SiteType::kIo;
  a.columns.back()  = SiteType::kIo;
  if (c.slicem_frac > 0.0) {
    int period = std::max(1, static_cast<int>(std::lround(1.0 / c.slicem_frac)));
    for (int x = 1; x < c.width - 1; ++x) {
      if ((x - 1) % period == period / 2) a.columns[x] = SiteType::kSliceM;
    }
  }
  auto cols_for = [&](int n) {
    return n > 0 ? static_cast<int>(std::ceil(n / (c.max_utilization * c.height))) : 0;
  };
  place_special_column(a, SiteType::kDsp, cols_for(c.dsps), c.width / 3);
  place_special_column(a, SiteType::kBram, cols_for(c.brams), 2 * c.width / 3);
  a.channel_width_h = c.channel_width;
  a.channel_width_v = c.channel_width;
  auto grid         = [](int req, int dim) { return req > 0 ? req : (dim % 2 == 0 && dim >= 8 ? 2 : 1); };
  a.clock.cr_cols   = grid(c.cr_cols, c.width);
  a.clock.cr_rows   = grid(c.cr_rows, c.height);
  auto problems     = check_architecture(a);
  if (!problems.empty()) throw GenerationError("generation: " + problems.front());
  return a;
}

GeneratedDesign generate_design(const GenConfig& c) {
  GeneratedDesign d;
  d.arch        = generate_arch(c);
  const auto& a = d.arch;

  // resource check
  const double u      = c.max_utilization;
  const double slices = slice_columns(a, SiteType::kSliceL) + slice_columns(a, SiteType::kSliceM);
  const double slicem = slice_columns(a, SiteType::kSliceM);
  auto         need   = [&](double demand, double cap, const char* what) {
    if (demand > u * cap) {
      throw GenerationError("generation: " + std::string(what) + " demand " + std::to_string(demand) +
                            " exceeds " + std::to_string(static_cast<int>(u * 100)) + "% of capacity " +
                            std::to_string(cap));
    }
  };
  need(c.luts + c.drams + c.shifts, slices * a.height * a.lut_slots, "LUTL");
  need(c.drams + c.shifts, slicem * a.height * a.lut_slots, "LUTM-AL");
  need(c.ffs, slices * a.height * a.ff_slots, "FF");
  need(c.dsps, slice_columns(a, SiteType::kDsp) * a.height, "DSP");
  need(c.brams, slice_columns(a, SiteType::kBram) * a.height, "BRAM");
  const int io_total = c.ios + c.clocks;
  if (c.clocks > 0 && c.ffs < c.clocks) throw GenerationError("generation: every clock needs at least one FF");
  need(io_total, 2.0 * a.height * a.io_slots, "IO");

  std::mt19937_64 rng(c.seed);
  auto            uniform = [&](int n) { return static_cast<int>(rng() % static_cast<std::uint64_t>(n)); };

  // logic kinds in a random order, FFs numbered in order of appearance
  std::vector<InstKind> kinds;
  kinds.insert(kinds.end(), c.luts, InstKind::kLut);
  kinds.insert(kinds.end(), c.ffs, InstKind::kFf);
  kinds.insert(kinds.end(), c.drams, InstKind::kDram);
  kinds.insert(kinds.end(), c.shifts, InstKind::kShift);
  kinds.insert(kinds.end(), c.dsps, InstKind::kDsp);
  kinds.insert(kinds.end(), c.brams, InstKind::kBram);
  kinds.insert(kinds.end(), c.ios, InstKind::kIo);
  std::shuffle(kinds.begin(), kinds.end(), rng);

  struct Entry {
    InstKind kind;
    int      serial;  ///< per-kind counter
    int      domain;
  };
  std::vector<Entry>      order;
  std::array<int, kNumInstKinds> serial{};
  for (auto k : kinds) {
    int s  = serial[index_of(k)]++;
    int dm = 0;
    if (c.clocks > 0) dm = k == InstKind::kFf ? s % c.clocks : uniform(c.clocks);
    order.push_back({k, s, dm});
  }
  // clock domains occupy contiguous blocks of the hierarchy
  std::stable_sort(order.begin(), order.end(), [](const Entry& x, const Entry& y) { return x.domain < y.domain; });

  // fixed IO sites spread along both edge columns
  std::vector<std::pair<int, int>> io_sites;
  {
    int per_side = (io_total + 1) / 2;
    for (int t = 0; t < io_total; ++t) {
      int side = t % 2, k = t / 2;
      int y    = per_side > 0 ? static_cast<int>((static_cast<long>(k) * a.height) / per_side) : 0;
      io_sites.emplace_back(side ? a.width - 1 : 0, std::min(y, a.height - 1));
    }
  }
  int next_io = 0;

  static const std::array<double, 5> k_weights{0.10, 0.15, 0.25, 0.20, 0.30};
  std::discrete_distribution<int>    pick_k(k_weights.begin(), k_weights.end());

  Netlist&                         nl = d.netlist;
  std::vector<std::vector<Source>> outs;
  std::vector<std::vector<Sink>>   ins;
  const int                        data_inputs = c.ios / 2;
  for (const auto& e : order) {
    Instance in;
    in.kind = e.kind;
    std::vector<Source> o;
    std::vector<Sink>   s;
    int                 id = nl.num_instances();
    switch (e.kind) {
      case InstKind::kLut: {
        in.name       = "lut" + std::to_string(e.serial);
        in.lut_inputs = 2 + pick_k(rng);
        int bits      = 1 << in.lut_inputs;
        in.truth_table = rng();
        if (bits < 64) in.truth_table &= (std::uint64_t{1} << bits) - 1;
        for (int k = 0; k < in.lut_inputs; ++k) s.push_back({id, "I" + std::to_string(k)});
        o.push_back({id, "O"});
        break;
      }
      case InstKind::kFf:
        in.name = "ff" + std::to_string(e.serial);
        s.push_back({id, "D"});
        o.push_back({id, "Q"});
        break;
      case InstKind::kDram:
        in.name = "dram" + std::to_string(e.serial);
        for (int k = 0; k < kDramInputs; ++k) s.push_back({id, "I" + std::to_string(k)});
        o.push_back({id, "O"});
        break;
      case InstKind::kShift:
        in.name = "shift" + std::to_string(e.serial);
        for (int k = 0; k < kShiftInputs; ++k) s.push_back({id, "I" + std::to_string(k)});
        o.push_back({id, "O"});
        break;
      case InstKind::kDsp:
      case InstKind::kBram:
        in.name = (e.kind == InstKind::kDsp ? "dsp" : "bram") + std::to_string(e.serial);
        for (int k = 0; k < 8; ++k) s.push_back({id, "I" + std::to_string(k)});
        for (int k = 0; k < 4; ++k) o.push_back({id, "O" + std::to_string(k)});
        break;
      case InstKind::kIo: {
        in.name  = "io" + std::to_string(e.serial);
        in.fixed = true;
        auto [x, y] = io_sites[next_io++];
        in.fixed_x = x;
        in.fixed_y = y;
        if (e.serial < data_inputs) o.push_back({id, "O0"});
        else s.push_back({id, "I0"});
        break;
      }
    }
    nl.add_instance(std::move(in));
    outs.push_back(std::move(o));
    ins.push_back(std::move(s));
  }

  // driver choice per sink
  const int n      = nl.num_instances();
  int       levels = 1;
  while ((1 << levels) < n) ++levels;
  std::vector<std::vector<int>> sinks_of;  // per source, in sink creation order
  std::vector<Source>           sources;
  std::vector<std::vector<int>> source_ids(n);
  for (int i = 0; i < n; ++i) {
    for (const auto& s : outs[i]) {
      source_ids[i].push_back(static_cast<int>(sources.size()));
      sources.push_back(s);
    }
  }
  sinks_of.resize(sources.size());
  std::vector<Sink>                 all_sinks;
  std::vector<int>                  sink_source;
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < n; ++i) {
    std::vector<int> used;
    for (const auto& s : ins[i]) {
      int chosen = -1;
      for (int attempt = 0; attempt < 24 && chosen < 0; ++attempt) {
        double r = std::max(unit(rng), 1e-12);
        int    l = c.rent < 1.0 ? static_cast<int>(std::ceil(std::log(r) / ((c.rent - 1.0) * std::log(2.0)))) : levels;
        l        = std::clamp(l, 1, levels);
        for (; l <= levels; ++l) {
          int block = 1 << l, half = block >> 1;
          int start = (i / block) * block;
          int sib   = (i - start) < half ? start + half : start;
          int lo = sib, hi = std::min(n, sib + half);
          if (lo >= hi) continue;
          int cand = lo + uniform(hi - lo);
          if (cand == i || source_ids[cand].empty()) continue;
          int src = source_ids[cand][uniform(static_cast<int>(source_ids[cand].size()))];
          if (std::find(used.begin(), used.end(), src) != used.end()) continue;
          chosen = src;
          break;
        }
      }
      if (chosen < 0) continue;
      used.push_back(chosen);
      sinks_of[chosen].push_back(static_cast<int>(all_sinks.size()));
      all_sinks.push_back(s);
    }
  }

  int net_serial = 0;
  for (std::size_t src = 0; src < sources.size(); ++src) {
    if (sinks_of[src].empty()) continue;
    int id = nl.add_net("n" + std::to_string(net_serial++), false);
    nl.add_pin(id, sources[src].inst, sources[src].pin);
    for (int k : sinks_of[src]) nl.add_pin(id, all_sinks[k].inst, all_sinks[k].pin);
  }

  // clock nets: one fixed IO driver each, FF clock pins round-robin
  std::vector<int> clock_net(c.clocks, -1);
  for (int k = 0; k < c.clocks; ++k) {
    Instance in;
    in.name     = "clkio" + std::to_string(k);
    in.kind     = InstKind::kIo;
    in.fixed    = true;
    auto [x, y] = io_sites[next_io++];
    in.fixed_x  = x;
    in.fixed_y  = y;
    int drv     = nl.add_instance(std::move(in));
    clock_net[k] = nl.add_net("clk" + std::to_string(k), true);
    nl.add_pin(clock_net[k], drv, "O0");
  }
  if (c.clocks > 0) {
    std::vector<int> ff_by_serial(c.ffs, -1);
    for (int i = 0; i < n; ++i) {
      if (nl.instances[i].kind == InstKind::kFf) ff_by_serial[std::stoi(nl.instances[i].name.substr(2))] = i;
    }
    for (int j = 0; j < c.ffs; ++j) nl.add_pin(clock_net[j % c.clocks], ff_by_serial[j], "CK");
  }
  return d;
}

}  // namespace parf
