#ifndef PARF_TEST_UTIL_HPP
#define PARF_TEST_UTIL_HPP

#include <algorithm>
#include <random>
#include <string>
#include <vector>

#include "parf/arch.hpp"
#include "parf/netlist.hpp"

namespace parf::test {

/// IO at both edges, SLICEL elsewhere except the listed SLICEM columns.
inline Architecture make_arch(int w, int h, std::vector<int> slicem = {}, int cw = 4) {
  Architecture a;
  a.width  = w;
  a.height = h;
  a.columns.assign(static_cast<std::size_t>(w), SiteType::kSliceL);
  a.columns.front() = SiteType::kIo;
  a.columns.back()  = SiteType::kIo;
  for (int x : slicem) a.columns[x] = SiteType::kSliceM;
  a.channel_width_h = cw;
  a.channel_width_v = cw;
  return a;
}

inline Instance make_inst(std::string name, InstKind kind, int k = 0) {
  Instance i;
  i.name       = std::move(name);
  i.kind       = kind;
  i.lut_inputs = k;
  return i;
}

inline Instance make_fixed(std::string name, InstKind kind, double x, double y) {
  Instance i = make_inst(std::move(name), kind);
  i.fixed    = true;
  i.fixed_x  = x;
  i.fixed_y  = y;
  return i;
}

}  // namespace parf::test

namespace parf::test {

/// Random connectivity over DSP-kind instances (16 inputs / 8 outputs each)
/// so nets of up to 16 pins can be formed without running out of pin names.
inline Netlist random_netlist(int num_inst, int num_nets, int min_pins, int max_pins, std::mt19937_64& rng) {
  Netlist nl;
  for (int i = 0; i < num_inst; ++i) nl.add_instance(make_inst("u" + std::to_string(i), InstKind::kDsp));
  std::vector<int> next_in(num_inst, 0), next_out(num_inst, 0);
  for (int n = 0; n < num_nets; ++n) {
    int want = min_pins + static_cast<int>(rng() % static_cast<unsigned>(max_pins - min_pins + 1));
    want     = std::min(want, num_inst);
    std::vector<int> pool(num_inst);
    for (int i = 0; i < num_inst; ++i) pool[i] = i;
    std::shuffle(pool.begin(), pool.end(), rng);
    std::vector<int> chosen;
    for (int i : pool) {
      if (static_cast<int>(chosen.size()) == want) break;
      bool ok = chosen.empty() ? next_out[i] < kDspBramOutputs : next_in[i] < kDspBramInputs;
      if (ok) chosen.push_back(i);
    }
    if (chosen.size() < 2) continue;
    int id = nl.add_net("n" + std::to_string(n), false);
    nl.add_pin(id, chosen[0], "O" + std::to_string(next_out[chosen[0]]++));
    for (std::size_t k = 1; k < chosen.size(); ++k) nl.add_pin(id, chosen[k], "I" + std::to_string(next_in[chosen[k]]++));
  }
  return nl;
}

}  // namespace parf::test

#endif
