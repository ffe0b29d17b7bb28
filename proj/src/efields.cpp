/**
 * @file   efields.cpp
 */
#include "parf/efields.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "parf/parallel.hpp"

namespace parf {

namespace {

int pow2_at_least(int v) {
  int p = 1;
  while (p < v) p <<= 1;
  return p;
}

/// Calls fn(bin, overlap_area) for every bin overlapping [x0,x1) x [y0,y1).
template <typename Fn>
void for_overlaps(const BinGrid& g, double x0, double y0, double x1, double y1, Fn&& fn) {
  int ix0 = std::clamp(static_cast<int>(std::floor(x0 / g.bin_w)), 0, g.nx - 1);
  int ix1 = std::clamp(static_cast<int>(std::floor(x1 / g.bin_w)), 0, g.nx - 1);
  int iy0 = std::clamp(static_cast<int>(std::floor(y0 / g.bin_h)), 0, g.ny - 1);
  int iy1 = std::clamp(static_cast<int>(std::floor(y1 / g.bin_h)), 0, g.ny - 1);
  for (int ix = ix0; ix <= ix1; ++ix) {
    double ox = std::min(x1, (ix + 1) * g.bin_w) - std::max(x0, ix * g.bin_w);
    if (ox <= 0.0) continue;
    for (int iy = iy0; iy <= iy1; ++iy) {
      double oy = std::min(y1, (iy + 1) * g.bin_h) - std::max(y0, iy * g.bin_h);
      if (oy <= 0.0) continue;
      fn(g.index(ix, iy), ox * oy);
    }
  }
}

}  // namespace

BinGrid make_bin_grid(double width, double height, int nx, int ny) {
  BinGrid g;
  g.nx     = nx;
  g.ny     = ny;
  g.width  = width;
  g.height = height;
  g.bin_w  = width / nx;
  g.bin_h  = height / ny;
  return g;
}

BinGrid make_bin_grid(const Architecture& arch) {
  return make_bin_grid(arch.width, arch.height, pow2_at_least(std::max(arch.width, 64)),
                       pow2_at_least(std::max(arch.height, 64)));
}

std::vector<double> build_capacity(const Architecture& arch, Field field, const BinGrid& grid) {
  std::vector<double> cap(static_cast<std::size_t>(grid.size()), 0.0);
  for (int x = 0; x < arch.width; ++x) {
    double c = arch.site_capacity(arch.site_type(x), field);
    if (c <= 0.0) continue;
    for (int y = 0; y < arch.height; ++y) {
      for_overlaps(grid, x, y, x + 1.0, y + 1.0, [&](int b, double a) { cap[b] += c * a; });
    }
  }
  return cap;
}

void subtract_fixed_instances(std::vector<double>& capacity, const Architecture& arch, const Netlist& netlist,
                              Field field, const BinGrid& grid) {
  for (const auto& inst : netlist.instances) {
    if (!inst.fixed) continue;
    double area = arch.area[index_of(inst.kind)][index_of(field)];
    if (area <= 0.0) continue;
    double x = std::floor(inst.fixed_x), y = std::floor(inst.fixed_y);
    for_overlaps(grid, x, y, x + 1.0, y + 1.0,
                 [&](int b, double a) { capacity[b] = std::max(0.0, capacity[b] - area * a); });
  }
}

Stamp make_stamp(const BinGrid& grid, double x, double y, double q) {
  Stamp s;
  s.side      = std::min({std::sqrt(std::max(q, 0.0)), grid.width, grid.height});
  double hx   = x - 0.5 * s.side;
  double hy   = y - 0.5 * s.side;
  s.x0        = std::clamp(hx, 0.0, grid.width - s.side);
  s.y0        = std::clamp(hy, 0.0, grid.height - s.side);
  s.clamped_x = s.x0 != hx;
  s.clamped_y = s.y0 != hy;
  return s;
}

void rasterize_into(const BinGrid& grid, double x, double y, double q, std::vector<double>& rho) {
  if (q <= 0.0) return;
  Stamp  s = make_stamp(grid, x, y, q);
  double d = q / (s.side * s.side);
  for_overlaps(grid, s.x0, s.y0, s.x0 + s.side, s.y0 + s.side, [&](int b, double a) { rho[b] += d * a; });
}

std::vector<double> rasterize(const BinGrid& grid, std::span<const double> x, std::span<const double> y,
                              std::span<const double> q) {
  std::vector<double> rho(static_cast<std::size_t>(grid.size()), 0.0);
  for (std::size_t i = 0; i < q.size(); ++i) rasterize_into(grid, x[i], y[i], q[i], rho);
  return rho;
}

PoissonSolver::PoissonSolver(const BinGrid& grid) : grid_(grid) {
  const int  nx = grid.nx, ny = grid.ny;
  const auto pi = std::numbers::pi;
  auto       basis = [&](int n, std::vector<double>& c, std::vector<double>& s) {
    c.resize(static_cast<std::size_t>(n) * n);
    s.resize(static_cast<std::size_t>(n) * n);
    for (int u = 0; u < n; ++u) {
      for (int i = 0; i < n; ++i) {
        c[u * n + i] = std::cos(pi * u * (i + 0.5) / n);
        s[u * n + i] = std::sin(pi * u * (i + 0.5) / n);
      }
    }
  };
  basis(nx, cos_x_, sin_x_);
  basis(ny, cos_y_, sin_y_);
  dsin_x_.resize(nx);
  dsin_y_.resize(ny);
  for (int u = 0; u < nx; ++u) dsin_x_[u] = std::sin(pi * u / nx) / grid.bin_w;
  for (int v = 0; v < ny; ++v) dsin_y_[v] = std::sin(pi * v / ny) / grid.bin_h;
  inv_eig_.assign(static_cast<std::size_t>(nx) * ny, 0.0);
  for (int u = 0; u < nx; ++u) {
    double cu = (u == 0 ? 1.0 : 2.0) / nx;
    double lx = 4.0 / (grid.bin_w * grid.bin_w) * std::pow(std::sin(pi * u / (2.0 * nx)), 2);
    for (int v = 0; v < ny; ++v) {
      if (u == 0 && v == 0) continue;
      double cv = (v == 0 ? 1.0 : 2.0) / ny;
      double ly = 4.0 / (grid.bin_h * grid.bin_h) * std::pow(std::sin(pi * v / (2.0 * ny)), 2);
      inv_eig_[u * ny + v] = cu * cv / (lx + ly);
    }
  }
}

void PoissonSolver::forward(std::vector<double>& a, int threads) const {
  const int           nx = grid_.nx, ny = grid_.ny;
  std::vector<double> t(a.size(), 0.0);
  parallel_for(nx, threads, [&](std::size_t i) {
    const double* row = &a[i * ny];
    for (int v = 0; v < ny; ++v) {
      const double* b   = &cos_y_[static_cast<std::size_t>(v) * ny];
      double        acc = 0.0;
      for (int j = 0; j < ny; ++j) acc += row[j] * b[j];
      t[i * ny + v] = acc;
    }
  });
  parallel_for(nx, threads, [&](std::size_t u) {
    double* out = &a[u * ny];
    std::fill(out, out + ny, 0.0);
    for (int i = 0; i < nx; ++i) {
      double        c   = cos_x_[u * nx + i];
      const double* row = &t[static_cast<std::size_t>(i) * ny];
      for (int v = 0; v < ny; ++v) out[v] += c * row[v];
    }
  });
}

void PoissonSolver::inverse(std::vector<double>& a, const std::vector<double>& basis_x,
                            const std::vector<double>& basis_y, int threads) const {
  const int           nx = grid_.nx, ny = grid_.ny;
  std::vector<double> t(a.size(), 0.0);
  parallel_for(nx, threads, [&](std::size_t u) {
    double*       out = &t[u * ny];
    const double* row = &a[u * ny];
    for (int v = 0; v < ny; ++v) {
      double c = row[v];
      if (c == 0.0) continue;
      const double* b = &basis_y[static_cast<std::size_t>(v) * ny];
      for (int j = 0; j < ny; ++j) out[j] += c * b[j];
    }
  });
  parallel_for(nx, threads, [&](std::size_t i) {
    double* out = &a[i * ny];
    std::fill(out, out + ny, 0.0);
    for (int u = 0; u < nx; ++u) {
      double        c   = basis_x[static_cast<std::size_t>(u) * nx + i];
      const double* row = &t[static_cast<std::size_t>(u) * ny];
      for (int j = 0; j < ny; ++j) out[j] += c * row[j];
    }
  });
}

PoissonSolution PoissonSolver::solve(std::span<const double> charge, bool want_field, int threads) const {
  const int   n    = grid_.size();
  double      mean = 0.0;
  for (double c : charge) mean += c;
  mean /= n;
  const double        inv_area = 1.0 / grid_.bin_area();
  std::vector<double> coef(static_cast<std::size_t>(n));
  for (int b = 0; b < n; ++b) coef[b] = (charge[b] - mean) * inv_area;
  forward(coef, threads);
  for (int k = 0; k < n; ++k) coef[k] *= inv_eig_[k];

  PoissonSolution sol;
  if (want_field) {
    sol.xi_x = coef;
    sol.xi_y = coef;
    for (int u = 0; u < grid_.nx; ++u) {
      for (int v = 0; v < grid_.ny; ++v) {
        sol.xi_x[u * grid_.ny + v] *= dsin_x_[u];
        sol.xi_y[u * grid_.ny + v] *= dsin_y_[v];
      }
    }
    inverse(sol.xi_x, sin_x_, cos_y_, threads);
    inverse(sol.xi_y, cos_x_, sin_y_, threads);
  }
  sol.psi = std::move(coef);
  inverse(sol.psi, cos_x_, cos_y_, threads);
  double e = 0.0;
  for (int b = 0; b < n; ++b) e += (charge[b] - mean) * sol.psi[b];
  sol.energy = 0.5 * e;
  return sol;
}

PoissonSolution solve_poisson(const PoissonSolver& solver, std::span<const double> charge,
                              std::span<const double> capacity, bool want_field, int threads) {
  if (capacity.empty()) return solver.solve(charge, want_field, threads);
  double peak = 0.0;
  for (double c : capacity) peak = std::max(peak, c);
  std::vector<double> total(charge.begin(), charge.end());
  for (std::size_t b = 0; b < total.size(); ++b) total[b] += peak - capacity[b];
  return solver.solve(total, want_field, threads);
}

std::array<double, 2> stamp_energy_gradient(const BinGrid& g, std::span<const double> psi, double x, double y,
                                            double q) {
  std::array<double, 2> out{0.0, 0.0};
  if (q <= 0.0) return out;
  Stamp  s  = make_stamp(g, x, y, q);
  double d  = q / (s.side * s.side);
  double x1 = s.x0 + s.side, y1 = s.y0 + s.side;
  int    ix0 = std::clamp(static_cast<int>(std::floor(s.x0 / g.bin_w)), 0, g.nx - 1);
  int    ix1 = std::clamp(static_cast<int>(std::floor(x1 / g.bin_w)), 0, g.nx - 1);
  int    iy0 = std::clamp(static_cast<int>(std::floor(s.y0 / g.bin_h)), 0, g.ny - 1);
  int    iy1 = std::clamp(static_cast<int>(std::floor(y1 / g.bin_h)), 0, g.ny - 1);
  if (!s.clamped_x) {
    double acc = 0.0;
    for (int iy = iy0; iy <= iy1; ++iy) {
      double oy = std::min(y1, (iy + 1) * g.bin_h) - std::max(s.y0, iy * g.bin_h);
      if (oy <= 0.0) continue;
      acc += oy * (psi[g.index(ix1, iy)] - psi[g.index(ix0, iy)]);
    }
    out[0] = d * acc;
  }
  if (!s.clamped_y) {
    double acc = 0.0;
    for (int ix = ix0; ix <= ix1; ++ix) {
      double ox = std::min(x1, (ix + 1) * g.bin_w) - std::max(s.x0, ix * g.bin_w);
      if (ox <= 0.0) continue;
      acc += ox * (psi[g.index(ix, iy1)] - psi[g.index(ix, iy0)]);
    }
    out[1] = d * acc;
  }
  return out;
}

std::array<double, 2> stamp_field_gradient(const BinGrid& g, std::span<const double> xi_x,
                                           std::span<const double> xi_y, double x, double y, double q) {
  std::array<double, 2> out{0.0, 0.0};
  if (q <= 0.0) return out;
  Stamp  s = make_stamp(g, x, y, q);
  double d = q / (s.side * s.side);
  double ax = 0.0, ay = 0.0;
  for_overlaps(g, s.x0, s.y0, s.x0 + s.side, s.y0 + s.side, [&](int b, double a) {
    ax += a * xi_x[b];
    ay += a * xi_y[b];
  });
  if (!s.clamped_x) out[0] = -d * ax;
  if (!s.clamped_y) out[1] = -d * ay;
  return out;
}

double overflow(std::span<const double> rho, std::span<const double> capacity) {
  double over = 0.0, total = 0.0;
  for (std::size_t b = 0; b < rho.size(); ++b) {
    over += std::max(rho[b] - capacity[b], 0.0);
    total += rho[b];
  }
  return total > 0.0 ? over / total : 0.0;
}

FillerSet insert_fillers(double capacity_total, double demand_total, double mean_area, Field field) {
  double tol = 1e-9 * std::max(1.0, capacity_total);
  if (demand_total > capacity_total + tol) {
    throw InfeasibleError("capacity: field " + std::string(to_string(field)) + " demand " +
                          std::to_string(demand_total) + " exceeds capacity " + std::to_string(capacity_total));
  }
  double vacant = capacity_total - demand_total;
  if (vacant <= tol) return {};
  if (!(mean_area > 0.0)) mean_area = 1.0;
  int count = std::max(1, static_cast<int>(std::lround(vacant / mean_area)));
  return {count, vacant / count};
}

double field_charge(const Architecture& arch, const Instance& inst, Field f, double inflate) {
  // column-bound fields keep nominal area: their stamps must fit one site column
  bool scales = f == Field::kLutL || f == Field::kFf;
  return arch.area[index_of(inst.kind)][index_of(f)] * (scales ? inflate : 1.0);
}

FillerSet insert_fillers(const Architecture& arch, const Netlist& netlist, Field field,
                         std::span<const double> inflate) {
  BinGrid grid = make_bin_grid(arch);
  auto    cap  = build_capacity(arch, field, grid);
  subtract_fixed_instances(cap, arch, netlist, field, grid);
  double cap_total = 0.0;
  for (double c : cap) cap_total += c;
  double demand = 0.0;
  int    members = 0;
  for (int i = 0; i < netlist.num_instances(); ++i) {
    const auto& inst = netlist.instances[i];
    if (inst.fixed) continue;
    double q = field_charge(arch, inst, field, inflate.empty() ? 1.0 : inflate[i]);
    if (q <= 0.0) continue;
    demand += q;
    ++members;
  }
  return insert_fillers(cap_total, demand, members ? demand / members : 1.0, field);
}

// ---------------------------------------------------------------------------

FieldSystem::FieldSystem(const Architecture& arch, const Netlist& netlist, std::span<const double> inflate,
                         int threads)
    : arch_(&arch), netlist_(&netlist), grid_(make_bin_grid(arch)), solver_(grid_), threads_(threads) {
  object_of_inst_.assign(netlist.instances.size(), -1);
  for (int i = 0; i < netlist.num_instances(); ++i) {
    const auto& inst = netlist.instances[i];
    if (inst.fixed || inst.kind == InstKind::kIo) continue;
    object_of_inst_[i] = static_cast<int>(movable_.size());
    movable_.push_back(i);
  }
  num_objects_ = static_cast<int>(movable_.size());
  for (auto f : kAllFields) {
    auto& fd = fields_[index_of(f)];
    fd.id    = f;
    fd.capacity = build_capacity(arch, f, grid_);
    subtract_fixed_instances(fd.capacity, arch, netlist, f, grid_);
    fd.capacity_total = 0.0;
    for (double c : fd.capacity) fd.capacity_total += c;
    double demand = 0.0;
    for (int o = 0; o < static_cast<int>(movable_.size()); ++o) {
      int    i = movable_[o];
      double q = field_charge(arch, netlist.instances[i], f, inflate.empty() ? 1.0 : inflate[i]);
      if (q <= 0.0) continue;
      fd.members.emplace_back(o, q);
      demand += q;
    }
    fd.num_instance_members = static_cast<int>(fd.members.size());
    fd.active               = fd.num_instance_members > 0;
    if (!fd.active) continue;
    fd.fillers      = insert_fillers(fd.capacity_total, demand, demand / fd.num_instance_members, f);
    fd.first_filler = num_objects_;
    for (int k = 0; k < fd.fillers.count; ++k) fd.members.emplace_back(num_objects_ + k, fd.fillers.area);
    num_objects_ += fd.fillers.count;
  }
  for (auto f : kAllFields) {
    auto& ch = charge_by_field_[index_of(f)];
    ch.assign(static_cast<std::size_t>(num_objects_), 0.0);
    for (auto [o, q] : fields_[index_of(f)].members) ch[o] = q;
  }
}

Field FieldSystem::filler_field(int o) const {
  for (const auto& fd : fields_) {
    if (fd.active && o >= fd.first_filler && o < fd.first_filler + fd.fillers.count) return fd.id;
  }
  throw std::out_of_range("object " + std::to_string(o) + " is not a filler");
}

void FieldSystem::evaluate(std::span<const double> x, std::span<const double> y, bool want_field) {
  for (auto& fd : fields_) {
    if (!fd.active) continue;
    fd.rho.assign(static_cast<std::size_t>(grid_.size()), 0.0);
    for (int k = 0; k < fd.num_instance_members; ++k) {
      auto [o, q] = fd.members[k];
      rasterize_into(grid_, x[o], y[o], q, fd.rho);
    }
    fd.rho_instances = fd.rho;
    for (std::size_t k = fd.num_instance_members; k < fd.members.size(); ++k) {
      auto [o, q] = fd.members[k];
      rasterize_into(grid_, x[o], y[o], q, fd.rho);
    }
    fd.solution = solve_poisson(solver_, fd.rho, fd.capacity, want_field, threads_);
  }
}

double FieldSystem::overflow(Field f) const {
  const auto& fd = field(f);
  if (!fd.active) return 0.0;
  return ::parf::overflow(fd.rho_instances, fd.capacity);
}

void FieldSystem::energy_gradient(Field f, std::span<const double> x, std::span<const double> y,
                                  std::vector<double>& gx, std::vector<double>& gy) const {
  gx.assign(static_cast<std::size_t>(num_objects_), 0.0);
  gy.assign(static_cast<std::size_t>(num_objects_), 0.0);
  const auto& fd = field(f);
  if (!fd.active) return;
  parallel_for(fd.members.size(), threads_, [&](std::size_t k) {
    auto [o, q] = fd.members[k];
    auto g      = stamp_energy_gradient(grid_, fd.solution.psi, x[o], y[o], q);
    gx[o]       = g[0];
    gy[o]       = g[1];
  });
}

void FieldSystem::field_gradient(Field f, std::span<const double> x, std::span<const double> y,
                                 std::vector<double>& gx, std::vector<double>& gy) const {
  gx.assign(static_cast<std::size_t>(num_objects_), 0.0);
  gy.assign(static_cast<std::size_t>(num_objects_), 0.0);
  const auto& fd = field(f);
  if (!fd.active) return;
  if (fd.solution.xi_x.empty()) throw std::logic_error("field_gradient needs a field solve");
  parallel_for(fd.members.size(), threads_, [&](std::size_t k) {
    auto [o, q] = fd.members[k];
    auto g      = stamp_field_gradient(grid_, fd.solution.xi_x, fd.solution.xi_y, x[o], y[o], q);
    gx[o]       = g[0];
    gy[o]       = g[1];
  });
}

double FieldSystem::demand(Field f, std::span<const double> inflate) const {
  const auto& fd = field(f);
  double      d  = 0.0;
  for (int k = 0; k < fd.num_instance_members; ++k) {
    int i = movable_[fd.members[k].first];
    d += field_charge(*arch_, netlist_->instances[i], f, inflate[i]);
  }
  return d;
}

void FieldSystem::set_inflation(std::span<const double> inflate) {
  for (auto& fd : fields_) {
    if (!fd.active) continue;
    double d = 0.0;
    for (int k = 0; k < fd.num_instance_members; ++k) {
      int i              = movable_[fd.members[k].first];
      fd.members[k].second = field_charge(*arch_, netlist_->instances[i], fd.id, inflate[i]);
      d += fd.members[k].second;
    }
    double tol = 1e-9 * std::max(1.0, fd.capacity_total);
    if (d > fd.capacity_total + tol) {
      throw InfeasibleError("capacity: inflated demand exceeds capacity in field " + std::string(to_string(fd.id)));
    }
    if (fd.fillers.count > 0) {
      fd.fillers.area = std::max(0.0, fd.capacity_total - d) / fd.fillers.count;
      for (std::size_t k = fd.num_instance_members; k < fd.members.size(); ++k) fd.members[k].second = fd.fillers.area;
    }
    auto& ch = charge_by_field_[index_of(fd.id)];
    for (auto [o, q] : fd.members) ch[o] = q;
  }
}

}  // namespace parf
