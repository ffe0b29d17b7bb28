/**
 * @file   efields.hpp
 * @brief  Asymmetric multi-electrostatic density system.
 *
 * Every field owns a power-of-two bin grid, a capacity map and a set of
 * charges. Bins that supply less than the field's peak capacity carry a
 * fixed charge for the missing part, so unavailable columns look occupied
 * and a charge distribution that matches capacity has zero energy.
 */
#ifndef PARF_EFIELDS_HPP
#define PARF_EFIELDS_HPP

#include <array>
#include <span>
#include <vector>

#include "parf/arch.hpp"
#include "parf/netlist.hpp"

namespace parf {

struct BinGrid {
  int    nx = 0;
  int    ny = 0;
  double width  = 0.0;  ///< layout size in sites
  double height = 0.0;
  double bin_w  = 0.0;
  double bin_h  = 0.0;

  int    size() const { return nx * ny; }
  int    index(int ix, int iy) const { return ix * ny + iy; }
  double bin_area() const { return bin_w * bin_h; }
};

/// Smallest power of two >= max(dim, 64) on each axis.
BinGrid make_bin_grid(const Architecture& arch);
BinGrid make_bin_grid(double width, double height, int nx, int ny);

/// Capacity per bin: supplying site resource times the fraction of the
/// site the bin overlaps.
std::vector<double> build_capacity(const Architecture& arch, Field field, const BinGrid& grid);

/// Removes fixed-instance resource usage from a capacity map (clamped at 0).
void subtract_fixed_instances(std::vector<double>& capacity, const Architecture& arch, const Netlist& netlist,
                              Field field, const BinGrid& grid);

/// Square stamp of side sqrt(q) centred at (x, y), shifted to lie inside the
/// layout. Returns the stamp's lower-left corner and side.
struct Stamp {
  double x0 = 0.0;
  double y0 = 0.0;
  double side = 0.0;
  bool   clamped_x = false;
  bool   clamped_y = false;
};
Stamp make_stamp(const BinGrid& grid, double x, double y, double q);

/// Exact-area splat of charges q_i onto the grid (charge per bin).
std::vector<double> rasterize(const BinGrid& grid, std::span<const double> x, std::span<const double> y,
                              std::span<const double> q);
void rasterize_into(const BinGrid& grid, double x, double y, double q, std::vector<double>& rho);

struct PoissonSolution {
  std::vector<double> psi;
  std::vector<double> xi_x;  ///< empty unless requested
  std::vector<double> xi_y;
  double              energy = 0.0;
};

/// Spectral Neumann Poisson solver on a fixed grid (DCT-II basis). Uses the
/// eigenvalues of the 5-point Laplacian, so psi satisfies the stencil
/// exactly; the field is the spectrally evaluated central difference of psi.
class PoissonSolver {
 public:
  explicit PoissonSolver(const BinGrid& grid);

  /// Solves lap(psi) = -(rho - mean(rho)), rho given as charge per bin.
  PoissonSolution solve(std::span<const double> charge, bool want_field, int threads = 1) const;
  const BinGrid&  grid() const { return grid_; }

 private:
  BinGrid             grid_;
  std::vector<double> cos_x_, cos_y_, sin_x_, sin_y_;  // [u * n + i]
  std::vector<double> inv_eig_;                        // [u * ny + v]
  std::vector<double> dsin_x_, dsin_y_;                // sin(pi u / n) / h

  void forward(std::vector<double>& a, int threads) const;
  void inverse(std::vector<double>& a, const std::vector<double>& basis_x, const std::vector<double>& basis_y,
               int threads) const;
};

/// Convenience: adds the fixed "occupied" charge max(cap) - cap to `charge`
/// before solving.
PoissonSolution solve_poisson(const PoissonSolver& solver, std::span<const double> charge,
                              std::span<const double> capacity, bool want_field, int threads = 1);

/// dPhi/dx, dPhi/dy of one stamp: exact derivative of the discrete energy,
/// i.e. -q times the area-weighted mean field of the bin potential over the stamp.
std::array<double, 2> stamp_energy_gradient(const BinGrid& grid, std::span<const double> psi, double x, double y,
                                            double q);

/// Smooth counterpart of stamp_energy_gradient: q times the stamp-averaged
/// negative field. Continuous in the stamp position, which the exact
/// gradient is not (it jumps when a stamp edge crosses a bin boundary).
std::array<double, 2> stamp_field_gradient(const BinGrid& grid, std::span<const double> xi_x,
                                           std::span<const double> xi_y, double x, double y, double q);

/// Sum over bins of max(rho - cap, 0) divided by sum of rho; 0 for no charge.
double overflow(std::span<const double> rho, std::span<const double> capacity);

struct FillerSet {
  int    count = 0;
  double area  = 0.0;
};

/// Fillers that top a field's charge up to its capacity, sized near the
/// mean member area. Throws InfeasibleError naming the field when demand
/// exceeds capacity.
FillerSet insert_fillers(double capacity_total, double demand_total, double mean_area, Field field);
FillerSet insert_fillers(const Architecture& arch, const Netlist& netlist, Field field,
                         std::span<const double> inflate = {});

/// Area of an instance in field `f`. Inflation applies to the LUTL and FF
/// fields only.
double field_charge(const Architecture& arch, const Instance& inst, Field f, double inflate = 1.0);

/// All fields evaluated together over one set of movable objects: movable
/// instances (netlist order) followed by each field's fillers.
class FieldSystem {
 public:
  struct FieldData {
    Field                             id;
    bool                              active = false;
    std::vector<double>               capacity;
    double                            capacity_total = 0.0;
    std::vector<std::pair<int, double>> members;  ///< (object index, charge), instances then fillers
    int                               num_instance_members = 0;
    FillerSet                         fillers;
    int                               first_filler = 0;  ///< object index of the first filler
    std::vector<double>               rho;               ///< all charge
    std::vector<double>               rho_instances;     ///< non-filler charge
    PoissonSolution                   solution;
  };

  FieldSystem(const Architecture& arch, const Netlist& netlist, std::span<const double> inflate, int threads = 1);

  const BinGrid& grid() const { return grid_; }
  int            num_objects() const { return num_objects_; }
  int            num_movable_instances() const { return static_cast<int>(movable_.size()); }
  /// Netlist instance of object `o`, or -1 for fillers.
  int            instance_of(int o) const { return o < num_movable_instances() ? movable_[o] : -1; }
  /// Object index of instance `i`, or -1 when fixed / not placeable.
  int            object_of(int i) const { return object_of_inst_[i]; }
  /// Field of filler object `o`.
  Field          filler_field(int o) const;

  const std::array<FieldData, kNumFields>& fields() const { return fields_; }
  const FieldData& field(Field f) const { return fields_[index_of(f)]; }

  /// Rasterizes and solves every active field at object positions.
  void evaluate(std::span<const double> x, std::span<const double> y, bool want_field = false);
  double energy(Field f) const { return field(f).solution.energy; }
  double overflow(Field f) const;

  /// dPhi_f/d(position) for every object (zeros for non-members).
  void energy_gradient(Field f, std::span<const double> x, std::span<const double> y, std::vector<double>& gx,
                       std::vector<double>& gy) const;

  /// Stamp-averaged field force per object; needs evaluate(..., true).
  void field_gradient(Field f, std::span<const double> x, std::span<const double> y, std::vector<double>& gx,
                      std::vector<double>& gy) const;

  /// Total charge an object carries over all fields (for preconditioning).
  const std::vector<double>& object_charge(Field f) const { return charge_by_field_[index_of(f)]; }

  /// Recomputes instance charges from new inflation factors and resizes the
  /// fillers so each field stays balanced. Requires demand <= capacity.
  void set_inflation(std::span<const double> inflate);
  /// Instance demand of a field under the given inflation.
  double demand(Field f, std::span<const double> inflate) const;

 private:
  const Architecture*   arch_;
  const Netlist*        netlist_;
  BinGrid               grid_;
  PoissonSolver         solver_;
  int                   threads_;
  std::vector<int>      movable_;
  std::vector<int>      object_of_inst_;
  int                   num_objects_ = 0;
  std::array<FieldData, kNumFields> fields_;
  std::array<std::vector<double>, kNumFields> charge_by_field_;
};

}  // namespace parf

#endif
