/**
 * @file   gp.hpp
 * @brief  Global placement: accelerated gradient descent on
 *         wirelength + sum of per-field multiplier * energy + clock penalty,
 *         with multiplier growth, routability inflation and a clock-plan
 *         outer loop.
 */
#ifndef PARF_GP_HPP
#define PARF_GP_HPP

#include <array>
#include <cstdint>
#include <iosfwd>
#include <memory>
#include <string>
#include <vector>

#include "parf/arch.hpp"
#include "parf/clock.hpp"
#include "parf/efields.hpp"
#include "parf/netlist.hpp"
#include "parf/placement.hpp"

namespace parf {

struct GpConfig {
  std::uint64_t seed    = 1;
  int           threads = 1;

  int    max_iters     = 3000;  ///< total gradient steps
  int    inner_max     = 100;   ///< steps per multiplier round at most
  double inner_tol     = 2e-3;  ///< relative objective change ending a round
  double stop_overflow = 0.10;

  double gamma0       = 0.0;  ///< <= 0: four bin widths
  double gamma_decay  = 0.98;
  double gamma_min    = 0.1;
  double lambda_ratio = 1e-4;  ///< initial ||lambda grad Phi||_1 / ||grad W||_1

  bool   routability      = true;
  double inflate_beta     = 0.5;
  double inflate_max      = 2.5;
  double inflate_trigger  = 0.25;  ///< max overflow below which inflation runs
  int    inflation_rounds = 2;

  bool   clock_aware        = true;
  double clock_start        = 0.30;  ///< max overflow below which clock planning starts
  double clock_lambda_ratio = 0.1;
  double clock_lambda_grow  = 1.5;

  std::ostream* log              = nullptr;  ///< TSV iteration log
  int           checkpoint_every = 0;
  std::string   checkpoint_prefix;
};

struct GpLogRow {
  int                              iter = 0;
  double                           objective = 0.0;
  double                           wl = 0.0;
  double                           hpwl = 0.0;
  std::array<double, kNumFields>   phi{};
  std::array<double, kNumFields>   overflow{};
  std::array<double, kNumFields>   lambda{};
  double                           lambda_clk = 0.0;
  double                           penalty = 0.0;
  double                           gamma = 0.0;
};

struct GpResult {
  PlacementState                 state;
  ClockPlan                      clock_plan;
  bool                           converged = false;  ///< false: stop predicate never met
  int                            iterations = 0;
  double                         max_overflow = 0.0;
  std::array<double, kNumFields> overflow{};
  double                         hpwl = 0.0;
  int                            inflation_rounds = 0;
  int                            steps_within_rounds = 0;  ///< steps taken at fixed multipliers
  int                            nonincreasing_steps = 0;  ///< of those, steps that did not raise f
  std::vector<GpLogRow>          log;
};

/// Movable instances around the centroid of fixed IO pins (layout centre if
/// none) with +-0.5 site uniform noise. Deterministic in `seed`.
PlacementState init_placement(const Architecture& arch, const Netlist& netlist, std::uint64_t seed);

/// Per-round multiplier factor for a field at the given overflow.
inline double multiplier_growth(double overflow) { return 1.0 + 0.05 * (1.0 + overflow); }

/// One inflation update: min(inflate * (1 + beta * max(0, cong - 1)), cap).
double inflation_update(double inflate, double cong, double beta, double cap);

/// RUDY congestion per site (row-major x + y * width): routing demand of net
/// bounding boxes over channel supply.
std::vector<double> rudy_map(const Architecture& arch, const Netlist& netlist, std::span<const double> x,
                             std::span<const double> y);

/// The optimizer. Exposes the individual phases for testing; run() drives
/// the whole schedule.
class GlobalPlacer {
 public:
  GlobalPlacer(const Architecture& arch, const Netlist& netlist, GpConfig config);
  ~GlobalPlacer();

  /// Instance positions from init_placement plus fillers spread over their
  /// field's capacity.
  void init_placement();
  /// Balances every active field against the wirelength gradient.
  void init_multipliers();
  /// One accelerated step with backtracking. Returns the new objective.
  double step();
  /// Grows the multipliers (and clock multiplier), shrinks gamma.
  void update_multipliers();
  /// Inflates instances in congested areas and rebalances fillers.
  /// Returns true when any factor changed.
  bool inflate_for_routability();
  GpResult run();

  // -- inspection ------------------------------------------------------------
  const FieldSystem&         fields() const;
  const std::vector<double>& x() const { return vx_; }
  const std::vector<double>& y() const { return vy_; }
  void                       set_positions(std::vector<double> x, std::vector<double> y);
  double                     lambda(Field f) const { return lambda_[index_of(f)]; }
  void                       set_lambda(Field f, double v) { lambda_[index_of(f)] = v; }
  double                     gamma() const { return gamma_; }
  double                     objective() const { return f_v_; }
  double                     max_overflow() const;
  PlacementState             instance_state() const;
  /// Wirelength-only gradient norm and per-field energy gradient norms (L1)
  /// at the current point.
  double                     wl_grad_norm() const;
  double                     field_grad_norm(Field f) const;
  void                       set_wirelength_enabled(bool on) { wl_enabled_ = on; }

 private:
  struct Eval;
  const Architecture& arch_;
  const Netlist&      nl_;
  GpConfig            cfg_;
  std::unique_ptr<FieldSystem> fields_;
  std::vector<double>          inflate_;
  std::vector<double>          net_weight_;
  std::vector<int>             pin_count_;

  std::array<double, kNumFields> lambda_{};
  double                         lambda_clk_ = 0.0;
  double                         gamma_ = 1.0;
  bool                           wl_enabled_ = true;
  ClockPlan                      plan_;
  bool                           have_plan_ = false;
  bool                           has_clocks_ = false;

  // accelerated-gradient state: major point u, reference point v
  std::vector<double> ux_, uy_, vx_, vy_, gx_, gy_;
  double              a_ = 1.0, alpha_ = 0.0, f_v_ = 0.0;
  bool                primed_ = false;
  double              last_wl_ = 0.0, last_pen_ = 0.0;

  double evaluate(const std::vector<double>& x, const std::vector<double>& y, std::vector<double>& gx,
                  std::vector<double>& gy, bool want_gradient = true);
  void   instance_coords(const std::vector<double>& x, const std::vector<double>& y, std::vector<double>& ix,
                         std::vector<double>& iy) const;
  void   prime();
  void   clamp(std::vector<double>& x, std::vector<double>& y) const;
  void   update_clock_plan();
  bool   clock_ok() const;
  GpLogRow log_row(int iter) const;
};

GpResult run_global_placement(const Architecture& arch, const Netlist& netlist, const GpConfig& config);

}  // namespace parf

#endif
