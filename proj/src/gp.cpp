/**
 * @file   gp.cpp
 */
#include "parf/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>

#include "parf/io.hpp"
#include "parf/wirelength.hpp"

namespace parf {

namespace {

double l1(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (double v : a) s += std::abs(v);
  for (double v : b) s += std::abs(v);
  return s;
}

double dist2(const std::vector<double>& ax, const std::vector<double>& ay, const std::vector<double>& bx,
             const std::vector<double>& by) {
  double s = 0.0;
  for (std::size_t i = 0; i < ax.size(); ++i) {
    double dx = ax[i] - bx[i], dy = ay[i] - by[i];
    s += dx * dx + dy * dy;
  }
  return std::sqrt(s);
}

}  // namespace

PlacementState init_placement(const Architecture& arch, const Netlist& nl, std::uint64_t seed) {
  PlacementState s = make_initial_state(arch, nl);
  double         cx = 0.0, cy = 0.0;
  int            ios = 0;
  for (int i = 0; i < nl.num_instances(); ++i) {
    const auto& in = nl.instances[i];
    if (in.fixed && in.kind == InstKind::kIo) {
      cx += s.x[i];
      cy += s.y[i];
      ++ios;
    }
  }
  if (ios > 0) {
    cx /= ios;
    cy /= ios;
  } else {
    cx = 0.5 * arch.width;
    cy = 0.5 * arch.height;
  }
  std::mt19937_64                        rng(seed);
  std::uniform_real_distribution<double> noise(-0.5, 0.5);
  for (int i = 0; i < nl.num_instances(); ++i) {
    if (nl.instances[i].fixed) continue;
    s.x[i] = std::clamp(cx + noise(rng), 0.0, arch.width - 1e-6);
    s.y[i] = std::clamp(cy + noise(rng), 0.0, arch.height - 1e-6);
  }
  return s;
}

double inflation_update(double inflate, double cong, double beta, double cap) {
  return std::min(inflate * (1.0 + beta * std::max(0.0, cong - 1.0)), std::max(cap, inflate));
}

std::vector<double> rudy_map(const Architecture& arch, const Netlist& nl, std::span<const double> x,
                             std::span<const double> y) {
  std::vector<double> demand(static_cast<std::size_t>(arch.num_sites()), 0.0);
  const double        supply = arch.channel_width_h + arch.channel_width_v;
  for (const auto& net : nl.nets) {
    if (net.pins.size() < 2) continue;
    double xl = std::numeric_limits<double>::infinity(), xh = -xl, yl = xl, yh = -xl;
    for (int p : net.pins) {
      int i = nl.pins[p].inst;
      xl    = std::min(xl, x[i]);
      xh    = std::max(xh, x[i]);
      yl    = std::min(yl, y[i]);
      yh    = std::max(yh, y[i]);
    }
    int sx0 = std::clamp(static_cast<int>(std::floor(xl)), 0, arch.width - 1);
    int sx1 = std::clamp(static_cast<int>(std::floor(xh)), 0, arch.width - 1);
    int sy0 = std::clamp(static_cast<int>(std::floor(yl)), 0, arch.height - 1);
    int sy1 = std::clamp(static_cast<int>(std::floor(yh)), 0, arch.height - 1);
    double w = sx1 - sx0 + 1, h = sy1 - sy0 + 1;
    double d = (w + h) / (w * h);
    for (int sx = sx0; sx <= sx1; ++sx)
      for (int sy = sy0; sy <= sy1; ++sy) demand[arch.site_index(sx, sy)] += d;
  }
  for (double& v : demand) v /= supply;
  return demand;
}

// ---------------------------------------------------------------------------

GlobalPlacer::GlobalPlacer(const Architecture& arch, const Netlist& netlist, GpConfig config)
    : arch_(arch), nl_(netlist), cfg_(std::move(config)) {
  inflate_.assign(netlist.instances.size(), 1.0);
  fields_ = std::make_unique<FieldSystem>(arch, netlist, inflate_, cfg_.threads);
  net_weight_.assign(netlist.nets.size(), 1.0);
  for (int n = 0; n < netlist.num_nets(); ++n) {
    if (netlist.nets[n].is_clock) {
      net_weight_[n] = 0.0;
      has_clocks_    = cfg_.clock_aware;
    }
  }
  pin_count_.assign(netlist.instances.size(), 0);
  for (int i = 0; i < netlist.num_instances(); ++i) pin_count_[i] = static_cast<int>(netlist.instances[i].pins.size());
  const auto& g = fields_->grid();
  gamma_        = cfg_.gamma0 > 0.0 ? cfg_.gamma0 : 4.0 * std::max(g.bin_w, g.bin_h);
}

GlobalPlacer::~GlobalPlacer() = default;

const FieldSystem& GlobalPlacer::fields() const { return *fields_; }

void GlobalPlacer::init_placement() {
  auto s = parf::init_placement(arch_, nl_, cfg_.seed);
  int  n = fields_->num_objects();
  vx_.assign(n, 0.0);
  vy_.assign(n, 0.0);
  for (int o = 0; o < fields_->num_movable_instances(); ++o) {
    vx_[o] = s.x[fields_->instance_of(o)];
    vy_[o] = s.y[fields_->instance_of(o)];
  }
  std::mt19937_64 rng(cfg_.seed ^ 0x9e3779b97f4a7c15ULL);
  const auto&     g = fields_->grid();
  for (const auto& fd : fields_->fields()) {
    if (!fd.active || fd.fillers.count == 0) continue;
    std::discrete_distribution<int>        pick(fd.capacity.begin(), fd.capacity.end());
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int k = 0; k < fd.fillers.count; ++k) {
      int b  = pick(rng);
      int ix = b / g.ny, iy = b % g.ny;
      vx_[fd.first_filler + k] = (ix + u(rng)) * g.bin_w;
      vy_[fd.first_filler + k] = (iy + u(rng)) * g.bin_h;
    }
  }
  clamp(vx_, vy_);
  ux_     = vx_;
  uy_     = vy_;
  primed_ = false;
}

void GlobalPlacer::set_positions(std::vector<double> x, std::vector<double> y) {
  vx_     = std::move(x);
  vy_     = std::move(y);
  ux_     = vx_;
  uy_     = vy_;
  primed_ = false;
}

void GlobalPlacer::clamp(std::vector<double>& x, std::vector<double>& y) const {
  for (auto& v : x) v = std::clamp(v, 0.0, arch_.width - 1e-6);
  for (auto& v : y) v = std::clamp(v, 0.0, arch_.height - 1e-6);
}

void GlobalPlacer::instance_coords(const std::vector<double>& x, const std::vector<double>& y,
                                   std::vector<double>& ix, std::vector<double>& iy) const {
  ix.resize(nl_.instances.size());
  iy.resize(nl_.instances.size());
  for (int i = 0; i < nl_.num_instances(); ++i) {
    int o = fields_->object_of(i);
    if (o >= 0) {
      ix[i] = x[o];
      iy[i] = y[o];
    } else {
      ix[i] = std::floor(nl_.instances[i].fixed_x) + 0.5;
      iy[i] = std::floor(nl_.instances[i].fixed_y) + 0.5;
    }
  }
}

PlacementState GlobalPlacer::instance_state() const {
  PlacementState s;
  instance_coords(vx_, vy_, s.x, s.y);
  s.inflate = inflate_;
  return s;
}

double GlobalPlacer::evaluate(const std::vector<double>& x, const std::vector<double>& y, std::vector<double>& gx,
                              std::vector<double>& gy, bool want_gradient) {
  const int n = fields_->num_objects();
  gx.assign(n, 0.0);
  gy.assign(n, 0.0);
  std::vector<double> ix, iy;
  instance_coords(x, y, ix, iy);
  double f = 0.0;
  last_wl_ = 0.0;
  if (wl_enabled_) {
    auto wr  = smooth_wl(ix, iy, nl_, {gamma_, net_weight_, cfg_.threads});
    last_wl_ = wr.value;
    f += wr.value;
    for (int o = 0; o < fields_->num_movable_instances(); ++o) {
      gx[o] += wr.grad_x[fields_->instance_of(o)];
      gy[o] += wr.grad_y[fields_->instance_of(o)];
    }
  }
  fields_->evaluate(x, y, want_gradient);
  std::vector<double> fx, fy;
  for (const auto& fd : fields_->fields()) {
    double lam = lambda_[index_of(fd.id)];
    if (!fd.active || lam <= 0.0) continue;
    f += lam * fd.solution.energy;
    if (!want_gradient) continue;
    fields_->field_gradient(fd.id, x, y, fx, fy);
    for (int o = 0; o < n; ++o) {
      gx[o] += lam * fx[o];
      gy[o] += lam * fy[o];
    }
  }
  last_pen_ = 0.0;
  if (have_plan_ && lambda_clk_ > 0.0) {
    auto pen  = clock_penalty(arch_, nl_, ix, iy, plan_);
    last_pen_ = pen.value;
    f += lambda_clk_ * pen.value;
    for (int o = 0; o < fields_->num_movable_instances(); ++o) {
      gx[o] += lambda_clk_ * pen.grad_x[fields_->instance_of(o)];
      gy[o] += lambda_clk_ * pen.grad_y[fields_->instance_of(o)];
    }
  }
  if (!want_gradient) return f;
  for (int o = 0; o < n; ++o) {
    int    i  = fields_->instance_of(o);
    double pc = i >= 0 ? pin_count_[i] : 0.0;
    for (const auto& fd : fields_->fields()) {
      if (fd.active) pc += lambda_[index_of(fd.id)] * fields_->object_charge(fd.id)[o];
    }
    pc = std::max(1.0, pc);
    gx[o] /= pc;
    gy[o] /= pc;
    if (!std::isfinite(gx[o]) || !std::isfinite(gy[o])) {
      throw std::runtime_error("placement: non-finite gradient at object " + std::to_string(o));
    }
  }
  return f;
}

void GlobalPlacer::prime() {
  f_v_       = evaluate(vx_, vy_, gx_, gy_);
  double gmax = 0.0;
  for (std::size_t o = 0; o < gx_.size(); ++o) gmax = std::max({gmax, std::abs(gx_[o]), std::abs(gy_[o])});
  const double delta = 0.1 * fields_->grid().bin_w;
  alpha_             = gmax > 0.0 ? delta / gmax : 0.0;
  if (gmax > 0.0) {
    std::vector<double> mx(vx_), my(vy_), gmx, gmy;
    for (std::size_t o = 0; o < mx.size(); ++o) {
      mx[o] -= delta * gx_[o] / gmax;
      my[o] -= delta * gy_[o] / gmax;
    }
    clamp(mx, my);
    evaluate(mx, my, gmx, gmy);
    double dg = dist2(gx_, gy_, gmx, gmy);
    if (dg > 0.0) alpha_ = dist2(vx_, vy_, mx, my) / dg;
    evaluate(vx_, vy_, gx_, gy_);  // restore field state at v
  }
  ux_     = vx_;
  uy_     = vy_;
  a_      = 1.0;
  primed_ = true;
}

double GlobalPlacer::step() {
  if (!primed_) prime();
  const double        f_old = f_v_;
  const int           n     = static_cast<int>(vx_.size());
  std::vector<double> unx(n), uny(n), vnx(n), vny(n), gnx, gny;
  double              an = 0.0, fn = 0.0, alpha_n = alpha_;
  for (int tries = 0; tries < 10; ++tries) {
    for (int o = 0; o < n; ++o) {
      unx[o] = vx_[o] - alpha_ * gx_[o];
      uny[o] = vy_[o] - alpha_ * gy_[o];
    }
    clamp(unx, uny);
    an          = 0.5 * (1.0 + std::sqrt(4.0 * a_ * a_ + 1.0));
    double coef = (a_ - 1.0) / an;
    for (int o = 0; o < n; ++o) {
      vnx[o] = unx[o] + coef * (unx[o] - ux_[o]);
      vny[o] = uny[o] + coef * (uny[o] - uy_[o]);
    }
    clamp(vnx, vny);
    fn        = evaluate(vnx, vny, gnx, gny);
    double dg = dist2(gnx, gny, gx_, gy_);
    alpha_n   = dg > 0.0 ? dist2(vnx, vny, vx_, vy_) / dg : alpha_;
    if (!(alpha_n < 0.95 * alpha_)) break;
    alpha_ = alpha_n;
  }
  ux_    = std::move(unx);
  uy_    = std::move(uny);
  vx_    = std::move(vnx);
  vy_    = std::move(vny);
  gx_    = std::move(gnx);
  gy_    = std::move(gny);
  a_     = an;
  alpha_ = alpha_n > 0.0 ? alpha_n : alpha_;
  f_v_   = fn;
  if (fn > f_old) {  // momentum restart
    a_  = 1.0;
    ux_ = vx_;
    uy_ = vy_;
  }
  return fn;
}

double GlobalPlacer::wl_grad_norm() const {
  std::vector<double> ix, iy;
  instance_coords(vx_, vy_, ix, iy);
  auto   wr = smooth_wl(ix, iy, nl_, {gamma_, net_weight_, cfg_.threads});
  double s  = 0.0;
  for (int o = 0; o < fields_->num_movable_instances(); ++o) {
    int i = fields_->instance_of(o);
    s += std::abs(wr.grad_x[i]) + std::abs(wr.grad_y[i]);
  }
  return s;
}

double GlobalPlacer::field_grad_norm(Field f) const {
  if (!fields_->field(f).active) return 0.0;
  fields_->evaluate(vx_, vy_, true);
  std::vector<double> gx, gy;
  fields_->field_gradient(f, vx_, vy_, gx, gy);
  return l1(gx, gy);
}

void GlobalPlacer::init_multipliers() {
  double wl = wl_enabled_ ? wl_grad_norm() : 0.0;
  if (!(wl > 0.0)) wl = std::max(1, fields_->num_movable_instances());
  for (const auto& fd : fields_->fields()) {
    double g                 = field_grad_norm(fd.id);
    lambda_[index_of(fd.id)] = g > 0.0 ? cfg_.lambda_ratio * wl / g : 0.0;
  }
  lambda_clk_ = 0.0;
  prime();
}

double GlobalPlacer::max_overflow() const {
  double m = 0.0;
  for (const auto& fd : fields_->fields()) {
    if (fd.active) m = std::max(m, fields_->overflow(fd.id));
  }
  return m;
}

void GlobalPlacer::update_clock_plan() {
  std::vector<double> ix, iy;
  instance_coords(vx_, vy_, ix, iy);
  plan_      = plan_regions(arch_, nl_, ix, iy, have_plan_ ? &plan_ : nullptr);
  have_plan_ = true;
  auto pen   = clock_penalty(arch_, nl_, ix, iy, plan_);
  if (pen.value <= 0.0) return;
  if (lambda_clk_ <= 0.0) {
    double wl = std::max(wl_grad_norm(), 1.0);
    double pg = l1(pen.grad_x, pen.grad_y);
    lambda_clk_ = pg > 0.0 ? cfg_.clock_lambda_ratio * wl / pg : 0.0;
  } else {
    lambda_clk_ *= cfg_.clock_lambda_grow;
  }
}

bool GlobalPlacer::clock_ok() const {
  if (!has_clocks_) return true;
  if (!have_plan_ || !plan_.feasible) return false;
  std::vector<double> ix, iy;
  instance_coords(vx_, vy_, ix, iy);
  for (int d : plan_demand(arch_, nl_, plan_, ix, iy)) {
    if (d > arch_.clock.cr_limit) return false;
  }
  return true;
}

void GlobalPlacer::update_multipliers() {
  for (const auto& fd : fields_->fields()) {
    double& lam = lambda_[index_of(fd.id)];
    if (!fd.active || lam <= 0.0) continue;
    lam *= multiplier_growth(fields_->overflow(fd.id));
  }
  gamma_ = std::max(cfg_.gamma_min, gamma_ * cfg_.gamma_decay);
  if (has_clocks_ && (have_plan_ || max_overflow() <= cfg_.clock_start)) update_clock_plan();
  f_v_ = evaluate(vx_, vy_, gx_, gy_);
  if (!primed_) prime();
}

bool GlobalPlacer::inflate_for_routability() {
  std::vector<double> ix, iy;
  instance_coords(vx_, vy_, ix, iy);
  auto                cong = rudy_map(arch_, nl_, ix, iy);
  std::vector<double> next(inflate_);
  bool                changed = false;
  for (int o = 0; o < fields_->num_movable_instances(); ++o) {
    int i  = fields_->instance_of(o);
    int sx = std::clamp(static_cast<int>(ix[i]), 0, arch_.width - 1);
    int sy = std::clamp(static_cast<int>(iy[i]), 0, arch_.height - 1);
    next[i] = inflation_update(inflate_[i], cong[arch_.site_index(sx, sy)], cfg_.inflate_beta, cfg_.inflate_max);
    changed |= next[i] != inflate_[i];
  }
  if (!changed) return false;
  // scale the increment down where a field would run out of capacity
  double t = 1.0;
  for (const auto& fd : fields_->fields()) {
    if (!fd.active) continue;
    double d0 = fields_->demand(fd.id, inflate_), d1 = fields_->demand(fd.id, next);
    if (d1 > fd.capacity_total && d1 > d0) t = std::min(t, (fd.capacity_total - d0) / (d1 - d0) * (1.0 - 1e-9));
  }
  t = std::max(0.0, t);
  if (t <= 0.0) return false;
  for (std::size_t i = 0; i < inflate_.size(); ++i) inflate_[i] += t * (next[i] - inflate_[i]);
  fields_->set_inflation(inflate_);
  prime();
  return true;
}

GpLogRow GlobalPlacer::log_row(int iter) const {
  GpLogRow r;
  r.iter      = iter;
  r.objective = f_v_;
  r.wl        = last_wl_;
  std::vector<double> ix, iy;
  instance_coords(vx_, vy_, ix, iy);
  r.hpwl = hpwl(ix, iy, nl_);
  for (const auto& fd : fields_->fields()) {
    int k         = index_of(fd.id);
    r.phi[k]      = fd.active ? fd.solution.energy : 0.0;
    r.overflow[k] = fd.active ? fields_->overflow(fd.id) : 0.0;
    r.lambda[k]   = lambda_[k];
  }
  r.lambda_clk = lambda_clk_;
  r.penalty    = last_pen_;
  r.gamma      = gamma_;
  return r;
}

GpResult GlobalPlacer::run() {
  GpResult res;
  init_placement();
  init_multipliers();
  if (cfg_.log) {
    *cfg_.log << "iter\tobjective\twl\thpwl";
    for (auto f : kAllFields) *cfg_.log << "\tphi_" << to_string(f);
    for (auto f : kAllFields) *cfg_.log << "\toverflow_" << to_string(f);
    for (auto f : kAllFields) *cfg_.log << "\tlambda_" << to_string(f);
    *cfg_.log << "\tlambda_clk\tpenalty\tgamma\n";
  }
  std::vector<double> best_x(vx_), best_y(vy_);
  double              best_overflow = std::numeric_limits<double>::infinity();
  int                 inner = 0, last_inflation = -1000;
  for (int it = 1; it <= cfg_.max_iters; ++it) {
    double f_prev = f_v_;
    double fn     = step();
    ++res.steps_within_rounds;
    if (fn <= f_prev + 1e-12 * std::abs(f_prev)) ++res.nonincreasing_steps;
    res.iterations = it;
    auto row       = log_row(it);
    if (cfg_.log) {
      *cfg_.log << row.iter << '\t' << row.objective << '\t' << row.wl << '\t' << row.hpwl;
      for (double v : row.phi) *cfg_.log << '\t' << v;
      for (double v : row.overflow) *cfg_.log << '\t' << v;
      for (double v : row.lambda) *cfg_.log << '\t' << v;
      *cfg_.log << '\t' << row.lambda_clk << '\t' << row.penalty << '\t' << row.gamma << '\n';
    }
    res.log.push_back(row);
    if (cfg_.checkpoint_every > 0 && it % cfg_.checkpoint_every == 0 && !cfg_.checkpoint_prefix.empty()) {
      write_file(cfg_.checkpoint_prefix + "_" + std::to_string(it) + ".pl",
                 write_placement(instance_state(), nl_, PlacementKind::kContinuous));
    }

    double mo = max_overflow();
    if (mo < best_overflow) {
      best_overflow = mo;
      best_x        = vx_;
      best_y        = vy_;
    }
    if (mo <= cfg_.stop_overflow) {
      if (has_clocks_ && !have_plan_) update_clock_plan();
      if (clock_ok()) {
        res.converged = true;
        break;
      }
    }
    if (cfg_.routability && res.inflation_rounds < cfg_.inflation_rounds && mo < cfg_.inflate_trigger &&
        it - last_inflation >= 50) {
      last_inflation = it;
      if (inflate_for_routability()) {
        ++res.inflation_rounds;
        inner         = 0;
        best_overflow = std::numeric_limits<double>::infinity();
        continue;
      }
    }
    ++inner;
    double rel = std::abs(fn - f_prev) / std::max(std::abs(f_prev), 1e-300);
    if (inner >= cfg_.inner_max || rel < cfg_.inner_tol) {
      update_multipliers();
      inner = 0;
    }
  }
  if (!res.converged) {
    vx_ = best_x;
    vy_ = best_y;
    fields_->evaluate(vx_, vy_);
  }
  if (has_clocks_) {
    if (!have_plan_) update_clock_plan();
    res.clock_plan = plan_;
  }
  res.state        = instance_state();
  res.hpwl         = hpwl(res.state.x, res.state.y, nl_);
  res.max_overflow = max_overflow();
  for (const auto& fd : fields_->fields()) res.overflow[index_of(fd.id)] = fd.active ? fields_->overflow(fd.id) : 0.0;
  return res;
}

GpResult run_global_placement(const Architecture& arch, const Netlist& netlist, const GpConfig& config) {
  GlobalPlacer gp(arch, netlist, config);
  return gp.run();
}

}  // namespace parf
