#include "tailsitter/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/LU>

#include "tailsitter/airflow.hpp"
#include "tailsitter/dynamics.hpp"
#include "tailsitter/simulation.hpp"
#include "tailsitter/trajectory.hpp"

namespace tailsitter {

namespace {
constexpr double kDeg = std::numbers::pi / 180.0;
}

double aerodynamic_loading(double v_a, const VehicleParams& params) {
  return 0.5 * params.rho * params.s_wing() * v_a * v_a / params.weight();
}

double a_v_of_alpha(double alpha, const AeroSpline& spline) {
  const auto c = spline.at(alpha);
  // cot(a) / (C_D + C_L cot(a)), multiplied through by sin(a) so 90 deg is regular.
  const double den = c.c_d * std::sin(alpha) + c.c_l * std::cos(alpha);
  if (std::abs(den) < 1e-12) throw SingularDenominator("a_v_of_alpha: C_D + C_L cot(alpha) vanishes");
  return std::cos(alpha) / den;
}

EquilibriumFinder::EquilibriumFinder(const AeroSpline& spline) : spline_(&spline) {
  const auto n = static_cast<int>(std::lround(90.0 / kGridStepDeg));
  alpha_.reserve(n);
  a_v_.reserve(n);
  for (int i = 1; i <= n; ++i) {
    const double a = i * kGridStepDeg * kDeg;
    alpha_.push_back(i == n ? std::numbers::pi / 2 : a);
    double av;
    try {
      av = a_v_of_alpha(alpha_.back(), spline);
    } catch (const SingularDenominator&) {
      av = std::numeric_limits<double>::quiet_NaN();
    }
    a_v_.push_back(av);
  }
}

std::vector<double> EquilibriumFinder::solve(double a_v_target) const {
  std::vector<double> roots;
  auto g = [&](double a) { return a_v_of_alpha(a, *spline_) - a_v_target; };
  const double accept = 1e-6 * std::max(1.0, a_v_target);
  for (std::size_t i = 0; i < alpha_.size(); ++i) {
    const double gi = a_v_[i] - a_v_target;
    if (gi == 0.0) {
      roots.push_back(alpha_[i]);
      continue;
    }
    if (i + 1 == alpha_.size()) {
      // cos(pi/2) is not exactly zero, so hover needs an explicit endpoint check.
      if (std::abs(gi) < accept && (roots.empty() || alpha_[i] - roots.back() > 1e-4)) roots.push_back(alpha_[i]);
      break;
    }
    const double gj = a_v_[i + 1] - a_v_target;
    if (!std::isfinite(gi) || !std::isfinite(gj) || gj == 0.0 || (gi < 0) == (gj < 0)) continue;
    double lo = alpha_[i], hi = alpha_[i + 1], g_lo = gi, g_hi = gj;
    // Past kRootTolerance, keep halving while the plug-back residual is still large
    // (steep branches near small alpha); stop once the bracket is at rounding level.
    for (int it = 0; it < 200; ++it) {
      if (hi - lo <= kRootTolerance && std::min(std::abs(g_lo), std::abs(g_hi)) < accept) break;
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      const double g_mid = g(mid);
      if ((g_mid < 0) == (g_lo < 0)) {
        lo = mid;
        g_lo = g_mid;
      } else {
        hi = mid;
        g_hi = g_mid;
      }
    }
    const double root = std::abs(g_lo) <= std::abs(g_hi) ? lo : hi;
    // A sign change across a pole of a_v is not a root.
    if (std::abs(g(root)) < accept) roots.push_back(root);
  }
  return roots;
}

std::vector<double> find_equilibria(double a_v_target, const AeroSpline& spline) {
  if (a_v_target < 0.0) throw std::invalid_argument("find_equilibria: target loading must be non-negative");
  return EquilibriumFinder(spline).solve(a_v_target);
}

EquilibriumPoint stability_classify(double alpha, const AeroSpline& spline) {
  const auto c = spline.at(alpha);
  EquilibriumPoint e;
  e.alpha = alpha;
  try {
    e.a_v = a_v_of_alpha(alpha, spline);
  } catch (const SingularDenominator&) {
    e.a_v = std::numeric_limits<double>::infinity();
  }
  e.p = 3.0 * c.c_d + c.dc_l;
  e.q = c.c_d * c.c_d + c.c_d * c.dc_l - c.c_l * c.dc_d + c.c_l * c.c_l;
  e.marginal = e.p == 0.0 || e.q == 0.0;
  e.stable = !(e.p * e.q < 0.0 || (e.p < 0.0 && e.q < 0.0));
  return e;
}

Matrix2 stability_matrix(double alpha, const AeroSpline& spline) {
  const auto c = spline.at(alpha);
  Matrix2 m;
  m << -2.0 * c.c_d, c.dc_d - c.c_l, 2.0 * c.c_l, -c.dc_l - c.c_d;
  return m;
}

std::array<std::complex<double>, 2> eigenvalues(const Matrix2& m) {
  const double tr = m.trace();
  const double det = m.determinant();
  const std::complex<double> disc = std::sqrt(std::complex<double>(tr * tr / 4.0 - det, 0.0));
  return {tr / 2.0 + disc, tr / 2.0 - disc};
}

bool eigen_stable(const Matrix2& m) {
  const auto ev = eigenvalues(m);
  return ev[0].real() <= 0.0 && ev[1].real() <= 0.0;
}

Matrix2 linearization_oracle(const Vec2& v_ref, double theta, const VehicleParams& params, const AeroSpline& spline) {
  const double speed = v_ref.norm();
  if (!(speed > 0.0)) throw std::invalid_argument("linearization_oracle: reference speed must be positive");
  auto force = [&](const Vec2& v) -> Vec2 {
    const double n = v.norm();
    const double alpha = theta - std::atan2(v.y(), v.x());
    const auto c = spline.at(alpha);
    Matrix2 r;
    r << -c.c_d, -c.c_l, c.c_l, -c.c_d;
    return 0.5 * params.rho * params.s_wing() * n * (r * v);
  };
  const double h = 1e-5 * speed;
  Matrix2 jac;
  for (int j = 0; j < 2; ++j) {
    Vec2 dv = Vec2::Zero();
    dv[j] = h;
    jac.col(j) = (force(v_ref + dv) - force(v_ref - dv)) / (2.0 * h);
  }
  return jac;
}

BifurcationDiagram bifurcation_scan(double a_v_min, double a_v_max, double step, const AeroSpline& spline) {
  if (!(a_v_min >= 0.0 && a_v_max > a_v_min && step > 0.0)) {
    throw std::invalid_argument("bifurcation_scan: need 0 <= a_v_min < a_v_max and step > 0");
  }
  const EquilibriumFinder finder(spline);
  BifurcationDiagram diagram;
  const auto n = static_cast<std::size_t>(std::floor((a_v_max - a_v_min) / step + 1e-9));
  std::vector<std::size_t> counts;
  for (std::size_t i = 0; i <= n; ++i) {
    const double a_v = std::min(a_v_min + static_cast<double>(i) * step, a_v_max);
    BifurcationSlice slice;
    slice.a_v = a_v;
    for (double alpha : finder.solve(a_v)) slice.equilibria.push_back(stability_classify(alpha, spline));
    counts.push_back(slice.equilibria.size());
    diagram.slices.push_back(std::move(slice));
  }
  for (std::size_t i = 0; i + 1 < diagram.slices.size(); ++i) {
    if (counts[i] == counts[i + 1]) continue;
    double lo = diagram.slices[i].a_v, hi = diagram.slices[i + 1].a_v;
    const std::size_t c_lo = counts[i];
    while (hi - lo > 1e-4) {
      const double mid = 0.5 * (lo + hi);
      if (finder.solve(mid).size() == c_lo) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    diagram.folds.push_back(0.5 * (lo + hi));
  }
  return diagram;
}

// ---------------------------------------------------------------- trim

namespace {

struct TrimEval {
  double cost = 0.0;  // y''^2 + z''^2
  double differential = 0.0;
  AirflowState airflow;
};

TrimEval trim_eval(double theta, double collective, double v_i, double gamma, const VehicleParams& params,
                   const AeroSpline& spline) {
  State s;
  s.theta = theta;
  s.y_dot = v_i * std::cos(gamma);
  s.z_dot = v_i * std::sin(gamma);
  // The moment depends on the thrust split only through the wake, so a short
  // fixed-point iteration pins the differential that zeroes theta''.
  double diff = 0.0;
  DynamicsEvaluation ev;
  for (int it = 0; it < 30; ++it) {
    ev = evaluate_dynamics(s, {(collective - diff) / 2, (collective + diff) / 2}, params, spline);
    const double next = -ev.forces.pitch_moment / params.l;
    const bool done = std::abs(next - diff) <= 1e-13 * std::max(1.0, std::abs(next));
    diff = next;
    if (done || params.eta == 0.0) break;
  }
  ev = evaluate_dynamics(s, {(collective - diff) / 2, (collective + diff) / 2}, params, spline);
  const auto& d = ev.derivative;
  return {d.y_ddot * d.y_ddot + d.z_ddot * d.z_ddot, diff, ev.airflow};
}

// Collective that zeroes the acceleration along b2 (exact when eta = 0).
double projected_collective(double theta, double v_i, double gamma, const VehicleParams& params,
                            const AeroSpline& spline) {
  State s;
  s.theta = theta;
  s.y_dot = v_i * std::cos(gamma);
  s.z_dot = v_i * std::sin(gamma);
  const auto d = equations_of_motion(s, {}, params, spline);
  return -params.m * (d.y_ddot * std::cos(theta) + d.z_ddot * std::sin(theta));
}

struct Descent {
  double theta;
  double collective;
  double cost;
  int iterations;
};

constexpr double kMaxMove = 0.1;  // rad / N

Descent gradient_descent(double theta, double collective, double v_i, double gamma, const VehicleParams& params,
                         const AeroSpline& spline, const TrimOptions& opt) {
  auto cost = [&](double th, double u) { return trim_eval(th, u, v_i, gamma, params, spline).cost; };
  const double tol_cost = opt.tolerance * opt.tolerance;
  const double h = opt.fd_step;

  Eigen::Vector2d x(theta, collective);
  double f = cost(x[0], x[1]);
  Eigen::Vector2d g_prev = Eigen::Vector2d::Zero(), x_prev = x;
  double step = 1e-3;
  int it = 0;
  for (; it < opt.max_iterations && f >= tol_cost; ++it) {
    Eigen::Vector2d g((cost(x[0] + h, x[1]) - cost(x[0] - h, x[1])) / (2 * h),
                      (cost(x[0], x[1] + h) - cost(x[0], x[1] - h)) / (2 * h));
    const double gg = g.squaredNorm();
    if (!(gg > 0.0)) break;
    if (it > 0) {
      // Barzilai-Borwein trial length; the Armijo test below still guards every step.
      const Eigen::Vector2d sx = x - x_prev, sg = g - g_prev;
      const double denom = sx.dot(sg);
      if (denom > 0.0) step = sx.squaredNorm() / denom;
    }
    // Keep each move local so the descent follows the branch it started on.
    double trial = std::min(step, kMaxMove / std::sqrt(gg));
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      Eigen::Vector2d xn = x - trial * g;
      xn[1] = std::max(xn[1], 0.0);  // collective cannot pull
      const double fn = cost(xn[0], xn[1]);
      if (fn <= f - opt.armijo * g.dot(x - xn)) {
        x_prev = x;
        g_prev = g;
        x = xn;
        f = fn;
        accepted = true;
        break;
      }
      trial *= 0.5;
    }
    step = trial;
    if (!accepted) break;
  }
  return {wrap_pi(x[0] - std::numbers::pi / 2) + std::numbers::pi / 2, x[1], f, it};
}

}  // namespace

TrimPoint trim_solve(double v_i, double gamma, double eta, const VehicleParams& params, const AeroSpline& spline,
                     const TrimOptions& options) {
  if (!(v_i > 0.0)) throw std::invalid_argument("trim_solve: v_i must be positive");
  VehicleParams p = params;
  p.eta = eta;
  p.validate();

  const double tol_cost = options.tolerance * options.tolerance;
  const double hover = std::numbers::pi / 2;
  const double theta0 = options.theta_guess.value_or(hover);
  const double collective0 =
      options.collective_guess.value_or(std::max(projected_collective(theta0, v_i, gamma, p, spline), 0.0));
  Descent best = gradient_descent(theta0, collective0, v_i, gamma, p, spline, options);
  int total_iterations = best.iterations;

  if (best.cost >= tol_cost) {
    // Restart from the local minima of a coarse pitch scan, smallest residual first.
    std::vector<std::pair<double, double>> scan;
    for (int i = -30; i <= 180; ++i) {
      const double th = gamma + i * 0.5 * kDeg;
      const double u = projected_collective(th, v_i, gamma, p, spline);
      if (u < 0.0) continue;
      scan.emplace_back(th, trim_eval(th, u, v_i, gamma, p, spline).cost);
    }
    std::vector<std::pair<double, double>> candidates;
    for (std::size_t i = 1; i + 1 < scan.size(); ++i) {
      if (scan[i].second <= scan[i - 1].second && scan[i].second <= scan[i + 1].second) {
        candidates.push_back({scan[i].second, scan[i].first});
      }
    }
    std::sort(candidates.begin(), candidates.end());
    for (const auto& [c, th] : candidates) {
      Descent d = gradient_descent(th, projected_collective(th, v_i, gamma, p, spline), v_i, gamma, p, spline,
                                   options);
      total_iterations += d.iterations;
      if (d.cost < best.cost) best = d;
      if (best.cost < tol_cost) break;
    }
  }

  const auto ev = trim_eval(best.theta, best.collective, v_i, gamma, p, spline);
  TrimPoint tp;
  tp.v_i = v_i;
  tp.gamma = gamma;
  tp.eta = eta;
  tp.theta_eq = best.theta;
  tp.collective_eq = best.collective;
  tp.differential_eq = ev.differential;
  tp.alpha_e_eq = ev.airflow.alpha_e;
  tp.a_v_true = aerodynamic_loading(ev.airflow.v_a, p);
  tp.residual = std::sqrt(ev.cost);
  tp.converged = ev.cost < tol_cost;
  tp.iterations = total_iterations;
  return tp;
}

SweepOptions SweepOptions::defaults() {
  SweepOptions o;
  for (int v = 1; v <= 30; ++v) o.speeds.push_back(v);
  for (int k = 0; k <= 20; ++k) o.etas.push_back(k * 0.05);
  return o;
}

SweepPoint trim_and_settle(double v_i, double eta, const VehicleParams& params, const AeroSpline& spline,
                           const SweepOptions& options) {
  SweepPoint sp;
  sp.trim = trim_solve(v_i, 0.0, eta, params, spline, options.trim);

  ClosedLoopSetup setup;
  setup.params = params;
  setup.params.eta = eta;
  setup.gains = options.gains;
  setup.dt = options.dt;
  setup.duration = options.settle_time;
  setup.initial.theta = sp.trim.theta_eq;
  setup.initial.y_dot = v_i;
  setup.initial_input = {(sp.trim.collective_eq - sp.trim.differential_eq) / 2,
                         (sp.trim.collective_eq + sp.trim.differential_eq) / 2};
  const auto reference = Trajectory::constant_velocity(Vec2::Zero(), Vec2(v_i, 0.0), options.settle_time, options.dt);

  StepRecord last;
  try {
    const State final_state = simulate_closed_loop(setup, reference, spline, [&](const StepRecord& r) { last = r; });
    const auto flow = compute_airflow(final_state.theta, final_state.y_dot, final_state.z_dot, last.input.t_top,
                                      last.input.t_bottom, setup.params);
    sp.theta = final_state.theta;
    sp.alpha_e = flow.alpha_e;
    sp.a_v_true = aerodynamic_loading(flow.v_a, setup.params);
    sp.collective = last.input.collective();
    sp.differential = last.input.t_bottom - last.input.t_top;
  } catch (const SimulationFailure&) {
    sp.settled_finite = false;
    sp.theta = sp.alpha_e = sp.a_v_true = std::numeric_limits<double>::quiet_NaN();
  }
  return sp;
}

std::vector<SweepPoint> trim_sweep(const VehicleParams& params, const AeroSpline& spline, const SweepOptions& options) {
  if (options.speeds.empty() || options.etas.empty()) throw std::invalid_argument("trim_sweep: empty grid");
  std::vector<double> speeds = options.speeds;
  std::sort(speeds.begin(), speeds.end());
  const std::size_t n_v = speeds.size(), n_eta = options.etas.size();
  std::vector<SweepPoint> out(n_v * n_eta);
  std::size_t done = 0;
  for (std::size_t j = 0; j < n_eta; ++j) {
    SweepOptions row = options;
    row.trim.theta_guess.reset();
    row.trim.collective_guess.reset();
    for (std::size_t i = 0; i < n_v; ++i) {
      SweepPoint sp = trim_and_settle(speeds[i], options.etas[j], params, spline, row);
      if (sp.trim.converged) {
        row.trim.theta_guess = sp.trim.theta_eq;
        row.trim.collective_guess = sp.trim.collective_eq;
      }
      out[i * n_eta + j] = sp;
      if (options.progress) options.progress(++done, out.size());
    }
  }
  return out;
}

std::vector<Discontinuity> find_discontinuities(const std::vector<SweepPoint>& sweep) {
  std::vector<double> etas;
  for (const auto& p : sweep) {
    if (std::find(etas.begin(), etas.end(), p.trim.eta) == etas.end()) etas.push_back(p.trim.eta);
  }
  std::vector<Discontinuity> out;
  for (double eta : etas) {
    std::vector<const TrimPoint*> row;
    for (const auto& p : sweep) {
      if (p.trim.eta == eta && p.trim.converged) row.push_back(&p.trim);
    }
    std::sort(row.begin(), row.end(), [](const TrimPoint* a, const TrimPoint* b) { return a->v_i < b->v_i; });
    double best_drop = 0.0;
    Discontinuity d;
    d.eta = eta;
    for (std::size_t i = 0; i + 1 < row.size(); ++i) {
      const double drop = row[i]->alpha_e_eq - row[i + 1]->alpha_e_eq;
      if (drop <= best_drop) continue;
      best_drop = drop;
      d.theta_lo = row[i]->theta_eq;
      d.collective_lo = row[i]->collective_eq;
      d.v_lo = row[i]->v_i;
      d.v_hi = row[i + 1]->v_i;
      d.a_v_lo = row[i]->a_v_true;
      d.a_v_hi = row[i + 1]->a_v_true;
      d.alpha_lo = row[i]->alpha_e_eq;
      d.alpha_hi = row[i + 1]->alpha_e_eq;
    }
    if (best_drop > 0.0) out.push_back(d);
  }
  return out;
}

Discontinuity refine_discontinuity(const Discontinuity& coarse, const VehicleParams& params, const AeroSpline& spline,
                                   const TrimOptions& options, double v_tolerance) {
  Discontinuity d = coarse;
  const double split = 0.5 * (coarse.alpha_lo + coarse.alpha_hi);
  while (d.v_hi - d.v_lo > v_tolerance) {
    const double v = 0.5 * (d.v_lo + d.v_hi);
    TrimOptions warm = options;
    warm.theta_guess = d.theta_lo;
    warm.collective_guess = d.collective_lo;
    const TrimPoint tp = trim_solve(v, 0.0, d.eta, params, spline, warm);
    if (tp.converged && tp.alpha_e_eq > split) {
      d.theta_lo = tp.theta_eq;
      d.collective_lo = tp.collective_eq;
      d.v_lo = v;
      d.a_v_lo = tp.a_v_true;
      d.alpha_lo = tp.alpha_e_eq;
    } else {
      d.v_hi = v;
      d.a_v_hi = tp.a_v_true;
      d.alpha_hi = tp.alpha_e_eq;
    }
  }
  return d;
}

}  // namespace tailsitter
