#include "pullback/attractor_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "pullback/rng.hpp"

namespace pullback {

double compute_R1(const ForcingProfile& f, double s) {
  const auto& dom = *f.domain_ptr();
  return std::exp(dom.sigma() * s) + f.weighted_tail_integral(s) / dom.viscosity();
}

double chi_value(const RadiusBrochette& D, const ForcingProfile& f, double s) {
  const double sigma = f.domain_ptr()->sigma();
  return std::max(D.weighted_square(s, sigma), compute_R1(f, s));
}

double compute_tau0(const RadiusBrochette& D, double t, const ForcingProfile& f) {
  const double target = compute_R1(f, t);
  // chi >= R1 pointwise and both increase, so t brackets from above.
  double hi = t;
  double lo = t - 1.0;
  int expansions = 0;
  while (chi_value(D, f, lo) > target) {
    lo = t - 2.0 * (t - lo);
    if (++expansions > 1000)
      throw std::runtime_error(
          "tau0 bracket not found after 1000 expansions: class-D invariant violated");
  }
  for (int iter = 0; iter < 200; ++iter) {
    const double mid = 0.5 * (lo + hi);
    if (mid == lo || mid == hi) break;
    if (chi_value(D, f, mid) >= target)
      hi = mid;
    else
      lo = mid;
  }
  return hi;
}

AbsorptionEstimate make_absorption_estimate(const RadiusBrochette& D, double t,
                                            const ForcingProfile& f, double R2, double R3) {
  AbsorptionEstimate est{t, compute_tau0(D, t, f), R2, R3, f, D};
  return est;
}

AbsorptionCheck check_absorption(const TrajectoryEnsemble& ensemble, double t,
                                 const AbsorptionEstimate& est, const RhsEvaluator& rhs,
                                 double h_window, double tol_abs) {
  const double tau = ensemble.anchor_tau;
  if (tau > est.tau0 + 1e-12)
    throw std::invalid_argument("absorption precondition violated: tau > tau0(D, t)");
  if (ensemble.trajectories.empty())
    throw std::invalid_argument("absorption check needs integrated trajectories");

  const auto& dom = *ensemble.trajectories.front().domain_ptr();
  const double sigma = dom.sigma();
  const double eta = dom.viscosity();

  AbsorptionCheck out;
  out.tol_abs = tol_abs;
  out.min_energy_margin = std::numeric_limits<double>::infinity();
  out.min_derivative_margin = std::numeric_limits<double>::infinity();
  bool pass = true;

  for (std::size_t ui = 0; ui < ensemble.trajectories.size(); ++ui) {
    const auto& traj = ensemble.trajectories[ui];
    const double shift = t - tau;
    const std::size_t first = traj.index_at_time(shift);
    const std::size_t last = traj.index_at_time(shift + h_window);
    for (std::size_t i = first; i <= last; ++i) {
      const double h = traj.dt_grid() * static_cast<double>(i) - shift;
      const auto& state = traj.state(i);
      const double h_sq = std::pow(norm_H(state), 2);

      const double bound = 2.0 * std::exp(-sigma * (t + h)) * est.R1(t + h);
      const double margin = bound - h_sq;
      if (margin < out.min_energy_margin) {
        out.min_energy_margin = margin;
        out.worst_energy_h = h;
        out.worst_energy_trajectory = static_cast<int>(ui);
      }
      if (h_sq > bound * (1.0 + tol_abs)) pass = false;

      const double t_abs = t + h;
      const SpectralField uprime = rhs(state, t_abs);
      const double lhs = norm_dual(uprime, 3.0);
      const double hn = std::sqrt(h_sq);
      const double rhs_bound =
          eta * est.R2 * hn + est.R3 * h_sq + est.forcing.dual_norm(t_abs, 3.0);
      const double dmargin = rhs_bound - lhs;
      if (dmargin < out.min_derivative_margin) {
        out.min_derivative_margin = dmargin;
        out.worst_derivative_h = h;
        out.worst_derivative_trajectory = static_cast<int>(ui);
      }
      if (lhs > rhs_bound + tol_abs * (1.0 + rhs_bound)) pass = false;
    }
  }
  out.pass = pass;
  return out;
}

DecayCurve pullback_decay(const DomainPtr& domain, const RadiusBrochette& D, double t,
                          const std::vector<double>& taus, const TrajectoryIntegrator& integrate,
                          const DecayTarget& target, DecayMode mode, int count,
                          std::uint64_t seed_base, int i_max, double extra_horizon) {
  if (mode == DecayMode::Section && !std::holds_alternative<std::vector<SpectralField>>(target))
    throw std::invalid_argument("section-mode decay needs a point-set target");
  if (mode == DecayMode::Trajectory &&
      !std::holds_alternative<std::vector<TrajectorySample>>(target))
    throw std::invalid_argument("trajectory-mode decay needs a trajectory-set target");
  if (mode == DecayMode::Section) {
    if (std::get<std::vector<SpectralField>>(target).empty())
      throw std::invalid_argument("decay target must be non-empty");
  } else if (std::get<std::vector<TrajectorySample>>(target).empty()) {
    throw std::invalid_argument("decay target must be non-empty");
  }

  const double delta = domain->delta();
  DecayCurve curve;
  std::vector<double> xs, ys;
  for (std::size_t ti = 0; ti < taus.size(); ++ti) {
    const double tau = taus[ti];
    if (tau > t) throw std::invalid_argument("decay requires tau <= t");
    const double horizon =
        (mode == DecayMode::Trajectory) ? (t - tau) + std::max<double>(i_max, extra_horizon)
                                        : (t - tau) + extra_horizon;
    TrajectoryEnsemble ensemble = sample_ensemble(domain, D, tau, count, seed_base + ti);
    for (const auto& a : ensemble.initial_states)
      ensemble.trajectories.push_back(integrate(a, tau, horizon).trajectory);

    DecayPoint point;
    point.tau = tau;
    if (mode == DecayMode::Section) {
      const auto& points = std::get<std::vector<SpectralField>>(target);
      double sup = 0.0;
      for (const auto& traj : ensemble.trajectories) {
        const auto& endpoint = traj.state_at_time(t - tau);
        double inf = std::numeric_limits<double>::infinity();
        for (const auto& v : points) inf = std::min(inf, norm_dual(endpoint - v, delta));
        sup = std::max(sup, inf);
      }
      point.distance = sup;
      point.tail_bound = 0.0;
    } else {
      const auto& target_trajs = std::get<std::vector<TrajectorySample>>(target);
      std::vector<TrajectorySample> translated;
      translated.reserve(ensemble.trajectories.size());
      for (const auto& traj : ensemble.trajectories) translated.push_back(translate(traj, t - tau));
      const auto sd = semidistance(translated, target_trajs, i_max);
      point.distance = sd.value;
      point.tail_bound = sd.tail_bound;
    }
    curve.points.push_back(point);
    if (point.distance > 0.0) {
      xs.push_back(t - tau);
      ys.push_back(point.distance);
    }
  }
  curve.fitted_rate = fit_exponential_rate(xs, ys);
  return curve;
}

std::vector<SpectralField> cluster_points(const std::vector<SpectralField>& points,
                                          double cluster_tol) {
  std::vector<SpectralField> centroids;
  std::vector<int> sizes;
  for (const auto& p : points) {
    const double delta = p.domain().delta();
    int best = -1;
    double best_dist = cluster_tol;
    for (std::size_t c = 0; c < centroids.size(); ++c) {
      const double d = norm_dual(p - centroids[c], delta);
      if (d <= best_dist) {
        best_dist = d;
        best = static_cast<int>(c);
      }
    }
    if (best < 0) {
      centroids.push_back(p);
      sizes.push_back(1);
    } else {
      // Running centroid mean.
      auto& centroid = centroids[static_cast<std::size_t>(best)];
      const double n = static_cast<double>(sizes[static_cast<std::size_t>(best)]);
      centroid *= n / (n + 1.0);
      centroid.axpy(1.0 / (n + 1.0), p);
      sizes[static_cast<std::size_t>(best)] += 1;
    }
  }
  return centroids;
}

std::vector<SpectralField> estimate_mpa_section(const DomainPtr& domain,
                                                const std::vector<RadiusBrochette>& D_list,
                                                double t, double tau_deep,
                                                const TrajectoryIntegrator& integrate,
                                                double cluster_tol, int count,
                                                std::uint64_t seed) {
  if (D_list.empty()) throw std::invalid_argument("section estimate needs brochettes");
  std::vector<SpectralField> endpoints;
  for (std::size_t di = 0; di < D_list.size(); ++di) {
    TrajectoryEnsemble ensemble = sample_ensemble(domain, D_list[di], tau_deep, count, seed + di);
    for (const auto& a : ensemble.initial_states) {
      const auto result = integrate(a, tau_deep, t - tau_deep);
      endpoints.push_back(result.trajectory.state_at_time(t - tau_deep));
    }
  }
  return cluster_points(endpoints, cluster_tol);
}

CalibratedConstants calibrate_constants(const DomainPtr& domain, int sample_count,
                                        std::uint64_t seed, double M, bool dealias) {
  if (sample_count < 1) throw std::invalid_argument("sample_count must be >= 1");
  PseudoSpectralEngine engine(domain, dealias);
  CalibratedConstants out;
  out.R2 = 1.0 / std::sqrt(domain->lambda1());

  // Undamped form is scale-invariant: the unit sphere suffices.
  Rng rng(seed);
  double max_ratio = 0.0;
  for (int i = 0; i < sample_count; ++i) {
    SpectralField u = random_unit_field(domain, rng);
    const SpectralField b = engine.convection(u, std::numeric_limits<double>::infinity());
    max_ratio = std::max(max_ratio, norm_dual(b, 3.0));
  }
  // Damped sweep across radii at the configured M to cover the
  // regularized operator's worst ratio.
  const double radii[] = {0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
  const int sweep = std::max(1, sample_count / 8);
  for (int i = 0; i < sweep; ++i) {
    SpectralField dir = random_unit_field(domain, rng);
    for (double r : radii) {
      SpectralField u = dir;
      u *= r;
      const SpectralField b = engine.convection(u, M);
      max_ratio = std::max(max_ratio, norm_dual(b, 3.0) / (r * r));
    }
  }
  out.max_ratio = max_ratio;
  out.R3 = 1.1 * max_ratio;

  // Fresh-seed holdout across random radii.
  Rng holdout(seed + 0x9e3779b97f4a7c15ULL);
  out.holdout_count = sample_count;
  for (int i = 0; i < sample_count; ++i) {
    const double r = holdout.uniform(0.05, 8.0);
    SpectralField u = random_field(domain, holdout, r);
    const SpectralField b = engine.convection(u, M);
    const double h = norm_H(u);
    if (norm_dual(b, 3.0) > out.R3 * h * h) ++out.holdout_violations;
  }
  return out;
}

double fit_exponential_rate(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) return 0.0;
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  std::size_t n = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (y[i] <= 0.0) continue;
    const double ly = std::log(y[i]);
    sx += x[i];
    sy += ly;
    sxx += x[i] * x[i];
    sxy += x[i] * ly;
    ++n;
  }
  if (n < 2) return 0.0;
  const double denom = static_cast<double>(n) * sxx - sx * sx;
  if (denom == 0.0) return 0.0;
  const double slope = (static_cast<double>(n) * sxy - sx * sy) / denom;
  return -slope;
}

}  // namespace pullback
