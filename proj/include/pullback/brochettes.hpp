#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "pullback/function_spaces.hpp"
#include "pullback/trajectory_space.hpp"

namespace pullback {

/// A time-indexed family of H-balls encoded by its radius function r(t).
/// Closed forms (constant, exponential) keep the class checks symbolic;
/// tabulated radii are extended exponentially outside the table.  Min and
/// Max combine children pointwise.
class RadiusBrochette {
 public:
  enum class Kind { Constant, Exponential, Table, Min, Max };

  static RadiusBrochette constant(double rho);
  /// r(t) = amplitude * e^{rate t}.
  static RadiusBrochette exponential(double amplitude, double rate);
  /// Piecewise-linear radii on the table, exponential extension with the
  /// declared rates outside.
  static RadiusBrochette table(std::vector<double> times, std::vector<double> radii,
                               double left_rate, double right_rate);
  static RadiusBrochette pointwise_min(RadiusBrochette a, RadiusBrochette b);
  static RadiusBrochette pointwise_max(RadiusBrochette a, RadiusBrochette b);

  Kind kind() const { return kind_; }
  double radius(double t) const;
  /// e^{sigma t} r(t)^2, the class-D weighted square.
  double weighted_square(double t, double sigma) const;

  // Closed-form parameters (valid for the matching kind).
  double constant_rho() const { return rho_; }
  double exp_amplitude() const { return amplitude_; }
  double exp_rate() const { return rate_; }
  double table_left_rate() const { return left_rate_; }

  /// True when the lim_{s->-inf} e^{sigma s} r^2(s) = 0 condition holds
  /// symbolically for the closed form (or the table's left extension).
  bool vanishing_weighted_limit(double sigma) const;

 private:
  RadiusBrochette() = default;

  Kind kind_ = Kind::Constant;
  double rho_ = 1.0;
  double amplitude_ = 1.0;
  double rate_ = 0.0;
  std::vector<double> table_t_;
  std::vector<double> table_r_;
  double left_rate_ = 0.0;
  double right_rate_ = 0.0;
  std::shared_ptr<const RadiusBrochette> left_, right_;
};

struct ClassDCertificate {
  bool is_class_D = false;
  std::string reason;     // names the violated condition on failure
  double failing_s = 0.0; // witness for a monotonicity failure
  double grid_lo = 0.0;
  double grid_hi = 0.0;
  int grid_points = 0;
};

/// Checks both class-D conditions: e^{sigma s} r^2(s) -> 0 as s -> -inf
/// (symbolic per closed form) and strict increase of the weighted square
/// on a sampling grid over [window_lo, window_hi].
ClassDCertificate is_class_D(const RadiusBrochette& r, double sigma, double window_lo = -20.0,
                             double window_hi = 20.0, int grid_points = 1000);

/// Pointwise-in-t intersection of two radius brochettes.
RadiusBrochette brochette_intersect(const RadiusBrochette& a, const RadiusBrochette& b);

/// contains(B, B*) is true iff B*_t is a subset of B_t on the sampling
/// grid, i.e. r_{B*} <= r_B pointwise.
bool brochette_contains(const RadiusBrochette& outer, const RadiusBrochette& inner,
                        double window_lo = -20.0, double window_hi = 20.0, int grid_points = 1000);

/// A finite sample of the trajectory set H_tau(D): initial states drawn
/// from the ball of radius r_D(tau) plus the trajectories a solver
/// produced from them.  Invariant: |initial state|_H <= r_D(tau).
struct TrajectoryEnsemble {
  double anchor_tau = 0.0;
  std::vector<SpectralField> initial_states;
  std::vector<TrajectorySample> trajectories;
  std::vector<EnergyLedger> ledgers;
};

/// Deterministic stratified sampling of the ball of radius r_D(tau):
/// uniform random directions, radii stratified over [0, r_D(tau)] with
/// the boundary radius always included; identical (seed, count) give
/// identical ensembles.  Trajectories are left empty for the caller's
/// integrator.
TrajectoryEnsemble sample_ensemble(const DomainPtr& domain, const RadiusBrochette& D, double tau,
                                   int count, std::uint64_t seed);

/// A brochette over trajectory space with finite support: the value at
/// each listed time is a finite trajectory set.
struct TrajectorySetBrochette {
  std::vector<double> times;
  std::vector<std::vector<TrajectorySample>> sets;
};

/// (T(h)P)_t = T(h) P_{t-h}: support times shift forward by h and every
/// member trajectory is translated by h.
TrajectorySetBrochette translate_brochette(const TrajectorySetBrochette& P, double h);

}  // namespace pullback
