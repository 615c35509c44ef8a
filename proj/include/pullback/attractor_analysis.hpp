#pragma once

#include <cstdint>
#include <functional>
#include <variant>
#include <vector>

#include "pullback/brochettes.hpp"
#include "pullback/forcing.hpp"
#include "pullback/navier_stokes.hpp"

namespace pullback {

/// R1(s) = e^{sigma s} + (1/eta) integral_{-infty}^s e^{sigma xi}
/// |f(xi)|_{V*}^2 dxi, strictly increasing; the tail integral comes from
/// the profile's closed form.
double compute_R1(const ForcingProfile& f, double s);

/// chi(s) = max{ e^{sigma s} r_D(s)^2, R1(s) }.
double chi_value(const RadiusBrochette& D, const ForcingProfile& f, double s);

/// Solves chi(tau0) = R1(t) by bisection on the increasing chi, with the
/// lower bracket expanded geometrically toward -infinity.  tau0 <= t
/// always; relative residual <= 1e-10.  D must be class-D.
double compute_tau0(const RadiusBrochette& D, double t, const ForcingProfile& f);

/// The absorbing-family data for one (D, t) pair: the inverse-image time
/// tau0 plus the domain constants of the derivative bound.
struct AbsorptionEstimate {
  double t = 0.0;
  double tau0 = 0.0;
  double R2 = 0.0;
  double R3 = 0.0;
  ForcingProfile forcing;
  RadiusBrochette D;

  double R1(double s) const { return compute_R1(forcing, s); }
  double chi(double s) const { return chi_value(D, forcing, s); }
};

AbsorptionEstimate make_absorption_estimate(const RadiusBrochette& D, double t,
                                            const ForcingProfile& f, double R2, double R3);

/// u' of the generating dynamics at (state, absolute time).
using RhsEvaluator = std::function<SpectralField(const SpectralField&, double)>;

/// Produces the trajectory of the shifted problem from initial state a.
using TrajectoryIntegrator =
    std::function<IntegrationResult(const SpectralField& a, double tau, double h_max)>;

struct AbsorptionCheck {
  bool pass = false;
  double min_energy_margin = 0.0;      // min over (u, h) of 2 e^{-sigma(t+h)} R1(t+h) - |u|^2
  double min_derivative_margin = 0.0;  // min over (u, h) of bound RHS - |u'|_{V3*}
  double worst_energy_h = 0.0;
  double worst_derivative_h = 0.0;
  int worst_energy_trajectory = -1;
  int worst_derivative_trajectory = -1;
  double tol_abs = 0.0;
};

/// Verifies both defining inequalities of the absorbing family on the
/// translated ensemble: for every trajectory u and grid offset h in
/// [0, h_window],
///   |(T(t-tau) u)(h)|^2 <= 2 e^{-sigma (t+h)} R1(t+h) (1 + tol_abs),
///   |u'(t-tau+h)|_{V3*} <= eta R2 |u| + R3 |u|^2 + |f(t+h)|_{V3*},
/// with u' evaluated through the dynamics' right-hand side.  The
/// ensemble anchor must satisfy tau <= tau0 (precondition error
/// otherwise), and trajectories must cover [t - tau, t - tau + h_window].
AbsorptionCheck check_absorption(const TrajectoryEnsemble& ensemble, double t,
                                 const AbsorptionEstimate& est, const RhsEvaluator& rhs,
                                 double h_window, double tol_abs);

enum class DecayMode { Trajectory, Section };

/// Attraction target: a finite point set in the phase space (section
/// mode) or a finite trajectory set (trajectory mode).
using DecayTarget = std::variant<std::vector<SpectralField>, std::vector<TrajectorySample>>;

struct DecayPoint {
  double tau = 0.0;
  double distance = 0.0;
  double tail_bound = 0.0;
};

struct DecayCurve {
  std::vector<DecayPoint> points;
  double fitted_rate = 0.0;  // exponential rate of distance vs (t - tau)
};

/// Measures semidistance decay as tau walks toward -infinity: section
/// mode compares ensemble states at absolute time t against target
/// points in the E0 norm; trajectory mode compares the translated
/// trajectories against target trajectories in the truncated Frechet
/// metric.  Ensembles are drawn per tau with seed = seed_base + index.
DecayCurve pullback_decay(const DomainPtr& domain, const RadiusBrochette& D, double t,
                          const std::vector<double>& taus, const TrajectoryIntegrator& integrate,
                          const DecayTarget& target, DecayMode mode, int count,
                          std::uint64_t seed_base, int i_max, double extra_horizon = 0.0);

/// Agglomerates endpoint states at t - tau_deep across the listed
/// brochettes into E0-norm clusters; returns the cluster centroids.
std::vector<SpectralField> estimate_mpa_section(const DomainPtr& domain,
                                                const std::vector<RadiusBrochette>& D_list,
                                                double t, double tau_deep,
                                                const TrajectoryIntegrator& integrate,
                                                double cluster_tol, int count,
                                                std::uint64_t seed);

/// Greedy single-linkage clustering of points at the given E0 tolerance;
/// deterministic in the input order.
std::vector<SpectralField> cluster_points(const std::vector<SpectralField>& points,
                                          double cluster_tol);

struct CalibratedConstants {
  double R2 = 0.0;
  double R3 = 0.0;
  double max_ratio = 0.0;       // largest observed |B(u)|_{V3*} / |u|^2
  int holdout_violations = 0;
  int holdout_count = 0;
};

/// R2 is the exact diagonal factor sup_k lambda_k^{-1/2} = lambda1^{-1/2}.
/// R3 is 1.1x the largest V3*-to-|u|^2 ratio of the convection term over
/// sample_count random unit-H fields (undamped form) plus a damped
/// radius sweep at the configured M; a fresh-seed holdout then counts
/// violations of |B_M(u)|_{V3*} <= R3 |u|^2.
CalibratedConstants calibrate_constants(const DomainPtr& domain, int sample_count,
                                        std::uint64_t seed, double M, bool dealias = true);

/// Least-squares exponential rate: fits log(y) = c - rate * x over the
/// points with y > 0.
double fit_exponential_rate(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace pullback
