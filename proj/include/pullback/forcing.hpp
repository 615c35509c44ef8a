#pragma once

#include <string>
#include <vector>

#include "pullback/function_spaces.hpp"

namespace pullback {

/// Time-dependent body force f(t) = g * envelope(t) with a fixed
/// divergence-free spectral profile g.  Every kind satisfies the
/// exponentially weighted integrability condition
///   integral_{-infty}^t e^{sigma xi} |f(xi)|_{V*}^2 dxi < infinity,
/// enforced at construction; the tail integral is available in closed
/// form per kind.
class ForcingProfile {
 public:
  enum class Kind { Zero, SingleModePeriodic, ExponentialEnvelope, Tabulated };

  static ForcingProfile zero(DomainPtr domain);
  /// f(t) = g * e^{alpha t}; requires 2*alpha + sigma > 0.
  static ForcingProfile exponential_envelope(SpectralField profile, double alpha);
  /// f(t) = g * cos(omega t + phase).
  static ForcingProfile single_mode_periodic(SpectralField profile, double omega, double phase);
  /// Piecewise-linear envelope samples on [times.front(), times.back()],
  /// extended by e^{left_rate (t - t0)} on the left and
  /// e^{right_rate (t - t1)} on the right; requires sigma + 2*left_rate > 0.
  static ForcingProfile tabulated(SpectralField profile, std::vector<double> times,
                                  std::vector<double> envelope, double left_rate,
                                  double right_rate);

  Kind kind() const { return kind_; }
  const SpectralField& profile() const { return profile_; }
  const DomainPtr& domain_ptr() const { return profile_.domain_ptr(); }
  double alpha() const { return alpha_; }
  double omega() const { return omega_; }
  double phase() const { return phase_; }

  double envelope(double t) const;
  /// f(t) as a spectral field.
  SpectralField value(double t) const;
  /// |f(t)|_{V_s*} = |envelope(t)| * |g|_{V_s*}.
  double dual_norm(double t, double order = 1.0) const;
  double dual_norm_sq(double t) const;
  /// Closed-form integral_{-infty}^{s} e^{sigma xi} |f(xi)|_{V*}^2 dxi.
  double weighted_tail_integral(double s) const;
  /// |g|_{V_s*} of the fixed profile.
  double profile_dual_norm(double order) const { return order == 1.0 ? g_vstar_ : norm_dual_cached(order); }

  std::string kind_name() const;

 private:
  ForcingProfile(Kind kind, SpectralField profile);
  double norm_dual_cached(double order) const;

  Kind kind_;
  SpectralField profile_;
  double g_vstar_ = 0.0;   // |g|_{V*}
  double alpha_ = 0.0;     // exponential growth rate
  double omega_ = 0.0;     // periodic frequency
  double phase_ = 0.0;
  std::vector<double> table_t_;
  std::vector<double> table_env_;
  double left_rate_ = 0.0;
  double right_rate_ = 0.0;
};

/// Builds a divergence-free single-mode profile at wavevector k with the
/// requested V*-norm: the polarization is a deterministic unit vector
/// orthogonal to k.
SpectralField single_mode_profile(const DomainPtr& domain, const std::array<int, 3>& k,
                                  double v_star_norm);

}  // namespace pullback
