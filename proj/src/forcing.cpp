#include "pullback/forcing.hpp"

#include <cmath>
#include <stdexcept>

namespace pullback {

namespace {

// integral_0^D e^{s u} u^m du for m = 0, 1, 2.
double exp_poly_integral(double s, double D, int m) {
  const double e = std::exp(s * D);
  switch (m) {
    case 0:
      return (e - 1.0) / s;
    case 1:
      return (e * (s * D - 1.0) + 1.0) / (s * s);
    case 2:
      return (e * (s * s * D * D - 2.0 * s * D + 2.0) - 2.0) / (s * s * s);
    default:
      throw std::logic_error("unsupported monomial order");
  }
}

// integral_{x0}^{x1} e^{s xi} (a + b (xi - x0))^2 dxi.
double segment_weighted_square(double s, double x0, double x1, double a, double b) {
  const double D = x1 - x0;
  return std::exp(s * x0) * (a * a * exp_poly_integral(s, D, 0) +
                             2.0 * a * b * exp_poly_integral(s, D, 1) +
                             b * b * exp_poly_integral(s, D, 2));
}

}  // namespace

ForcingProfile::ForcingProfile(Kind kind, SpectralField profile)
    : kind_(kind), profile_(std::move(profile)) {
  if (profile_.divergence_residual() > 1e-12)
    throw std::invalid_argument("forcing profile must be divergence-free");
  if (profile_.mean_residual() > 1e-12)
    throw std::invalid_argument("forcing profile must be mean-zero");
  if (profile_.symmetry_residual() > 1e-12)
    throw std::invalid_argument("forcing profile must be conjugate-symmetric");
  g_vstar_ = (kind_ == Kind::Zero) ? 0.0 : norm_dual(profile_, 1.0);
}

double ForcingProfile::norm_dual_cached(double order) const { return norm_dual(profile_, order); }

ForcingProfile ForcingProfile::zero(DomainPtr domain) {
  return ForcingProfile(Kind::Zero, SpectralField(std::move(domain)));
}

ForcingProfile ForcingProfile::exponential_envelope(SpectralField profile, double alpha) {
  ForcingProfile f(Kind::ExponentialEnvelope, std::move(profile));
  const double sigma = f.domain_ptr()->sigma();
  if (2.0 * alpha + sigma <= 0.0)
    throw std::invalid_argument("forcing fails integrability: 2*alpha + sigma must be positive");
  f.alpha_ = alpha;
  return f;
}

ForcingProfile ForcingProfile::single_mode_periodic(SpectralField profile, double omega,
                                                    double phase) {
  ForcingProfile f(Kind::SingleModePeriodic, std::move(profile));
  f.omega_ = omega;
  f.phase_ = phase;
  return f;
}

ForcingProfile ForcingProfile::tabulated(SpectralField profile, std::vector<double> times,
                                         std::vector<double> envelope, double left_rate,
                                         double right_rate) {
  ForcingProfile f(Kind::Tabulated, std::move(profile));
  if (times.size() != envelope.size() || times.size() < 2)
    throw std::invalid_argument("tabulated forcing needs >= 2 aligned samples");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1]) throw std::invalid_argument("table times must increase");
  const double sigma = f.domain_ptr()->sigma();
  if (sigma + 2.0 * left_rate <= 0.0)
    throw std::invalid_argument("forcing fails integrability: sigma + 2*left_rate must be positive");
  f.table_t_ = std::move(times);
  f.table_env_ = std::move(envelope);
  f.left_rate_ = left_rate;
  f.right_rate_ = right_rate;
  return f;
}

double ForcingProfile::envelope(double t) const {
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::ExponentialEnvelope:
      return std::exp(alpha_ * t);
    case Kind::SingleModePeriodic:
      return std::cos(omega_ * t + phase_);
    case Kind::Tabulated: {
      if (t <= table_t_.front())
        return table_env_.front() * std::exp(left_rate_ * (t - table_t_.front()));
      if (t >= table_t_.back())
        return table_env_.back() * std::exp(right_rate_ * (t - table_t_.back()));
      auto it = std::upper_bound(table_t_.begin(), table_t_.end(), t);
      const std::size_t hi = static_cast<std::size_t>(it - table_t_.begin());
      const std::size_t lo = hi - 1;
      const double w = (t - table_t_[lo]) / (table_t_[hi] - table_t_[lo]);
      return table_env_[lo] + w * (table_env_[hi] - table_env_[lo]);
    }
  }
  return 0.0;
}

SpectralField ForcingProfile::value(double t) const {
  SpectralField f = profile_;
  f *= envelope(t);
  return f;
}

double ForcingProfile::dual_norm(double t, double order) const {
  if (kind_ == Kind::Zero) return 0.0;
  return std::abs(envelope(t)) * profile_dual_norm(order);
}

double ForcingProfile::dual_norm_sq(double t) const {
  const double e = envelope(t);
  return e * e * g_vstar_ * g_vstar_;
}

double ForcingProfile::weighted_tail_integral(double s) const {
  const double sigma = domain_ptr()->sigma();
  const double A2 = g_vstar_ * g_vstar_;
  switch (kind_) {
    case Kind::Zero:
      return 0.0;
    case Kind::ExponentialEnvelope:
      return A2 * std::exp((2.0 * alpha_ + sigma) * s) / (2.0 * alpha_ + sigma);
    case Kind::SingleModePeriodic: {
      // e^{sigma xi} cos^2(omega xi + phase) integrated to s.
      const double b = 2.0 * omega_;
      const double c = 2.0 * phase_;
      const double osc = (b == 0.0)
                             ? std::exp(sigma * s) / (2.0 * sigma)
                             : std::exp(sigma * s) *
                                   (sigma * std::cos(b * s + c) + b * std::sin(b * s + c)) /
                                   (2.0 * (sigma * sigma + b * b));
      return A2 * (std::exp(sigma * s) / (2.0 * sigma) + osc);
    }
    case Kind::Tabulated: {
      const double t0 = table_t_.front();
      const double t1 = table_t_.back();
      double total = 0.0;
      // Left tail: env(xi) = env0 e^{L (xi - t0)} for xi <= t0.
      {
        const double upper = std::min(s, t0);
        const double rate = sigma + 2.0 * left_rate_;
        const double e0 = table_env_.front();
        total += e0 * e0 * std::exp(sigma * t0) * std::exp(rate * (upper - t0)) / rate;
        if (s <= t0) return A2 * total;
      }
      for (std::size_t i = 0; i + 1 < table_t_.size(); ++i) {
        const double x0 = table_t_[i];
        if (x0 >= s) break;
        const double x1 = std::min(table_t_[i + 1], s);
        const double slope = (table_env_[i + 1] - table_env_[i]) / (table_t_[i + 1] - x0);
        total += segment_weighted_square(sigma, x0, x1, table_env_[i], slope);
      }
      if (s > t1) {
        const double rate = sigma + 2.0 * right_rate_;
        const double e1 = table_env_.back();
        if (rate <= 0.0) throw std::invalid_argument("right tail not integrable up to s");
        total += e1 * e1 * std::exp(sigma * t1) * (std::exp(rate * (s - t1)) - 1.0) / rate;
      }
      return A2 * total;
    }
  }
  return 0.0;
}

std::string ForcingProfile::kind_name() const {
  switch (kind_) {
    case Kind::Zero:
      return "zero";
    case Kind::SingleModePeriodic:
      return "single_mode_periodic";
    case Kind::ExponentialEnvelope:
      return "exponential_envelope";
    case Kind::Tabulated:
      return "tabulated";
  }
  return "?";
}

SpectralField single_mode_profile(const DomainPtr& domain, const std::array<int, 3>& k,
                                  double v_star_norm) {
  if (k[0] == 0 && k[1] == 0 && k[2] == 0)
    throw std::invalid_argument("single-mode profile needs k != 0");
  const int d = domain->dimension();
  if (d == 2 && k[2] != 0) throw std::invalid_argument("2D profile cannot use k3");
  SpectralField g(domain);
  // Deterministic polarization orthogonal to k.
  std::array<double, 3> p{0.0, 0.0, 0.0};
  if (d == 2) {
    p = {-static_cast<double>(k[1]), static_cast<double>(k[0]), 0.0};
  } else {
    if (k[0] == 0 && k[1] == 0)
      p = {1.0, 0.0, 0.0};
    else
      p = {-static_cast<double>(k[1]), static_cast<double>(k[0]), 0.0};
  }
  double plen = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
  const std::size_t idx = domain->index_of(k);
  for (int c = 0; c < d; ++c) g.set_coeff(idx, c, Complex{p[c] / plen, 0.0});
  hermitian_symmetrize(g);
  const double current = norm_dual(g, 1.0);
  g *= v_star_norm / current;
  return g;
}

}  // namespace pullback
