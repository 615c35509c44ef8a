#include "pullback/brochettes.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "pullback/rng.hpp"

namespace pullback {

RadiusBrochette RadiusBrochette::constant(double rho) {
  if (rho <= 0.0) throw std::invalid_argument("radius must be positive");
  RadiusBrochette r;
  r.kind_ = Kind::Constant;
  r.rho_ = rho;
  return r;
}

RadiusBrochette RadiusBrochette::exponential(double amplitude, double rate) {
  if (amplitude <= 0.0) throw std::invalid_argument("amplitude must be positive");
  RadiusBrochette r;
  r.kind_ = Kind::Exponential;
  r.amplitude_ = amplitude;
  r.rate_ = rate;
  return r;
}

RadiusBrochette RadiusBrochette::table(std::vector<double> times, std::vector<double> radii,
                                       double left_rate, double right_rate) {
  if (times.size() != radii.size() || times.size() < 2)
    throw std::invalid_argument("radius table needs >= 2 aligned samples");
  for (std::size_t i = 1; i < times.size(); ++i)
    if (times[i] <= times[i - 1]) throw std::invalid_argument("table times must increase");
  for (double r : radii)
    if (r <= 0.0) throw std::invalid_argument("radii must be positive");
  RadiusBrochette r;
  r.kind_ = Kind::Table;
  r.table_t_ = std::move(times);
  r.table_r_ = std::move(radii);
  r.left_rate_ = left_rate;
  r.right_rate_ = right_rate;
  return r;
}

RadiusBrochette RadiusBrochette::pointwise_min(RadiusBrochette a, RadiusBrochette b) {
  RadiusBrochette r;
  r.kind_ = Kind::Min;
  r.left_ = std::make_shared<RadiusBrochette>(std::move(a));
  r.right_ = std::make_shared<RadiusBrochette>(std::move(b));
  return r;
}

RadiusBrochette RadiusBrochette::pointwise_max(RadiusBrochette a, RadiusBrochette b) {
  RadiusBrochette r;
  r.kind_ = Kind::Max;
  r.left_ = std::make_shared<RadiusBrochette>(std::move(a));
  r.right_ = std::make_shared<RadiusBrochette>(std::move(b));
  return r;
}

double RadiusBrochette::radius(double t) const {
  switch (kind_) {
    case Kind::Constant:
      return rho_;
    case Kind::Exponential:
      return amplitude_ * std::exp(rate_ * t);
    case Kind::Table: {
      if (t <= table_t_.front())
        return table_r_.front() * std::exp(left_rate_ * (t - table_t_.front()));
      if (t >= table_t_.back())
        return table_r_.back() * std::exp(right_rate_ * (t - table_t_.back()));
      auto it = std::upper_bound(table_t_.begin(), table_t_.end(), t);
      const std::size_t hi = static_cast<std::size_t>(it - table_t_.begin());
      const std::size_t lo = hi - 1;
      const double w = (t - table_t_[lo]) / (table_t_[hi] - table_t_[lo]);
      return table_r_[lo] + w * (table_r_[hi] - table_r_[lo]);
    }
    case Kind::Min:
      return std::min(left_->radius(t), right_->radius(t));
    case Kind::Max:
      return std::max(left_->radius(t), right_->radius(t));
  }
  return rho_;
}

double RadiusBrochette::weighted_square(double t, double sigma) const {
  const double r = radius(t);
  return std::exp(sigma * t) * r * r;
}

bool RadiusBrochette::vanishing_weighted_limit(double sigma) const {
  switch (kind_) {
    case Kind::Constant:
      return sigma > 0.0;
    case Kind::Exponential:
      return sigma + 2.0 * rate_ > 0.0;
    case Kind::Table:
      return sigma + 2.0 * left_rate_ > 0.0;
    case Kind::Min:
      return left_->vanishing_weighted_limit(sigma) || right_->vanishing_weighted_limit(sigma);
    case Kind::Max:
      return left_->vanishing_weighted_limit(sigma) && right_->vanishing_weighted_limit(sigma);
  }
  return false;
}

ClassDCertificate is_class_D(const RadiusBrochette& r, double sigma, double window_lo,
                             double window_hi, int grid_points) {
  ClassDCertificate cert;
  cert.grid_lo = window_lo;
  cert.grid_hi = window_hi;
  cert.grid_points = grid_points;
  if (!r.vanishing_weighted_limit(sigma)) {
    cert.is_class_D = false;
    cert.reason = "weighted square e^{sigma s} r^2(s) does not vanish as s -> -inf";
    return cert;
  }
  const double step = (window_hi - window_lo) / static_cast<double>(grid_points - 1);
  double prev = r.weighted_square(window_lo, sigma);
  for (int i = 1; i < grid_points; ++i) {
    const double s = window_lo + step * static_cast<double>(i);
    const double cur = r.weighted_square(s, sigma);
    // Strictness is relative: the weighted square spans many decades over
    // the window, so an absolute slack would reject tiny-but-growing tails.
    if (cur - prev <= 1e-12 * std::max(cur, 1e-300)) {
      cert.is_class_D = false;
      cert.reason = "weighted square e^{sigma s} r^2(s) is not strictly increasing";
      cert.failing_s = s;
      return cert;
    }
    prev = cur;
  }
  cert.is_class_D = true;
  cert.reason = "ok";
  return cert;
}

RadiusBrochette brochette_intersect(const RadiusBrochette& a, const RadiusBrochette& b) {
  return RadiusBrochette::pointwise_min(a, b);
}

bool brochette_contains(const RadiusBrochette& outer, const RadiusBrochette& inner,
                        double window_lo, double window_hi, int grid_points) {
  const double step = (window_hi - window_lo) / static_cast<double>(grid_points - 1);
  for (int i = 0; i < grid_points; ++i) {
    const double s = window_lo + step * static_cast<double>(i);
    if (inner.radius(s) > outer.radius(s) * (1.0 + 1e-12)) return false;
  }
  return true;
}

TrajectoryEnsemble sample_ensemble(const DomainPtr& domain, const RadiusBrochette& D, double tau,
                                   int count, std::uint64_t seed) {
  if (count < 1) throw std::invalid_argument("ensemble count must be >= 1");
  TrajectoryEnsemble ensemble;
  ensemble.anchor_tau = tau;
  ensemble.initial_states.reserve(static_cast<std::size_t>(count));
  Rng rng(seed);
  const double boundary = D.radius(tau);
  for (int j = 0; j < count; ++j) {
    // Stratified radii over [0, boundary], boundary sample always present.
    const double fraction =
        (count == 1) ? 1.0 : static_cast<double>(j) / static_cast<double>(count - 1);
    SpectralField state = random_unit_field(domain, rng);
    state *= boundary * fraction;
    ensemble.initial_states.push_back(std::move(state));
  }
  return ensemble;
}

TrajectorySetBrochette translate_brochette(const TrajectorySetBrochette& P, double h) {
  if (h < 0.0) throw std::invalid_argument("brochette translation requires h >= 0");
  TrajectorySetBrochette out;
  out.times.reserve(P.times.size());
  out.sets.reserve(P.sets.size());
  for (std::size_t i = 0; i < P.times.size(); ++i) {
    out.times.push_back(P.times[i] + h);
    std::vector<TrajectorySample> shifted;
    shifted.reserve(P.sets[i].size());
    for (const auto& traj : P.sets[i]) shifted.push_back(translate(traj, h));
    out.sets.push_back(std::move(shifted));
  }
  return out;
}

}  // namespace pullback
