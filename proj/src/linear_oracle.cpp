#include "pullback/linear_oracle.hpp"

#include <cmath>
#include <stdexcept>

namespace pullback {

OracleSystem::OracleSystem(DomainPtr domain, ForcingProfile forcing)
    : domain_(std::move(domain)), forcing_(std::move(forcing)) {
  if (forcing_.kind() != ForcingProfile::Kind::Zero &&
      forcing_.kind() != ForcingProfile::Kind::ExponentialEnvelope)
    throw std::invalid_argument("oracle forcing must be zero or an exponential envelope");
  if (!forcing_.domain_ptr()->compatible_with(*domain_))
    throw std::invalid_argument("oracle forcing domain mismatch");
  alpha_ = (forcing_.kind() == ForcingProfile::Kind::ExponentialEnvelope) ? forcing_.alpha() : 0.0;
  const double eta = domain_->viscosity();
  for (std::size_t l = 0; l < domain_->lattice_size(); ++l) {
    if (l == domain_->zero_index()) continue;
    if (alpha_ + eta * domain_->eigenvalue(l) == 0.0)
      throw std::invalid_argument("oracle resonance: alpha + eta lambda_k vanishes");
  }
}

SpectralField OracleSystem::solve_exact(const SpectralField& b, double tau, double t) const {
  if (t < tau) throw std::invalid_argument("solve_exact requires t >= tau");
  const double eta = domain_->viscosity();
  const int d = domain_->dimension();
  SpectralField out(domain_);
  const auto& g = forcing_.profile();
  for (std::size_t l = 0; l < domain_->lattice_size(); ++l) {
    if (l == domain_->zero_index()) continue;
    const double lam = domain_->eigenvalue(l);
    const double decay = std::exp(-eta * lam * (t - tau));
    const double particular =
        (std::exp(alpha_ * t) - std::exp(-eta * lam * t + (alpha_ + eta * lam) * tau)) /
        (alpha_ + eta * lam);
    for (int c = 0; c < d; ++c)
      out.set_coeff(l, c, decay * b.coeff(l, c) + particular * g.coeff(l, c));
  }
  return out;
}

SpectralField OracleSystem::exact_attractor(double t) const {
  const double eta = domain_->viscosity();
  const int d = domain_->dimension();
  SpectralField out(domain_);
  const auto& g = forcing_.profile();
  for (std::size_t l = 0; l < domain_->lattice_size(); ++l) {
    if (l == domain_->zero_index()) continue;
    const double weight = std::exp(alpha_ * t) / (alpha_ + eta * domain_->eigenvalue(l));
    for (int c = 0; c < d; ++c) out.set_coeff(l, c, weight * g.coeff(l, c));
  }
  return out;
}

SpectralField OracleSystem::rhs(const SpectralField& u, double t) const {
  const double eta = domain_->viscosity();
  const int d = domain_->dimension();
  SpectralField out = forcing_.value(t);
  for (std::size_t l = 0; l < domain_->lattice_size(); ++l) {
    const double lam = domain_->eigenvalue(l);
    for (int c = 0; c < d; ++c) out.set_coeff(l, c, out.coeff(l, c) - eta * lam * u.coeff(l, c));
  }
  return out;
}

IntegrationResult OracleSystem::integrate(const SpectralField& b, double tau, double h_max,
                                          double dt_grid) const {
  if (dt_grid <= 0.0) throw std::invalid_argument("dt_grid must be positive");
  if (!grid_aligned(h_max, dt_grid)) throw std::invalid_argument("h_max not on the sample grid");
  const auto n = static_cast<std::size_t>(std::llround(h_max / dt_grid));
  const double sigma = domain_->sigma();
  const double gnorm_sq = std::pow(forcing_.profile_dual_norm(1.0), 2);

  std::vector<SpectralField> states;
  EnergyLedger ledger;
  states.reserve(n + 1);
  for (std::size_t i = 0; i <= n; ++i) {
    const double h = dt_grid * static_cast<double>(i);
    SpectralField u = solve_exact(b, tau, tau + h);
    const double h2 = std::pow(norm_H(u), 2);
    const double v2 = std::pow(norm_V(u), 2);
    states.push_back(std::move(u));
    ledger.norm_H_sq.push_back(h2);
    ledger.norm_V_sq.push_back(v2);
    ledger.forcing_dual_sq.push_back(forcing_.dual_norm_sq(tau + h));
    // Exact weighted integral of the exponential envelope.
    const double rate = sigma + 2.0 * alpha_;
    const double integral = (forcing_.kind() == ForcingProfile::Kind::Zero)
                                ? 0.0
                                : gnorm_sq * std::exp(2.0 * alpha_ * tau) * std::expm1(rate * h) / rate;
    ledger.weighted_integral.push_back(integral);
  }
  return IntegrationResult{TrajectorySample(tau, dt_grid, std::move(states)), std::move(ledger)};
}

TrajectoryIntegrator OracleSystem::integrator(double dt_grid) const {
  return [this, dt_grid](const SpectralField& a, double tau, double h_max) {
    return integrate(a, tau, h_max, dt_grid);
  };
}

ProcessEquivalenceReport OracleSystem::verify_process_equivalence(
    const std::vector<RadiusBrochette>& D_list, double t, double tau_deep, double dt_grid,
    int count, std::uint64_t seed, double cluster_tol, double center_tol, double invariance_tol,
    double rate_rel_tol) const {
  ProcessEquivalenceReport report;
  const double eta = domain_->viscosity();
  const double sigma = domain_->sigma();
  const double delta = domain_->delta();

  const SpectralField star_t = exact_attractor(t);

  const auto sections =
      estimate_mpa_section(domain_, D_list, t, tau_deep, integrator(dt_grid), cluster_tol, count, seed);
  report.cluster_count = static_cast<int>(sections.size());
  if (!sections.empty()) report.center_distance = norm_dual(sections.front() - star_t, delta);

  for (double back : {1.0, 2.0, 5.0, 10.0}) {
    const double tau = t - back;
    const SpectralField evolved = solve_exact(exact_attractor(tau), tau, t);
    report.invariance_residual =
        std::max(report.invariance_residual, norm_H(evolved - star_t));
  }

  // Pullback decay of the section semidistance toward {u*(t)}.
  std::vector<double> taus;
  for (int back = 2; back <= 12; ++back) taus.push_back(t - static_cast<double>(back));
  const DecayCurve curve =
      pullback_decay(domain_, D_list.front(), t, taus, integrator(dt_grid),
                     DecayTarget{std::vector<SpectralField>{star_t}}, DecayMode::Section, count,
                     seed + 1000, 8);
  report.fitted_rate = curve.fitted_rate;
  report.rate_target = eta * domain_->lambda1();

  // A in D: the attractor radius function, epsilon-inflated so it stays
  // strictly positive when u* vanishes.
  const double eps = 1e-6;
  const double star0 = norm_H(exact_attractor(0.0));
  RadiusBrochette r_A = (star0 == 0.0) ? RadiusBrochette::constant(eps)
                                       : RadiusBrochette::exponential(star0 * (1.0 + eps), alpha_);
  bool within = true;
  for (double s = -10.0; s <= 10.0; s += 0.5)
    if (norm_H(exact_attractor(s)) > r_A.radius(s) * (1.0 + 1e-12)) within = false;
  report.attractor_in_class_D = is_class_D(r_A, sigma).is_class_D && within;

  report.section_radius_bound = std::sqrt(2.0 * std::exp(-sigma * t) * compute_R1(forcing_, t));
  for (const auto& center : sections)
    report.max_center_H = std::max(report.max_center_H, norm_H(center));
  report.attractor_within_radius = report.max_center_H <= report.section_radius_bound;

  const bool rate_ok =
      std::abs(report.fitted_rate - report.rate_target) <= rate_rel_tol * report.rate_target;
  report.pass = report.cluster_count == 1 && report.center_distance <= center_tol &&
                report.invariance_residual <= invariance_tol && rate_ok &&
                report.attractor_in_class_D && report.attractor_within_radius;
  return report;
}

}  // namespace pullback
