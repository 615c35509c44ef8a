#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "pullback/forcing.hpp"
#include "pullback/function_spaces.hpp"
#include "pullback/navier_stokes.hpp"
#include "pullback/rng.hpp"

using namespace pullback;

namespace {

DomainPtr domain_2d() { return std::make_shared<SpectralDomain>(2, 16, 2.0 * std::numbers::pi, 1.0); }
DomainPtr domain_3d() { return std::make_shared<SpectralDomain>(3, 8, 2.0 * std::numbers::pi, 1.0); }

SolverConfig base_config(const DomainPtr& dom, ForcingProfile forcing) {
  return SolverConfig{dom, std::move(forcing), 20.0, 1e-3, true, true, 10};
}

SpectralField single_mode_state(const DomainPtr& dom, std::array<int, 3> k, double h_norm) {
  SpectralField u(dom);
  std::array<double, 3> pol{-static_cast<double>(k[1]), static_cast<double>(k[0]), 0.0};
  if (dom->dimension() == 3 && k[0] == 0 && k[1] == 0) pol = {1.0, 0.0, 0.0};
  const std::size_t idx = dom->index_of(k);
  for (int c = 0; c < dom->dimension(); ++c) u.set_coeff(idx, c, Complex{pol[c], 0.0});
  hermitian_symmetrize(u);
  u *= h_norm / norm_H(u);
  return u;
}

// Test-side oracle: max_x |u(x)|^2 by direct Fourier summation.
double max_speed_squared(const SpectralField& u) {
  const auto& dom = u.domain();
  const int d = dom.dimension();
  const int nq = 4 * dom.max_wavenumber() + 1;
  double best = 0.0;
  std::array<int, 3> g{0, 0, 0};
  const int n2 = (d == 3) ? nq : 1;
  for (g[0] = 0; g[0] < nq; ++g[0])
    for (g[1] = 0; g[1] < nq; ++g[1])
      for (g[2] = 0; g[2] < n2; ++g[2]) {
        double s2 = 0.0;
        for (int c = 0; c < d; ++c) {
          std::complex<double> val{0.0, 0.0};
          for (std::size_t l = 0; l < dom.lattice_size(); ++l) {
            const auto& k = dom.wavevector(l);
            double phase = 0.0;
            for (int a = 0; a < d; ++a)
              phase += 2.0 * std::numbers::pi * k[a] * g[a] / static_cast<double>(nq);
            val += u.coeff(l, c) * std::exp(std::complex<double>{0.0, phase});
          }
          s2 += val.real() * val.real();
        }
        best = std::max(best, s2);
      }
  return best;
}

}  // namespace

TEST_CASE("trilinear_regularized: zero input, skew-symmetry pairing in 2D and 3D") {
  for (bool three_d : {false, true}) {
    auto dom = three_d ? domain_3d() : domain_2d();
    CHECK(norm_H(trilinear_regularized(SpectralField(dom), 20.0)) == 0.0);

    PseudoSpectralEngine engine(dom, true);
    Rng rng(three_d ? 301 : 300);
    const int trials = three_d ? 20 : 40;
    for (int trial = 0; trial < trials; ++trial) {
      SpectralField u = random_field(dom, rng, 0.3 + 2.0 * rng.uniform());
      SpectralField b = engine.convection(u, 20.0);
      const double pairing = std::abs(inner_H(b, u));
      const double nv = norm_V(u);
      CHECK(pairing <= 1e-10 * norm_H(u) * nv * nv);
      CHECK(b.divergence_residual() <= 1e-12);
      CHECK(b.symmetry_residual() <= 1e-12);
    }
  }
}

TEST_CASE("skew-symmetry pairing also vanishes without dealiasing") {
  auto dom = domain_2d();
  PseudoSpectralEngine aliased(dom, false);
  Rng rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    SpectralField u = random_field(dom, rng, 1.0);
    SpectralField b = aliased.convection(u, 50.0);
    const double nv = norm_V(u);
    CHECK(std::abs(inner_H(b, u)) <= 1e-10 * norm_H(u) * nv * nv);
  }
}

TEST_CASE("regularization limit: B_M approaches the bilinear term at rate max|u|^2 / M") {
  auto dom = domain_2d();
  // Smooth low-mode test field; the two modes sit on different shells so
  // the bilinear interaction does not vanish.
  SpectralField u = single_mode_state(dom, {1, 2, 0}, 1.0);
  u += single_mode_state(dom, {3, -1, 0}, 0.7);
  PseudoSpectralEngine engine(dom, true);
  const SpectralField b_inf = engine.convection(u, std::numeric_limits<double>::infinity());
  const double speed2 = max_speed_squared(u);
  REQUIRE(norm_H(b_inf) > 0.0);
  for (double M : {10.0, 100.0, 1000.0}) {
    const SpectralField b_m = engine.convection(u, M);
    const double rel = norm_H(b_m - b_inf) / norm_H(b_inf);
    CHECK(rel <= 2.0 * speed2 / M);
  }
}

TEST_CASE("step: exact viscous factor in linear mode") {
  auto dom = domain_2d();
  SolverConfig cfg = base_config(dom, ForcingProfile::zero(dom));
  cfg.nonlinear = false;
  Rng rng(5);
  SpectralField u = random_field(dom, rng, 1.5);
  SpectralField next = step(u, 0.0, cfg, nullptr);
  const double eta = dom->viscosity();
  for (std::size_t l = 0; l < dom->lattice_size(); ++l) {
    const double decay = std::exp(-eta * dom->eigenvalue(l) * cfg.dt);
    for (int c = 0; c < 2; ++c) {
      const Complex expected = decay * u.coeff(l, c);
      CHECK(std::abs(next.coeff(l, c) - expected) <= 1e-15 * (1.0 + std::abs(expected)));
    }
  }
}

TEST_CASE("integrate: zero data and zero forcing stay identically zero") {
  auto dom = domain_2d();
  SolverConfig cfg = base_config(dom, ForcingProfile::zero(dom));
  auto result = integrate(SpectralField(dom), 0.0, 0.5, cfg);
  for (std::size_t i = 0; i < result.trajectory.size(); ++i)
    CHECK(norm_H(result.trajectory.state(i)) == 0.0);
  auto report = check_energy_inequality(result.trajectory, result.ledger, cfg.dt, 1.0);
  CHECK(report.pass);
  CHECK(report.min_margin >= 0.0);
}

TEST_CASE("integrate: single mode in linear mode matches closed-form decay") {
  auto dom = domain_2d();
  SolverConfig cfg = base_config(dom, ForcingProfile::zero(dom));
  cfg.nonlinear = false;
  SpectralField a = single_mode_state(dom, {2, 1, 0}, 1.0);
  const double lam = dom->eigenvalue(dom->index_of({2, 1, 0}));
  auto result = integrate(a, 0.0, 1.0, cfg);
  for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
    const double h = result.trajectory.dt_grid() * static_cast<double>(i);
    const double expected = std::exp(-dom->viscosity() * lam * h) * 1.0;
    CHECK(norm_H(result.trajectory.state(i)) == doctest::Approx(expected).epsilon(1e-12));
  }
}

TEST_CASE("integrate: divergence preserved along a forced nonlinear run") {
  auto dom = domain_2d();
  auto g = single_mode_profile(dom, {1, 1, 0}, 0.5);
  SolverConfig cfg = base_config(dom, ForcingProfile::exponential_envelope(g, 0.1));
  Rng rng(19);
  SpectralField a = random_field(dom, rng, 1.2);
  auto result = integrate(a, -1.0, 0.8, cfg);
  for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
    CHECK(result.trajectory.state(i).divergence_residual() <= 1e-12);
    CHECK(result.trajectory.state(i).symmetry_residual() <= 1e-12);
  }
  CHECK(result.ledger.integral_nondecreasing());
}

TEST_CASE("energy inequality: linear zero-forcing run has nonnegative margins") {
  auto dom = domain_2d();
  SolverConfig cfg = base_config(dom, ForcingProfile::zero(dom));
  cfg.nonlinear = false;
  Rng rng(23);
  SpectralField a = random_field(dom, rng, 2.0);
  auto result = integrate(a, 0.0, 2.0, cfg);
  auto report = check_energy_inequality(result.trajectory, result.ledger, cfg.dt, 1.0);
  CHECK(report.min_margin >= -1e-12);
  CHECK(report.pass);
}

TEST_CASE("energy inequality: nonlinear forced scenarios within C dt, Richardson halving") {
  auto dom = domain_2d();
  auto g = single_mode_profile(dom, {1, 2, 0}, 1.0);
  Rng rng(29);
  SpectralField a = random_field(dom, rng, 1.5);

  auto run_margin = [&](double dt) {
    SolverConfig cfg = base_config(dom, ForcingProfile::single_mode_periodic(g, 3.0, 0.4));
    cfg.dt = dt;
    cfg.out_stride = static_cast<int>(std::llround(0.01 / dt));
    auto result = integrate(a, -2.0, 1.5, cfg);
    return check_energy_inequality(result.trajectory, result.ledger, dt, 1.0);
  };

  auto coarse = run_margin(2e-3);
  auto fine = run_margin(1e-3);
  CHECK(coarse.pass);
  CHECK(fine.pass);
  const double viol_coarse = std::max(0.0, -coarse.min_margin);
  const double viol_fine = std::max(0.0, -fine.min_margin);
  // First-order convergence: any violation shrinks by about 2x; tiny
  // violations are already at the noise floor.
  if (viol_coarse > 1e-12) CHECK(viol_fine <= viol_coarse / 1.8 + 1e-13);

  // Exponential a-priori bound from the same ledger:
  //   max_s e^{sigma s} |u(s)|^2 <= |a|^2 + I(h)/eta + C dt.
  SolverConfig cfg = base_config(dom, ForcingProfile::single_mode_periodic(g, 3.0, 0.4));
  auto result = integrate(a, -2.0, 1.5, cfg);
  const double sigma = dom->sigma();
  const double eta = dom->viscosity();
  const double budget = norm_H(a) * norm_H(a) +
                        result.ledger.weighted_integral.back() / eta + 1.0 * cfg.dt;
  for (std::size_t i = 0; i < result.trajectory.size(); ++i) {
    const double h = result.trajectory.dt_grid() * static_cast<double>(i);
    CHECK(std::exp(sigma * h) * result.ledger.norm_H_sq[i] <= budget);
  }
}

TEST_CASE("derivative dual bound: zero trajectory and exact linear constant") {
  auto dom = domain_2d();
  SolverConfig cfg = base_config(dom, ForcingProfile::zero(dom));

  auto zero_result = integrate(SpectralField(dom), 0.0, 0.2, cfg);
  auto zero_report = derivative_dual_bound(zero_result.trajectory, cfg, 1.0, 1.0);
  CHECK(zero_report.pass);
  CHECK(zero_report.min_margin >= 0.0);

  // Linear flow: |u'|_{V3*} = |-eta A u|_{V3*} <= eta R2 |u| holds with
  // R2 = lambda1^{-1/2}, exactly on the diagonal basis.
  SolverConfig lin = cfg;
  lin.nonlinear = false;
  Rng rng(31);
  SpectralField a = random_field(dom, rng, 1.0);
  auto result = integrate(a, 0.0, 0.5, lin);
  const double R2 = 1.0 / std::sqrt(dom->lambda1());
  auto report = derivative_dual_bound(result.trajectory, lin, R2, 0.0);
  CHECK(report.pass);

  // Dropping R2 below the diagonal supremum must fail.
  auto tight = derivative_dual_bound(result.trajectory, lin, 0.5 * R2, 0.0);
  CHECK(!tight.pass);
}

TEST_CASE("config validation and blow-up reporting") {
  auto dom = domain_2d();
  SolverConfig cfg = base_config(dom, ForcingProfile::zero(dom));
  cfg.dt = 1.0;  // dt * eta * lambda_max = 98 > 10
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  cfg.dt = -1e-3;
  CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);

  // Runaway exponential forcing overflows the envelope mid-run; the
  // blow-up error names a time inside the horizon.
  auto g = single_mode_profile(dom, {1, 0, 0}, 1.0);
  SolverConfig hot = base_config(dom, ForcingProfile::exponential_envelope(g, 400.0));
  hot.out_stride = 1;
  try {
    integrate(SpectralField(dom), 0.0, 3.0, hot);
    FAIL("expected blow-up");
  } catch (const BlowupError& e) {
    CHECK(e.time() > 0.0);
    CHECK(e.time() <= 3.0);
    CHECK(std::string(e.what()).find("t = ") != std::string::npos);
  }

  // Misaligned horizon and stride errors.
  SolverConfig ok = base_config(dom, ForcingProfile::zero(dom));
  CHECK_THROWS_AS(integrate(SpectralField(dom), 0.0, 0.0105, ok), std::invalid_argument);
  SolverConfig stride = base_config(dom, ForcingProfile::zero(dom));
  stride.out_stride = 7;
  CHECK_THROWS_AS(integrate(SpectralField(dom), 0.0, 0.01, stride), std::invalid_argument);
}

TEST_CASE("phi1 series branch agrees with the direct formula") {
  for (double z : {-1e-3, -1e-5, -1e-7, 1e-5}) {
    const double direct = std::expm1(z) / z;
    CHECK(phi1(z) == doctest::Approx(direct).epsilon(1e-13));
  }
  CHECK(phi1(0.0) == 1.0);
  CHECK(phi1(-2.0) == doctest::Approx(std::expm1(-2.0) / -2.0).epsilon(1e-14));
}
