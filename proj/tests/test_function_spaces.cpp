#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "pullback/function_spaces.hpp"
#include "pullback/rng.hpp"

using namespace pullback;

namespace {

DomainPtr make_domain_2d() {
  return std::make_shared<SpectralDomain>(2, 16, 2.0 * std::numbers::pi, 1.0);
}

DomainPtr make_domain_3d() {
  return std::make_shared<SpectralDomain>(3, 8, 2.0 * std::numbers::pi, 0.5);
}

// Independent oracle: evaluate u on a collocation grid by direct Fourier
// summation (no FFT) and integrate |u|^2 with the rectangle rule, exact
// for band-limited integrands on a fine enough grid.
double quadrature_norm_H(const SpectralField& u) {
  const auto& dom = u.domain();
  const int d = dom.dimension();
  const int nq = 2 * dom.max_wavenumber() + 3;
  const double L = dom.box_length();
  const double cell = std::pow(L / nq, d);
  double total = 0.0;
  std::array<int, 3> grid_idx{0, 0, 0};
  const int n2 = (d == 3) ? nq : 1;
  for (grid_idx[0] = 0; grid_idx[0] < nq; ++grid_idx[0])
    for (grid_idx[1] = 0; grid_idx[1] < nq; ++grid_idx[1])
      for (grid_idx[2] = 0; grid_idx[2] < n2; ++grid_idx[2]) {
        for (int c = 0; c < d; ++c) {
          std::complex<double> val{0.0, 0.0};
          for (std::size_t l = 0; l < dom.lattice_size(); ++l) {
            const auto& k = dom.wavevector(l);
            double phase = 0.0;
            for (int a = 0; a < d; ++a)
              phase += 2.0 * std::numbers::pi * k[a] * grid_idx[a] / static_cast<double>(nq);
            val += u.coeff(l, c) * std::exp(std::complex<double>{0.0, phase});
          }
          total += val.real() * val.real();
        }
      }
  return std::sqrt(total * cell);
}

SpectralField lowest_mode_field(const DomainPtr& dom, double h_norm) {
  SpectralField u(dom);
  const std::size_t idx = dom->index_of({1, 0, 0});
  // Polarization along the second axis, orthogonal to k = (1,0,0).
  u.set_coeff(idx, 1, Complex{1.0, 0.0});
  hermitian_symmetrize(u);
  const double cur = norm_H(u);
  u *= h_norm / cur;
  return u;
}

}  // namespace

TEST_CASE("domain invariants: lambda1, sigma, lattice symmetry") {
  auto dom = make_domain_2d();
  CHECK(dom->max_wavenumber() == 7);
  CHECK(dom->lambda1() == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(dom->sigma() == doctest::Approx(dom->viscosity() * dom->lambda1()).epsilon(1e-15));
  auto eigs = dom->sorted_eigenvalues();
  CHECK(eigs.front() == doctest::Approx(dom->lambda1()));
  for (std::size_t i = 1; i < eigs.size(); ++i) CHECK(eigs[i] >= eigs[i - 1]);
  CHECK(eigs.front() > 0.0);
  // Lattice closed under negation.
  for (std::size_t i = 0; i < dom->lattice_size(); ++i)
    CHECK(dom->mirror_index(dom->mirror_index(i)) == i);
}

TEST_CASE("norm_H: zero field, single mode pair, quadrature oracle") {
  auto dom = make_domain_2d();
  SpectralField zero(dom);
  CHECK(norm_H(zero) == 0.0);

  // Single mode pair +-k0 carrying unit Parseval mass.
  SpectralField u(dom);
  const double L = dom->box_length();
  const double c = 1.0 / std::sqrt(2.0 * std::pow(L, 2));
  u.set_coeff(dom->index_of({0, 1, 0}), 0, Complex{c, 0.0});
  u.set_coeff(dom->index_of({0, -1, 0}), 0, Complex{c, 0.0});
  CHECK(norm_H(u) == doctest::Approx(1.0).epsilon(1e-12));

  Rng rng(2024);
  for (int trial = 0; trial < 5; ++trial) {
    SpectralField w = random_field(dom, rng, 1.0 + rng.uniform());
    const double spectral = norm_H(w);
    const double quad = quadrature_norm_H(w);
    CHECK(spectral == doctest::Approx(quad).epsilon(1e-10));
  }
}

TEST_CASE("norm_H quadrature oracle in 3D") {
  auto dom = make_domain_3d();
  Rng rng(99);
  SpectralField w = random_field(dom, rng, 2.5);
  CHECK(norm_H(w) == doctest::Approx(quadrature_norm_H(w)).epsilon(1e-10));
}

TEST_CASE("norm_V: zero, lowest mode, Poincare inequality") {
  auto dom = make_domain_2d();
  CHECK(norm_V(SpectralField(dom)) == 0.0);

  SpectralField low = lowest_mode_field(dom, 1.0);
  CHECK(norm_V(low) == doctest::Approx(std::sqrt(dom->lambda1())).epsilon(1e-12));

  Rng rng(7);
  for (int trial = 0; trial < 1000; ++trial) {
    SpectralField u = random_field(dom, rng, 0.1 + 2.0 * rng.uniform());
    const double nv = norm_V(u);
    const double nh = norm_H(u);
    CHECK(nv * nv - dom->lambda1() * nh * nh >= -1e-12);
  }
  // Equality attained exactly by lowest-mode fields.
  const double nv = norm_V(low);
  const double nh = norm_H(low);
  CHECK(std::abs(nv * nv - dom->lambda1() * nh * nh) <= 1e-12);
}

TEST_CASE("norm_dual: zero, lowest mode, finite-dimensional duality oracle") {
  auto dom = make_domain_2d();
  CHECK(norm_dual(SpectralField(dom), 1.0) == 0.0);

  SpectralField low = lowest_mode_field(dom, 1.0);
  CHECK(norm_dual(low, 1.0) == doctest::Approx(1.0 / std::sqrt(dom->lambda1())).epsilon(1e-12));

  // Duality oracle: the ratio <w,v>/norm_V(v) is maximized by the Riesz
  // representer v* with v*_hat = w_hat / lambda_k, where it equals the
  // dual norm exactly; random competitors never beat it.
  Rng rng(41);
  for (int trial = 0; trial < 10; ++trial) {
    SpectralField w = random_field(dom, rng, 1.0);
    SpectralField riesz = w;
    for (std::size_t l = 0; l < dom->lattice_size(); ++l) {
      if (l == dom->zero_index()) continue;
      const double lam = dom->eigenvalue(l);
      for (int c = 0; c < 2; ++c) riesz.set_coeff(l, c, w.coeff(l, c) / lam);
    }
    const double dual = norm_dual(w, 1.0);
    const double at_riesz = inner_H(w, riesz) / norm_V(riesz);
    CHECK(dual == doctest::Approx(at_riesz).epsilon(1e-12));
    for (int probe = 0; probe < 40; ++probe) {
      SpectralField v = random_field(dom, rng, 1.0);
      CHECK(inner_H(w, v) / norm_V(v) <= dual * (1.0 + 1e-12));
    }
  }
}

TEST_CASE("duality sandwich |<w,v>| <= norm_dual(w,1) * norm_V(v)") {
  auto dom = make_domain_2d();
  Rng rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    SpectralField w = random_field(dom, rng, 0.5 + rng.uniform());
    SpectralField v = random_field(dom, rng, 0.5 + rng.uniform());
    CHECK(std::abs(inner_H(w, v)) <= norm_dual(w, 1.0) * norm_V(v) + 1e-12);
  }
}

TEST_CASE("norm_dual order 3 weights by lambda^-3") {
  auto dom = make_domain_2d();
  SpectralField u(dom);
  const std::size_t idx = dom->index_of({2, 1, 0});
  u.set_coeff(idx, 0, Complex{1.0, 0.0});
  u.set_coeff(idx, 1, Complex{-2.0, 0.0});
  hermitian_symmetrize(u);
  u = leray_project(u);
  const double lam = dom->eigenvalue(idx);
  CHECK(norm_dual(u, 3.0) ==
        doctest::Approx(norm_H(u) / std::pow(lam, 1.5)).epsilon(1e-12));
}

TEST_CASE("leray_project: idempotent, kills gradients, self-adjoint") {
  auto dom = make_domain_2d();
  Rng rng(5);

  // Already divergence-free input is returned unchanged.
  SpectralField u = random_unit_field(dom, rng);
  SpectralField pu = leray_project(u);
  double diff = 0.0;
  for (std::size_t i = 0; i < u.coefficients().size(); ++i)
    diff = std::max(diff, std::abs(u.coefficients()[i] - pu.coefficients()[i]));
  CHECK(diff <= 1e-14);

  // Pure gradient field u_hat(k) = k c(k) projects to zero.
  SpectralField grad(dom);
  for (std::size_t l = 0; l < dom->lattice_size(); ++l) {
    if (l == dom->zero_index()) continue;
    const auto& k = dom->wavevector(l);
    const Complex c{rng.normal(), rng.normal()};
    for (int comp = 0; comp < 2; ++comp)
      grad.set_coeff(l, comp, static_cast<double>(k[comp]) * c);
  }
  hermitian_symmetrize(grad);
  SpectralField pg = leray_project(grad);
  CHECK(norm_H(pg) <= 1e-12 * norm_H(grad));

  // <P raw, v> = <raw, v> for divergence-free v.
  SpectralField raw(dom);
  for (std::size_t l = 0; l < dom->lattice_size(); ++l) {
    if (l == dom->zero_index()) continue;
    for (int comp = 0; comp < 2; ++comp) raw.set_coeff(l, comp, Complex{rng.normal(), rng.normal()});
  }
  hermitian_symmetrize(raw);
  SpectralField praw = leray_project(raw);
  CHECK(praw.divergence_residual() <= 1e-12);
  for (int probe = 0; probe < 20; ++probe) {
    SpectralField v = random_unit_field(dom, rng);
    CHECK(inner_H(praw, v) == doctest::Approx(inner_H(raw, v)).epsilon(1e-12));
  }

  // Idempotence on the projected output.
  SpectralField ppraw = leray_project(praw);
  double drift = 0.0;
  for (std::size_t i = 0; i < praw.coefficients().size(); ++i)
    drift = std::max(drift, std::abs(praw.coefficients()[i] - ppraw.coefficients()[i]));
  CHECK(drift <= 1e-14);
}

TEST_CASE("field invariants after random construction") {
  auto dom = make_domain_3d();
  Rng rng(3);
  SpectralField u = random_unit_field(dom, rng);
  CHECK(u.divergence_residual() <= 1e-12);
  CHECK(u.symmetry_residual() <= 1e-12);
  CHECK(u.mean_residual() == 0.0);
  CHECK(norm_H(u) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("norm_dual rejects fields with mean content") {
  auto dom = make_domain_2d();
  SpectralField u(dom);
  u.set_coeff(dom->zero_index(), 0, Complex{1.0, 0.0});
  CHECK_THROWS_AS(norm_dual(u, 1.0), std::invalid_argument);
}
