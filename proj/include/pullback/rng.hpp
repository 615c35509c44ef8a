#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <stdexcept>

#include "pullback/function_spaces.hpp"

namespace pullback {

/// Deterministic random source.  Distributions are hand-rolled on top of
/// the raw mt19937_64 stream so that identical seeds give identical
/// samples on every platform and standard library.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1).
  double uniform() { return std::ldexp(static_cast<double>(gen_()), -64); }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  /// Standard normal via Box-Muller.
  double normal() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = uniform();
    while (u1 <= 0.0) u1 = uniform();
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    spare_ = r * std::sin(a);
    have_spare_ = true;
    return r * std::cos(a);
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

/// Random divergence-free mean-zero field with unit H-norm.  Gaussian
/// coefficients are drawn on the canonical half-lattice, mirrored for
/// reality, and projected mode-by-mode onto k-perp.
inline SpectralField random_unit_field(const DomainPtr& domain, Rng& rng) {
  const int d = domain->dimension();
  SpectralField out(domain);
  for (std::size_t i = 0; i < domain->lattice_size(); ++i) {
    if (i == domain->zero_index()) continue;
    if (domain->mirror_index(i) < i) continue;  // canonical half-lattice
    for (int c = 0; c < d; ++c) out.set_coeff(i, c, Complex{rng.normal(), rng.normal()});
  }
  hermitian_symmetrize(out);
  out = leray_project(out);
  const double h = norm_H(out);
  if (h == 0.0) throw std::runtime_error("degenerate random field");
  out *= 1.0 / h;
  return out;
}

/// Same direction sampling scaled to the requested H-norm.
inline SpectralField random_field(const DomainPtr& domain, Rng& rng, double h_norm) {
  SpectralField out = random_unit_field(domain, rng);
  out *= h_norm;
  return out;
}

}  // namespace pullback
