#pragma once

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <vector>

namespace pullback {

using Complex = std::complex<double>;

/// Truncated divergence-free Fourier basis on the mean-zero torus [0,L]^d.
///
/// Retained wavevectors form the integer lattice |k_i| <= k_max, with
/// k_max = floor((modes_per_axis - 1) / 2); the set is closed under
/// negation, and the k = 0 slot is carried but pinned to zero (mean-zero
/// fields).  The Stokes operator is diagonal on this basis with
/// eigenvalues lambda(k) = (2*pi/L)^2 |k|^2, so every norm below is a
/// weighted coefficient sum.  Norms carry the Parseval factor L^d, i.e.
/// norm_H(u)^2 equals the integral of |u|^2 over the box.
class SpectralDomain {
 public:
  SpectralDomain(int dimension, int modes_per_axis, double box_length,
                 double viscosity, double delta = 1.0);

  int dimension() const { return dim_; }
  int modes_per_axis() const { return modes_per_axis_; }
  int max_wavenumber() const { return k_max_; }
  double box_length() const { return box_length_; }
  double viscosity() const { return viscosity_; }
  double delta() const { return delta_; }

  double lambda1() const { return lambda1_; }
  double lambda_max() const { return lambda_max_; }
  /// Dissipation rate sigma = viscosity * lambda1.
  double sigma() const { return sigma_; }
  double parseval_factor() const { return parseval_; }

  std::size_t lattice_size() const { return lattice_.size(); }
  std::size_t num_modes() const { return lattice_.size() - 1; }  // excludes k = 0
  const std::array<int, 3>& wavevector(std::size_t idx) const { return lattice_[idx]; }
  double eigenvalue(std::size_t idx) const { return eigenvalue_[idx]; }
  std::size_t mirror_index(std::size_t idx) const { return mirror_[idx]; }
  std::size_t zero_index() const { return zero_index_; }
  std::size_t index_of(const std::array<int, 3>& k) const;

  /// Eigenvalues of the retained modes (k = 0 excluded), nondecreasing.
  std::vector<double> sorted_eigenvalues() const;

  bool compatible_with(const SpectralDomain& other) const;

 private:
  int dim_;
  int modes_per_axis_;
  int k_max_;
  double box_length_;
  double viscosity_;
  double delta_;
  double lambda1_;
  double lambda_max_;
  double sigma_;
  double parseval_;
  std::vector<std::array<int, 3>> lattice_;
  std::vector<double> eigenvalue_;
  std::vector<std::size_t> mirror_;
  std::size_t zero_index_;
};

using DomainPtr = std::shared_ptr<const SpectralDomain>;

/// Velocity state: one complex amplitude per retained wavevector per
/// component.  Invariants: k . u_hat(k) = 0 (divergence-free),
/// u_hat(-k) = conj(u_hat(k)) (real field), u_hat(0) = 0 (mean-zero).
class SpectralField {
 public:
  explicit SpectralField(DomainPtr domain);
  SpectralField(DomainPtr domain, std::vector<Complex> coefficients);

  const SpectralDomain& domain() const { return *domain_; }
  const DomainPtr& domain_ptr() const { return domain_; }

  Complex coeff(std::size_t lattice_idx, int component) const {
    return coeffs_[lattice_idx * domain_->dimension() + component];
  }
  void set_coeff(std::size_t lattice_idx, int component, Complex value) {
    coeffs_[lattice_idx * domain_->dimension() + component] = value;
  }
  const std::vector<Complex>& coefficients() const { return coeffs_; }
  std::vector<Complex>& coefficients() { return coeffs_; }

  /// max_k |k . u_hat(k)| over the lattice.
  double divergence_residual() const;
  /// max_k |u_hat(-k) - conj(u_hat(k))|.
  double symmetry_residual() const;
  double mean_residual() const;
  bool all_finite() const;

  SpectralField& operator+=(const SpectralField& other);
  SpectralField& operator-=(const SpectralField& other);
  SpectralField& operator*=(double scale);
  /// this += a * x
  void axpy(double a, const SpectralField& x);

 private:
  DomainPtr domain_;
  std::vector<Complex> coeffs_;
};

SpectralField operator+(SpectralField a, const SpectralField& b);
SpectralField operator-(SpectralField a, const SpectralField& b);
SpectralField operator*(SpectralField a, double scale);
SpectralField operator*(double scale, SpectralField a);

/// L2 norm of the velocity field, sqrt(L^d sum |u_hat|^2).
double norm_H(const SpectralField& u);
/// Gradient norm, sqrt(L^d sum lambda_k |u_hat|^2).  Satisfies
/// norm_V(u)^2 >= lambda1 * norm_H(u)^2.
double norm_V(const SpectralField& u);
/// Dual norm of order s: sqrt(L^d sum |w_hat|^2 / lambda_k^s).  Order 1
/// is the V* norm, order 3 the V_3* norm; fractional orders serve V_delta*.
double norm_dual(const SpectralField& w, double order);
/// H inner product (also the duality pairing on the diagonal basis).
double inner_H(const SpectralField& u, const SpectralField& v);

/// Orthogonal projection onto divergence-free mean-zero fields:
/// u_hat(k) -> u_hat(k) - k (k . u_hat(k)) / |k|^2, zero mode removed.
/// Idempotent and self-adjoint in the H inner product.
SpectralField leray_project(const SpectralField& raw);

/// Replace u_hat(k), u_hat(-k) by the Hermitian average; pins roundoff
/// drift of the reality invariant to zero.
void hermitian_symmetrize(SpectralField& u);

}  // namespace pullback
