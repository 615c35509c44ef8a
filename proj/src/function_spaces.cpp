#include "pullback/function_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pullback {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

}  // namespace

SpectralDomain::SpectralDomain(int dimension, int modes_per_axis, double box_length,
                               double viscosity, double delta)
    : dim_(dimension),
      modes_per_axis_(modes_per_axis),
      box_length_(box_length),
      viscosity_(viscosity),
      delta_(delta) {
  if (dim_ != 2 && dim_ != 3) throw std::invalid_argument("dimension must be 2 or 3");
  if (modes_per_axis_ < 3) throw std::invalid_argument("modes_per_axis must be >= 3");
  if (box_length_ <= 0.0) throw std::invalid_argument("box_length must be positive");
  if (viscosity_ <= 0.0) throw std::invalid_argument("viscosity must be positive");
  if (delta_ <= 0.0 || delta_ > 1.0) throw std::invalid_argument("delta must lie in (0,1]");

  k_max_ = (modes_per_axis_ - 1) / 2;
  const double base = kTwoPi / box_length_;
  lambda1_ = base * base;
  sigma_ = viscosity_ * lambda1_;
  parseval_ = std::pow(box_length_, dim_);

  const int side = 2 * k_max_ + 1;
  std::size_t size = 1;
  for (int i = 0; i < dim_; ++i) size *= static_cast<std::size_t>(side);
  lattice_.reserve(size);
  eigenvalue_.reserve(size);

  // Lexicographic order over k_i in [-k_max, k_max]; unused axes pinned to 0.
  std::array<int, 3> k{0, 0, 0};
  if (dim_ == 2) {
    for (k[0] = -k_max_; k[0] <= k_max_; ++k[0])
      for (k[1] = -k_max_; k[1] <= k_max_; ++k[1]) lattice_.push_back(k);
  } else {
    for (k[0] = -k_max_; k[0] <= k_max_; ++k[0])
      for (k[1] = -k_max_; k[1] <= k_max_; ++k[1])
        for (k[2] = -k_max_; k[2] <= k_max_; ++k[2]) lattice_.push_back(k);
  }

  lambda_max_ = 0.0;
  for (const auto& kv : lattice_) {
    const double k2 = static_cast<double>(kv[0]) * kv[0] + static_cast<double>(kv[1]) * kv[1] +
                      static_cast<double>(kv[2]) * kv[2];
    const double lam = base * base * k2;
    eigenvalue_.push_back(lam);
    lambda_max_ = std::max(lambda_max_, lam);
  }

  mirror_.resize(lattice_.size());
  for (std::size_t i = 0; i < lattice_.size(); ++i) {
    const auto& kv = lattice_[i];
    mirror_[i] = index_of({-kv[0], -kv[1], -kv[2]});
  }
  zero_index_ = index_of({0, 0, 0});
}

std::size_t SpectralDomain::index_of(const std::array<int, 3>& k) const {
  const int side = 2 * k_max_ + 1;
  std::size_t idx = 0;
  for (int i = 0; i < dim_; ++i) {
    if (k[i] < -k_max_ || k[i] > k_max_) throw std::out_of_range("wavevector outside lattice");
    idx = idx * static_cast<std::size_t>(side) + static_cast<std::size_t>(k[i] + k_max_);
  }
  return idx;
}

std::vector<double> SpectralDomain::sorted_eigenvalues() const {
  std::vector<double> out;
  out.reserve(eigenvalue_.size() - 1);
  for (std::size_t i = 0; i < eigenvalue_.size(); ++i)
    if (i != zero_index_) out.push_back(eigenvalue_[i]);
  std::sort(out.begin(), out.end());
  return out;
}

bool SpectralDomain::compatible_with(const SpectralDomain& other) const {
  return dim_ == other.dim_ && modes_per_axis_ == other.modes_per_axis_ &&
         box_length_ == other.box_length_ && viscosity_ == other.viscosity_ &&
         delta_ == other.delta_;
}

SpectralField::SpectralField(DomainPtr domain)
    : domain_(std::move(domain)),
      coeffs_(domain_->lattice_size() * static_cast<std::size_t>(domain_->dimension()),
              Complex{0.0, 0.0}) {}

SpectralField::SpectralField(DomainPtr domain, std::vector<Complex> coefficients)
    : domain_(std::move(domain)), coeffs_(std::move(coefficients)) {
  const std::size_t expected =
      domain_->lattice_size() * static_cast<std::size_t>(domain_->dimension());
  if (coeffs_.size() != expected) throw std::invalid_argument("coefficient block size mismatch");
}

double SpectralField::divergence_residual() const {
  const int d = domain_->dimension();
  double worst = 0.0;
  for (std::size_t i = 0; i < domain_->lattice_size(); ++i) {
    const auto& k = domain_->wavevector(i);
    Complex dot{0.0, 0.0};
    for (int c = 0; c < d; ++c) dot += static_cast<double>(k[c]) * coeff(i, c);
    worst = std::max(worst, std::abs(dot));
  }
  return worst;
}

double SpectralField::symmetry_residual() const {
  const int d = domain_->dimension();
  double worst = 0.0;
  for (std::size_t i = 0; i < domain_->lattice_size(); ++i) {
    const std::size_t j = domain_->mirror_index(i);
    for (int c = 0; c < d; ++c)
      worst = std::max(worst, std::abs(coeff(j, c) - std::conj(coeff(i, c))));
  }
  return worst;
}

double SpectralField::mean_residual() const {
  const int d = domain_->dimension();
  double worst = 0.0;
  for (int c = 0; c < d; ++c) worst = std::max(worst, std::abs(coeff(domain_->zero_index(), c)));
  return worst;
}

bool SpectralField::all_finite() const {
  for (const auto& z : coeffs_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

SpectralField& SpectralField::operator+=(const SpectralField& other) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& other) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= other.coeffs_[i];
  return *this;
}

SpectralField& SpectralField::operator*=(double scale) {
  for (auto& z : coeffs_) z *= scale;
  return *this;
}

void SpectralField::axpy(double a, const SpectralField& x) {
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += a * x.coeffs_[i];
}

SpectralField operator+(SpectralField a, const SpectralField& b) { return a += b; }
SpectralField operator-(SpectralField a, const SpectralField& b) { return a -= b; }
SpectralField operator*(SpectralField a, double scale) { return a *= scale; }
SpectralField operator*(double scale, SpectralField a) { return a *= scale; }

double norm_H(const SpectralField& u) {
  double sum = 0.0;
  for (const auto& z : u.coefficients()) sum += std::norm(z);
  return std::sqrt(u.domain().parseval_factor() * sum);
}

double norm_V(const SpectralField& u) {
  const auto& dom = u.domain();
  const int d = dom.dimension();
  double sum = 0.0;
  for (std::size_t i = 0; i < dom.lattice_size(); ++i) {
    const double lam = dom.eigenvalue(i);
    for (int c = 0; c < d; ++c) sum += lam * std::norm(u.coeff(i, c));
  }
  return std::sqrt(dom.parseval_factor() * sum);
}

double norm_dual(const SpectralField& w, double order) {
  const auto& dom = w.domain();
  const int d = dom.dimension();
  if (w.mean_residual() > 1e-12) throw std::invalid_argument("norm_dual requires a mean-zero field");
  double sum = 0.0;
  for (std::size_t i = 0; i < dom.lattice_size(); ++i) {
    if (i == dom.zero_index()) continue;
    const double weight = std::pow(dom.eigenvalue(i), -order);
    for (int c = 0; c < d; ++c) sum += weight * std::norm(w.coeff(i, c));
  }
  return std::sqrt(dom.parseval_factor() * sum);
}

double inner_H(const SpectralField& u, const SpectralField& v) {
  double sum = 0.0;
  const auto& a = u.coefficients();
  const auto& b = v.coefficients();
  for (std::size_t i = 0; i < a.size(); ++i)
    sum += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
  return u.domain().parseval_factor() * sum;
}

SpectralField leray_project(const SpectralField& raw) {
  const auto& dom = raw.domain();
  const int d = dom.dimension();
  SpectralField out = raw;
  for (std::size_t i = 0; i < dom.lattice_size(); ++i) {
    const auto& k = dom.wavevector(i);
    const double k2 = static_cast<double>(k[0]) * k[0] + static_cast<double>(k[1]) * k[1] +
                      static_cast<double>(k[2]) * k[2];
    if (k2 == 0.0) {
      for (int c = 0; c < d; ++c) out.set_coeff(i, c, Complex{0.0, 0.0});
      continue;
    }
    Complex dot{0.0, 0.0};
    for (int c = 0; c < d; ++c) dot += static_cast<double>(k[c]) * raw.coeff(i, c);
    dot /= k2;
    for (int c = 0; c < d; ++c)
      out.set_coeff(i, c, raw.coeff(i, c) - static_cast<double>(k[c]) * dot);
  }
  return out;
}

void hermitian_symmetrize(SpectralField& u) {
  const auto& dom = u.domain();
  const int d = dom.dimension();
  for (std::size_t i = 0; i < dom.lattice_size(); ++i) {
    const std::size_t j = dom.mirror_index(i);
    if (j < i) continue;
    for (int c = 0; c < d; ++c) {
      const Complex avg = 0.5 * (u.coeff(i, c) + std::conj(u.coeff(j, c)));
      u.set_coeff(i, c, avg);
      u.set_coeff(j, c, std::conj(avg));
    }
  }
}

}  // namespace pullback
