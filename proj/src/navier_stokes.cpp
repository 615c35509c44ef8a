#include "pullback/navier_stokes.hpp"

#include <fftw3.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <numbers>
#include <string>

namespace pullback {

namespace {

int next_odd_at_least(int n) { return (n % 2 == 0) ? n + 1 : n; }

}  // namespace

void SolverConfig::validate() const {
  if (!domain) throw std::invalid_argument("solver config needs a domain");
  if (dt <= 0.0) throw std::invalid_argument("dt must be positive");
  if (regularization_M <= 0.0) throw std::invalid_argument("regularization M must be positive");
  if (out_stride < 1) throw std::invalid_argument("out_stride must be >= 1");
  if (dt * domain->viscosity() * domain->lambda_max() > 10.0)
    throw std::invalid_argument("dt * eta * lambda_max exceeds the stability sanity bound 10");
  if (!forcing.domain_ptr()->compatible_with(*domain))
    throw std::invalid_argument("forcing profile domain mismatch");
}

double phi1(double z) {
  if (std::abs(z) < 1e-4) return 1.0 + z * (0.5 + z * (1.0 / 6.0 + z / 24.0));
  return std::expm1(z) / z;
}

struct PseudoSpectralEngine::Impl {
  int dim;
  int mg;
  std::size_t grid_size;
  double kappa_base;  // 2*pi/L
  std::vector<std::complex<double>> buf;
  fftw_plan fwd = nullptr;
  fftw_plan bwd = nullptr;
  // Real-space scratch.
  std::vector<double> vel;   // dim * grid_size
  std::vector<double> grad;  // dim * dim * grid_size, layout (i * dim + j)
  std::vector<double> damp;  // grid_size
  std::vector<double> work;  // grid_size
  std::vector<std::complex<double>> accum;  // dim * lattice_size

  // Grid bin of lattice wavevector component (wraps negatives).
  int bin(int k) const { return (k % mg + mg) % mg; }

  std::size_t flat_bin(const std::array<int, 3>& k) const {
    std::size_t idx = static_cast<std::size_t>(bin(k[0]));
    for (int a = 1; a < dim; ++a) idx = idx * static_cast<std::size_t>(mg) + static_cast<std::size_t>(bin(k[a]));
    return idx;
  }

  ~Impl() {
    if (fwd) fftw_destroy_plan(fwd);
    if (bwd) fftw_destroy_plan(bwd);
  }
};

PseudoSpectralEngine::PseudoSpectralEngine(DomainPtr domain, bool dealias)
    : domain_(std::move(domain)) {
  impl_ = std::make_unique<Impl>();
  impl_->dim = domain_->dimension();
  const int k_max = domain_->max_wavenumber();
  impl_->mg = next_odd_at_least(dealias ? 3 * k_max + 1 : 2 * k_max + 1);
  mg_ = impl_->mg;
  impl_->kappa_base = 2.0 * std::numbers::pi / domain_->box_length();
  std::size_t grid = 1;
  for (int a = 0; a < impl_->dim; ++a) grid *= static_cast<std::size_t>(impl_->mg);
  impl_->grid_size = grid;
  impl_->buf.assign(grid, {0.0, 0.0});
  auto* raw = reinterpret_cast<fftw_complex*>(impl_->buf.data());
  if (impl_->dim == 2) {
    impl_->fwd = fftw_plan_dft_2d(impl_->mg, impl_->mg, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd = fftw_plan_dft_2d(impl_->mg, impl_->mg, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  } else {
    impl_->fwd =
        fftw_plan_dft_3d(impl_->mg, impl_->mg, impl_->mg, raw, raw, FFTW_FORWARD, FFTW_ESTIMATE);
    impl_->bwd =
        fftw_plan_dft_3d(impl_->mg, impl_->mg, impl_->mg, raw, raw, FFTW_BACKWARD, FFTW_ESTIMATE);
  }
  impl_->vel.assign(static_cast<std::size_t>(impl_->dim) * grid, 0.0);
  impl_->grad.assign(static_cast<std::size_t>(impl_->dim * impl_->dim) * grid, 0.0);
  impl_->damp.assign(grid, 1.0);
  impl_->work.assign(grid, 0.0);
  impl_->accum.assign(domain_->lattice_size() * static_cast<std::size_t>(impl_->dim), {0.0, 0.0});
}

PseudoSpectralEngine::~PseudoSpectralEngine() = default;

SpectralField PseudoSpectralEngine::convection(const SpectralField& u, double M) const {
  auto& im = *impl_;
  const auto& dom = *domain_;
  const int d = im.dim;
  const std::size_t grid = im.grid_size;

  // Velocity components and all grid spectral derivatives d_i u_j.
  for (int c = 0; c < d; ++c) {
    std::fill(im.buf.begin(), im.buf.end(), std::complex<double>{0.0, 0.0});
    for (std::size_t l = 0; l < dom.lattice_size(); ++l)
      im.buf[im.flat_bin(dom.wavevector(l))] = u.coeff(l, c);
    fftw_execute(im.bwd);
    for (std::size_t x = 0; x < grid; ++x) im.vel[static_cast<std::size_t>(c) * grid + x] = im.buf[x].real();
  }
  for (int i = 0; i < d; ++i) {
    for (int c = 0; c < d; ++c) {
      std::fill(im.buf.begin(), im.buf.end(), std::complex<double>{0.0, 0.0});
      for (std::size_t l = 0; l < dom.lattice_size(); ++l) {
        const auto& k = dom.wavevector(l);
        const std::complex<double> ik{0.0, im.kappa_base * static_cast<double>(k[i])};
        im.buf[im.flat_bin(k)] = ik * u.coeff(l, c);
      }
      fftw_execute(im.bwd);
      double* dst = im.grad.data() + static_cast<std::size_t>(i * d + c) * grid;
      for (std::size_t x = 0; x < grid; ++x) dst[x] = im.buf[x].real();
    }
  }

  if (std::isfinite(M)) {
    for (std::size_t x = 0; x < grid; ++x) {
      double speed2 = 0.0;
      for (int c = 0; c < d; ++c) {
        const double v = im.vel[static_cast<std::size_t>(c) * grid + x];
        speed2 += v * v;
      }
      im.damp[x] = 1.0 / (1.0 + speed2 / M);
    }
  } else {
    std::fill(im.damp.begin(), im.damp.end(), 1.0);
  }

  std::fill(im.accum.begin(), im.accum.end(), std::complex<double>{0.0, 0.0});
  const double inv_grid = 1.0 / static_cast<double>(grid);

  // Divergence half: accumulate i kappa_i m_hat_ij into component j.
  for (int i = 0; i < d; ++i) {
    const double* ui = im.vel.data() + static_cast<std::size_t>(i) * grid;
    for (int j = 0; j < d; ++j) {
      const double* uj = im.vel.data() + static_cast<std::size_t>(j) * grid;
      for (std::size_t x = 0; x < grid; ++x) im.buf[x] = {ui[x] * uj[x] * im.damp[x], 0.0};
      fftw_execute(im.fwd);
      for (std::size_t l = 0; l < dom.lattice_size(); ++l) {
        const auto& k = dom.wavevector(l);
        const std::complex<double> ik{0.0, im.kappa_base * static_cast<double>(k[i])};
        im.accum[l * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] +=
            0.5 * ik * im.buf[im.flat_bin(k)] * inv_grid;
      }
    }
  }

  // Convective half: sum_i u_i damp d_i u_j, transformed per component.
  for (int j = 0; j < d; ++j) {
    for (std::size_t x = 0; x < grid; ++x) {
      double s = 0.0;
      for (int i = 0; i < d; ++i)
        s += im.vel[static_cast<std::size_t>(i) * grid + x] *
             im.grad[static_cast<std::size_t>(i * d + j) * grid + x];
      im.buf[x] = {s * im.damp[x], 0.0};
    }
    fftw_execute(im.fwd);
    for (std::size_t l = 0; l < dom.lattice_size(); ++l)
      im.accum[l * static_cast<std::size_t>(d) + static_cast<std::size_t>(j)] +=
          0.5 * im.buf[im.flat_bin(dom.wavevector(l))] * inv_grid;
  }

  SpectralField out(u.domain_ptr());
  for (std::size_t l = 0; l < dom.lattice_size(); ++l)
    for (int c = 0; c < d; ++c)
      out.set_coeff(l, c, -im.accum[l * static_cast<std::size_t>(d) + static_cast<std::size_t>(c)]);
  hermitian_symmetrize(out);
  return leray_project(out);
}

SpectralField trilinear_regularized(const SpectralField& u, double M, bool dealias) {
  PseudoSpectralEngine engine(u.domain_ptr(), dealias);
  return engine.convection(u, M);
}

SpectralField explicit_rhs(const SpectralField& state, double t_abs, const SolverConfig& cfg,
                           const PseudoSpectralEngine* engine) {
  SpectralField out = cfg.nonlinear ? engine->convection(state, cfg.regularization_M)
                                    : SpectralField(cfg.domain);
  if (cfg.forcing.kind() != ForcingProfile::Kind::Zero) out += cfg.forcing.value(t_abs);
  return out;
}

SpectralField full_rhs(const SpectralField& state, double t_abs, const SolverConfig& cfg,
                       const PseudoSpectralEngine* engine) {
  SpectralField out = explicit_rhs(state, t_abs, cfg, engine);
  const auto& dom = *cfg.domain;
  const double eta = dom.viscosity();
  for (std::size_t l = 0; l < dom.lattice_size(); ++l) {
    const double lam = dom.eigenvalue(l);
    for (int c = 0; c < dom.dimension(); ++c)
      out.set_coeff(l, c, out.coeff(l, c) - eta * lam * state.coeff(l, c));
  }
  return out;
}

SpectralField step(const SpectralField& state, double t_abs, const SolverConfig& cfg,
                   const PseudoSpectralEngine* engine) {
  const auto& dom = *cfg.domain;
  const double eta = dom.viscosity();
  SpectralField expl = explicit_rhs(state, t_abs, cfg, engine);
  SpectralField out(state.domain_ptr());
  for (std::size_t l = 0; l < dom.lattice_size(); ++l) {
    const double a = eta * dom.eigenvalue(l) * cfg.dt;
    const double decay = std::exp(-a);
    const double weight = cfg.dt * phi1(-a);
    for (int c = 0; c < dom.dimension(); ++c)
      out.set_coeff(l, c, decay * state.coeff(l, c) + weight * expl.coeff(l, c));
  }
  if (!out.all_finite())
    throw BlowupError(t_abs + cfg.dt,
                      "solver blow-up: non-finite coefficients at t = " + std::to_string(t_abs + cfg.dt));
  return out;
}

IntegrationResult integrate(const SpectralField& a, double tau, double h_max,
                            const SolverConfig& cfg) {
  cfg.validate();
  if (!a.domain().compatible_with(*cfg.domain))
    throw std::invalid_argument("initial state domain mismatch");
  if (a.divergence_residual() > 1e-10)
    throw std::invalid_argument("initial state is not divergence-free");
  if (!grid_aligned(h_max, cfg.dt)) throw std::invalid_argument("h_max is not a multiple of dt");
  const auto n_steps = static_cast<long long>(std::llround(h_max / cfg.dt));
  if (n_steps % cfg.out_stride != 0)
    throw std::invalid_argument("out_stride must divide the step count");

  std::unique_ptr<PseudoSpectralEngine> engine;
  if (cfg.nonlinear) engine = std::make_unique<PseudoSpectralEngine>(cfg.domain, cfg.dealias);

  const double sigma = cfg.domain->sigma();
  std::vector<SpectralField> states;
  EnergyLedger ledger;
  states.reserve(static_cast<std::size_t>(n_steps / cfg.out_stride) + 1);

  auto record = [&](const SpectralField& u, double h, double integral) {
    const double h2 = norm_H(u);
    const double v2 = norm_V(u);
    states.push_back(u);
    ledger.norm_H_sq.push_back(h2 * h2);
    ledger.norm_V_sq.push_back(v2 * v2);
    ledger.forcing_dual_sq.push_back(cfg.forcing.dual_norm_sq(tau + h));
    ledger.weighted_integral.push_back(integral);
  };

  SpectralField u = a;
  double integral = 0.0;
  double weighted_prev = cfg.forcing.dual_norm_sq(tau);  // e^{sigma*0} * |F(0)|^2
  record(u, 0.0, integral);
  for (long long s = 0; s < n_steps; ++s) {
    const double h = cfg.dt * static_cast<double>(s);
    u = step(u, tau + h, cfg, engine.get());
    const double h_next = cfg.dt * static_cast<double>(s + 1);
    const double weighted_next = std::exp(sigma * h_next) * cfg.forcing.dual_norm_sq(tau + h_next);
    integral += 0.5 * cfg.dt * (weighted_prev + weighted_next);
    weighted_prev = weighted_next;
    if ((s + 1) % cfg.out_stride == 0) record(u, h_next, integral);
  }

  return IntegrationResult{
      TrajectorySample(tau, cfg.dt * static_cast<double>(cfg.out_stride), std::move(states)),
      std::move(ledger)};
}

MarginReport check_energy_inequality(const TrajectorySample& traj, const EnergyLedger& ledger,
                                     double dt, double tol_coeff) {
  const double sigma = traj.domain().sigma();
  const double eta = traj.domain().viscosity();
  MarginReport report;
  report.tolerance = tol_coeff * dt;
  report.min_margin = std::numeric_limits<double>::infinity();
  const double h0_sq = ledger.norm_H_sq.at(0);
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double h = traj.dt_grid() * static_cast<double>(i);
    const double rhs = std::exp(-sigma * h) * (h0_sq + ledger.weighted_integral.at(i) / eta);
    const double margin = rhs - ledger.norm_H_sq.at(i);
    if (margin < report.min_margin) {
      report.min_margin = margin;
      report.argmin_h = h;
    }
  }
  report.pass = report.min_margin >= -report.tolerance;
  return report;
}

MarginReport derivative_dual_bound(const TrajectorySample& traj, const SolverConfig& cfg,
                                   double R2, double R3, double rel_tol) {
  std::unique_ptr<PseudoSpectralEngine> engine;
  if (cfg.nonlinear) engine = std::make_unique<PseudoSpectralEngine>(cfg.domain, cfg.dealias);
  const double eta = cfg.domain->viscosity();
  MarginReport report;
  report.min_margin = std::numeric_limits<double>::infinity();
  bool pass = true;
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double h = traj.dt_grid() * static_cast<double>(i);
    const double t_abs = traj.anchor_tau() + h;
    const SpectralField uprime = full_rhs(traj.state(i), t_abs, cfg, engine.get());
    const double lhs = norm_dual(uprime, 3.0);
    const double hn = std::sqrt(std::max(0.0, inner_H(traj.state(i), traj.state(i))));
    const double rhs = eta * R2 * hn + R3 * hn * hn + cfg.forcing.dual_norm(t_abs, 3.0);
    const double margin = rhs - lhs;
    if (margin < report.min_margin) {
      report.min_margin = margin;
      report.argmin_h = h;
    }
    if (margin < -rel_tol * (1.0 + rhs)) pass = false;
  }
  report.tolerance = rel_tol;
  report.pass = pass;
  return report;
}

}  // namespace pullback
