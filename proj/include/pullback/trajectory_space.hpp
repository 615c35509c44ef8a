#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "pullback/function_spaces.hpp"

namespace pullback {

/// A solution sampled on a uniform time grid 0 = t_0 < ... < t_m = h_max,
/// together with the absolute initial time of the shifted problem it
/// solves.  States live on one shared SpectralDomain; the sample is
/// immutable after construction.
class TrajectorySample {
 public:
  TrajectorySample(double anchor_tau, double dt_grid, std::vector<SpectralField> states);

  const SpectralDomain& domain() const { return states_.front().domain(); }
  const DomainPtr& domain_ptr() const { return states_.front().domain_ptr(); }
  double anchor_tau() const { return anchor_tau_; }
  double dt_grid() const { return dt_grid_; }
  double h_max() const { return dt_grid_ * static_cast<double>(states_.size() - 1); }
  std::size_t size() const { return states_.size(); }
  const SpectralField& state(std::size_t i) const { return states_.at(i); }
  const std::vector<SpectralField>& states() const { return states_; }

  /// Grid index of time s; throws if s is not grid-aligned or out of range.
  std::size_t index_at_time(double s) const;
  const SpectralField& state_at_time(double s) const { return states_.at(index_at_time(s)); }

 private:
  double anchor_tau_;
  double dt_grid_;
  std::vector<SpectralField> states_;
};

/// Per-grid-point energy bookkeeping for one trajectory: squared H and V
/// norms, squared V*-norm of the active forcing, and the cumulative
/// weighted integral I(h) = integral_0^h e^{sigma xi} |F(xi)|_{V*}^2 dxi
/// (trapezoid rule at solver resolution).  I is nondecreasing in h.
struct EnergyLedger {
  std::vector<double> norm_H_sq;
  std::vector<double> norm_V_sq;
  std::vector<double> forcing_dual_sq;
  std::vector<double> weighted_integral;

  bool integral_nondecreasing() const;
};

struct FrechetValue {
  double value;       // partial sum up to i_max; lies in [0, 1)
  double tail_bound;  // exact bound 2^{-i_max} on the dropped tail
};

/// Truncated Frechet pre-norm of C([0,inf); E0):
///   sum_{i=1}^{i_max} 2^{-i} m_i / (1 + m_i),
/// where m_i is the max of the E0-norm (V_delta* on this domain) over
/// grid points in [0, i].  Requires h_max >= i_max.
FrechetValue frechet_prenorm(const TrajectorySample& v, int i_max);

/// T(h): (T(h)u)(s) = u(s + h); h must be a nonnegative grid-aligned
/// multiple of dt (no interpolation), and the anchor time advances by h.
TrajectorySample translate(const TrajectorySample& u, double h);

/// Pointwise difference on the common grid prefix (grids must share dt
/// and the domain); used by trajectory distances.
TrajectorySample difference(const TrajectorySample& u, const TrajectorySample& v);

struct SemidistanceValue {
  double value;
  double tail_bound;
};

/// sup over source of inf over target of the truncated Frechet distance.
/// Not symmetric; empty target is an error.
SemidistanceValue semidistance(std::span<const TrajectorySample> source,
                               std::span<const TrajectorySample> target, int i_max);

/// Binary trajectory snapshot (self-describing; little-endian IEEE reals).
/// Layout: magic "PBTS", u32 version, u32 dimension, u32 modes_per_axis,
/// f64 box_length, f64 viscosity, f64 delta, f64 anchor_tau, f64 dt_grid,
/// u64 n_states, u64 lattice_size, then the lattice (i32 per axis per
/// wavevector, dimension entries each), then per state, per wavevector,
/// per component: f64 real, f64 imag.
void write_snapshot(const std::string& path, const TrajectorySample& traj);
TrajectorySample read_snapshot(const std::string& path);

/// CSV export with columns t,norm_H_sq,norm_V_sq.
void write_norm_csv(const std::string& path, const TrajectorySample& traj);

/// True if x is an integer multiple of dt up to relative slack.
bool grid_aligned(double x, double dt);
/// Nearest grid multiple not exceeding x (used to snap tau_0 downward).
double snap_down_to_grid(double x, double dt);

}  // namespace pullback
