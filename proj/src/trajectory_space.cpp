#include "pullback/trajectory_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace pullback {

namespace {

constexpr char kSnapshotMagic[4] = {'P', 'B', 'T', 'S'};
constexpr std::uint32_t kSnapshotVersion = 1;

template <typename T>
void write_pod(std::ofstream& out, const T& v) {
  out.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::ifstream& in) {
  T v{};
  in.read(reinterpret_cast<char*>(&v), sizeof(T));
  if (!in) throw std::runtime_error("truncated snapshot");
  return v;
}

}  // namespace

bool grid_aligned(double x, double dt) {
  const double r = x / dt;
  return std::abs(r - std::round(r)) <= 1e-6 * std::max(1.0, std::abs(r));
}

double snap_down_to_grid(double x, double dt) {
  double snapped = std::floor(x / dt + 1e-9) * dt;
  if (snapped > x + 1e-12) snapped -= dt;
  return snapped;
}

TrajectorySample::TrajectorySample(double anchor_tau, double dt_grid,
                                   std::vector<SpectralField> states)
    : anchor_tau_(anchor_tau), dt_grid_(dt_grid), states_(std::move(states)) {
  if (states_.empty()) throw std::invalid_argument("trajectory needs at least one state");
  if (dt_grid_ <= 0.0) throw std::invalid_argument("dt_grid must be positive");
  const auto& dom = states_.front().domain();
  for (const auto& s : states_) {
    if (!s.domain().compatible_with(dom))
      throw std::invalid_argument("trajectory states live on mismatched domains");
    if (!s.all_finite()) throw std::invalid_argument("trajectory state has non-finite coefficients");
  }
}

std::size_t TrajectorySample::index_at_time(double s) const {
  if (!grid_aligned(s, dt_grid_)) throw std::invalid_argument("time not on the trajectory grid");
  const auto idx = static_cast<long long>(std::llround(s / dt_grid_));
  if (idx < 0 || idx >= static_cast<long long>(states_.size()))
    throw std::out_of_range("time outside the trajectory horizon");
  return static_cast<std::size_t>(idx);
}

bool EnergyLedger::integral_nondecreasing() const {
  for (std::size_t i = 1; i < weighted_integral.size(); ++i)
    if (weighted_integral[i] < weighted_integral[i - 1]) return false;
  return true;
}

FrechetValue frechet_prenorm(const TrajectorySample& v, int i_max) {
  if (i_max < 1) throw std::invalid_argument("i_max must be >= 1");
  if (v.h_max() + 1e-9 < static_cast<double>(i_max))
    throw std::invalid_argument("trajectory horizon shorter than i_max");
  const double delta = v.domain().delta();
  double value = 0.0;
  double running_max = 0.0;
  std::size_t next = 0;
  for (int i = 1; i <= i_max; ++i) {
    const auto stop = static_cast<std::size_t>(
        std::floor(static_cast<double>(i) / v.dt_grid() + 1e-9));
    const std::size_t last = std::min(stop, v.size() - 1);
    for (; next <= last; ++next) running_max = std::max(running_max, norm_dual(v.state(next), delta));
    value += std::ldexp(running_max / (1.0 + running_max), -i);
  }
  return FrechetValue{value, std::ldexp(1.0, -i_max)};
}

TrajectorySample translate(const TrajectorySample& u, double h) {
  if (h < 0.0) throw std::invalid_argument("translation requires h >= 0");
  const std::size_t shift = u.index_at_time(h);
  std::vector<SpectralField> states(u.states().begin() + static_cast<std::ptrdiff_t>(shift),
                                    u.states().end());
  return TrajectorySample(u.anchor_tau() + h, u.dt_grid(), std::move(states));
}

TrajectorySample difference(const TrajectorySample& u, const TrajectorySample& v) {
  if (!u.domain().compatible_with(v.domain()))
    throw std::invalid_argument("difference across mismatched domains");
  if (std::abs(u.dt_grid() - v.dt_grid()) > 1e-12 * u.dt_grid())
    throw std::invalid_argument("difference across mismatched grids");
  const std::size_t n = std::min(u.size(), v.size());
  std::vector<SpectralField> states;
  states.reserve(n);
  for (std::size_t i = 0; i < n; ++i) states.push_back(u.state(i) - v.state(i));
  return TrajectorySample(u.anchor_tau(), u.dt_grid(), std::move(states));
}

SemidistanceValue semidistance(std::span<const TrajectorySample> source,
                               std::span<const TrajectorySample> target, int i_max) {
  if (target.empty()) throw std::invalid_argument("semidistance target must be non-empty");
  double sup = 0.0;
  for (const auto& u : source) {
    double inf = std::numeric_limits<double>::infinity();
    for (const auto& v : target)
      inf = std::min(inf, frechet_prenorm(difference(u, v), i_max).value);
    sup = std::max(sup, inf);
  }
  return SemidistanceValue{sup, std::ldexp(1.0, -i_max)};
}

void write_snapshot(const std::string& path, const TrajectorySample& traj) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open snapshot for writing: " + path);
  out.write(kSnapshotMagic, 4);
  const auto& dom = traj.domain();
  write_pod(out, kSnapshotVersion);
  write_pod(out, static_cast<std::uint32_t>(dom.dimension()));
  write_pod(out, static_cast<std::uint32_t>(dom.modes_per_axis()));
  write_pod(out, dom.box_length());
  write_pod(out, dom.viscosity());
  write_pod(out, dom.delta());
  write_pod(out, traj.anchor_tau());
  write_pod(out, traj.dt_grid());
  write_pod(out, static_cast<std::uint64_t>(traj.size()));
  write_pod(out, static_cast<std::uint64_t>(dom.lattice_size()));
  for (std::size_t i = 0; i < dom.lattice_size(); ++i)
    for (int c = 0; c < dom.dimension(); ++c)
      write_pod(out, static_cast<std::int32_t>(dom.wavevector(i)[c]));
  for (std::size_t s = 0; s < traj.size(); ++s)
    for (std::size_t i = 0; i < dom.lattice_size(); ++i)
      for (int c = 0; c < dom.dimension(); ++c) {
        const Complex z = traj.state(s).coeff(i, c);
        write_pod(out, z.real());
        write_pod(out, z.imag());
      }
  if (!out) throw std::runtime_error("snapshot write failed: " + path);
}

TrajectorySample read_snapshot(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open snapshot: " + path);
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, kSnapshotMagic, 4) != 0)
    throw std::runtime_error("not a trajectory snapshot: " + path);
  const auto version = read_pod<std::uint32_t>(in);
  if (version != kSnapshotVersion) throw std::runtime_error("unsupported snapshot version");
  const auto dim = read_pod<std::uint32_t>(in);
  const auto modes = read_pod<std::uint32_t>(in);
  const auto box = read_pod<double>(in);
  const auto viscosity = read_pod<double>(in);
  const auto delta = read_pod<double>(in);
  const auto anchor = read_pod<double>(in);
  const auto dt = read_pod<double>(in);
  const auto n_states = read_pod<std::uint64_t>(in);
  const auto lattice_size = read_pod<std::uint64_t>(in);
  auto domain = std::make_shared<SpectralDomain>(static_cast<int>(dim), static_cast<int>(modes),
                                                 box, viscosity, delta);
  if (lattice_size != domain->lattice_size())
    throw std::runtime_error("snapshot lattice does not match its domain header");
  for (std::size_t i = 0; i < domain->lattice_size(); ++i)
    for (int c = 0; c < domain->dimension(); ++c) {
      const auto k = read_pod<std::int32_t>(in);
      if (k != domain->wavevector(i)[c])
        throw std::runtime_error("snapshot wavevector order mismatch");
    }
  std::vector<SpectralField> states;
  states.reserve(n_states);
  for (std::uint64_t s = 0; s < n_states; ++s) {
    SpectralField f(domain);
    for (std::size_t i = 0; i < domain->lattice_size(); ++i)
      for (int c = 0; c < domain->dimension(); ++c) {
        const double re = read_pod<double>(in);
        const double im = read_pod<double>(in);
        f.set_coeff(i, c, Complex{re, im});
      }
    states.push_back(std::move(f));
  }
  return TrajectorySample(anchor, dt, std::move(states));
}

void write_norm_csv(const std::string& path, const TrajectorySample& traj) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open csv for writing: " + path);
  out << "t,norm_H_sq,norm_V_sq\n";
  char line[128];
  for (std::size_t i = 0; i < traj.size(); ++i) {
    const double t = traj.dt_grid() * static_cast<double>(i);
    const double h2 = norm_H(traj.state(i));
    const double v2 = norm_V(traj.state(i));
    std::snprintf(line, sizeof(line), "%.17g,%.17g,%.17g\n", t, h2 * h2, v2 * v2);
    out << line;
  }
}

}  // namespace pullback
