#pragma once

// 1D free Schrodinger evolution of the lower 2-spinor chi(x, t) eta and the
// Levy-Leblond residual of the reconstructed 4-spinor
// psi = (sigma_1 d_x chi eta / 2mi, chi eta).
//
// Space: periodic grid x_j = -N dx / 2 + j dx with the compact fourth-order
// Laplacian (1 + S/12)^-1 S / dx^2, S the second-difference stencil. Time:
// Crank-Nicolson, so each step solves the cyclic tridiagonal system
// (B - i alpha S) psi+ = (B + i alpha S) psi, B = 1 + S/12, alpha = dt / (4 m dx^2).
// B and S commute, so the step is exactly unitary.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "degspin/error.hpp"
#include "degspin/levy_leblond.hpp"
#include "degspin/spinor.hpp"

namespace degspin {

inline constexpr double kNormDriftLimit = 1e-6;

/// Constant-coefficient periodic tridiagonal system: `diag` on the diagonal,
/// `off` on both off-diagonals and in the two corners. Factorised once,
/// solved with Thomas plus a Sherman-Morrison correction for the corners.
class CyclicTridiagonal {
 public:
  CyclicTridiagonal(cd off, cd diag, std::size_t n) : off_(off), n_(n) {
    if (n < 3) throw Error(ErrorKind::invalid_input, "cyclic system needs at least 3 unknowns");
    gamma_ = -diag;
    b_.assign(n, diag);
    b_.front() = diag - gamma_;
    b_.back() = diag - off * off / gamma_;
    // forward sweep multipliers for the reduced (non-cyclic) matrix
    cprime_.resize(n);
    denom_.resize(n);
    denom_[0] = b_[0];
    cprime_[0] = off / denom_[0];
    for (std::size_t i = 1; i < n; ++i) {
      denom_[i] = b_[i] - off * cprime_[i - 1];
      if (std::abs(denom_[i]) == 0.0) throw Error(ErrorKind::integrator_failure, "singular tridiagonal pivot");
      cprime_[i] = off / denom_[i];
    }
    std::vector<cd> u(n, 0.0);
    u.front() = gamma_;
    u.back() = off;
    z_ = thomas(u);
    zfactor_ = 1.0 + z_.front() + off * z_.back() / gamma_;
  }

  std::vector<cd> solve(const std::vector<cd>& rhs) const {
    if (rhs.size() != n_) throw Error(ErrorKind::invalid_input, "right-hand side size mismatch");
    std::vector<cd> x = thomas(rhs);
    const cd fact = (x.front() + off_ * x.back() / gamma_) / zfactor_;
    for (std::size_t i = 0; i < n_; ++i) x[i] -= fact * z_[i];
    return x;
  }

 private:
  std::vector<cd> thomas(const std::vector<cd>& r) const {
    std::vector<cd> y(n_);
    y[0] = r[0] / denom_[0];
    for (std::size_t i = 1; i < n_; ++i) y[i] = (r[i] - off_ * y[i - 1]) / denom_[i];
    for (std::size_t i = n_ - 1; i-- > 0;) y[i] -= cprime_[i] * y[i + 1];
    return y;
  }

  cd off_;
  std::size_t n_;
  cd gamma_;
  std::vector<cd> b_, cprime_, denom_, z_;
  cd zfactor_;
};

struct SolveConfig {
  double mass = 1.0;
  int grid_points = 512;
  double dx = 0.05;
  double dt = 0.001;
  int steps = 1000;
  double sigma0 = 1.0;
  double k0 = 1.0;
  double x0 = 0.0;
  int output_every = 100;               // trajectory slice stride; the last slice is always kept
  Vector2c eta = Vector2c(1.0, 0.0);    // constant 2-spinor carried by chi
  bool ll_residual = true;              // evaluate the 4-spinor residual while stepping

  /// Throws invalid_input / invalid_mass on hard violations; returns advisory warnings.
  std::vector<std::string> validate() const {
    check_mass(mass);
    if (grid_points < 16) throw Error(ErrorKind::invalid_input, "grid_points must be at least 16");
    if (!(dx > 0.0) || !std::isfinite(dx)) throw Error(ErrorKind::invalid_input, "dx must be positive");
    if (!(dt > 0.0) || !std::isfinite(dt)) throw Error(ErrorKind::invalid_input, "dt must be positive");
    if (steps < 0) throw Error(ErrorKind::invalid_input, "steps must be non-negative");
    if (!(sigma0 > 0.0)) throw Error(ErrorKind::invalid_input, "sigma0 must be positive");
    if (output_every < 1) throw Error(ErrorKind::invalid_input, "output_every must be at least 1");
    if (!std::isfinite(k0) || !std::isfinite(x0)) throw Error(ErrorKind::invalid_input, "non-finite packet parameters");
    if (!(eta.norm() > 0.0) || !eta.allFinite()) throw Error(ErrorKind::invalid_input, "eta must be a non-zero 2-spinor");
    std::vector<std::string> warnings;
    if (dt > dx * dx * mass)
      warnings.push_back("dt = " + format_g(dt) + " exceeds dx^2 m = " + format_g(dx * dx * mass) +
                         "; accuracy may suffer");
    return warnings;
  }

  double x(int j) const { return -0.5 * grid_points * dx + j * dx; }
};

inline std::vector<cd> sample_packet(const SolveConfig& cfg, double t) {
  const auto f = GaussianFactor::free_packet(cfg.mass, cfg.sigma0, cfg.k0, cfg.x0);
  std::vector<cd> out(cfg.grid_points);
  for (int j = 0; j < cfg.grid_points; ++j) out[j] = f.value(cfg.x(j), t);
  return out;
}

inline double l2_norm(const std::vector<cd>& v, double dx) {
  double s = 0.0;
  for (const cd& z : v) s += std::norm(z);
  return std::sqrt(s * dx);
}

inline double l2_distance(const std::vector<cd>& a, const std::vector<cd>& b, double dx) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::norm(a[i] - b[i]);
  return std::sqrt(s * dx);
}

/// One Crank-Nicolson step operator for a fixed (m, dx, dt, N).
class CrankNicolson {
 public:
  CrankNicolson(double mass, double dx, double dt, std::size_t n)
      : alpha_(dt / (4.0 * mass * dx * dx)),
        rhs_diag_(5.0 / 6.0, -2.0 * alpha_),
        rhs_off_(1.0 / 12.0, alpha_),
        lhs_(cd(1.0 / 12.0, -alpha_), cd(5.0 / 6.0, 2.0 * alpha_), n) {}

  std::vector<cd> step(const std::vector<cd>& psi) const {
    const std::size_t n = psi.size();
    std::vector<cd> rhs(n);
    for (std::size_t j = 0; j < n; ++j)
      rhs[j] = rhs_diag_ * psi[j] + rhs_off_ * (psi[(j + n - 1) % n] + psi[(j + 1) % n]);
    return lhs_.solve(rhs);
  }

 private:
  double alpha_;
  cd rhs_diag_, rhs_off_;
  CyclicTridiagonal lhs_;
};

/// chi after `cfg.steps` steps from the sampled initial packet.
inline std::vector<cd> evolve_scalar(const SolveConfig& cfg) {
  cfg.validate();
  const CrankNicolson cn(cfg.mass, cfg.dx, cfg.dt, cfg.grid_points);
  std::vector<cd> psi = sample_packet(cfg, 0.0);
  for (int n = 0; n < cfg.steps; ++n) psi = cn.step(psi);
  return psi;
}

/// Stored (t, x) slices of the reconstructed 4-spinor.
struct Trajectory {
  std::vector<double> times;
  std::vector<double> xs;
  std::vector<std::vector<Spinor>> slices;  // slices[n][j]

  friend bool operator==(const Trajectory& a, const Trajectory& b) {
    if (a.times != b.times || a.xs != b.xs || a.slices.size() != b.slices.size()) return false;
    for (std::size_t n = 0; n < a.slices.size(); ++n)
      for (std::size_t j = 0; j < a.slices[n].size(); ++j)
        if (a.slices[n][j] != b.slices[n][j]) return false;
    return true;
  }
};

inline constexpr const char* kTrajectoryHeader = "t,x,re_psi0,im_psi0,re_psi1,im_psi1,re_psi2,im_psi2,re_psi3,im_psi3";

/// One row per (t, x) sample, 17 significant digits.
inline void write_trajectory_csv(std::ostream& os, const Trajectory& traj) {
  os << kTrajectoryHeader << '\n';
  char buf[32];
  auto put = [&](double v) {
    std::snprintf(buf, sizeof buf, "%.17g", v);
    os << buf;
  };
  for (std::size_t n = 0; n < traj.slices.size(); ++n)
    for (std::size_t j = 0; j < traj.xs.size(); ++j) {
      put(traj.times[n]);
      os << ',';
      put(traj.xs[j]);
      for (int c = 0; c < 4; ++c) {
        os << ',';
        put(traj.slices[n][j][c].real());
        os << ',';
        put(traj.slices[n][j][c].imag());
      }
      os << '\n';
    }
}

inline void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorKind::invalid_input, "cannot open " + path + " for writing");
  write_trajectory_csv(out, traj);
  if (!out) throw Error(ErrorKind::invalid_input, "write to " + path + " failed");
}

/// Inverse of write_trajectory_csv. Rows must come slice by slice with the
/// same x column in each slice.
inline Trajectory read_trajectory_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kTrajectoryHeader)
    throw Error(ErrorKind::invalid_input, "trajectory CSV header mismatch");
  Trajectory traj;
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty()) continue;
    std::array<double, 10> v{};
    const char* p = line.c_str();
    for (int k = 0; k < 10; ++k) {
      char* end = nullptr;
      v[k] = std::strtod(p, &end);
      if (end == p || (k < 9 && *end != ',') || (k == 9 && *end != '\0'))
        throw Error(ErrorKind::invalid_input, "malformed trajectory row " + std::to_string(row));
      p = end + (k < 9 ? 1 : 0);
    }
    if (traj.times.empty() || v[0] != traj.times.back()) {
      if (!traj.slices.empty() && traj.slices.back().size() != traj.xs.size())
        throw Error(ErrorKind::invalid_input, "ragged trajectory slice before row " + std::to_string(row));
      traj.times.push_back(v[0]);
      traj.slices.emplace_back();
    }
    auto& slice = traj.slices.back();
    if (traj.slices.size() == 1)
      traj.xs.push_back(v[1]);
    else if (slice.size() >= traj.xs.size() || traj.xs[slice.size()] != v[1])
      throw Error(ErrorKind::invalid_input, "x column differs between slices at row " + std::to_string(row));
    slice.emplace_back(cd(v[2], v[3]), cd(v[4], v[5]), cd(v[6], v[7]), cd(v[8], v[9]));
  }
  if (!traj.slices.empty() && traj.slices.back().size() != traj.xs.size())
    throw Error(ErrorKind::invalid_input, "ragged final trajectory slice");
  return traj;
}

inline Trajectory read_trajectory_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::invalid_input, "cannot open " + path);
  return read_trajectory_csv(in);
}

struct RunReport {
  double residual_max = 0.0;  // max |D psi + 2mi gamma_0^T psi| over interior slices
  double residual_l2 = 0.0;   // sqrt(dt dx sum |.|^2) over the same samples
  double norm_drift = 0.0;    // max_n | ||chi_n|| / ||chi_0|| - 1 |
  double l2_error = 0.0;      // ||chi_N - chi_exact(t_N)|| (times |eta|)
  double wall_time = 0.0;     // seconds
  double final_time = 0.0;
  int steps = 0;
  std::string output_path;
  std::vector<std::string> warnings;

  bool all_finite() const {
    return std::isfinite(residual_max) && std::isfinite(residual_l2) && std::isfinite(norm_drift) &&
           std::isfinite(l2_error) && std::isfinite(wall_time);
  }
};

namespace detail {

/// Lower block chi eta; upper block sigma_1 (D_x chi) eta / 2mi with the
/// periodic central difference.
inline std::vector<Spinor> reconstruct_spinor(const std::vector<cd>& chi, const SolveConfig& cfg) {
  const std::size_t n = chi.size();
  const Vector2c upper_dir = pauli(1) * cfg.eta / cd(0.0, 2.0 * cfg.mass);
  std::vector<Spinor> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    const cd dchi = (chi[(j + 1) % n] - chi[(j + n - 1) % n]) / (2.0 * cfg.dx);
    out[j] << dchi * upper_dir, chi[j] * cfg.eta;
  }
  return out;
}

}  // namespace detail

struct SolveResult {
  RunReport report;
  Trajectory trajectory;
  std::vector<cd> chi;  // final scalar field
};

/// Evolves the packet, keeps every `output_every`-th slice plus the last, and
/// reports errors against the analytic spreading Gaussian. The LL residual is
/// evaluated at every interior time level with dirac_at on a rolling window of
/// three slices (x periodic, t strict). Throws integrator_failure when the
/// norm drifts by more than 1e-6 or the field stops being finite.
inline SolveResult evolve_wavepacket(const SolveConfig& cfg) {
  SolveResult res;
  res.report.warnings = cfg.validate();
  const auto start = std::chrono::steady_clock::now();
  const int n = cfg.grid_points;
  const CrankNicolson cn(cfg.mass, cfg.dx, cfg.dt, n);

  for (int j = 0; j < n; ++j) res.trajectory.xs.push_back(cfg.x(j));
  std::vector<cd> chi = sample_packet(cfg, 0.0);
  const double norm0 = l2_norm(chi, cfg.dx);

  SpinorGrid window;
  window.spec.shape = {3, n, 1, 1};
  window.spec.spacing = Vector4(cfg.dt, cfg.dx, 1.0, 1.0);
  window.boundary = {Boundary::strict, Boundary::periodic, Boundary::strict, Boundary::strict};
  LocalGeometry geom;
  geom.hbar_frame = Vector4(1, 1, 0, 0).asDiagonal();  // 1D: no y, z terms
  std::vector<Spinor> slab;                             // three slices, t slowest
  double residual_sq = 0.0;

  auto keep = [&](int step, const std::vector<Spinor>& psi) {
    res.trajectory.times.push_back(step * cfg.dt);
    res.trajectory.slices.push_back(psi);
  };

  std::vector<Spinor> psi = detail::reconstruct_spinor(chi, cfg);
  keep(0, psi);
  if (cfg.ll_residual) slab = psi;
  for (int step = 1; step <= cfg.steps; ++step) {
    chi = cn.step(chi);
    const double drift = std::abs(l2_norm(chi, cfg.dx) / norm0 - 1.0);
    if (!(drift <= kNormDriftLimit))
      throw Error(ErrorKind::integrator_failure, "norm drift " + format_g(drift) + " at step " + std::to_string(step));
    res.report.norm_drift = std::max(res.report.norm_drift, drift);
    psi = detail::reconstruct_spinor(chi, cfg);
    if (step % cfg.output_every == 0 || step == cfg.steps) keep(step, psi);

    if (cfg.ll_residual) {
      slab.insert(slab.end(), psi.begin(), psi.end());
      if (slab.size() > 3 * std::size_t(n)) slab.erase(slab.begin(), slab.begin() + n);
      if (slab.size() == 3 * std::size_t(n)) {
        const SpinorField field(window, slab);
        for (int j = 0; j < n; ++j) {
          const std::array<int, 4> centre{1, j, 0, 0};
          const Spinor r = ll_residual(field(centre), cfg.mass, dirac_at(field, centre, geom));
          res.report.residual_max = std::max(res.report.residual_max, r.norm());
          residual_sq += r.squaredNorm();
        }
      }
    }
  }
  res.report.residual_l2 = std::sqrt(residual_sq * cfg.dx * cfg.dt);
  res.report.steps = cfg.steps;
  res.report.final_time = cfg.steps * cfg.dt;
  res.report.l2_error = l2_distance(chi, sample_packet(cfg, res.report.final_time), cfg.dx) * cfg.eta.norm();
  res.chi = std::move(chi);
  res.report.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (!res.report.all_finite()) throw Error(ErrorKind::integrator_failure, "non-finite run report");
  return res;
}

}  // namespace degspin
