#pragma once

// Spinor side of the degenerate geometry: the gamma-matrix representation of
// Cl(1,0,3), the lifted connection, covariant derivatives of gridded spinor
// fields and the first-order operator with the Levy-Leblond mass term.
//
// Units have hbar = 1. Spinor components are ordered (upper 2-spinor, lower
// 2-spinor).

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <functional>
#include <vector>

#include "degspin/clifford.hpp"
#include "degspin/error.hpp"
#include "degspin/newton_cartan.hpp"
#include "degspin/spin_groups.hpp"

namespace degspin {

using cd = std::complex<double>;
using Matrix4c = Eigen::Matrix4cd;
using Matrix2c = Eigen::Matrix2cd;
using Spinor = Eigen::Vector4cd;

inline constexpr double kSpanTolerance = 1e-12;

inline Matrix2c pauli(int i) {
  Matrix2c s;
  switch (i) {
    case 1: s << 0, 1, 1, 0; break;
    case 2: s << 0, cd(0, -1), cd(0, 1), 0; break;
    case 3: s << 1, 0, 0, -1; break;
    default: throw Error(ErrorKind::invalid_input, "Pauli index must be 1..3");
  }
  return s;
}

/// gamma_0 = [[0, I], [0, 0]], gamma_i = [[sigma_i, 0], [0, -sigma_i]].
struct GammaSet {
  std::array<Matrix4c, 4> gamma;
  Matrix4c gamma0_t;  // plain transpose of gamma_0, used by the mass term

  const Matrix4c& operator[](int a) const { return gamma[a]; }

  /// Largest deviation from gamma_0^2 = 0, {gamma_i, gamma_j} = 2 delta_ij and
  /// {gamma_0, gamma_i} = 0. Zero for the exact set.
  double relation_residual() const {
    const Matrix4c id = Matrix4c::Identity();
    double r = (gamma[0] * gamma[0]).cwiseAbs().maxCoeff();
    for (int i = 1; i < 4; ++i) {
      r = std::max(r, (gamma[0] * gamma[i] + gamma[i] * gamma[0]).cwiseAbs().maxCoeff());
      for (int j = 1; j < 4; ++j)
        r = std::max(r, (gamma[i] * gamma[j] + gamma[j] * gamma[i] - (i == j ? 2.0 : 0.0) * id).cwiseAbs().maxCoeff());
    }
    return r;
  }
};

inline GammaSet build_gamma() {
  GammaSet g;
  g.gamma[0] = Matrix4c::Zero();
  g.gamma[0].block<2, 2>(0, 2) = Matrix2c::Identity();
  for (int i = 1; i < 4; ++i) {
    g.gamma[i] = Matrix4c::Zero();
    g.gamma[i].block<2, 2>(0, 0) = pauli(i);
    g.gamma[i].block<2, 2>(2, 2) = -pauli(i);
  }
  g.gamma0_t = g.gamma[0].transpose();
  if (g.relation_residual() != 0.0) throw Error(ErrorKind::structural, "gamma matrices violate Cl(1,0,3)");
  return g;
}

inline const GammaSet& gammas() {
  static const GammaSet g = build_gamma();
  return g;
}

/// Blade f^a e1^b e2^c e3^d -> gamma_0^a gamma_1^b gamma_2^c gamma_3^d.
inline Matrix4c theta(BladeMask m) {
  Matrix4c out = Matrix4c::Identity();
  for (int k = 0; k < 4; ++k)
    if (m.bits() & (1u << k)) out = out * gammas()[k];
  return out;
}

/// Algebra homomorphism Cl(1,0,3) -> Mat(4, C). Not injective.
inline Matrix4c theta(const Multivector& a) {
  Matrix4c out = Matrix4c::Zero();
  for (unsigned b = 0; b < Signature::blade_count; ++b) {
    const double c = a.coeffs()[b];
    if (c != 0.0) out += c * theta(BladeMask(static_cast<std::uint8_t>(b)));
  }
  return out;
}

/// A(W) = -1/2 sum omega^0_i gamma_0 gamma_i + 1/2 sum_{i<j} omega^i_j gamma_i gamma_j.
inline Matrix4c lift(const So103Element& w) {
  const GammaSet& g = gammas();
  Matrix4c out = Matrix4c::Zero();
  for (int i = 1; i < 4; ++i) out -= 0.5 * w.boost[i - 1] * g[0] * g[i];
  for (int k = 0; k < 3; ++k) {
    const auto [i, j] = kRotationPairs[k];
    out += 0.5 * w.rotation[k] * g[i] * g[j];
  }
  return out;
}

/// The same lift factored through spin(1,0,3).
inline Matrix4c lift_via_algebra(const So103Element& w) { return theta(d_rho_prime_inv(w).to_multivector()); }

/// Distance of m from span{gamma_0 gamma_i, gamma_i gamma_j}. The six basis
/// matrices are Frobenius-orthogonal, so projection is coefficient-wise.
inline double lift_span_residual(const Matrix4c& m) {
  const GammaSet& g = gammas();
  Matrix4c rest = m;
  auto remove = [&](const Matrix4c& b) {
    const cd c = (b.adjoint() * m).trace() / (b.adjoint() * b).trace();
    rest -= c * b;
  };
  for (int i = 1; i < 4; ++i) remove(g[0] * g[i]);
  for (const auto& [i, j] : kRotationPairs) remove(g[i] * g[j]);
  return rest.cwiseAbs().maxCoeff();
}

/// Lifted connection matrices A(X_c), one per frame direction.
struct LiftedConnection {
  std::array<Matrix4c, 4> direction{Matrix4c::Zero(), Matrix4c::Zero(), Matrix4c::Zero(), Matrix4c::Zero()};

  static LiftedConnection from_form(const ConnectionForm& form) {
    LiftedConnection out;
    for (int c = 0; c < 4; ++c) out.direction[c] = lift(form.direction[c]);
    return out;
  }

  double span_residual() const {
    double r = 0.0;
    for (const auto& m : direction) r = std::max(r, lift_span_residual(m));
    return r;
  }
};

// ---------------------------------------------------------------------------
// Gridded spinor fields

enum class Boundary { strict, periodic };

/// Regular grid over (t, x, y, z); axes of extent 1 are allowed but cannot be
/// differentiated along.
struct SpinorGrid {
  GridSpec spec;
  std::array<Boundary, 4> boundary{Boundary::strict, Boundary::strict, Boundary::strict, Boundary::strict};

  std::size_t size() const { return spec.size(); }
  std::size_t index(const std::array<int, 4>& i) const { return spec.flat_index(i); }
  Vector4 point(const std::array<int, 4>& i) const { return spec.point(i); }

  /// Neighbour `offset` steps along `axis`; throws boundary on a strict axis.
  std::array<int, 4> shifted(std::array<int, 4> i, int axis, int offset) const {
    const int n = spec.shape[axis];
    int j = i[axis] + offset;
    if (j < 0 || j >= n) {
      if (boundary[axis] == Boundary::strict)
        throw Error(ErrorKind::boundary, "stencil leaves the grid along axis " + std::to_string(axis));
      j = ((j % n) + n) % n;
    }
    i[axis] = j;
    return i;
  }

  template <class F>
  void for_each(F&& f) const {
    std::array<int, 4> i{};
    for (i[0] = 0; i[0] < spec.shape[0]; ++i[0])
      for (i[1] = 0; i[1] < spec.shape[1]; ++i[1])
        for (i[2] = 0; i[2] < spec.shape[2]; ++i[2])
          for (i[3] = 0; i[3] < spec.shape[3]; ++i[3]) f(i);
  }
};

class SpinorField {
 public:
  explicit SpinorField(SpinorGrid grid) : grid_(std::move(grid)), values_(grid_.size(), Spinor::Zero()) {}
  SpinorField(SpinorGrid grid, std::vector<Spinor> values) : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.size()) throw Error(ErrorKind::invalid_input, "spinor field size does not match grid");
  }

  template <class F>
  static SpinorField sample(SpinorGrid grid, F&& f) {
    SpinorField out(std::move(grid));
    out.grid_.for_each([&](const std::array<int, 4>& i) { out(i) = f(out.grid_.point(i)); });
    return out;
  }

  const SpinorGrid& grid() const { return grid_; }
  const std::vector<Spinor>& values() const { return values_; }
  Spinor& operator()(const std::array<int, 4>& i) { return values_[grid_.index(i)]; }
  const Spinor& operator()(const std::array<int, 4>& i) const { return values_[grid_.index(i)]; }

  double max_norm() const {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, v.norm());
    return m;
  }

 private:
  SpinorGrid grid_;
  std::vector<Spinor> values_;
};

/// Geometry seen by the spinor operators at one grid node: the frame vectors
/// as columns of coordinate components, the lifted connection and hbar with
/// frame indices (the identity in an adapted frame).
struct LocalGeometry {
  Matrix4 frame = Matrix4::Identity();
  LiftedConnection connection;
  Matrix4 hbar_frame = Matrix4::Identity();

  static LocalGeometry flat() { return {}; }
};

/// Adapted frame, lifted connection and frame-index hbar of an NC field at p.
/// The connection comes from finite-differenced frames, so the so(1,0,3)
/// check runs at the FD tolerance.
inline LocalGeometry geometry_at(const NCField& field, const Vector4& p) {
  const NCPointData d = field.at(p);
  LocalGeometry g;
  const AdaptedFrame frame = adapted_frame(d);
  g.frame = frame.vectors;
  g.connection = LiftedConnection::from_form(connection_form(frame_christoffels(field, p), kFdConnectionTolerance));
  g.hbar_frame = hbar(frame.vectors.transpose() * gbar(d.g, d.tau) * frame.vectors);
  return g;
}

using GeometryProvider = std::function<LocalGeometry(const std::array<int, 4>&)>;

inline GeometryProvider constant_geometry(LocalGeometry g) {
  return [g = std::move(g)](const std::array<int, 4>&) { return g; };
}

/// Central-difference d psi(X_c) plus A(X_c) psi at node i. Axes along which
/// X_c has an exactly zero component are not differenced.
inline Spinor covariant_derivative_at(const SpinorField& psi, const std::array<int, 4>& i, int c,
                                      const LocalGeometry& geom) {
  const SpinorGrid& grid = psi.grid();
  Spinor d = geom.connection.direction[c] * psi(i);
  for (int mu = 0; mu < 4; ++mu) {
    const double x = geom.frame(mu, c);
    if (x == 0.0) continue;
    if (grid.spec.shape[mu] < 3 && grid.boundary[mu] == Boundary::strict)
      throw Error(ErrorKind::boundary, "no samples to difference along axis " + std::to_string(mu));
    const Spinor diff = psi(grid.shifted(i, mu, 1)) - psi(grid.shifted(i, mu, -1));
    d += (x / (2.0 * grid.spec.spacing[mu])) * diff;
  }
  return d;
}

inline SpinorField covariant_derivative(const SpinorField& psi, int c, const GeometryProvider& geom) {
  SpinorField out(psi.grid());
  psi.grid().for_each([&](const std::array<int, 4>& i) { out(i) = covariant_derivative_at(psi, i, c, geom(i)); });
  return out;
}

/// D psi = sum_a gamma^a nabla_{X_a} psi with gamma^a = hbar^{ab} gamma_b.
inline Spinor dirac_at(const SpinorField& psi, const std::array<int, 4>& i, const LocalGeometry& geom) {
  const GammaSet& g = gammas();
  Spinor out = Spinor::Zero();
  for (int a = 0; a < 4; ++a) {
    Matrix4c raised = Matrix4c::Zero();
    for (int b = 0; b < 4; ++b)
      if (geom.hbar_frame(a, b) != 0.0) raised += geom.hbar_frame(a, b) * g[b];
    if (raised.isZero(0.0)) continue;
    out += raised * covariant_derivative_at(psi, i, a, geom);
  }
  return out;
}

inline SpinorField dirac(const SpinorField& psi, const GeometryProvider& geom) {
  SpinorField out(psi.grid());
  psi.grid().for_each([&](const std::array<int, 4>& i) { out(i) = dirac_at(psi, i, geom(i)); });
  return out;
}

inline void check_mass(double m) {
  if (!(m > 0.0) || !std::isfinite(m)) throw Error(ErrorKind::invalid_mass, "mass must be positive, got " + format_g(m));
}

/// D psi + 2 m i gamma_0^T psi at one point.
inline Spinor ll_residual(const Spinor& psi, double m, const Spinor& d_psi) {
  check_mass(m);
  return d_psi + cd(0.0, 2.0 * m) * (gammas().gamma0_t * psi);
}

inline SpinorField ll_residual(const SpinorField& psi, double m, const SpinorField& d_psi) {
  check_mass(m);
  if (d_psi.values().size() != psi.values().size())
    throw Error(ErrorKind::invalid_input, "operator output does not match the field grid");
  std::vector<Spinor> out(psi.values().size());
  for (std::size_t k = 0; k < out.size(); ++k) out[k] = ll_residual(psi.values()[k], m, d_psi.values()[k]);
  return SpinorField(psi.grid(), std::move(out));
}

}  // namespace degspin
