#pragma once

// The Galilei group SO(1,0,3), its double cover SPIN(1,0,3) inside Cl(1,0,3),
// the two Lie algebras, and the covering / differential maps between them.
//
// Index order for 4x4 matrices is (f, e1, e2, e3). Bivector triples are
// ordered (e1e2, e1e3, e2e3), matching the so(3) basis (E12, E13, E23).

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <string>

#include "degspin/clifford.hpp"
#include "degspin/error.hpp"

namespace degspin {

using Vector3 = Eigen::Vector3d;
using Matrix3 = Eigen::Matrix3d;
using Matrix4 = Eigen::Matrix4d;

inline constexpr double kUnitTolerance = 1e-12;
inline constexpr double kRenormalizeLimit = 1e-9;
inline constexpr double kBracketResidue = 1e-12;

/// (i, j) index pairs for the rotation slots, in storage order.
inline constexpr std::array<std::array<int, 2>, 3> kRotationPairs{{{1, 2}, {1, 3}, {2, 3}}};

/// Unit even element a + b12 e1e2 + b13 e1e3 + b23 e2e3 of Cl(3).
class Spin3Element {
 public:
  /// Throws invalid_element unless a^2 + |b|^2 = 1 within 1e-12.
  static Spin3Element from_components(double a, double b12, double b13, double b23) {
    const double n2 = a * a + b12 * b12 + b13 * b13 + b23 * b23;
    if (!std::isfinite(n2) || std::abs(n2 - 1.0) > kUnitTolerance)
      throw Error(ErrorKind::invalid_element,
                  "SPIN(3) element has squared norm " + format_g(n2));
    return Spin3Element(a, b12, b13, b23);
  }

  /// Rescales to unit norm when the drift is below 1e-9; larger drift throws.
  static Spin3Element normalized(double a, double b12, double b13, double b23) {
    const double n = std::sqrt(a * a + b12 * b12 + b13 * b13 + b23 * b23);
    if (!std::isfinite(n) || std::abs(n - 1.0) > kRenormalizeLimit)
      throw Error(ErrorKind::invalid_element,
                  "SPIN(3) element norm " + format_g(n) + " too far from 1 to renormalize");
    return Spin3Element(a / n, b12 / n, b13 / n, b23 / n);
  }

  static Spin3Element identity() { return Spin3Element(1.0, 0.0, 0.0, 0.0); }

  /// cos(angle/2) + sin(angle/2) e_i e_j.
  static Spin3Element rotor(int i, int j, double angle) {
    std::array<double, 3> b{};
    for (int k = 0; k < 3; ++k)
      if (kRotationPairs[k][0] == i && kRotationPairs[k][1] == j) b[k] = std::sin(angle / 2);
    return Spin3Element(std::cos(angle / 2), b[0], b[1], b[2]);
  }

  double scalar() const { return a_; }
  double b12() const { return b_[0]; }
  double b13() const { return b_[1]; }
  double b23() const { return b_[2]; }
  const Vector3& bivector() const { return b_; }

  Multivector to_multivector() const {
    Multivector m = Multivector::scalar(a_);
    for (int k = 0; k < 3; ++k) m[blade::e(kRotationPairs[k][0], kRotationPairs[k][1])] = b_[k];
    return m;
  }

  /// Inverse of a unit even element is its reverse.
  Spin3Element inverse() const { return Spin3Element(a_, -b_[0], -b_[1], -b_[2]); }

  Spin3Element operator-() const { return Spin3Element(-a_, -b_[0], -b_[1], -b_[2]); }

  friend Spin3Element operator*(const Spin3Element& x, const Spin3Element& y) {
    const double a = x.a_, p = x.b_[0], q = x.b_[1], r = x.b_[2];
    const double a2 = y.a_, p2 = y.b_[0], q2 = y.b_[1], r2 = y.b_[2];
    return Spin3Element::normalized(a * a2 - p * p2 - q * q2 - r * r2,
                                    a * p2 + p * a2 - q * r2 + r * q2,
                                    a * q2 + q * a2 + p * r2 - r * p2,
                                    a * r2 + r * a2 - p * q2 + q * p2);
  }

 private:
  Spin3Element(double a, double b12, double b13, double b23) : a_(a), b_(b12, b13, b23) {}

  double a_;
  Vector3 b_;
};

/// rho(s): the rotation v -> s v s^-1. Column i holds the (e1, e2, e3)
/// coefficients of s e_i reverse(s).
inline Matrix3 rho(const Spin3Element& s) {
  const Multivector sm = s.to_multivector();
  const Multivector sr = reverse(sm);
  Matrix3 r;
  for (int i = 1; i <= 3; ++i) {
    const Multivector img = gp(sm, gp(Multivector::blade(blade::e(i)), sr));
    for (int j = 1; j <= 3; ++j) r(j - 1, i - 1) = img[blade::e(j)];
  }
  return r;
}

/// The element s(1 + v f) of SPIN(1,0,3), v = v1 e1 + v2 e2 + v3 e3.
class Spin103Element {
 public:
  Spin103Element(const Spin3Element& s, const Vector3& v) : s_(s), v_(v) {
    if (!v.allFinite()) throw Error(ErrorKind::invalid_element, "non-finite translation part");
  }

  static Spin103Element identity() { return {Spin3Element::identity(), Vector3::Zero()}; }

  const Spin3Element& rotation() const { return s_; }
  const Vector3& translation() const { return v_; }

  /// Multivector s(1 + v f), formed with the Clifford product.
  Multivector to_multivector() const {
    const Multivector v = Multivector::spatial_vector(v_[0], v_[1], v_[2]);
    const Multivector factor = Multivector::scalar(1.0) + gp(v, Multivector::blade(blade::f));
    return gp(s_.to_multivector(), factor);
  }

  /// s(1+vf) s'(1+v'f) = ss'(1 + (v' + rho(s'^-1) v) f).
  friend Spin103Element operator*(const Spin103Element& x, const Spin103Element& y) {
    return {x.s_ * y.s_, y.v_ + rho(y.s_.inverse()) * x.v_};
  }

  /// (s(1+vf))^-1 = s^-1 (1 - rho(s)(v) f).
  Spin103Element inverse() const { return {s_.inverse(), -(rho(s_) * v_)}; }

  /// -s(1+vf), the other preimage under rho'.
  Spin103Element operator-() const { return {-s_, v_}; }

 private:
  Spin3Element s_;
  Vector3 v_;
};

inline Multivector embed(const Spin103Element& s) { return s.to_multivector(); }
inline Spin103Element spin_mul(const Spin103Element& a, const Spin103Element& b) { return a * b; }
inline Spin103Element spin_inv(const Spin103Element& s) { return s.inverse(); }

inline Matrix4 degenerate_metric() {
  Matrix4 g = Matrix4::Identity();
  g(0, 0) = 0.0;
  return g;
}

/// 4x4 matrix in the Galilei group SO(1,0,3), block form [[1, A], [0, R]].
class GalileiMatrix {
 public:
  struct Residuals {
    double metric = 0.0;        // max |Phi^T G Phi - G|
    double determinant = 0.0;   // |det Phi - 1|
    bool radical_fixed = false; // first column exactly (1, 0, 0, 0)
  };

  explicit GalileiMatrix(const Matrix4& m) : m_(m) {}

  /// [[1, boost], [0, rotation]], boost taken as a row.
  static GalileiMatrix from_blocks(const Vector3& boost, const Matrix3& rotation) {
    Matrix4 m = Matrix4::Zero();
    m(0, 0) = 1.0;
    m.block<1, 3>(0, 1) = boost.transpose();
    m.block<3, 3>(1, 1) = rotation;
    return GalileiMatrix(m);
  }

  const Matrix4& matrix() const { return m_; }
  Vector3 boost() const { return m_.block<1, 3>(0, 1).transpose(); }
  Matrix3 rotation() const { return m_.block<3, 3>(1, 1); }

  Residuals residuals() const {
    const Matrix4 g = degenerate_metric();
    Residuals r;
    r.metric = (m_.transpose() * g * m_ - g).cwiseAbs().maxCoeff();
    r.determinant = std::abs(m_.determinant() - 1.0);
    r.radical_fixed = m_(0, 0) == 1.0 && m_(1, 0) == 0.0 && m_(2, 0) == 0.0 && m_(3, 0) == 0.0;
    return r;
  }

  bool is_valid(double tol = kUnitTolerance) const {
    const Residuals r = residuals();
    return r.metric <= tol && r.determinant <= tol && r.radical_fixed;
  }

  friend GalileiMatrix operator*(const GalileiMatrix& a, const GalileiMatrix& b) {
    return GalileiMatrix(a.m_ * b.m_);
  }

 private:
  Matrix4 m_;
};

/// rho'(s(1+vf)) = [[1, 2v], [0, rho(s)]], v entered as a row.
///
/// The conjugation x -> s x s^-1 written in the (f, e1, e2, e3) basis gives
/// the same matrix with -2v in the boost row; the two coincide after the basis
/// change f -> -f (see conjugation_matrix). Both are 2:1 homomorphisms.
inline GalileiMatrix rho_prime(const Spin103Element& s) {
  return GalileiMatrix::from_blocks(2.0 * s.translation(), rho(s.rotation()));
}

/// Matrix of x -> s x s^-1 on the grade-1 subspace, columns are the images of
/// (f, e1, e2, e3), computed with the Clifford product.
inline Matrix4 conjugation_matrix(const Spin103Element& s) {
  const Multivector sm = embed(s);
  const Multivector si = embed(s.inverse());
  Matrix4 out;
  for (unsigned col = 0; col < 4; ++col) {
    const Multivector img = gp(sm, gp(Multivector::blade(BladeMask(1u << col)), si));
    for (unsigned row = 0; row < 4; ++row) out(row, col) = img[BladeMask(1u << row)];
  }
  return out;
}

/// diag(-1, 1, 1, 1): flips the null generator.
inline Matrix4 null_flip() {
  Matrix4 j = Matrix4::Identity();
  j(0, 0) = -1.0;
  return j;
}

/// Element of so(1,0,3): sum a_i E0i + sum r_ij Eij.
struct So103Element {
  Vector3 boost = Vector3::Zero();     // coefficients on E01, E02, E03
  Vector3 rotation = Vector3::Zero();  // coefficients on E12, E13, E23

  /// [[0, a], [0, r]] with r antisymmetric.
  Matrix4 matrix() const {
    Matrix4 m = Matrix4::Zero();
    for (int i = 0; i < 3; ++i) m(0, i + 1) = boost[i];
    for (int k = 0; k < 3; ++k) {
      const auto [i, j] = kRotationPairs[k];
      m(i, j) = rotation[k];
      m(j, i) = -rotation[k];
    }
    return m;
  }

  /// Decomposes a 4x4 matrix; throws `kind` if any entry outside the
  /// [[0, a], [0, r]] pattern or the antisymmetry of r is off by more than tol.
  static So103Element from_matrix(const Matrix4& m, double tol = kBracketResidue,
                                  ErrorKind kind = ErrorKind::structural) {
    double residue = 0.0;
    for (int row = 0; row < 4; ++row) residue = std::max(residue, std::abs(m(row, 0)));
    for (int i = 1; i < 4; ++i) residue = std::max(residue, std::abs(m(i, i)));
    So103Element out;
    for (int i = 0; i < 3; ++i) out.boost[i] = m(0, i + 1);
    for (int k = 0; k < 3; ++k) {
      const auto [i, j] = kRotationPairs[k];
      residue = std::max(residue, std::abs(m(i, j) + m(j, i)));
      out.rotation[k] = m(i, j);
    }
    if (!(residue <= tol))
      throw Error(kind, "matrix is not in so(1,0,3), residue " + format_g(residue));
    return out;
  }

  friend bool operator==(const So103Element& a, const So103Element& b) {
    return a.boost == b.boost && a.rotation == b.rotation;
  }
  friend So103Element operator+(const So103Element& a, const So103Element& b) {
    return {a.boost + b.boost, a.rotation + b.rotation};
  }
  friend So103Element operator*(double s, const So103Element& a) {
    return {s * a.boost, s * a.rotation};
  }
};

/// Element of spin(1,0,3): sum b_i f e_i + sum c_ij e_i e_j.
struct Spin103AlgebraElement {
  Vector3 boost = Vector3::Zero();     // coefficients on f e1, f e2, f e3
  Vector3 rotation = Vector3::Zero();  // coefficients on e1e2, e1e3, e2e3

  Multivector to_multivector() const {
    Multivector m;
    for (int i = 1; i <= 3; ++i) m[blade::fe(i)] = boost[i - 1];
    for (int k = 0; k < 3; ++k) m[blade::e(kRotationPairs[k][0], kRotationPairs[k][1])] = rotation[k];
    return m;
  }

  /// Throws structural if any blade outside {f e_i, e_i e_j} exceeds tol.
  static Spin103AlgebraElement from_multivector(const Multivector& m, double tol = kBracketResidue) {
    Spin103AlgebraElement out;
    Multivector rest = m;
    for (int i = 1; i <= 3; ++i) {
      out.boost[i - 1] = m[blade::fe(i)];
      rest[blade::fe(i)] = 0.0;
    }
    for (int k = 0; k < 3; ++k) {
      const BladeMask b = blade::e(kRotationPairs[k][0], kRotationPairs[k][1]);
      out.rotation[k] = m[b];
      rest[b] = 0.0;
    }
    if (!(rest.max_abs() <= tol))
      throw Error(ErrorKind::structural,
                  "multivector leaves spin(1,0,3), residue " + format_g(rest.max_abs()));
    return out;
  }

  friend bool operator==(const Spin103AlgebraElement& a, const Spin103AlgebraElement& b) {
    return a.boost == b.boost && a.rotation == b.rotation;
  }
};

/// e_i e_j -> 2 E_ij, f e_i -> -2 E_0i, extended linearly.
inline So103Element d_rho_prime(const Spin103AlgebraElement& x) {
  return {-2.0 * x.boost, 2.0 * x.rotation};
}

/// Inverse of d_rho_prime: a_i E_0i -> -a_i/2 f e_i, r_ij E_ij -> r_ij/2 e_i e_j.
inline Spin103AlgebraElement d_rho_prime_inv(const So103Element& x) {
  return {-0.5 * x.boost, 0.5 * x.rotation};
}

/// Matrix commutator, checked to stay inside so(1,0,3).
inline So103Element lie_bracket(const So103Element& x, const So103Element& y) {
  const Matrix4 a = x.matrix(), b = y.matrix();
  return So103Element::from_matrix(a * b - b * a);
}

/// gp(x, y) - gp(y, x), checked to stay inside spin(1,0,3).
inline Spin103AlgebraElement lie_bracket(const Spin103AlgebraElement& x,
                                         const Spin103AlgebraElement& y) {
  const Multivector a = x.to_multivector(), b = y.to_multivector();
  return Spin103AlgebraElement::from_multivector(gp(a, b) - gp(b, a));
}

/// The six spin(1,0,3) basis elements in the order f e1, f e2, f e3, e1e2, e1e3, e2e3.
inline std::array<Spin103AlgebraElement, 6> spin_algebra_basis() {
  std::array<Spin103AlgebraElement, 6> basis{};
  for (int i = 0; i < 3; ++i) basis[i].boost[i] = 1.0;
  for (int k = 0; k < 3; ++k) basis[3 + k].rotation[k] = 1.0;
  return basis;
}

/// E01, E02, E03, E12, E13, E23.
inline std::array<So103Element, 6> so_algebra_basis() {
  std::array<So103Element, 6> basis{};
  for (int i = 0; i < 3; ++i) basis[i].boost[i] = 1.0;
  for (int k = 0; k < 3; ++k) basis[3 + k].rotation[k] = 1.0;
  return basis;
}

}  // namespace degspin
