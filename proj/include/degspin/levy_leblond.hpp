#pragma once

// Flat-space Levy-Leblond checks with exact derivatives.
//
// Plane waves use the sign convention e^{+i(k.x - E t)}. The Schrodinger wave
// function sits in the lower 2-spinor; the upper one is sigma.grad(chi)/(2mi).

#include <Eigen/Dense>
#include <array>
#include <cmath>
#include <complex>
#include <optional>
#include <vector>

#include "degspin/error.hpp"
#include "degspin/spinor.hpp"

namespace degspin {

using Vector2c = Eigen::Vector2cd;

inline constexpr double kReduceTolerance = 1e-10;

inline Matrix2c sigma_dot(const Vector3& k) {
  Matrix2c s = Matrix2c::Zero();
  for (int j = 1; j <= 3; ++j) s += k[j - 1] * pauli(j);
  return s;
}

/// Amplitude (u1, u2) of the flat plane-wave solution, u1 = (sigma.k) u2 / 2m.
inline Spinor planewave_amplitude(const Vector3& k, double m, const Vector2c& u2) {
  check_mass(m);
  Spinor u;
  u << sigma_dot(k) * u2 / (2.0 * m), u2;
  return u;
}

/// Norm of the Levy-Leblond residual of (u1, u2) e^{i(k.x - E t)} with
/// u1 = (sigma.k) u2 / 2m. E defaults to the dispersion |k|^2 / 2m; the
/// derivatives are exact, so the residual is the constant amplitude
/// (-i E gamma_0 + i k_j gamma_j + 2mi gamma_0^T) u, of norm |E - |k|^2/2m| |u2|.
inline double planewave_check(const Vector3& k, double m, const Vector2c& u2,
                              std::optional<double> energy = {}) {
  check_mass(m);
  if (!k.allFinite() || !u2.allFinite()) throw Error(ErrorKind::invalid_input, "non-finite plane-wave data");
  const double e = energy.value_or(k.squaredNorm() / (2.0 * m));
  const Spinor u = planewave_amplitude(k, m, u2);
  const cd i(0.0, 1.0);
  const GammaSet& g = gammas();
  Matrix4c op = -i * e * g[0];
  for (int j = 1; j <= 3; ++j) op += i * k[j - 1] * g[j];
  return ll_residual(u, m, op * u).norm();
}

/// 1D factor F(x, t) = exp(a u^2 + b u + c), u = x - x0, with coefficients and
/// their time derivatives in closed form.
class GaussianFactor {
 public:
  struct Coefficients {
    cd a, b, c;           // log F = a u^2 + b u + c
    cd a_dot, b_dot, c_dot;
  };

  /// Free Schrodinger packet, normalised at t = 0:
  /// chi(x, 0) = (2 pi s0^2)^{-1/4} exp(-(x - x0)^2 / (4 s0^2) + i k0 x).
  static GaussianFactor free_packet(double m, double sigma0, double k0, double x0) {
    check_mass(m);
    if (!(sigma0 > 0.0)) throw Error(ErrorKind::invalid_input, "packet width must be positive");
    return GaussianFactor(Kind::free_packet, m, sigma0, k0, x0);
  }

  /// The t = 0 free packet frozen in time. Not a solution unless trivial.
  static GaussianFactor static_packet(double m, double sigma0, double k0, double x0) {
    check_mass(m);
    if (!(sigma0 > 0.0)) throw Error(ErrorKind::invalid_input, "packet width must be positive");
    return GaussianFactor(Kind::static_packet, m, sigma0, k0, x0);
  }

  /// e^{i(k x - E t)}; E defaults to k^2 / 2m.
  static GaussianFactor plane_wave(double m, double k, std::optional<double> energy = {}) {
    check_mass(m);
    GaussianFactor f(Kind::plane_wave, m, 0.0, k, 0.0);
    f.energy_ = energy.value_or(k * k / (2.0 * m));
    return f;
  }

  Coefficients at(double t) const {
    const cd i(0.0, 1.0);
    Coefficients co{};
    switch (kind_) {
      case Kind::plane_wave:
        co.b = i * k0_;
        co.c = -i * energy_ * t;
        co.c_dot = -i * energy_;
        return co;
      case Kind::static_packet:
        t = 0.0;
        [[fallthrough]];
      case Kind::free_packet: {
        const double s2 = sigma0_ * sigma0_;
        const cd d = 1.0 + i * t / (2.0 * m_ * s2);
        co.a = -1.0 / (4.0 * s2 * d);
        co.b = i * k0_ / d;
        co.c = -0.25 * std::log(2.0 * M_PI * s2) + i * k0_ * x0_ - 0.5 * std::log(d) + k0_ * k0_ * s2 * (1.0 / d - 1.0);
        if (kind_ == Kind::free_packet) {
          co.a_dot = 2.0 * i * co.a * co.a / m_;
          co.b_dot = 2.0 * i * co.a * co.b / m_;
          co.c_dot = i * (2.0 * co.a + co.b * co.b) / (2.0 * m_);
        }
        return co;
      }
    }
    return co;
  }

  /// F, dF/dx, d2F/dx2, dF/dt, d2F/dtdx at (x, t).
  struct Jet {
    cd value, dx, dxx, dt, dtx;
  };

  Jet jet(double x, double t) const {
    const Coefficients co = at(t);
    const double u = x - x0_;
    const cd f = std::exp(co.a * u * u + co.b * u + co.c);
    const cd slope = 2.0 * co.a * u + co.b;
    const cd rate = co.a_dot * u * u + co.b_dot * u + co.c_dot;
    return {f, slope * f, (2.0 * co.a + slope * slope) * f, rate * f,
            (2.0 * co.a_dot * u + co.b_dot) * f + rate * slope * f};
  }

  cd value(double x, double t) const {
    const Coefficients co = at(t);
    const double u = x - x0_;
    return std::exp(co.a * u * u + co.b * u + co.c);
  }

  double mass() const { return m_; }

 private:
  enum class Kind { free_packet, static_packet, plane_wave };

  GaussianFactor(Kind kind, double m, double sigma0, double k0, double x0)
      : kind_(kind), m_(m), sigma0_(sigma0), k0_(k0), x0_(x0) {}

  Kind kind_;
  double m_, sigma0_, k0_, x0_;
  double energy_ = 0.0;
};

/// chi(x, y, z, t) = F_x(x, t) F_y(y, t) F_z(z, t) xi for a constant 2-spinor xi.
struct ProductProfile {
  std::array<GaussianFactor, 3> factors;
  Vector2c xi = Vector2c(1.0, 0.0);

  /// Scalar part of chi with its first and second derivatives; index 0 is t.
  struct Derivatives {
    cd value;
    std::array<cd, 4> d{};                // d_mu chi
    std::array<std::array<cd, 4>, 4> dd{};  // d_mu d_nu chi
  };

  Derivatives derivatives(const Vector4& p) const {
    std::array<GaussianFactor::Jet, 3> j;
    for (int k = 0; k < 3; ++k) j[k] = factors[k].jet(p[k + 1], p[0]);
    auto product_except = [&](int skip1, int skip2) {
      cd v = 1.0;
      for (int k = 0; k < 3; ++k)
        if (k != skip1 && k != skip2) v *= j[k].value;
      return v;
    };
    Derivatives out;
    out.value = product_except(-1, -1);
    for (int k = 0; k < 3; ++k) {
      out.d[k + 1] = j[k].dx * product_except(k, -1);
      out.d[0] += j[k].dt * product_except(k, -1);
      for (int l = 0; l < 3; ++l)
        out.dd[k + 1][l + 1] = k == l ? j[k].dxx * product_except(k, -1) : j[k].dx * j[l].dx * product_except(k, l);
    }
    // d_t d_x_k chi
    for (int k = 0; k < 3; ++k) {
      cd s = j[k].dtx * product_except(k, -1);
      for (int l = 0; l < 3; ++l)
        if (l != k) s += j[l].dt * j[k].dx * product_except(k, l);
      out.dd[0][k + 1] = out.dd[k + 1][0] = s;
    }
    return out;
  }
};

struct ReduceReport {
  double ll_max = 0.0;           // max |D psi + 2mi gamma_0^T psi|
  double schrodinger_max = 0.0;  // max |i d_t chi + lap chi / 2m| |xi|
  double identity_gap = 0.0;     // max | |LL residual| - |Schrodinger residual| |
  std::size_t points = 0;

  /// LL residual vanishes exactly when the Schrodinger residual does.
  bool equivalent(double tol = kReduceTolerance) const { return (ll_max <= tol) == (schrodinger_max <= tol); }
};

/// Reconstructs psi = (sigma.grad chi / 2mi, chi) from the profile, applies
/// the flat operator D with exact derivatives and the mass term, and compares
/// with the Schrodinger residual of chi at each point.
inline ReduceReport reduce_check(const ProductProfile& chi, double m, const std::vector<Vector4>& points) {
  check_mass(m);
  const cd i(0.0, 1.0);
  const GammaSet& g = gammas();
  ReduceReport rep;
  for (const Vector4& p : points) {
    const auto d = chi.derivatives(p);
    // d_mu psi for mu = 0..3; the upper block needs second derivatives of chi
    std::array<Spinor, 4> dpsi;
    Spinor psi;
    auto upper = [&](auto&& grad) {
      Vector2c u = Vector2c::Zero();
      for (int j = 1; j <= 3; ++j) u += grad(j) * (pauli(j) * chi.xi);
      return Vector2c(u / (2.0 * m * i));
    };
    psi << upper([&](int j) { return d.d[j]; }), d.value * chi.xi;
    for (int mu = 0; mu < 4; ++mu)
      dpsi[mu] << upper([&](int j) { return d.dd[mu][j]; }), d.d[mu] * chi.xi;
    Spinor dirac_psi = Spinor::Zero();
    for (int a = 0; a < 4; ++a) dirac_psi += g[a] * dpsi[a];
    const double ll = ll_residual(psi, m, dirac_psi).norm();

    const cd lap = d.dd[1][1] + d.dd[2][2] + d.dd[3][3];
    const double sch = std::abs(i * d.d[0] + lap / (2.0 * m)) * chi.xi.norm();
    rep.ll_max = std::max(rep.ll_max, ll);
    rep.schrodinger_max = std::max(rep.schrodinger_max, sch);
    rep.identity_gap = std::max(rep.identity_gap, std::abs(ll - sch));
    ++rep.points;
  }
  return rep;
}

/// 3^4 lattice t in {0, 0.5, 1}, x, y, z in {-1, 0, 1}.
inline std::vector<Vector4> reduce_check_points() {
  std::vector<Vector4> pts;
  for (double t : {0.0, 0.5, 1.0})
    for (double x : {-1.0, 0.0, 1.0})
      for (double y : {-1.0, 0.0, 1.0})
        for (double z : {-1.0, 0.0, 1.0}) pts.emplace_back(t, x, y, z);
  return pts;
}

}  // namespace degspin
