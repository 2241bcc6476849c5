#pragma once

// Reference Newton-Cartan data for checks: a compatible background with
// non-constant components, and random valid point data.

#include <cmath>
#include <random>

#include "degspin/newton_cartan.hpp"

namespace degspin::oracle {

/// Static flat space in spherical coordinates (t, r, theta, phi):
/// g = diag(0, 1, r^2, r^2 sin^2 theta), tau = dt, V = d_t and the
/// Levi-Civita coefficients of the spatial metric. Compatible with g and tau,
/// and its components are not polynomial, so central differences carry an
/// O(h^2) error.
class SphericalChartField : public NCField {
 public:
  NCPointData at(const Vector4& p) const override {
    const double r = p[1], th = p[2];
    const double s = std::sin(th), c = std::cos(th);
    NCPointData d;
    d.g = Matrix4::Zero();
    d.g(1, 1) = 1.0;
    d.g(2, 2) = r * r;
    d.g(3, 3) = r * r * s * s;
    d.tau = Vector4::UnitX();
    d.V = Vector4::UnitX();
    d.gamma(1, 2, 2) = -r;
    d.gamma(1, 3, 3) = -r * s * s;
    d.gamma(2, 1, 2) = d.gamma(2, 2, 1) = 1.0 / r;
    d.gamma(2, 3, 3) = -s * c;
    d.gamma(3, 1, 3) = d.gamma(3, 3, 1) = 1.0 / r;
    d.gamma(3, 2, 3) = d.gamma(3, 3, 2) = c / s;
    return d;
  }
  double default_step(int) const override { return kAnalyticFdStep; }
  std::vector<Vector4> check_points() const override {
    std::vector<Vector4> pts;
    for (double r : {1.0, 1.5, 2.0})
      for (double th : {0.6, 1.0, 1.4})
        for (double ph : {0.0, 1.0, 2.0}) pts.emplace_back(0.0, r, th, ph);
    return pts;
  }
  std::string kind() const override { return "spherical-chart"; }
};

/// Phi = (x^2 + 2 y^2 + 3 z^2) / 2, the potential of configs/newtonian.yaml.
inline Polynomial reference_potential() {
  return Polynomial({{0.5, {0, 2, 0, 0}}, {1.0, {0, 0, 2, 0}}, {1.5, {0, 0, 0, 2}}});
}

/// Valid point data built from a random well-conditioned frame: V = X0,
/// tau = e^0, g = sum_i e^i (x) e^i. Connection coefficients are random.
template <class Rng>
NCPointData random_nc_point(Rng& rng) {
  std::uniform_real_distribution<double> u(-0.3, 0.3);
  Matrix4 frame = Matrix4::Identity();
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) frame(i, j) += u(rng);
  const Matrix4 coframe = frame.inverse();
  NCPointData d;
  d.V = frame.col(0);
  d.tau = coframe.row(0).transpose();
  d.g = Matrix4::Zero();
  for (int i = 1; i < 4; ++i) d.g += coframe.row(i).transpose() * coframe.row(i);
  for (int mu = 0; mu < 4; ++mu)
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) d.gamma(mu, a, b) = u(rng);
  return d;
}

}  // namespace degspin::oracle
