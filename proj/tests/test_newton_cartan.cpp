#include <gtest/gtest.h>

#include <random>

#include "degspin/newton_cartan.hpp"
#include "degspin/verify/fields.hpp"

using namespace degspin;

namespace {

template <class A, class B>
double max_diff(const Eigen::MatrixBase<A>& a, const Eigen::MatrixBase<B>& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

Matrix4 diag4(double a, double b, double c, double d) { return Vector4(a, b, c, d).asDiagonal(); }

/// Galilean boost x -> x - w t applied to flat data: V = d_t + w d_x.
NCPointData boosted_flat(double w) {
  Matrix4 l = Matrix4::Identity();
  l(1, 0) = -w;
  NCPointData d = NCPointData::flat();
  d.g = l.transpose() * degenerate_metric() * l;
  d.V = Vector4(1, w, 0, 0);
  return d;
}

Matrix3 rotation_about(const Vector3& axis, double angle) {
  return Eigen::AngleAxisd(angle, axis.normalized()).toRotationMatrix();
}

class ConstantField : public NCField {
 public:
  explicit ConstantField(NCPointData d) : d_(std::move(d)) {}
  NCPointData at(const Vector4&) const override { return d_; }
  double default_step(int) const override { return kAnalyticFdStep; }
  std::vector<Vector4> check_points() const override { return {Vector4::Zero()}; }
  std::string kind() const override { return "constant"; }

 private:
  NCPointData d_;
};

Polynomial harmonic_potential() {
  // 0.5 x^2 + y^2 + 1.5 z^2 + 0.25 t x
  return Polynomial({{0.5, {0, 2, 0, 0}}, {1.0, {0, 0, 2, 0}}, {1.5, {0, 0, 0, 2}}, {0.25, {1, 1, 0, 0}}});
}

}  // namespace

TEST(Validate, FlatPassesEverything) {
  const Diagnostics d = validate(NCPointData::flat());
  EXPECT_TRUE(d.ok());
  for (const auto& c : d.checks) EXPECT_TRUE(c.passed) << c.name;
}

TEST(Validate, ClockNormalisationFailure) {
  NCPointData d = NCPointData::flat();
  d.tau = Vector4(0, 1, 0, 0);  // tau(V) = 0
  const Diagnostics diag = validate(d);
  EXPECT_FALSE(diag.ok());
  EXPECT_FALSE(diag.find("tau(V) = 1")->passed);
  EXPECT_DOUBLE_EQ(diag.find("tau(V) = 1")->residual, 1.0);
}

TEST(Validate, FullRankMetricFailsCoRank) {
  NCPointData d = NCPointData::flat();
  d.g = Matrix4::Identity();
  const Diagnostics diag = validate(d);
  EXPECT_FALSE(diag.find("g co-rank one")->passed);
  EXPECT_FALSE(diag.ok());
}

TEST(Validate, TorsionIsReportedNotFailed) {
  NCPointData d = NCPointData::flat();
  d.gamma(1, 2, 3) = 0.5;
  const Diagnostics diag = validate(d);
  EXPECT_TRUE(diag.ok());
  EXPECT_DOUBLE_EQ(diag.find("torsion")->residual, 0.5);
}

TEST(Gbar, FlatIsIdentity) {
  const NCPointData d = NCPointData::flat();
  EXPECT_EQ(gbar(d.g, d.tau), Matrix4::Identity());
}

TEST(Gbar, IdentityInAdaptedFrame) {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 200; ++trial) {
    const NCPointData d = oracle::random_nc_point(rng);
    const AdaptedFrame f = adapted_frame(d);
    ASSERT_LE(max_diff(f.vectors.transpose() * gbar(d.g, d.tau) * f.vectors, Matrix4::Identity()), 1e-12);
  }
}

TEST(Gbar, CovariantUnderSpatialRotation) {
  const Matrix3 q = rotation_about(Vector3(1, 2, 3), 0.8);
  Matrix4 p = Matrix4::Identity();
  p.block<3, 3>(1, 1) = q;
  NCPointData d = NCPointData::flat();
  d.g = diag4(0, 1, 2, 3);
  const Matrix4 rotated_g = p.transpose() * d.g * p;
  const Vector4 rotated_tau = p.transpose() * d.tau;
  EXPECT_LE(max_diff(gbar(rotated_g, rotated_tau), p.transpose() * gbar(d.g, d.tau) * p), 1e-14);
}

TEST(Gbar, SingularThrows) {
  EXPECT_THROW(gbar(degenerate_metric(), Vector4::Zero()), Error);
}

TEST(Hbar, DiagonalInverses) {
  EXPECT_EQ(hbar(Matrix4::Identity()), Matrix4::Identity());
  EXPECT_EQ(hbar(diag4(4, 1, 1, 1)), diag4(0.25, 1, 1, 1));
}

TEST(Hbar, RandomSpdResidual) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> u(-1, 1);
  for (int trial = 0; trial < 100; ++trial) {
    Matrix4 a;
    for (int i = 0; i < 16; ++i) a(i) = u(rng);
    const Matrix4 spd = a * a.transpose() + Matrix4::Identity();
    ASSERT_LE(max_diff(hbar(spd) * spd, Matrix4::Identity()), 1e-12);
  }
}

TEST(Hbar, IllConditionedThrows) {
  try {
    hbar(diag4(1, 1, 1, 1e-14));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::ill_conditioned);
  }
}

TEST(Hfield, Flat) {
  const NCPointData d = NCPointData::flat();
  const Matrix4 h = hfield(d);
  EXPECT_EQ(h, diag4(0, 1, 1, 1));
  EXPECT_EQ(h * d.g, diag4(0, 1, 1, 1));
  EXPECT_EQ(Matrix4::Identity() - d.V * d.tau.transpose(), diag4(0, 1, 1, 1));
}

TEST(Hfield, ZeroClockVectorRejected) {
  EXPECT_THROW(hfield(Vector4::Zero(), Matrix4::Identity()), Error);
  NCPointData d = NCPointData::flat();
  d.V.setZero();
  EXPECT_THROW(hfield(d), Error);
}

TEST(Hfield, InconsistentInputsDetected) {
  NCPointData d = NCPointData::flat();
  d.V = Vector4(1, 0.5, 0, 0);  // g V != 0
  try {
    hfield(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::inconsistent_inputs);
  }
}

TEST(Hfield, IdentitiesOnRandomData) {
  std::mt19937_64 rng(33);
  for (int trial = 0; trial < 500; ++trial) {
    const NCPointData d = oracle::random_nc_point(rng);
    ASSERT_TRUE(validate(d).ok());
    const Matrix4 gb = gbar(d.g, d.tau);
    ASSERT_LE(max_diff(hbar(gb) * gb, Matrix4::Identity()), 1e-10);
    const Matrix4 h = hfield(d);
    ASSERT_LE(h_identity_residual(h, d), 1e-10);
    ASSERT_EQ(Eigen::FullPivLU<Matrix4>(h).setThreshold(1e-10).rank(), 3);
  }
}

TEST(AdaptedFrame, FlatIsCoordinateFrame) {
  const AdaptedFrame f = adapted_frame(NCPointData::flat());
  EXPECT_EQ(f.vectors, Matrix4::Identity());
  EXPECT_EQ(f.coframe, Matrix4::Identity());
}

TEST(AdaptedFrame, RotatedSpatialMetric) {
  // g spatial = R D R^T; the frame must satisfy all invariants and span the
  // same directions as R D^-1/2 up to the Gram-Schmidt triangular mixing.
  const Matrix3 r = rotation_about(Vector3(0.3, -1, 0.5), 1.1);
  const Matrix3 s = r * Vector3(1, 4, 9).asDiagonal() * r.transpose();
  NCPointData d = NCPointData::flat();
  d.g.block<3, 3>(1, 1) = s;
  const AdaptedFrame f = adapted_frame(d);
  EXPECT_LE(f.residuals(d).max(), 1e-12);
  const Matrix3 spatial = f.vectors.block<3, 3>(1, 1);
  EXPECT_LE(max_diff(spatial.transpose() * s * spatial, Matrix3::Identity()), 1e-12);
  // X1 is the normalised first seed direction d_x
  EXPECT_LE(max_diff(f.X(1), Vector4::UnitY() / std::sqrt(s(0, 0))), 1e-14);
}

TEST(AdaptedFrame, PureSpatialRotationRotatesFrame) {
  // g spatial = R^T R = I gives the coordinate frame regardless of R
  const Matrix3 r = rotation_about(Vector3(1, 1, 0), 0.4);
  NCPointData d = NCPointData::flat();
  d.g.block<3, 3>(1, 1) = r.transpose() * r;
  EXPECT_LE(max_diff(adapted_frame(d).vectors, Matrix4::Identity()), 1e-14);
}

TEST(AdaptedFrame, BoostedClockVector) {
  const NCPointData d = boosted_flat(0.6);
  ASSERT_TRUE(validate(d).ok());
  const AdaptedFrame f = adapted_frame(d);
  EXPECT_EQ(f.X(0), Vector4(1, 0.6, 0, 0));
  EXPECT_LE(f.residuals(d).max(), 1e-12);
}

TEST(AdaptedFrame, DependentSeedFallsBack) {
  // V = d_t + d_x makes the projected d_t equal to -d_x, the same g-length as
  // d_x, d_y, d_z.
  const NCPointData d = boosted_flat(1.0);
  const AdaptedFrame f = adapted_frame(d);
  EXPECT_LE(f.residuals(d).max(), 1e-12);
}

TEST(AdaptedFrame, Deterministic) {
  std::mt19937_64 rng(34);
  const NCPointData d = oracle::random_nc_point(rng);
  EXPECT_EQ(adapted_frame(d).vectors, adapted_frame(d).vectors);
}

TEST(AdaptedFrame, RandomDataSatisfiesInvariants) {
  std::mt19937_64 rng(35);
  for (int trial = 0; trial < 500; ++trial) {
    const NCPointData d = oracle::random_nc_point(rng);
    ASSERT_LE(adapted_frame(d).residuals(d).max(), 1e-12);
  }
}

TEST(AdaptedFrame, GramSchmidtBreakdown) {
  NCPointData d = NCPointData::flat();
  d.g = diag4(0, 1, 1, 0);
  try {
    adapted_frame(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::degenerate_complement);
  }
}

TEST(Compatibility, FlatIsExactlyZero) {
  const auto r = compatibility_check(FlatField{});
  EXPECT_EQ(r.max(), 0.0);
  EXPECT_EQ(r.points, 81u);
}

TEST(Compatibility, DetectsIncompatibleCoefficient) {
  NCPointData d = NCPointData::flat();
  d.gamma(1, 1, 1) = 1.0;
  const auto r = compatibility_check(ConstantField(d));
  EXPECT_DOUBLE_EQ(r.metric, 2.0);
  EXPECT_DOUBLE_EQ(r.clock, 0.0);
}

TEST(Compatibility, NewtonianPotentialViolatesMetricCompatibility) {
  // nabla_0 g_{0j} = -Gamma^j_00 g_jj = -d_j Phi: the potential's gradient is
  // exactly the metric residual, while tau stays parallel.
  const NewtonianField field(harmonic_potential());
  double max_grad = 0.0;
  for (const Vector4& p : field.check_points())
    for (int i = 1; i < 4; ++i) max_grad = std::max(max_grad, std::abs(field.potential().derivative(p, i)));
  const auto r = compatibility_check(field, 1e-3);
  EXPECT_DOUBLE_EQ(r.metric, max_grad);
  EXPECT_EQ(r.clock, 0.0);
  // the residual does not depend on the step
  EXPECT_DOUBLE_EQ(compatibility_check(field, 5e-4).metric, r.metric);
}

TEST(Compatibility, SecondOrderConvergenceOnCompatibleChart) {
  const oracle::SphericalChartField field;
  const double r1 = compatibility_check(field, 1e-2).max();
  const double r2 = compatibility_check(field, 5e-3).max();
  EXPECT_GT(r1, 0.0);
  EXPECT_LE(compatibility_check(field, 1e-3).max(), 1e-5);
  EXPECT_NEAR(r1 / r2, 4.0, 0.1);
}

TEST(Compatibility, SampledGrid) {
  const oracle::SphericalChartField chart;
  GridSpec grid;
  grid.shape = {3, 4, 4, 3};
  grid.spacing = Vector4(0.1, 0.01, 0.01, 0.01);
  grid.origin = Vector4(0, 1.0, 0.8, 0.2);
  std::vector<NCPointData> samples(grid.size());
  std::array<int, 4> i{};
  for (i[0] = 0; i[0] < 3; ++i[0])
    for (i[1] = 0; i[1] < 4; ++i[1])
      for (i[2] = 0; i[2] < 4; ++i[2])
        for (i[3] = 0; i[3] < 3; ++i[3]) samples[grid.flat_index(i)] = chart.at(grid.point(i));
  const SampledField field(grid, samples);
  const auto r = compatibility_check(field);
  EXPECT_EQ(r.points, 4u);
  EXPECT_LE(r.max(), 1e-4);
  EXPECT_GT(r.max(), 0.0);

  GridSpec thin = grid;
  thin.shape = {1, 4, 4, 3};
  const SampledField flat_in_time(thin, std::vector<NCPointData>(thin.size(), NCPointData::flat()));
  try {
    compatibility_check(flat_in_time);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_samples);
  }
}

TEST(FrameChristoffels, FlatCoordinateFrameVanishes) {
  const FlatField field;
  EXPECT_EQ(frame_christoffels(field, Vector4(0.1, 0.2, 0.3, 0.4)).max_abs(), 0.0);
}

TEST(FrameChristoffels, NewtonianCoordinateFrame) {
  const NewtonianField field(harmonic_potential());
  const Vector4 p(0.5, 0.3, -0.2, 0.7);
  const Christoffels g = frame_christoffels(field, p);
  for (int a = 0; a < 4; ++a)
    for (int c = 0; c < 4; ++c)
      for (int b = 0; b < 4; ++b) {
        const double expected = (a > 0 && c == 0 && b == 0) ? field.potential().derivative(p, a) : 0.0;
        ASSERT_NEAR(g(a, c, b), expected, 1e-14) << a << c << b;
      }
}

TEST(FrameChristoffels, RotatedConstantFrameOnFlatVanishes) {
  const FlatField field;
  Matrix4 cols = Matrix4::Identity();
  cols.block<3, 3>(1, 1) = rotation_about(Vector3(1, -2, 0.5), 0.9);
  const AdaptedFrame frame = AdaptedFrame::from_vectors(cols);
  const Christoffels g = frame_christoffels(field, [&](const Vector4&) { return frame; }, Vector4::Zero());
  EXPECT_EQ(g.max_abs(), 0.0);
}

TEST(FrameChristoffels, StencilOutsideSampledGrid) {
  GridSpec grid;
  grid.shape = {3, 3, 3, 3};
  grid.spacing = Vector4::Constant(0.1);
  const SampledField field(grid, std::vector<NCPointData>(grid.size(), NCPointData::flat()));
  EXPECT_EQ(frame_christoffels(field, Vector4::Constant(0.1)).max_abs(), 0.0);
  try {
    frame_christoffels(field, Vector4::Zero());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_samples);
  }
}

TEST(ConnectionForm, FlatIsZero) {
  const auto form = connection_form(Christoffels::zero());
  for (const auto& dir : form.direction) EXPECT_EQ(dir, So103Element{});
}

TEST(ConnectionForm, NewtonianLandsOutsideSo103) {
  // Gamma^i_00 fills omega^i_0(X_0), the first column, which so(1,0,3)
  // requires to vanish.
  const NewtonianField field(harmonic_potential());
  const Christoffels g = frame_christoffels(field, Vector4(0, 1, 1, 1));
  try {
    connection_form(g);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::not_so103_valued);
  }
}

TEST(ConnectionForm, AntisymmetryViolation) {
  Christoffels g = Christoffels::zero();
  g(1, 2, 2) = 0.5;
  g(2, 2, 1) = 0.4;
  EXPECT_THROW(connection_form(g), Error);
  g(2, 2, 1) = -0.5;
  EXPECT_NO_THROW(connection_form(g));
}

TEST(ConnectionForm, BoostSlotsAccepted) {
  Christoffels g = Christoffels::zero();
  g(0, 1, 2) = 0.25;  // omega^0_2(X_1)
  const auto form = connection_form(g);
  EXPECT_EQ(form.direction[1].boost, Vector3(0, 0.25, 0));
}

TEST(ConnectionForm, SphericalOrthonormalFrame) {
  // X = (d_t, d_r, d_theta / r, d_phi / (r sin theta)):
  // e^1(nabla_{X_2} X_2) = Gamma^r_{theta theta} / r^2 = -1/r, and
  // e^2(nabla_{X_3} X_3) = Gamma^theta_{phi phi} / (r^2 sin^2 theta) = -cot(theta)/r.
  const oracle::SphericalChartField field;
  const double r = 1.5, th = 1.0;
  const auto form = connection_form(frame_christoffels(field, Vector4(0, r, th, 0.3)), kFdConnectionTolerance);
  for (const auto& dir : form.direction) EXPECT_LE(dir.boost.norm(), 1e-12);
  EXPECT_NEAR(form.direction[2].rotation[0], -1.0 / r, 1e-6);
  EXPECT_NEAR(form.direction[3].rotation[2], -std::cos(th) / std::sin(th) / r, 1e-6);
  EXPECT_NEAR(form.direction[1].rotation.norm(), 0.0, 1e-6);
}
