#include <gtest/gtest.h>

#include "degspin/levy_leblond.hpp"
#include "degspin/verify/random.hpp"

using namespace degspin;
using namespace degspin::sampling;

namespace {

const Vector2c kUp(1.0, 0.0);

Vector2c random_unit_spinor(Rng& rng) {
  std::normal_distribution<double> n;
  Vector2c u(cd(n(rng), n(rng)), cd(n(rng), n(rng)));
  return u / u.norm();
}

}  // namespace

TEST(Planewave, Examples) {
  EXPECT_EQ(planewave_check(Vector3::Zero(), 1.0, kUp), 0.0);
  EXPECT_LE(planewave_check(Vector3(1, 0, 0), 1.0, kUp), 1e-12);
  EXPECT_NEAR(planewave_check(Vector3(1, 0, 0), 1.0, kUp, 1.0), 0.5, 1e-15);
  const Spinor u = planewave_amplitude(Vector3(1, 0, 0), 1.0, kUp);
  EXPECT_EQ(u.head<2>(), Vector2c(pauli(1) * kUp / 2.0));
}

TEST(Planewave, RandomWavevectorsSatisfyDispersion) {
  Rng rng(61);
  std::uniform_real_distribution<double> mass(0.2, 5.0);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector3 k = random_vector3(rng, 3.0);
    ASSERT_LE(planewave_check(k, mass(rng), random_unit_spinor(rng)), 1e-12);
  }
}

TEST(Planewave, DispersionPerturbationMagnitude) {
  Rng rng(62);
  std::uniform_real_distribution<double> delta(-0.1, 0.1);
  for (int trial = 0; trial < 100; ++trial) {
    const Vector3 k = random_vector3(rng, 2.0);
    const Vector2c u2 = 2.0 * random_unit_spinor(rng);
    const double m = 1.7, d = delta(rng);
    const double r = planewave_check(k, m, u2, k.squaredNorm() / (2 * m) + d);
    ASSERT_GE(r, 0.4 * std::abs(d) * u2.norm());
    ASSERT_NEAR(r, std::abs(d) * u2.norm(), 1e-12);
  }
}

TEST(Planewave, InvalidMass) {
  try {
    planewave_check(Vector3::Zero(), 0.0, kUp);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::invalid_mass);
  }
  EXPECT_THROW(planewave_check(Vector3::Zero(), -2.0, kUp), Error);
}

TEST(GaussianFactor, CoefficientRatesMatchDifferences) {
  const auto f = GaussianFactor::free_packet(1.3, 0.8, 1.5, 0.2);
  const double h = 1e-4;
  for (double t : {0.0, 0.7, 3.0}) {
    const auto co = f.at(t), up = f.at(t + h), dn = f.at(t - h);
    EXPECT_LE(std::abs((up.a - dn.a) / (2 * h) - co.a_dot), 1e-7);
    EXPECT_LE(std::abs((up.b - dn.b) / (2 * h) - co.b_dot), 1e-7);
    EXPECT_LE(std::abs((up.c - dn.c) / (2 * h) - co.c_dot), 1e-7);
  }
}

TEST(GaussianFactor, InitialProfileAndSpreading) {
  // |chi|^2 stays normalised with variance s0^2 + (t / (2 m s0))^2.
  const double m = 1.0, s0 = 1.0, k0 = 1.0, x0 = -0.5;
  const auto f = GaussianFactor::free_packet(m, s0, k0, x0);
  EXPECT_LE(std::abs(f.value(0.3, 0.0) -
                     std::pow(2 * M_PI * s0 * s0, -0.25) * std::exp(-0.64 / (4 * s0 * s0) + cd(0, k0 * 0.3))),
            1e-15);
  for (double t : {0.0, 1.0, 4.0}) {
    const double dx = 0.01;
    double norm = 0, mean = 0, second = 0;
    for (double x = -60; x <= 60; x += dx) {
      const double p = std::norm(f.value(x, t)) * dx;
      norm += p;
      mean += x * p;
      second += x * x * p;
    }
    const double var = second - mean * mean;
    EXPECT_NEAR(norm, 1.0, 1e-10);
    EXPECT_NEAR(mean, x0 + k0 / m * t, 1e-9);
    EXPECT_NEAR(var, s0 * s0 + std::pow(t / (2 * m * s0), 2), 1e-9);
  }
}

TEST(GaussianFactor, JetMatchesDifferences) {
  const auto f = GaussianFactor::free_packet(0.9, 0.7, -1.2, 0.4);
  const double x = 0.9, t = 0.6, h = 1e-4;
  const auto j = f.jet(x, t);
  EXPECT_LE(std::abs(j.value - f.value(x, t)), 1e-15);
  EXPECT_LE(std::abs(j.dx - (f.value(x + h, t) - f.value(x - h, t)) / (2 * h)), 1e-7);
  EXPECT_LE(std::abs(j.dxx - (f.value(x + h, t) - 2.0 * f.value(x, t) + f.value(x - h, t)) / (h * h)), 1e-5);
  EXPECT_LE(std::abs(j.dt - (f.value(x, t + h) - f.value(x, t - h)) / (2 * h)), 1e-7);
  const cd dtx = (f.value(x + h, t + h) - f.value(x + h, t - h) - f.value(x - h, t + h) + f.value(x - h, t - h)) / (4 * h * h);
  EXPECT_LE(std::abs(j.dtx - dtx), 1e-5);
}

TEST(ReduceCheck, FreeGaussianPacket) {
  const double m = 1.0;
  const ProductProfile chi{{GaussianFactor::free_packet(m, 1.0, 1.0, 0.0), GaussianFactor::free_packet(m, 0.7, -0.5, 0.3),
                            GaussianFactor::free_packet(m, 1.4, 0.0, -0.2)},
                           Vector2c(cd(0.6, 0.0), cd(0.0, -0.8))};
  const ReduceReport r = reduce_check(chi, m, reduce_check_points());
  EXPECT_EQ(r.points, 81u);
  EXPECT_LE(r.ll_max, 1e-10);
  EXPECT_LE(r.schrodinger_max, 1e-10);
  EXPECT_TRUE(r.equivalent());
}

TEST(ReduceCheck, PlaneWave) {
  const double m = 0.8;
  const ProductProfile chi{{GaussianFactor::plane_wave(m, 1.0), GaussianFactor::plane_wave(m, -0.4),
                            GaussianFactor::plane_wave(m, 0.0)}};
  const ReduceReport r = reduce_check(chi, m, reduce_check_points());
  EXPECT_LE(r.ll_max, 1e-12);
  EXPECT_LE(r.schrodinger_max, 1e-12);
}

TEST(ReduceCheck, StaticGaussianResidualsAgree) {
  const double m = 1.0;
  const ProductProfile chi{{GaussianFactor::static_packet(m, 1.0, 1.0, 0.0), GaussianFactor::plane_wave(m, 0.0),
                            GaussianFactor::plane_wave(m, 0.0)}};
  const ReduceReport r = reduce_check(chi, m, reduce_check_points());
  EXPECT_GT(r.ll_max, 1e-2);
  EXPECT_LE(r.identity_gap, 1e-10);
  EXPECT_TRUE(r.equivalent());
}

TEST(ReduceCheck, WrongDispersionDetected) {
  const double m = 1.0;
  const ProductProfile chi{{GaussianFactor::plane_wave(m, 1.0, 0.7), GaussianFactor::plane_wave(m, 0.0),
                            GaussianFactor::plane_wave(m, 0.0)}};
  const ReduceReport r = reduce_check(chi, m, reduce_check_points());
  EXPECT_NEAR(r.ll_max, 0.2, 1e-12);
  EXPECT_NEAR(r.schrodinger_max, 0.2, 1e-12);
}

TEST(ReduceCheck, InvalidMass) {
  const ProductProfile chi{{GaussianFactor::plane_wave(1, 0), GaussianFactor::plane_wave(1, 0), GaussianFactor::plane_wave(1, 0)}};
  EXPECT_THROW(reduce_check(chi, 0.0, reduce_check_points()), Error);
  EXPECT_THROW(GaussianFactor::free_packet(-1.0, 1.0, 0.0, 0.0), Error);
}
