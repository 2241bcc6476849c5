#include <gtest/gtest.h>

#include "degspin/clifford.hpp"
#include "degspin/verify/oracles.hpp"
#include "degspin/verify/random.hpp"

using namespace degspin;
using degspin::sampling::Rng;

namespace {

double max_diff(const Multivector& a, const Multivector& b) { return (a - b).max_abs(); }

}  // namespace

TEST(BladeMul, NullGeneratorSquaresToZero) {
  const auto p = blade_mul(blade::f, blade::f);
  EXPECT_EQ(p.sign, 0);
  EXPECT_EQ(p.result, blade::scalar);
}

TEST(BladeMul, SpatialGeneratorSquaresToOne) {
  const auto p = blade_mul(blade::e1, blade::e1);
  EXPECT_EQ(p.sign, 1);
  EXPECT_EQ(p.result, blade::scalar);
}

TEST(BladeMul, SingleTransposition) {
  const auto p = blade_mul(blade::e2, blade::e1);
  EXPECT_EQ(p.sign, -1);
  EXPECT_EQ(p.result, blade::e(1, 2));
}

TEST(BladeMul, FullTableMatchesReorderingOracle) {
  for (unsigned a = 0; a < 16; ++a) {
    for (unsigned b = 0; b < 16; ++b) {
      const auto [sign, gens] = oracle::blade_product(oracle::generators_of(a), oracle::generators_of(b));
      const auto p = blade_mul(BladeMask(a), BladeMask(b));
      EXPECT_EQ(p.sign, sign) << a << " * " << b;
      EXPECT_EQ(p.result.bits(), sign == 0 ? 0u : oracle::mask_of(gens)) << a << " * " << b;
    }
  }
}

TEST(GeometricProduct, UnitLaw) {
  Rng rng(1);
  const Multivector a = degspin::sampling::random_multivector(rng);
  EXPECT_EQ(gp(Multivector::scalar(1.0), a), a);
  EXPECT_EQ(gp(a, Multivector::scalar(1.0)), a);
}

TEST(GeometricProduct, NullDirectionProductsVanish) {
  Rng rng(2);
  const Multivector f = Multivector::blade(blade::f);
  for (int trial = 0; trial < 50; ++trial) {
    const Vector3 v = degspin::sampling::random_vector3(rng);
    const Vector3 w = degspin::sampling::random_vector3(rng);
    const Multivector vf = gp(Multivector::spatial_vector(v[0], v[1], v[2]), f);
    const Multivector wf = gp(Multivector::spatial_vector(w[0], w[1], w[2]), f);
    EXPECT_EQ(gp(vf, wf), Multivector{});
  }
}

TEST(GeometricProduct, BivectorProduct) {
  const Multivector r = gp(Multivector::blade(blade::e(1, 2)), Multivector::blade(blade::e(2, 3)));
  EXPECT_EQ(r, Multivector::blade(blade::e(1, 3)));
}

TEST(GeometricProduct, GeneratorRelationsExact) {
  const Multivector f = Multivector::blade(blade::f);
  for (int i = 1; i <= 3; ++i) {
    const Multivector ei = Multivector::blade(blade::e(i));
    EXPECT_EQ(gp(f, ei) + gp(ei, f), Multivector{});
    for (int j = 1; j <= 3; ++j) {
      const Multivector ej = Multivector::blade(blade::e(j));
      EXPECT_EQ(gp(ei, ej) + gp(ej, ei), Multivector::scalar(i == j ? 2.0 : 0.0));
    }
  }
  EXPECT_EQ(gp(f, f), Multivector{});
}

TEST(GeometricProduct, AssociativeOnIntegerInputsExactly) {
  Rng rng(3);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = degspin::sampling::random_integer_multivector(rng);
    const auto b = degspin::sampling::random_integer_multivector(rng);
    const auto c = degspin::sampling::random_integer_multivector(rng);
    ASSERT_EQ(gp(gp(a, b), c), gp(a, gp(b, c)));
  }
}

TEST(GeometricProduct, AssociativeOnRealInputs) {
  Rng rng(4);
  for (int trial = 0; trial < 1000; ++trial) {
    const auto a = degspin::sampling::random_multivector(rng);
    const auto b = degspin::sampling::random_multivector(rng);
    const auto c = degspin::sampling::random_multivector(rng);
    ASSERT_LE(max_diff(gp(gp(a, b), c), gp(a, gp(b, c))), 1e-12);
  }
}

TEST(GeometricProduct, BilinearOnIntegerInputs) {
  Rng rng(5);
  for (int trial = 0; trial < 500; ++trial) {
    const auto a = degspin::sampling::random_integer_multivector(rng);
    const auto b = degspin::sampling::random_integer_multivector(rng);
    const auto c = degspin::sampling::random_integer_multivector(rng);
    ASSERT_EQ(gp(a, b + c), gp(a, b) + gp(a, c));
    ASSERT_EQ(gp(a + b, c), gp(a, c) + gp(b, c));
    ASSERT_EQ(gp(3.0 * a, b), 3.0 * gp(a, b));
  }
}

TEST(GradeProject, SelectsOneGrade) {
  const Multivector a = Multivector::scalar(1.0) + Multivector::blade(blade::e1) +
                        Multivector::blade(blade::e(1, 2));
  EXPECT_EQ(grade_project(a, 1), Multivector::blade(blade::e1));
}

TEST(GradeProject, GradesPartitionTheMultivector) {
  Rng rng(6);
  const auto a = degspin::sampling::random_multivector(rng);
  Multivector sum;
  for (int k = 0; k <= 4; ++k) sum += grade_project(a, k);
  EXPECT_EQ(sum, a);
}

TEST(GradeProject, TrivectorFromVectorTimesBivector) {
  const Multivector p = gp(Multivector::blade(blade::e1), Multivector::blade(blade::e(2, 3)));
  EXPECT_EQ(grade_project(p, 3), Multivector::blade(blade::e1 | blade::e2 | blade::e3));
}

TEST(Reverse, ScalarAndBivector) {
  EXPECT_EQ(reverse(Multivector::scalar(2.5)), Multivector::scalar(2.5));
  EXPECT_EQ(reverse(Multivector::blade(blade::e(1, 2))), Multivector::blade(blade::e(1, 2), -1.0));
}

TEST(Reverse, IsAnAntiAutomorphism) {
  Rng rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = degspin::sampling::random_integer_multivector(rng);
    const auto b = degspin::sampling::random_integer_multivector(rng);
    ASSERT_EQ(reverse(gp(a, b)), gp(reverse(b), reverse(a)));
  }
}
