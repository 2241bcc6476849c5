#pragma once

// Seeded generators for property checks (unit tests and verify suites).

#include <random>

#include "degspin/clifford.hpp"
#include "degspin/spin_groups.hpp"

namespace degspin::sampling {

using Rng = std::mt19937_64;

inline Multivector random_multivector(Rng& rng, double scale = 1.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  Multivector::Coefficients c{};
  for (double& x : c) x = u(rng);
  return Multivector(c);
}

/// Small-integer coefficients, so products are exact in double precision.
inline Multivector random_integer_multivector(Rng& rng, int bound = 5) {
  std::uniform_int_distribution<int> u(-bound, bound);
  Multivector::Coefficients c{};
  for (double& x : c) x = u(rng);
  return Multivector(c);
}

/// Uniform on the unit 3-sphere.
inline Spin3Element random_spin3(Rng& rng) {
  std::normal_distribution<double> n;
  double a = n(rng), b = n(rng), c = n(rng), d = n(rng);
  const double r = std::sqrt(a * a + b * b + c * c + d * d);
  return Spin3Element::normalized(a / r, b / r, c / r, d / r);
}

inline Vector3 random_vector3(Rng& rng, double scale = 2.0) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

inline Spin103Element random_spin103(Rng& rng) { return {random_spin3(rng), random_vector3(rng)}; }

}  // namespace degspin::sampling
