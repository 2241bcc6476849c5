#pragma once

// Degenerate Clifford algebra Cl(1,0,3) on generators (f, e1, e2, e3) with
// squares (0, +1, +1, +1). Basis blades are indexed by a 4-bit mask, bit 0 for
// the null generator f and bits 1..3 for e1..e3. Products are taken in
// ascending bit order.

#include <array>
#include <bit>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <span>
#include <string>

namespace degspin {

/// Fixed signature (r, p, q) = (1, 0, 3). Documentation only: the algebra below
/// is hard-wired to it.
struct Signature {
  static constexpr int r = 1;
  static constexpr int p = 0;
  static constexpr int q = 3;
  static constexpr int dim = r + p + q;
  static constexpr int blade_count = 1 << dim;

  /// Square of generator `i` in the order (f, e1, e2, e3).
  static constexpr int generator_square(int i) { return i < r ? 0 : (i < r + p ? -1 : 1); }
};

class BladeMask {
 public:
  constexpr BladeMask() = default;
  constexpr explicit BladeMask(unsigned bits) : bits_(static_cast<std::uint8_t>(bits & 0xFu)) {}

  constexpr unsigned bits() const { return bits_; }
  constexpr int grade() const { return std::popcount(static_cast<unsigned>(bits_)); }
  constexpr bool contains_null() const { return (bits_ & 1u) != 0; }

  friend constexpr bool operator==(BladeMask, BladeMask) = default;
  friend constexpr BladeMask operator|(BladeMask a, BladeMask b) { return BladeMask(a.bits_ | b.bits_); }
  friend constexpr BladeMask operator^(BladeMask a, BladeMask b) { return BladeMask(a.bits_ ^ b.bits_); }

 private:
  std::uint8_t bits_ = 0;
};

namespace blade {
inline constexpr BladeMask scalar{0};
inline constexpr BladeMask f{1};
inline constexpr BladeMask e1{2};
inline constexpr BladeMask e2{4};
inline constexpr BladeMask e3{8};

/// Spatial generator e_i, i in 1..3.
constexpr BladeMask e(int i) { return BladeMask(1u << i); }
/// e_i e_j with i < j.
constexpr BladeMask e(int i, int j) { return e(i) | e(j); }
/// f e_i.
constexpr BladeMask fe(int i) { return f | e(i); }

inline std::string name(BladeMask m) {
  if (m.bits() == 0) return "1";
  std::string out;
  if (m.contains_null()) out += "f";
  for (int i = 1; i <= 3; ++i)
    if (m.bits() & (1u << i)) out += "e" + std::to_string(i);
  return out;
}
}  // namespace blade

struct BladeProduct {
  int sign = 0;  // -1, 0 or +1
  BladeMask result{};
};

/// Product of two basis blades. The reordering sign counts the transpositions
/// needed to sort the concatenated generator list; each repeated generator then
/// contracts with its square. Any contraction on f gives (0, scalar).
constexpr BladeProduct blade_mul(BladeMask a, BladeMask b) {
  unsigned swaps = 0;
  for (unsigned shifted = a.bits() >> 1; shifted != 0; shifted >>= 1)
    swaps += std::popcount(shifted & b.bits());
  int sign = (swaps & 1u) ? -1 : 1;
  unsigned common = a.bits() & b.bits();
  for (int i = 0; i < Signature::dim; ++i)
    if (common & (1u << i)) sign *= Signature::generator_square(i);
  if (sign == 0) return {0, blade::scalar};
  return {sign, a ^ b};
}

namespace detail {
inline constexpr auto blade_table = [] {
  std::array<std::array<BladeProduct, 16>, 16> table{};
  for (unsigned i = 0; i < 16; ++i)
    for (unsigned j = 0; j < 16; ++j) table[i][j] = blade_mul(BladeMask(i), BladeMask(j));
  return table;
}();
}  // namespace detail

class Multivector {
 public:
  using Coefficients = std::array<double, Signature::blade_count>;

  constexpr Multivector() = default;
  constexpr explicit Multivector(const Coefficients& coeffs) : coeffs_(coeffs) {}

  static constexpr Multivector scalar(double value) {
    Multivector m;
    m.coeffs_[0] = value;
    return m;
  }
  static constexpr Multivector blade(BladeMask mask, double coeff = 1.0) {
    Multivector m;
    m.coeffs_[mask.bits()] = coeff;
    return m;
  }
  /// v1 e1 + v2 e2 + v3 e3.
  static constexpr Multivector spatial_vector(double v1, double v2, double v3) {
    Multivector m;
    m.coeffs_[blade::e1.bits()] = v1;
    m.coeffs_[blade::e2.bits()] = v2;
    m.coeffs_[blade::e3.bits()] = v3;
    return m;
  }

  constexpr double operator[](BladeMask m) const { return coeffs_[m.bits()]; }
  constexpr double& operator[](BladeMask m) { return coeffs_[m.bits()]; }
  constexpr const Coefficients& coeffs() const { return coeffs_; }

  constexpr Multivector& operator+=(const Multivector& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += o.coeffs_[i];
    return *this;
  }
  constexpr Multivector& operator-=(const Multivector& o) {
    for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] -= o.coeffs_[i];
    return *this;
  }
  constexpr Multivector& operator*=(double s) {
    for (double& c : coeffs_) c *= s;
    return *this;
  }

  friend constexpr Multivector operator+(Multivector a, const Multivector& b) { return a += b; }
  friend constexpr Multivector operator-(Multivector a, const Multivector& b) { return a -= b; }
  friend constexpr Multivector operator-(Multivector a) { return a *= -1.0; }
  friend constexpr Multivector operator*(Multivector a, double s) { return a *= s; }
  friend constexpr Multivector operator*(double s, Multivector a) { return a *= s; }
  friend constexpr bool operator==(const Multivector&, const Multivector&) = default;

  bool is_finite() const {
    for (double c : coeffs_)
      if (!std::isfinite(c)) return false;
    return true;
  }

  /// Largest absolute coefficient.
  double max_abs() const {
    double m = 0.0;
    for (double c : coeffs_) m = std::max(m, std::abs(c));
    return m;
  }

 private:
  Coefficients coeffs_{};
};

/// Geometric (Clifford) product.
constexpr Multivector gp(const Multivector& a, const Multivector& b) {
  Multivector out;
  for (unsigned i = 0; i < 16; ++i) {
    const double ai = a[BladeMask(i)];
    if (ai == 0.0) continue;
    for (unsigned j = 0; j < 16; ++j) {
      const double bj = b[BladeMask(j)];
      if (bj == 0.0) continue;
      const BladeProduct p = detail::blade_table[i][j];
      if (p.sign == 0) continue;
      out[p.result] += p.sign * ai * bj;
    }
  }
  return out;
}

constexpr Multivector operator*(const Multivector& a, const Multivector& b) { return gp(a, b); }

constexpr Multivector grade_project(const Multivector& a, int k) {
  Multivector out;
  for (unsigned i = 0; i < 16; ++i)
    if (BladeMask(i).grade() == k) out[BladeMask(i)] = a[BladeMask(i)];
  return out;
}

/// Reversion: grade-k part scaled by (-1)^(k(k-1)/2).
constexpr Multivector reverse(const Multivector& a) {
  Multivector out;
  for (unsigned i = 0; i < 16; ++i) {
    const int k = BladeMask(i).grade();
    out[BladeMask(i)] = ((k * (k - 1) / 2) % 2 == 0) ? a[BladeMask(i)] : -a[BladeMask(i)];
  }
  return out;
}

inline std::ostream& operator<<(std::ostream& os, const Multivector& m) {
  bool first = true;
  for (unsigned i = 0; i < 16; ++i) {
    const double c = m[BladeMask(i)];
    if (c == 0.0) continue;
    if (!first) os << " + ";
    os << c;
    if (i != 0) os << "*" << blade::name(BladeMask(i));
    first = false;
  }
  if (first) os << 0;
  return os;
}

}  // namespace degspin
