#pragma once

// Brute-force reference computations used by the test suites and by
// `degspin verify`. Nothing here calls into the code paths it is used to check.

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <utility>
#include <vector>

namespace degspin::oracle {

/// Product of two basis blades given as generator index lists (0 = f,
/// 1..3 = e_i), by adjacent transpositions followed by contraction of equal
/// neighbours. Returns the sign and the sorted surviving generators.
inline std::pair<int, std::vector<int>> blade_product(std::vector<int> a, const std::vector<int>& b) {
  static constexpr int squares[4] = {0, 1, 1, 1};
  std::vector<int> word = std::move(a);
  word.insert(word.end(), b.begin(), b.end());
  int sign = 1;
  // bubble sort, one sign flip per swap of distinct generators
  for (std::size_t pass = 0; pass < word.size(); ++pass)
    for (std::size_t i = 0; i + 1 < word.size(); ++i)
      if (word[i] > word[i + 1]) {
        std::swap(word[i], word[i + 1]);
        sign = -sign;
      }
  std::vector<int> out;
  for (std::size_t i = 0; i < word.size();) {
    if (i + 1 < word.size() && word[i] == word[i + 1]) {
      sign *= squares[word[i]];
      i += 2;
    } else {
      out.push_back(word[i]);
      ++i;
    }
  }
  if (sign == 0) out.clear();
  return {sign, out};
}

inline std::vector<int> generators_of(unsigned mask) {
  std::vector<int> g;
  for (int i = 0; i < 4; ++i)
    if (mask & (1u << i)) g.push_back(i);
  return g;
}

inline unsigned mask_of(const std::vector<int>& gens) {
  unsigned m = 0;
  for (int g : gens) m |= 1u << g;
  return m;
}

/// Exact free-Schrodinger evolution of a periodic grid function under the
/// compact fourth-order Laplacian (1 + d2/12)^-1 d2 / dx^2, by direct DFT
/// diagonalisation of the circulant operator. O(N^2); used as the reference
/// for the time-discretisation error of the Crank-Nicolson integrator.
inline std::vector<std::complex<double>> semi_discrete_free_evolution(
    const std::vector<std::complex<double>>& psi0, double dx, double mass, double t) {
  using cd = std::complex<double>;
  const std::size_t n = psi0.size();
  std::vector<cd> modes(n);
  for (std::size_t k = 0; k < n; ++k) {
    cd acc = 0.0;
    for (std::size_t j = 0; j < n; ++j)
      acc += psi0[j] * std::polar(1.0, -2.0 * std::numbers::pi * double(k * j % n) / double(n));
    const double s2 = std::pow(std::sin(std::numbers::pi * double(k) / double(n)), 2);
    const double energy = 4.0 * s2 / (2.0 * mass * dx * dx * (1.0 - s2 / 3.0));
    modes[k] = acc * std::polar(1.0, -energy * t);
  }
  std::vector<cd> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    cd acc = 0.0;
    for (std::size_t k = 0; k < n; ++k)
      acc += modes[k] * std::polar(1.0, 2.0 * std::numbers::pi * double(k * j % n) / double(n));
    out[j] = acc / double(n);
  }
  return out;
}

}  // namespace degspin::oracle
