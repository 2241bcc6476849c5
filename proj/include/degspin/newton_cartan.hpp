#pragma once

// Newton-Cartan tensor calculus at sampled points: the degenerate spatial
// metric g (co-rank one), clock form tau, its null vector V with tau(V) = 1,
// and a linear connection Gamma. Coordinates are ordered (t, x, y, z).
//
// Index convention for connection coefficients: gamma(mu, lambda, nu) is
// Gamma^mu_{lambda nu}, with lambda the differentiation direction, so that
// nabla_{d_lambda} d_nu = Gamma^mu_{lambda nu} d_mu. The same layout holds for
// frame coefficients Gamma^a_{cb} = e^a(nabla_{X_c} X_b).

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <memory>
#include <numeric>
#include <optional>
#include <string>
#include <vector>

#include "degspin/error.hpp"
#include "degspin/spin_groups.hpp"

namespace degspin {

using Vector4 = Eigen::Vector4d;

inline constexpr double kTensorTolerance = 1e-12;
inline constexpr double kCoRankThreshold = 1e-10;
inline constexpr double kPivotThreshold = 1e-10;
inline constexpr double kConditionLimit = 1e12;
inline constexpr double kIdentityTolerance = 1e-10;
inline constexpr double kConnectionTolerance = 1e-10;
inline constexpr double kFdConnectionTolerance = 1e-5;
inline constexpr double kAnalyticFdStep = 1e-3;

class Christoffels {
 public:
  static Christoffels zero() { return Christoffels(); }

  double operator()(int upper, int lower_diff, int lower) const { return c_[upper](lower_diff, lower); }
  double& operator()(int upper, int lower_diff, int lower) { return c_[upper](lower_diff, lower); }

  /// Lower-index matrix for a fixed upper index.
  const Matrix4& slice(int upper) const { return c_[upper]; }

  double max_abs() const {
    double m = 0.0;
    for (const auto& s : c_) m = std::max(m, s.cwiseAbs().maxCoeff());
    return m;
  }

  /// max |Gamma^mu_{lambda nu} - Gamma^mu_{nu lambda}|.
  double torsion() const {
    double m = 0.0;
    for (const auto& s : c_) m = std::max(m, (s - s.transpose()).cwiseAbs().maxCoeff());
    return m;
  }

  bool all_finite() const {
    return std::all_of(c_.begin(), c_.end(), [](const Matrix4& s) { return s.allFinite(); });
  }

 private:
  Christoffels() {
    for (auto& s : c_) s.setZero();
  }

  std::array<Matrix4, 4> c_;
};

struct NCPointData {
  Matrix4 g = Matrix4::Zero();
  Vector4 tau = Vector4::Zero();
  Vector4 V = Vector4::Zero();
  Christoffels gamma = Christoffels::zero();

  /// g = diag(0,1,1,1), tau = dt, V = d_t, Gamma = 0.
  static NCPointData flat() {
    NCPointData d;
    d.g = degenerate_metric();
    d.tau = Vector4::UnitX();
    d.V = Vector4::UnitX();
    return d;
  }
};

struct DiagnosticCheck {
  std::string name;
  bool passed = false;
  double residual = 0.0;
  bool informational = false;  // reported, never a failure
};

struct Diagnostics {
  std::vector<DiagnosticCheck> checks;

  bool ok() const {
    return std::all_of(checks.begin(), checks.end(),
                       [](const DiagnosticCheck& c) { return c.passed || c.informational; });
  }

  const DiagnosticCheck* find(const std::string& name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
};

namespace detail {

/// Basis of ker(tau) as the columns of a 4x3 matrix (empty if tau = 0 gives a
/// 4-dimensional kernel).
inline Eigen::MatrixXd clock_kernel(const Vector4& tau) {
  Eigen::FullPivLU<Eigen::Matrix<double, 1, 4>> lu(tau.transpose());
  return lu.kernel();
}

}  // namespace detail

/// Pass/fail with residuals for every point invariant. Never throws.
inline Diagnostics validate(const NCPointData& d) {
  Diagnostics out;
  auto add = [&](std::string name, bool passed, double residual, bool info = false) {
    out.checks.push_back({std::move(name), passed, residual, info});
  };

  const bool finite = d.g.allFinite() && d.tau.allFinite() && d.V.allFinite() && d.gamma.all_finite();
  add("finite", finite, finite ? 0.0 : INFINITY);
  if (!finite) return out;

  const double asym = (d.g - d.g.transpose()).cwiseAbs().maxCoeff();
  add("g symmetric", asym <= kTensorTolerance, asym);

  Eigen::JacobiSVD<Matrix4> svd(d.g);
  const Vector4 sv = svd.singularValues();  // descending
  add("g co-rank one", sv[3] < kCoRankThreshold && sv[2] > kCoRankThreshold, sv[3]);

  const double gv = (d.g * d.V).cwiseAbs().maxCoeff();
  add("g(V, .) = 0", gv <= kTensorTolerance, gv);

  const double clock = std::abs(d.tau.dot(d.V) - 1.0);
  add("tau(V) = 1", clock <= kTensorTolerance, clock);

  const Eigen::MatrixXd k = detail::clock_kernel(d.tau);
  double min_eig = -INFINITY;
  if (k.cols() == 3) {
    const Matrix3 restricted = k.transpose() * (0.5 * (d.g + d.g.transpose())) * k;
    min_eig = Eigen::SelfAdjointEigenSolver<Matrix3>(restricted).eigenvalues().minCoeff();
  }
  add("g positive definite on ker tau", min_eig > kCoRankThreshold, min_eig);

  add("torsion", true, d.gamma.torsion(), true);
  return out;
}

/// gbar = tau (x) tau + g.
inline Matrix4 gbar(const Matrix4& g, const Vector4& tau) {
  const Matrix4 out = tau * tau.transpose() + g;
  if (Eigen::FullPivLU<Matrix4>(out).rank() < 4)
    throw Error(ErrorKind::invalid_input, "tau (x) tau + g is singular");
  return out;
}

/// Inverse of gbar, checked by condition number and residual.
inline Matrix4 hbar(const Matrix4& gbar_matrix) {
  Eigen::JacobiSVD<Matrix4> svd(gbar_matrix);
  const Vector4 sv = svd.singularValues();
  const double cond = sv[3] > 0.0 ? sv[0] / sv[3] : INFINITY;
  if (!(cond <= kConditionLimit))
    throw Error(ErrorKind::ill_conditioned, "gbar condition number " + format_g(cond));
  const Matrix4 inv = gbar_matrix.inverse();
  const double res = (inv * gbar_matrix - Matrix4::Identity()).cwiseAbs().maxCoeff();
  if (res > kIdentityTolerance)
    throw Error(ErrorKind::ill_conditioned, "hbar gbar - I residual " + format_g(res));
  return 0.5 * (inv + inv.transpose());
}

/// h = -V (x) V + hbar.
inline Matrix4 hfield(const Vector4& V, const Matrix4& hbar_matrix) {
  if (V.cwiseAbs().maxCoeff() == 0.0) throw Error(ErrorKind::invalid_input, "V is zero");
  return -V * V.transpose() + hbar_matrix;
}

/// Residual of h g = delta - V (x) tau.
inline double h_identity_residual(const Matrix4& h, const NCPointData& d) {
  return (h * d.g - (Matrix4::Identity() - d.V * d.tau.transpose())).cwiseAbs().maxCoeff();
}

/// h built from a point's data, with the identity h g = delta - V tau enforced.
inline Matrix4 hfield(const NCPointData& d) {
  const Matrix4 h = hfield(d.V, hbar(gbar(d.g, d.tau)));
  const double res = h_identity_residual(h, d);
  if (!(res <= kIdentityTolerance))
    throw Error(ErrorKind::inconsistent_inputs, "h g - (delta - V tau) residual " + format_g(res));
  return h;
}

struct AdaptedFrame {
  Matrix4 vectors = Matrix4::Identity();  // column a holds X_a in coordinates
  Matrix4 coframe = Matrix4::Identity();  // row a holds e^a

  Vector4 X(int a) const { return vectors.col(a); }
  Vector4 e(int a) const { return coframe.row(a).transpose(); }

  static AdaptedFrame coordinate() { return {}; }

  static AdaptedFrame from_vectors(const Matrix4& columns) {
    return {columns, columns.inverse()};
  }

  struct Residuals {
    double clock_vector = 0.0;  // |X0 - V|
    double clock_form = 0.0;    // |e^0 - tau|
    double spatial_clock = 0.0; // max |tau(X_i)|
    double orthonormal = 0.0;   // max |g(X_i, X_j) - delta_ij|
    double duality = 0.0;       // max |e^a(X_b) - delta^a_b|

    double max() const { return std::max({clock_vector, clock_form, spatial_clock, orthonormal, duality}); }
  };

  Residuals residuals(const NCPointData& d) const {
    Residuals r;
    r.clock_vector = (X(0) - d.V).cwiseAbs().maxCoeff();
    r.clock_form = (e(0) - d.tau).cwiseAbs().maxCoeff();
    for (int i = 1; i < 4; ++i) {
      r.spatial_clock = std::max(r.spatial_clock, std::abs(d.tau.dot(X(i))));
      for (int j = 1; j < 4; ++j)
        r.orthonormal = std::max(r.orthonormal, std::abs(X(i).dot(d.g * X(j)) - (i == j ? 1.0 : 0.0)));
    }
    r.duality = (coframe * vectors - Matrix4::Identity()).cwiseAbs().maxCoeff();
    return r;
  }
};

/// X0 = V; X1..X3 by Gram-Schmidt under g over the projections
/// d_mu - tau_mu V of the coordinate directions onto ker tau. The three with
/// the largest g-length (ties by index) are used, dependent ones skipped in
/// favour of the fourth. The coframe is the matrix inverse.
inline AdaptedFrame adapted_frame(const NCPointData& d) {
  const double clock = std::abs(d.tau.dot(d.V) - 1.0);
  if (!(clock <= kTensorTolerance))
    throw Error(ErrorKind::invalid_input, "tau(V) = 1 violated by " + format_g(clock));

  std::array<Vector4, 4> candidates;
  std::array<double, 4> length{};
  for (int mu = 0; mu < 4; ++mu) {
    candidates[mu] = Vector4::Unit(mu) - d.tau[mu] * d.V;
    length[mu] = std::sqrt(std::max(0.0, candidates[mu].dot(d.g * candidates[mu])));
  }
  std::array<int, 4> order{};
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return length[a] > length[b]; });
  // Seed = the three longest, orthonormalised in index order so that the
  // frame varies smoothly with the point; the shortest is the fallback.
  std::sort(order.begin(), order.begin() + 3);

  Matrix4 columns;
  columns.col(0) = d.V;
  int found = 0;
  for (int mu : order) {
    if (found == 3) break;
    Vector4 w = candidates[mu];
    for (int k = 1; k <= found; ++k) w -= columns.col(k).dot(d.g * w) * columns.col(k);
    const double n2 = w.dot(d.g * w);
    if (!(n2 > kPivotThreshold * kPivotThreshold)) continue;
    columns.col(++found) = w / std::sqrt(n2);
  }
  if (found < 3)
    throw Error(ErrorKind::degenerate_complement,
                "g restricted to ker tau yields only " + std::to_string(found) + " orthonormal directions");
  return AdaptedFrame::from_vectors(columns);
}

/// A Newton-Cartan background in a single chart.
class NCField {
 public:
  virtual ~NCField() = default;

  virtual NCPointData at(const Vector4& point) const = 0;
  /// Central-difference step along a coordinate axis when none is given.
  virtual double default_step(int axis) const = 0;
  /// Points where pointwise checks are evaluated.
  virtual std::vector<Vector4> check_points() const = 0;
  virtual std::string kind() const = 0;
};

namespace detail {
inline std::vector<Vector4> unit_lattice() {
  std::vector<Vector4> pts;
  for (int t = -1; t <= 1; ++t)
    for (int x = -1; x <= 1; ++x)
      for (int y = -1; y <= 1; ++y)
        for (int z = -1; z <= 1; ++z) pts.emplace_back(t, x, y, z);
  return pts;
}
}  // namespace detail

class FlatField : public NCField {
 public:
  NCPointData at(const Vector4&) const override { return NCPointData::flat(); }
  double default_step(int) const override { return kAnalyticFdStep; }
  std::vector<Vector4> check_points() const override { return detail::unit_lattice(); }
  std::string kind() const override { return "flat"; }
};

/// c * t^a x^b y^c z^d.
struct Monomial {
  double coefficient = 0.0;
  std::array<int, 4> exponents{};
};

class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<Monomial> terms) : terms_(std::move(terms)) {}

  const std::vector<Monomial>& terms() const { return terms_; }

  double operator()(const Vector4& p) const {
    double sum = 0.0;
    for (const auto& m : terms_) {
      double v = m.coefficient;
      for (int k = 0; k < 4; ++k) v *= std::pow(p[k], m.exponents[k]);
      sum += v;
    }
    return sum;
  }

  /// Partial derivative along coordinate `axis`.
  double derivative(const Vector4& p, int axis) const {
    double sum = 0.0;
    for (const auto& m : terms_) {
      const int n = m.exponents[axis];
      if (n == 0) continue;
      double v = m.coefficient * n;
      for (int k = 0; k < 4; ++k) v *= std::pow(p[k], k == axis ? n - 1 : m.exponents[k]);
      sum += v;
    }
    return sum;
  }

 private:
  std::vector<Monomial> terms_;
};

/// Flat g and tau, V = d_t, with Gamma^i_00 = d_i Phi for a polynomial
/// potential Phi and every other coefficient zero.
class NewtonianField : public NCField {
 public:
  explicit NewtonianField(Polynomial potential) : potential_(std::move(potential)) {}

  const Polynomial& potential() const { return potential_; }

  NCPointData at(const Vector4& p) const override {
    NCPointData d = NCPointData::flat();
    for (int i = 1; i < 4; ++i) d.gamma(i, 0, 0) = potential_.derivative(p, i);
    return d;
  }
  double default_step(int) const override { return kAnalyticFdStep; }
  std::vector<Vector4> check_points() const override { return detail::unit_lattice(); }
  std::string kind() const override { return "newtonian"; }

 private:
  Polynomial potential_;
};

struct GridSpec {
  std::array<int, 4> shape{1, 1, 1, 1};
  Vector4 spacing = Vector4::Ones();
  Vector4 origin = Vector4::Zero();

  std::size_t size() const { return std::size_t(shape[0]) * shape[1] * shape[2] * shape[3]; }

  /// Row-major with t slowest.
  std::size_t flat_index(const std::array<int, 4>& idx) const {
    return ((std::size_t(idx[0]) * shape[1] + idx[1]) * shape[2] + idx[2]) * shape[3] + idx[3];
  }

  Vector4 point(const std::array<int, 4>& idx) const {
    Vector4 p;
    for (int k = 0; k < 4; ++k) p[k] = origin[k] + idx[k] * spacing[k];
    return p;
  }
};

/// NCPointData on a regular 4-grid. Evaluation is only defined on grid nodes.
class SampledField : public NCField {
 public:
  SampledField(GridSpec grid, std::vector<NCPointData> samples)
      : grid_(std::move(grid)), samples_(std::move(samples)) {
    if (samples_.size() != grid_.size())
      throw Error(ErrorKind::invalid_input, "sample count does not match grid shape");
  }

  const GridSpec& grid() const { return grid_; }
  const std::vector<NCPointData>& samples() const { return samples_; }

  NCPointData at(const Vector4& p) const override {
    std::array<int, 4> idx{};
    for (int k = 0; k < 4; ++k) {
      const double f = (p[k] - grid_.origin[k]) / grid_.spacing[k];
      const double r = std::round(f);
      if (std::abs(f - r) > 1e-9)
        throw Error(ErrorKind::invalid_input, "point is not on a grid node along axis " + std::to_string(k));
      if (r < 0 || r >= grid_.shape[k])
        throw Error(ErrorKind::insufficient_samples, "point outside the sampled grid along axis " + std::to_string(k));
      idx[k] = static_cast<int>(r);
    }
    return samples_[grid_.flat_index(idx)];
  }

  double default_step(int axis) const override { return grid_.spacing[axis]; }

  /// Nodes whose central-difference neighbours exist along every axis.
  std::vector<Vector4> check_points() const override {
    for (int k = 0; k < 4; ++k)
      if (grid_.shape[k] < 3)
        throw Error(ErrorKind::insufficient_samples,
                    "central differences need at least 3 samples along axis " + std::to_string(k));
    std::vector<Vector4> pts;
    std::array<int, 4> i{};
    for (i[0] = 1; i[0] + 1 < grid_.shape[0]; ++i[0])
      for (i[1] = 1; i[1] + 1 < grid_.shape[1]; ++i[1])
        for (i[2] = 1; i[2] + 1 < grid_.shape[2]; ++i[2])
          for (i[3] = 1; i[3] + 1 < grid_.shape[3]; ++i[3]) pts.push_back(grid_.point(i));
    return pts;
  }

  std::string kind() const override { return "sampled"; }

 private:
  GridSpec grid_;
  std::vector<NCPointData> samples_;
};

struct CompatibilityReport {
  double metric = 0.0;  // max |nabla_lambda g_{mu nu}|
  double clock = 0.0;   // max |nabla_lambda tau_mu|
  std::size_t points = 0;

  double max() const { return std::max(metric, clock); }
};

/// Residuals of nabla g = 0 and nabla tau = 0 with central-difference partial
/// derivatives, maximised over the given points.
inline CompatibilityReport compatibility_check(const NCField& field, std::optional<double> fd_step,
                                               const std::vector<Vector4>& points) {
  CompatibilityReport report;
  for (const Vector4& p : points) {
    const NCPointData d = field.at(p);
    for (int lam = 0; lam < 4; ++lam) {
      const double h = fd_step.value_or(field.default_step(lam));
      const Vector4 step = h * Vector4::Unit(lam);
      const NCPointData fwd = field.at(p + step);
      const NCPointData bwd = field.at(p - step);
      const Matrix4 dg = (fwd.g - bwd.g) / (2 * h);
      const Vector4 dtau = (fwd.tau - bwd.tau) / (2 * h);
      for (int mu = 0; mu < 4; ++mu) {
        double ct = dtau[mu];
        for (int k = 0; k < 4; ++k) ct -= d.gamma(k, lam, mu) * d.tau[k];
        report.clock = std::max(report.clock, std::abs(ct));
        for (int nu = 0; nu < 4; ++nu) {
          double cg = dg(mu, nu);
          for (int k = 0; k < 4; ++k)
            cg -= d.gamma(k, lam, mu) * d.g(k, nu) + d.gamma(k, lam, nu) * d.g(mu, k);
          report.metric = std::max(report.metric, std::abs(cg));
        }
      }
    }
    ++report.points;
  }
  return report;
}

inline CompatibilityReport compatibility_check(const NCField& field, std::optional<double> fd_step = {}) {
  return compatibility_check(field, fd_step, field.check_points());
}

using FrameField = std::function<AdaptedFrame(const Vector4&)>;

/// The adapted frame of `field` at every point.
inline FrameField adapted_frame_field(const NCField& field) {
  return [&field](const Vector4& p) { return adapted_frame(field.at(p)); };
}

/// Gamma^a_{cb} = e^a(nabla_{X_c} X_b) = e^a_mu X_c^lambda (d_lambda X_b^mu +
/// Gamma^mu_{lambda nu} X_b^nu), frame derivatives by central differences.
inline Christoffels frame_christoffels(const NCField& field, const FrameField& frames, const Vector4& p,
                                       std::optional<double> fd_step = {}) {
  const NCPointData d = field.at(p);
  const AdaptedFrame frame = frames(p);
  std::array<Matrix4, 4> dX;  // dX[lambda](mu, b) = d_lambda X_b^mu
  for (int lam = 0; lam < 4; ++lam) {
    const double h = fd_step.value_or(field.default_step(lam));
    const Vector4 step = h * Vector4::Unit(lam);
    // evaluate the field first so out-of-grid stencils report insufficient samples
    field.at(p + step);
    field.at(p - step);
    dX[lam] = (frames(p + step).vectors - frames(p - step).vectors) / (2 * h);
  }
  Christoffels out = Christoffels::zero();
  for (int c = 0; c < 4; ++c) {
    const Vector4 xc = frame.X(c);
    for (int b = 0; b < 4; ++b) {
      const Vector4 xb = frame.X(b);
      Vector4 nabla = Vector4::Zero();  // coordinate components of nabla_{X_c} X_b
      for (int lam = 0; lam < 4; ++lam) {
        if (xc[lam] == 0.0) continue;
        for (int mu = 0; mu < 4; ++mu)
          nabla[mu] += xc[lam] * (dX[lam](mu, b) + d.gamma.slice(mu).row(lam).dot(xb));
      }
      const Vector4 comps = frame.coframe * nabla;
      for (int a = 0; a < 4; ++a) out(a, c, b) = comps[a];
    }
  }
  return out;
}

inline Christoffels frame_christoffels(const NCField& field, const Vector4& p,
                                       std::optional<double> fd_step = {}) {
  return frame_christoffels(field, adapted_frame_field(field), p, fd_step);
}

/// so(1,0,3)-valued connection 1-form: for each frame direction X_c the matrix
/// omega^a_b(X_c) = Gamma^a_{cb} decomposed as sum omega^0_i E_0i + sum omega^i_j E_ij.
struct ConnectionForm {
  std::array<So103Element, 4> direction{};
};

/// Throws not_so103_valued when any direction leaves the [[0, a], [0, r]]
/// pattern by more than tol. Coefficients from finite-differenced frames carry
/// O(h^2) noise; pass kFdConnectionTolerance for those.
inline ConnectionForm connection_form(const Christoffels& frame_gamma,
                                      double tol = kConnectionTolerance) {
  ConnectionForm form;
  for (int c = 0; c < 4; ++c) {
    Matrix4 m;
    for (int a = 0; a < 4; ++a)
      for (int b = 0; b < 4; ++b) m(a, b) = frame_gamma(a, c, b);
    try {
      form.direction[c] = So103Element::from_matrix(m, tol, ErrorKind::not_so103_valued);
    } catch (const Error& e) {
      throw Error(ErrorKind::not_so103_valued,
                  "direction X_" + std::to_string(c) + ": " + std::string(e.what()));
    }
  }
  return form;
}

}  // namespace degspin
