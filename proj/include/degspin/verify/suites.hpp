#pragma once

// Invariant suites shared by `degspin verify` and the acceptance binary. Each
// suite returns its checks with the measured value and the pinned limit.

#include <chrono>
#include <cmath>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "degspin/clifford.hpp"
#include "degspin/levy_leblond.hpp"
#include "degspin/manifold_config.hpp"
#include "degspin/newton_cartan.hpp"
#include "degspin/schrodinger_solver.hpp"
#include "degspin/spin_groups.hpp"
#include "degspin/spinor.hpp"
#include "degspin/verify/fields.hpp"
#include "degspin/verify/oracles.hpp"
#include "degspin/verify/random.hpp"

namespace degspin::verify {

struct Check {
  std::string name;
  bool passed = false;
  double value = 0.0;
  std::string limit;  // human-readable bound, e.g. "<= 1e-12"
};

struct SuiteResult {
  int criterion = 0;
  std::string name;
  std::vector<Check> checks;
  std::vector<std::string> info;  // supplementary measurements, never affect the verdict
  double runtime = 0.0;           // seconds

  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }

  void at_most(std::string name, double value, double limit) {
    checks.push_back({std::move(name), value <= limit, value, "<= " + format_g(limit)});
  }
  void at_least(std::string name, double value, double limit) {
    checks.push_back({std::move(name), value >= limit, value, ">= " + format_g(limit)});
  }
  void exactly_zero(std::string name, double value) {
    checks.push_back({std::move(name), value == 0.0, value, "== 0"});
  }
  void within(std::string name, double value, double lo, double hi) {
    checks.push_back({std::move(name), value >= lo && value <= hi, value,
                      "in [" + format_g(lo) + ", " + format_g(hi) + "]"});
  }
  void holds(std::string name, bool ok) { checks.push_back({std::move(name), ok, ok ? 1.0 : 0.0, "true"}); }
};

namespace detail {

template <class F>
SuiteResult timed(int criterion, std::string name, F&& body, double runtime_limit = 0.0) {
  SuiteResult r;
  r.criterion = criterion;
  r.name = std::move(name);
  const auto start = std::chrono::steady_clock::now();
  try {
    body(r);
  } catch (const std::exception& e) {
    r.checks.push_back({std::string("unexpected exception: ") + e.what(), false, 0.0, "none"});
  }
  r.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  if (runtime_limit > 0.0) r.at_most("runtime [s]", r.runtime, runtime_limit);
  return r;
}

inline double max_diff(const Multivector& a, const Multivector& b) { return (a - b).max_abs(); }

/// max |nabla_lambda h^{mu nu}| with the same central differences as
/// compatibility_check; used as supplementary information only.
inline double cometric_residual(const NCField& field, double step) {
  double worst = 0.0;
  for (const Vector4& p : field.check_points()) {
    const NCPointData d = field.at(p);
    const Matrix4 h = hfield(d);
    for (int lam = 0; lam < 4; ++lam) {
      Vector4 dp = Vector4::Zero();
      dp[lam] = step;
      const Matrix4 dh = (hfield(field.at(p + dp)) - hfield(field.at(p - dp))) / (2.0 * step);
      Matrix4 gl;  // (mu, rho) -> Gamma^mu_{lam rho}
      for (int mu = 0; mu < 4; ++mu)
        for (int rho = 0; rho < 4; ++rho) gl(mu, rho) = d.gamma(mu, lam, rho);
      worst = std::max(worst, (dh + gl * h + h * gl.transpose()).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace detail

inline SuiteResult clifford_suite() {
  return detail::timed(1, "clifford", [](SuiteResult& r) {
    int mismatches = 0;
    for (unsigned a = 0; a < 16; ++a)
      for (unsigned b = 0; b < 16; ++b) {
        const auto [sign, gens] = oracle::blade_product(oracle::generators_of(a), oracle::generators_of(b));
        const auto p = blade_mul(BladeMask(a), BladeMask(b));
        if (p.sign != sign || (sign != 0 && p.result.bits() != oracle::mask_of(gens))) ++mismatches;
      }
    r.exactly_zero("blade table mismatches vs reordering oracle (256 entries)", mismatches);

    sampling::Rng rng(1001);
    double assoc = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Multivector a = sampling::random_multivector(rng), b = sampling::random_multivector(rng),
                        c = sampling::random_multivector(rng);
      assoc = std::max(assoc, detail::max_diff(gp(gp(a, b), c), gp(a, gp(b, c))));
    }
    r.at_most("associativity, 1000 random triples", assoc, 1e-12);

    const Multivector f = Multivector::blade(blade::f);
    r.exactly_zero("f^2", gp(f, f).max_abs());
    double anti = 0.0;
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) {
        if (i == j) continue;
        const Multivector x = Multivector::blade(BladeMask(1u << i)), y = Multivector::blade(BladeMask(1u << j));
        anti = std::max(anti, (gp(x, y) + gp(y, x)).max_abs());
      }
    double squares = 0.0;
    for (int i = 1; i <= 3; ++i) {
      const Multivector e = Multivector::blade(blade::e(i));
      squares = std::max(squares, detail::max_diff(gp(e, e), Multivector::scalar(1.0)));
    }
    r.exactly_zero("generator anticommutation", anti);
    r.exactly_zero("e_i^2 - 1", squares);
  }, 1.0);
}

inline SuiteResult group_suite() {
  return detail::timed(2, "group", [](SuiteResult& r) {
    sampling::Rng rng(1002);
    double mul = 0.0, inv = 0.0, hom = 0.0, pm = 0.0, metric = 0.0, det = 0.0;
    bool radical = true;
    for (int i = 0; i < 10000; ++i) {
      const auto a = sampling::random_spin103(rng), b = sampling::random_spin103(rng);
      mul = std::max(mul, detail::max_diff(embed(spin_mul(a, b)), gp(embed(a), embed(b))));
      inv = std::max(inv, detail::max_diff(embed(spin_mul(a, spin_inv(a))), Multivector::scalar(1.0)));
      inv = std::max(inv, detail::max_diff(embed(spin_mul(spin_inv(a), a)), Multivector::scalar(1.0)));
      const GalileiMatrix ra = rho_prime(a);
      hom = std::max(hom, (rho_prime(a * b).matrix() - (ra * rho_prime(b)).matrix()).cwiseAbs().maxCoeff());
      pm = std::max(pm, (ra.matrix() - rho_prime(-a).matrix()).cwiseAbs().maxCoeff());
      const auto res = ra.residuals();
      metric = std::max(metric, res.metric);
      det = std::max(det, res.determinant);
      radical = radical && res.radical_fixed;
    }
    r.at_most("spin_mul vs Clifford product, 1e4 pairs", mul, 1e-12);
    r.at_most("inverse law", inv, 1e-10);
    r.at_most("rho' homomorphism", hom, 1e-10);
    r.at_most("rho'(s) = rho'(-s)", pm, 1e-12);
    r.at_most("Phi^T G Phi = G", metric, 1e-12);
    r.at_most("det Phi = 1", det, 1e-12);
    r.holds("radical fixed", radical);
  }, 5.0);
}

inline SuiteResult lie_suite() {
  return detail::timed(3, "lie", [](SuiteResult& r) {
    const auto b = spin_algebra_basis();
    int failures = 0, pairs = 0;
    for (int i = 0; i < 6; ++i)
      for (int j = i + 1; j < 6; ++j, ++pairs)
        if (!(d_rho_prime(lie_bracket(b[i], b[j])) == lie_bracket(d_rho_prime(b[i]), d_rho_prime(b[j])))) ++failures;
    r.exactly_zero("bracket mismatches over " + std::to_string(pairs) + " basis pairs", failures);
    int nonzero = 0;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        if (!(lie_bracket(b[i], b[j]) == Spin103AlgebraElement{})) ++nonzero;
    r.exactly_zero("nonzero [f e_i, f e_j]", nonzero);
  });
}

inline SuiteResult tensor_suite() {
  return detail::timed(4, "tensor", [](SuiteResult& r) {
    const NCPointData flat = NCPointData::flat();
    r.exactly_zero("flat gbar - I", (gbar(flat.g, flat.tau) - Matrix4::Identity()).cwiseAbs().maxCoeff());
    Matrix4 h_expected = Matrix4::Identity();
    h_expected(0, 0) = 0.0;
    r.exactly_zero("flat h - diag(0,1,1,1)", (hfield(flat) - h_expected).cwiseAbs().maxCoeff());

    sampling::Rng rng(1004);
    double hbar_res = 0.0, h_res = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const NCPointData d = oracle::random_nc_point(rng);
      const Matrix4 gb = gbar(d.g, d.tau);
      hbar_res = std::max(hbar_res, (hbar(gb) * gb - Matrix4::Identity()).cwiseAbs().maxCoeff());
      h_res = std::max(h_res, h_identity_residual(hfield(d), d));
    }
    r.at_most("hbar gbar = I, 1000 random samples", hbar_res, 1e-10);
    r.at_most("h g = delta - V tau, 1000 random samples", h_res, 1e-10);

    const NewtonianField newtonian(oracle::reference_potential());
    const double coarse = compatibility_check(newtonian, 1e-3).max();
    const double fine = compatibility_check(newtonian, 5e-4).max();
    r.at_most("newtonian compatibility residual at fd_step 1e-3", coarse, 1e-8);
    r.within("newtonian residual ratio fd_step 1e-3 / 5e-4", fine > 0.0 ? coarse / fine : 0.0, 3.5, 4.5);

    const auto parts = compatibility_check(newtonian, 1e-3);
    r.info.push_back("newtonian: metric residual " + format_g(parts.metric) + ", clock residual " +
                     format_g(parts.clock) + "; nabla_0 g_0j = -d_j Phi exactly, independent of fd_step");
    r.info.push_back("newtonian: cometric residual max|nabla h| = " +
                     format_g(detail::cometric_residual(newtonian, 1e-3)));
    const oracle::SphericalChartField chart;
    const double c1 = compatibility_check(chart, 1e-3).max(), c2 = compatibility_check(chart, 5e-4).max();
    r.info.push_back("compatible spherical chart: residual " + format_g(c1) + " at fd_step 1e-3, ratio " +
                     format_g(c1 / c2) + " on halving");
  });
}

inline SuiteResult representation_suite() {
  return detail::timed(5, "representation", [](SuiteResult& r) {
    const GammaSet& g = gammas();
    r.exactly_zero("gamma relations (gamma_0^2, anticommutators)", g.relation_residual());
    double non_integer = 0.0;
    for (const auto& m : g.gamma)
      for (int k = 0; k < 16; ++k)
        non_integer = std::max({non_integer, std::abs(m(k).real() - std::round(m(k).real())),
                                std::abs(m(k).imag() - std::round(m(k).imag()))});
    r.exactly_zero("non-integer gamma entries", non_integer);

    sampling::Rng rng(1005);
    double hom = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const Multivector a = sampling::random_multivector(rng), b = sampling::random_multivector(rng);
      hom = std::max(hom, (theta(gp(a, b)) - theta(a) * theta(b)).cwiseAbs().maxCoeff());
    }
    r.at_most("theta homomorphism, 1000 random pairs", hom, 1e-12);

    double basis = 0.0;
    for (const auto& e : so_algebra_basis()) basis = std::max(basis, (lift(e) - lift_via_algebra(e)).cwiseAbs().maxCoeff());
    r.exactly_zero("two-path lift on basis directions", basis);
  });
}

inline SuiteResult flat_ll_suite() {
  return detail::timed(6, "flat-ll", [](SuiteResult& r) {
    sampling::Rng rng(1006);
    std::normal_distribution<double> normal;
    std::uniform_real_distribution<double> delta(-0.1, 0.1);
    auto unit_spinor = [&] {
      Vector2c u(cd(normal(rng), normal(rng)), cd(normal(rng), normal(rng)));
      return Vector2c(u / u.norm());
    };
    const double m = 1.0;
    double worst = 0.0, ratio = 1e300;
    for (int i = 0; i < 100; ++i) {
      const Vector3 k = sampling::random_vector3(rng, 3.0);
      const Vector2c u2 = unit_spinor();
      worst = std::max(worst, planewave_check(k, m, u2));
      const double d = delta(rng);
      if (d != 0.0)
        ratio = std::min(ratio, planewave_check(k, m, u2, k.squaredNorm() / (2 * m) + d) / std::abs(d));
    }
    r.at_most("planewave residual, 100 random k", worst, 1e-12);
    r.at_least("perturbed residual / |dE|, |dE| <= 0.1", ratio, 0.4);

    const Vector2c xi(cd(0.6, 0.0), cd(0.0, 0.8));
    double ll = 0.0, sch = 0.0;
    for (const auto& [s0, k0, x0] : std::vector<std::array<double, 3>>{{1.0, 1.0, 0.0}, {0.5, -2.0, 0.3}, {2.0, 0.0, -1.0}}) {
      const ProductProfile chi{{GaussianFactor::free_packet(m, s0, k0, x0), GaussianFactor::free_packet(m, 0.8, 0.5, 0.0),
                                GaussianFactor::plane_wave(m, -0.7)},
                               xi};
      const ReduceReport rep = reduce_check(chi, m, reduce_check_points());
      ll = std::max(ll, rep.ll_max);
      sch = std::max(sch, rep.schrodinger_max);
    }
    r.at_most("reduce_check LL residual, Gaussian family", ll, 1e-10);
    r.at_most("reduce_check Schrodinger residual, Gaussian family", sch, 1e-10);
    const ProductProfile frozen{{GaussianFactor::static_packet(m, 1.0, 1.0, 0.0), GaussianFactor::plane_wave(m, 0.0),
                                 GaussianFactor::plane_wave(m, 0.0)},
                                xi};
    const ReduceReport rep = reduce_check(frozen, m, reduce_check_points());
    r.at_most("static Gaussian: |LL| - |Schrodinger| residual gap", rep.identity_gap, 1e-10);
    r.holds("static Gaussian: LL residual vanishes iff Schrodinger does", rep.equivalent() && rep.ll_max > 1e-10);
  });
}

/// Time-discretisation error of the reference configuration against the exact
/// solution of the spatially discrete system.
inline double time_error(SolveConfig cfg, double dt, double t_end) {
  cfg.dt = dt;
  cfg.steps = static_cast<int>(std::lround(t_end / dt));
  const auto exact = oracle::semi_discrete_free_evolution(sample_packet(cfg, 0.0), cfg.dx, cfg.mass, t_end);
  return l2_distance(evolve_scalar(cfg), exact, cfg.dx);
}

inline SuiteResult solver_suite() {
  SuiteResult r = detail::timed(7, "solver", [](SuiteResult& r) {
    const SolveConfig cfg;  // m = 1, s0 = 1, k0 = 1, N = 512, dx = 0.05, dt = 1e-3, 1000 steps
    const SolveResult res = evolve_wavepacket(cfg);
    r.at_most("L2 error vs analytic Gaussian", res.report.l2_error, 1e-4);
    r.at_most("norm drift", res.report.norm_drift, 1e-10);
    r.at_most("reference run wall time [s]", res.report.wall_time, 30.0);
    const double e1 = time_error(cfg, 1e-3, 1.0), e2 = time_error(cfg, 5e-4, 1.0);
    r.within("time error ratio dt 1e-3 / 5e-4", e1 / e2, 3.5, 4.5);
    r.info.push_back("LL residual of reconstructed spinor: max " + format_g(res.report.residual_max) + ", L2 " +
                     format_g(res.report.residual_l2));
    r.info.push_back("time error vs semi-discrete solution: " + format_g(e1) + " (dt 1e-3), " + format_g(e2) +
                     " (dt 5e-4)");
  });
  return r;
}

/// In-process half of the CLI criterion: config diagnostics and CSV round trip.
inline SuiteResult io_suite() {
  return detail::timed(8, "io", [](SuiteResult& r) {
    bool cited = false;
    try {
      parse_manifold_config(
          "preset: newtonian\n"
          "potential:\n"
          "  - {coefficient: 1, exponents: [0, two, 0, 0]}\n");
    } catch (const ConfigError& e) {
      cited = e.path() == "potential[0].exponents[1]" && e.line() == 3;
    }
    r.holds("malformed config cites field path and line", cited);

    SolveConfig cfg;
    cfg.grid_points = 64;
    cfg.dx = 0.3;
    cfg.dt = 0.01;
    cfg.steps = 20;
    cfg.output_every = 5;
    cfg.eta = Vector2c(cd(0.6, 0.1), cd(-0.3, 0.7));
    const auto res = evolve_wavepacket(cfg);
    std::stringstream ss;
    write_trajectory_csv(ss, res.trajectory);
    r.holds("trajectory CSV round-trips bit-exactly", read_trajectory_csv(ss) == res.trajectory);
  });
}

inline std::vector<std::function<SuiteResult()>> all_suites() {
  return {clifford_suite, group_suite, lie_suite, tensor_suite, representation_suite, flat_ll_suite, solver_suite, io_suite};
}

inline std::vector<SuiteResult> run_all() {
  std::vector<SuiteResult> out;
  for (const auto& suite : all_suites()) out.push_back(suite());
  return out;
}

}  // namespace degspin::verify
