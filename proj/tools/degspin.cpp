// degspin: command-line front end.
//
//   degspin verify [--json]
//   degspin tensors --config FILE [--point t,x,y,z] [--json]
//   degspin lift --config FILE [--point t,x,y,z] [--json]
//   degspin solve --mode planewave|wavepacket|reduce-check [options] [--json]
//
// Exit codes: 0 success, 1 verification or solve failure, 2 usage or config error.

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdio>
#include <iostream>
#include <sstream>
#include <string>

#include "degspin/levy_leblond.hpp"
#include "degspin/manifold_config.hpp"
#include "degspin/newton_cartan.hpp"
#include "degspin/schrodinger_solver.hpp"
#include "degspin/spinor.hpp"
#include "degspin/verify/suites.hpp"

using namespace degspin;
using json = nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

// ----- formatting -----

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string cnum(cd z) {
  if (z.imag() == 0.0) return num(z.real());
  if (z.real() == 0.0) return num(z.imag()) + "i";
  return num(z.real()) + (z.imag() < 0 ? "-" : "+") + num(std::abs(z.imag())) + "i";
}

template <class M>
void print_matrix(std::ostream& os, const std::string& title, const M& m) {
  os << title << ":\n";
  for (int i = 0; i < m.rows(); ++i) {
    os << "  ";
    for (int j = 0; j < m.cols(); ++j) {
      std::string s;
      if constexpr (std::is_same_v<typename M::Scalar, cd>)
        s = cnum(m(i, j));
      else
        s = num(m(i, j));
      os << (j ? " " : "") << std::string(s.size() < 12 ? 12 - s.size() : 0, ' ') << s;
    }
    os << '\n';
  }
}

json to_json(const Matrix4& m) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) rows.push_back({m(i, 0), m(i, 1), m(i, 2), m(i, 3)});
  return rows;
}

json to_json(const Matrix4c& m) {
  json rows = json::array();
  for (int i = 0; i < 4; ++i) {
    json row = json::array();
    for (int j = 0; j < 4; ++j) row.push_back({m(i, j).real(), m(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

json to_json(const Vector3& v) { return {v[0], v[1], v[2]}; }

// ----- argument helpers -----

std::vector<double> parse_list(const std::string& text, std::size_t n, const std::string& flag) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "'" + item + "' is not a number");
    }
  }
  if (out.size() != n)
    throw CLI::ValidationError(flag, "expected " + std::to_string(n) + " comma-separated numbers");
  return out;
}

Vector4 parse_point(const std::string& text) {
  const auto v = parse_list(text, 4, "--point");
  return {v[0], v[1], v[2], v[3]};
}

// Config errors are reported against the file they came from.
struct FileConfigError {
  std::string file;
  ConfigError error;
};

std::unique_ptr<NCField> load_config(const std::string& path) {
  try {
    return load_manifold_config(path);
  } catch (const ConfigError& e) {
    throw FileConfigError{path, e};
  }
}

/// Default evaluation point: the origin, or the first interior node of a grid.
Vector4 default_point(const NCField& field) {
  if (field.kind() == "sampled") {
    const auto pts = field.check_points();
    if (!pts.empty()) return pts.front();
    return dynamic_cast<const SampledField&>(field).grid().origin;
  }
  return Vector4::Zero();
}

// ----- verify -----

int run_verify(bool as_json) {
  const auto results = verify::run_all();
  bool ok = true;
  for (const auto& r : results) ok = ok && r.passed();
  if (as_json) {
    json out;
    out["passed"] = ok;
    for (const auto& r : results) {
      json s{{"criterion", r.criterion}, {"suite", r.name}, {"passed", r.passed()}, {"runtime_s", r.runtime}};
      for (const auto& c : r.checks)
        s["checks"].push_back({{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"limit", c.limit}});
      s["info"] = r.info;
      out["suites"].push_back(s);
    }
    std::cout << out.dump(2) << '\n';
  } else {
    std::printf("%-3s %-16s %-6s %9s  %s\n", "#", "suite", "result", "time[s]", "failed checks");
    for (const auto& r : results) {
      std::string failed;
      for (const auto& c : r.checks)
        if (!c.passed) failed += (failed.empty() ? "" : "; ") + c.name + " = " + num(c.value) + " (" + c.limit + ")";
      std::printf("%-3d %-16s %-6s %9.3f  %s\n", r.criterion, r.name.c_str(), r.passed() ? "PASS" : "FAIL", r.runtime,
                  failed.c_str());
    }
    std::printf("%s\n", ok ? "all suites passed" : "verification FAILED");
  }
  return ok ? kExitOk : kExitFailure;
}

// ----- tensors -----

int run_tensors(const std::string& config, const std::optional<std::string>& point_text, bool as_json) {
  const auto field = load_config(config);
  const Vector4 p = point_text ? parse_point(*point_text) : default_point(*field);
  const NCPointData d = field->at(p);
  const Diagnostics diag = validate(d);

  json out{{"config", config}, {"preset", field->kind()}, {"point", {p[0], p[1], p[2], p[3]}}};
  for (const auto& c : diag.checks)
    out["diagnostics"].push_back(
        {{"name", c.name}, {"passed", c.passed}, {"residual", c.residual}, {"informational", c.informational}});
  if (!diag.ok()) {
    if (as_json)
      std::cout << out.dump(2) << '\n';
    else
      for (const auto& c : diag.checks) std::printf("%-34s %s  %s\n", c.name.c_str(), c.passed ? "ok  " : "FAIL", num(c.residual).c_str());
    std::cerr << "error: point data fails validation\n";
    return kExitFailure;
  }

  const Matrix4 gb = gbar(d.g, d.tau);
  const Matrix4 hb = hbar(gb);
  const Matrix4 h = hfield(d);
  const AdaptedFrame frame = adapted_frame(d);
  const auto fr = frame.residuals(d);
  out["gbar"] = to_json(gb);
  out["hbar"] = to_json(hb);
  out["h"] = to_json(h);
  out["h_identity_residual"] = h_identity_residual(h, d);
  out["frame"] = {{"vectors_columns", to_json(frame.vectors)}, {"coframe_rows", to_json(frame.coframe)},
                  {"residual", fr.max()}};
  std::optional<CompatibilityReport> compat;
  std::string compat_error;
  try {
    compat = compatibility_check(*field, std::nullopt, {p});
    out["compatibility"] = {{"metric", compat->metric}, {"clock", compat->clock}};
  } catch (const Error& e) {
    compat_error = e.what();
    out["compatibility"] = {{"error", compat_error}};
  }

  if (as_json) {
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "preset " << field->kind() << " at (" << num(p[0]) << ", " << num(p[1]) << ", " << num(p[2]) << ", "
            << num(p[3]) << ")\n";
  for (const auto& c : diag.checks)
    std::printf("  %-34s %s  %s%s\n", c.name.c_str(), c.passed ? "ok  " : "FAIL", num(c.residual).c_str(),
                c.informational ? "  (informational)" : "");
  print_matrix(std::cout, "gbar", gb);
  print_matrix(std::cout, "hbar", hb);
  print_matrix(std::cout, "h", h);
  std::cout << "h g - (delta - V tau) residual: " << num(h_identity_residual(h, d)) << '\n';
  print_matrix(std::cout, "adapted frame (columns X_0..X_3)", frame.vectors);
  print_matrix(std::cout, "coframe (rows e^0..e^3)", frame.coframe);
  std::cout << "frame invariant residual: " << num(fr.max()) << '\n';
  if (compat)
    std::cout << "compatibility: |nabla g| " << num(compat->metric) << ", |nabla tau| " << num(compat->clock) << '\n';
  else
    std::cout << "compatibility: " << compat_error << '\n';
  return kExitOk;
}

// ----- lift -----

int run_lift(const std::string& config, const std::optional<std::string>& point_text, bool as_json) {
  const auto field = load_config(config);
  const Vector4 p = point_text ? parse_point(*point_text) : default_point(*field);
  const LocalGeometry geom = geometry_at(*field, p);
  const ConnectionForm form = connection_form(frame_christoffels(*field, p), kFdConnectionTolerance);

  json out{{"config", config}, {"preset", field->kind()}, {"point", {p[0], p[1], p[2], p[3]}},
           {"span_residual", geom.connection.span_residual()}};
  for (int c = 0; c < 4; ++c)
    out["directions"].push_back({{"direction", c},
                                 {"boost", to_json(form.direction[c].boost)},
                                 {"rotation", to_json(form.direction[c].rotation)},
                                 {"lifted", to_json(geom.connection.direction[c])}});
  if (as_json) {
    std::cout << out.dump(2) << '\n';
    return kExitOk;
  }
  std::cout << "preset " << field->kind() << " at (" << num(p[0]) << ", " << num(p[1]) << ", " << num(p[2]) << ", "
            << num(p[3]) << ")\n";
  for (int c = 0; c < 4; ++c) {
    const auto& w = form.direction[c];
    std::cout << "X_" << c << ": omega^0_i = (" << num(w.boost[0]) << ", " << num(w.boost[1]) << ", " << num(w.boost[2])
              << "), omega^i_j (12, 13, 23) = (" << num(w.rotation[0]) << ", " << num(w.rotation[1]) << ", "
              << num(w.rotation[2]) << ")\n";
    print_matrix(std::cout, "  A(X_" + std::to_string(c) + ")", geom.connection.direction[c]);
  }
  std::cout << "span residual: " << num(geom.connection.span_residual()) << '\n';
  return kExitOk;
}

// ----- solve -----

struct SolveOptions {
  std::string mode;
  std::string k = "1,0,0";
  std::optional<double> energy;
  std::string u2 = "1,0,0,0";  // re, im, re, im
  SolveConfig cfg;
  std::string eta = "1,0,0,0";
  std::string trajectory = "trajectory.csv";
  std::optional<std::string> report;
};

Vector2c parse_spinor(const std::string& text, const std::string& flag) {
  const auto v = parse_list(text, 4, flag);
  return {cd(v[0], v[1]), cd(v[2], v[3])};
}

void emit_report(const json& report, const std::string& text, const SolveOptions& o, bool as_json) {
  if (as_json)
    std::cout << report.dump(2) << '\n';
  else
    std::cout << text;
  if (o.report) {
    std::ofstream f(*o.report);
    if (!f) throw Error(ErrorKind::invalid_input, "cannot write report " + *o.report);
    f << report.dump(2) << '\n';
  }
}

int run_solve(const SolveOptions& o, bool as_json) {
  constexpr double kPlanewaveTolerance = 1e-12;
  if (o.mode == "planewave") {
    const auto kv = parse_list(o.k, 3, "--k");
    const Vector3 k(kv[0], kv[1], kv[2]);
    const double m = o.cfg.mass;
    const double r = planewave_check(k, m, parse_spinor(o.u2, "--u2"), o.energy);
    const double e = o.energy.value_or(k.squaredNorm() / (2 * m));
    const bool ok = r <= kPlanewaveTolerance;
    json rep{{"mode", "planewave"}, {"k", to_json(k)}, {"mass", m}, {"energy", e}, {"residual", r}, {"passed", ok}};
    emit_report(rep, "planewave k = (" + num(k[0]) + ", " + num(k[1]) + ", " + num(k[2]) + "), m = " + num(m) +
                         ", E = " + num(e) + "\nresidual: " + num(r) + (ok ? "  (pass)\n" : "  (FAIL)\n"),
                o, as_json);
    return ok ? kExitOk : kExitFailure;
  }
  if (o.mode == "reduce-check") {
    const double m = o.cfg.mass;
    const ProductProfile chi{{GaussianFactor::free_packet(m, o.cfg.sigma0, o.cfg.k0, o.cfg.x0),
                              GaussianFactor::free_packet(m, o.cfg.sigma0, 0.0, 0.0),
                              GaussianFactor::free_packet(m, o.cfg.sigma0, 0.0, 0.0)},
                             parse_spinor(o.eta, "--eta")};
    const ReduceReport r = reduce_check(chi, m, reduce_check_points());
    const bool ok = r.ll_max <= kReduceTolerance && r.schrodinger_max <= kReduceTolerance && r.equivalent();
    json rep{{"mode", "reduce-check"}, {"mass", m},           {"points", r.points},
             {"ll_residual_max", r.ll_max}, {"schrodinger_residual_max", r.schrodinger_max},
             {"identity_gap", r.identity_gap}, {"equivalent", r.equivalent()}, {"passed", ok}};
    emit_report(rep, "reduce-check on a free Gaussian packet, " + std::to_string(r.points) + " points\n" +
                         "LL residual max:          " + num(r.ll_max) + "\nSchrodinger residual max: " +
                         num(r.schrodinger_max) + "\nequivalent: " + (r.equivalent() ? "yes" : "no") + "\n",
                o, as_json);
    return ok ? kExitOk : kExitFailure;
  }
  // wavepacket
  SolveConfig cfg = o.cfg;
  cfg.eta = parse_spinor(o.eta, "--eta");
  const SolveResult res = evolve_wavepacket(cfg);
  write_trajectory_csv(o.trajectory, res.trajectory);
  const RunReport& r = res.report;
  json rep{{"mode", "wavepacket"},
           {"residual_max", r.residual_max},
           {"residual_l2", r.residual_l2},
           {"norm_drift", r.norm_drift},
           {"l2_error", r.l2_error},
           {"wall_time_s", r.wall_time},
           {"final_time", r.final_time},
           {"steps", r.steps},
           {"output_path", o.trajectory},
           {"warnings", r.warnings}};
  std::string text = "wavepacket: " + std::to_string(r.steps) + " steps to t = " + num(r.final_time) + "\n";
  text += "L2 error vs analytic:  " + num(r.l2_error) + "\nnorm drift:            " + num(r.norm_drift) +
          "\nLL residual max / L2:  " + num(r.residual_max) + " / " + num(r.residual_l2) +
          "\nwall time [s]:         " + num(r.wall_time) + "\ntrajectory:            " + o.trajectory + "\n";
  for (const auto& w : r.warnings) text += "warning: " + w + "\n";
  emit_report(rep, text, o, as_json);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Degenerate spin geometry toolkit: Clifford algebra Cl(1,0,3), Newton-Cartan tensors, "
               "spinor connection and the Levy-Leblond equation"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "machine-readable output");

  auto* verify_cmd = app.add_subcommand("verify", "run all invariant suites");

  std::string config;
  std::optional<std::string> point;
  auto* tensors_cmd = app.add_subcommand("tensors", "gbar, hbar, h, adapted frame and diagnostics at a point");
  tensors_cmd->add_option("--config", config, "manifold config (YAML)")->required()->check(CLI::ExistingFile);
  tensors_cmd->add_option("--point", point, "t,x,y,z");
  auto* lift_cmd = app.add_subcommand("lift", "connection form and lifted matrices A(X_c) at a point");
  lift_cmd->add_option("--config", config, "manifold config (YAML)")->required()->check(CLI::ExistingFile);
  lift_cmd->add_option("--point", point, "t,x,y,z");

  SolveOptions so;
  auto* solve_cmd = app.add_subcommand("solve", "flat-space Levy-Leblond checks and wave-packet evolution");
  solve_cmd->add_option("--mode", so.mode, "planewave | wavepacket | reduce-check")
      ->required()
      ->check(CLI::IsMember({"planewave", "wavepacket", "reduce-check"}));
  solve_cmd->add_option("--mass", so.cfg.mass, "particle mass (hbar = 1)")->capture_default_str();
  solve_cmd->add_option("--k", so.k, "planewave: wave vector kx,ky,kz")->capture_default_str();
  solve_cmd->add_option("--energy", so.energy, "planewave: override E = |k|^2/2m");
  solve_cmd->add_option("--u2", so.u2, "planewave: lower amplitude re,im,re,im")->capture_default_str();
  solve_cmd->add_option("--grid-points", so.cfg.grid_points, "wavepacket: N >= 16")->capture_default_str();
  solve_cmd->add_option("--dx", so.cfg.dx)->capture_default_str();
  solve_cmd->add_option("--dt", so.cfg.dt)->capture_default_str();
  solve_cmd->add_option("--steps", so.cfg.steps)->capture_default_str();
  solve_cmd->add_option("--sigma0", so.cfg.sigma0, "packet width")->capture_default_str();
  solve_cmd->add_option("--k0", so.cfg.k0, "packet carrier wavenumber")->capture_default_str();
  solve_cmd->add_option("--x0", so.cfg.x0, "packet centre")->capture_default_str();
  solve_cmd->add_option("--output-every", so.cfg.output_every, "trajectory slice stride")->capture_default_str();
  solve_cmd->add_option("--eta", so.eta, "constant 2-spinor carried by chi, re,im,re,im")->capture_default_str();
  solve_cmd->add_option("--trajectory", so.trajectory, "wavepacket: CSV output path")->capture_default_str();
  solve_cmd->add_option("--report", so.report, "also write the JSON run report here");

  for (auto* cmd : {verify_cmd, tensors_cmd, lift_cmd, solve_cmd})
    cmd->add_flag("--json", as_json, "machine-readable output");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*verify_cmd) return run_verify(as_json);
    if (*tensors_cmd) return run_tensors(config, point, as_json);
    if (*lift_cmd) return run_lift(config, point, as_json);
    return run_solve(so, as_json);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const FileConfigError& e) {
    std::cerr << "error: " << e.file << ": " << e.error.what() << '\n';
    return kExitUsage;
  } catch (const ConfigError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.kind() == ErrorKind::invalid_input || e.kind() == ErrorKind::invalid_mass ? kExitUsage : kExitFailure;
  }
}
