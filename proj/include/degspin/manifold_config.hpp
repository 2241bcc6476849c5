#pragma once

// Manifold config files (YAML). Schema:
//
//   preset: flat | newtonian | sampled
//   potential:                      # newtonian only; Phi = sum c t^a x^b y^c z^d
//     - {coefficient: 0.5, exponents: [0, 2, 0, 0]}
//   grid:                           # sampled only
//     shape: [Nt, Nx, Ny, Nz]
//     spacing: [dt, dx, dy, dz]
//     origin: [t0, x0, y0, z0]      # optional, default 0
//   samples:                        # sampled only; P = Nt Nx Ny Nz nodes, t slowest
//     g: [16 P numbers]             # per node, row-major g_{mu nu}
//     tau: [4 P]
//     V: [4 P]
//     gamma: [64 P]                 # per node, Gamma^mu_{lambda nu} with mu slowest
//
// Unknown keys are errors. Every failure is a ConfigError naming the field
// path (e.g. "potential[2].exponents[1]") and its 1-based line; the
// caller adds the file name.

#include <yaml-cpp/yaml.h>

#include <memory>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "degspin/error.hpp"
#include "degspin/newton_cartan.hpp"

namespace degspin {

namespace detail {

class ConfigNode {
 public:
  ConfigNode(YAML::Node node, std::string path) : node_(std::move(node)), path_(std::move(path)) {}

  const YAML::Node& node() const { return node_; }
  const std::string& path() const { return path_; }

  int line() const { return node_.Mark().line + 1; }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ConfigError(path_.empty() ? "<root>" : path_, line(), msg);
  }

  ConfigNode child(const std::string& key) const {
    if (!node_.IsMap()) fail("expected a mapping");
    const YAML::Node c = node_[key];
    if (!c) fail("missing required field '" + key + "'");
    return {c, child_path(key)};
  }

  bool has(const std::string& key) const { return node_.IsMap() && node_[key]; }

  ConfigNode at(std::size_t i) const { return {node_[i], path_ + "[" + std::to_string(i) + "]"}; }

  std::size_t sequence_size(std::optional<std::size_t> expected = {}) const {
    if (!node_.IsSequence()) fail("expected a sequence");
    if (expected && node_.size() != *expected)
      fail("expected " + std::to_string(*expected) + " entries, found " + std::to_string(node_.size()));
    return node_.size();
  }

  void only_keys(const std::set<std::string>& allowed) const {
    if (!node_.IsMap()) fail("expected a mapping");
    for (const auto& kv : node_) {
      const auto key = kv.first.as<std::string>();
      if (!allowed.count(key))
        ConfigNode(kv.first, child_path(key)).fail("unknown field '" + key + "'");
    }
  }

  double as_double() const {
    if (!node_.IsScalar()) fail("expected a number");
    try {
      const double v = node_.as<double>();
      if (!std::isfinite(v)) fail("number is not finite");
      return v;
    } catch (const YAML::BadConversion&) {
      fail("expected a number, found '" + node_.Scalar() + "'");
    }
  }

  int as_int() const {
    if (!node_.IsScalar()) fail("expected an integer");
    try {
      return node_.as<int>();
    } catch (const YAML::BadConversion&) {
      fail("expected an integer, found '" + node_.Scalar() + "'");
    }
  }

  std::string as_string() const {
    if (!node_.IsScalar()) fail("expected a string");
    return node_.Scalar();
  }

  std::vector<double> doubles(std::optional<std::size_t> expected = {}) const {
    const std::size_t n = sequence_size(expected);
    std::vector<double> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = at(i).as_double();
    return out;
  }

 private:
  std::string child_path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  YAML::Node node_;
  std::string path_;
};

inline Vector4 to_vector4(const std::vector<double>& v) { return {v[0], v[1], v[2], v[3]}; }

inline Polynomial parse_potential(const ConfigNode& node) {
  std::vector<Monomial> terms;
  const std::size_t n = node.sequence_size();
  for (std::size_t i = 0; i < n; ++i) {
    const ConfigNode term = node.at(i);
    term.only_keys({"coefficient", "exponents"});
    Monomial m;
    m.coefficient = term.child("coefficient").as_double();
    const ConfigNode exps = term.child("exponents");
    exps.sequence_size(4);
    for (int k = 0; k < 4; ++k) {
      const ConfigNode e = exps.at(k);
      m.exponents[k] = e.as_int();
      if (m.exponents[k] < 0) e.fail("exponent must be a non-negative integer");
    }
    terms.push_back(m);
  }
  return Polynomial(std::move(terms));
}

inline GridSpec parse_grid(const ConfigNode& node) {
  node.only_keys({"shape", "spacing", "origin"});
  GridSpec grid;
  const ConfigNode shape = node.child("shape");
  shape.sequence_size(4);
  for (int k = 0; k < 4; ++k) {
    grid.shape[k] = shape.at(k).as_int();
    if (grid.shape[k] < 1) shape.at(k).fail("grid dimension must be positive");
  }
  const ConfigNode spacing = node.child("spacing");
  grid.spacing = to_vector4(spacing.doubles(4));
  for (int k = 0; k < 4; ++k)
    if (!(grid.spacing[k] > 0)) spacing.at(k).fail("spacing must be positive");
  if (node.has("origin")) grid.origin = to_vector4(node.child("origin").doubles(4));
  return grid;
}

inline std::vector<NCPointData> parse_samples(const ConfigNode& node, const GridSpec& grid) {
  node.only_keys({"g", "tau", "V", "gamma"});
  const std::size_t p = grid.size();
  const auto g = node.child("g").doubles(16 * p);
  const auto tau = node.child("tau").doubles(4 * p);
  const auto v = node.child("V").doubles(4 * p);
  const auto gamma = node.child("gamma").doubles(64 * p);

  std::vector<NCPointData> out(p);
  for (std::size_t s = 0; s < p; ++s) {
    NCPointData& d = out[s];
    for (int i = 0; i < 16; ++i) d.g(i / 4, i % 4) = g[16 * s + i];
    for (int i = 0; i < 4; ++i) {
      d.tau[i] = tau[4 * s + i];
      d.V[i] = v[4 * s + i];
    }
    for (int i = 0; i < 64; ++i) d.gamma(i / 16, (i / 4) % 4, i % 4) = gamma[64 * s + i];
    const Diagnostics diag = validate(d);
    for (const auto& c : diag.checks)
      if (!c.passed && !c.informational)
        node.fail("sample " + std::to_string(s) + " violates '" + c.name + "' (residual " +
                  format_g(c.residual) + ")");
  }
  return out;
}

inline std::unique_ptr<NCField> parse_manifold(const YAML::Node& root) {
  const ConfigNode top(root, "");
  if (!root.IsMap()) top.fail("config must be a mapping with a 'preset' field");
  const ConfigNode preset_node = top.child("preset");
  const std::string preset = preset_node.as_string();
  if (preset == "flat") {
    top.only_keys({"preset"});
    return std::make_unique<FlatField>();
  }
  if (preset == "newtonian") {
    top.only_keys({"preset", "potential"});
    return std::make_unique<NewtonianField>(parse_potential(top.child("potential")));
  }
  if (preset == "sampled") {
    top.only_keys({"preset", "grid", "samples"});
    const GridSpec grid = parse_grid(top.child("grid"));
    return std::make_unique<SampledField>(grid, parse_samples(top.child("samples"), grid));
  }
  preset_node.fail("unknown preset '" + preset + "' (expected flat, newtonian or sampled)");
}

}  // namespace detail

inline std::unique_ptr<NCField> parse_manifold_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("<root>", e.mark.line + 1, e.msg);
  }
  return detail::parse_manifold(root);
}

inline std::unique_ptr<NCField> load_manifold_config(const std::string& path) {
  YAML::Node root;
  try {
    root = YAML::LoadFile(path);
  } catch (const YAML::BadFile&) {
    throw ConfigError("<root>", 0, "cannot open " + path);
  } catch (const YAML::ParserException& e) {
    throw ConfigError("<root>", e.mark.line + 1, e.msg);
  }
  return detail::parse_manifold(root);
}

}  // namespace degspin
