#pragma once

#include <cstdio>
#include <stdexcept>
#include <string>
#include <string_view>

namespace degspin {

/// Short %g rendering for residuals in messages (std::to_string would print 0.000000).
inline std::string format_g(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

enum class ErrorKind {
  invalid_element,        // non-unit spin element
  structural,             // bracket or decomposition left its algebra
  invalid_input,          // violated preconditions on tensor data
  ill_conditioned,        // matrix inverse too ill-conditioned to trust
  inconsistent_inputs,    // identity residual above tolerance
  degenerate_complement,  // Gram-Schmidt breakdown
  insufficient_samples,   // FD stencil does not fit the sampled grid
  not_so103_valued,       // connection matrix outside so(1,0,3)
  boundary,               // spinor FD stencil out of range
  invalid_mass,
  integrator_failure,
  config,
};

constexpr std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_element: return "invalid-element";
    case ErrorKind::structural: return "structural";
    case ErrorKind::invalid_input: return "invalid-input";
    case ErrorKind::ill_conditioned: return "ill-conditioned";
    case ErrorKind::inconsistent_inputs: return "inconsistent-inputs";
    case ErrorKind::degenerate_complement: return "degenerate-complement";
    case ErrorKind::insufficient_samples: return "insufficient-samples";
    case ErrorKind::not_so103_valued: return "not-so103-valued";
    case ErrorKind::boundary: return "boundary";
    case ErrorKind::invalid_mass: return "invalid-mass";
    case ErrorKind::integrator_failure: return "integrator-failure";
    case ErrorKind::config: return "config";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

/// Configuration error carrying the offending field path and 1-based line.
class ConfigError : public Error {
 public:
  ConfigError(std::string path, int line, const std::string& message)
      : Error(ErrorKind::config,
              path + " (line " + std::to_string(line) + "): " + message),
        path_(std::move(path)),
        line_(line) {}

  const std::string& path() const noexcept { return path_; }
  int line() const noexcept { return line_; }

 private:
  std::string path_;
  int line_;
};

}  // namespace degspin
