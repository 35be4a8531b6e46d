#pragma once

// Simulation configuration and its `key = value` file format.

#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <string_view>

#include "hsgrowth/brinkman.hpp"
#include "hsgrowth/errors.hpp"
#include "hsgrowth/expression.hpp"
#include "hsgrowth/grid.hpp"
#include "hsgrowth/transport.hpp"

namespace hsgrowth {

/// Initial density profiles.
struct InitialData {
  enum class Kind { Gaussian1, Gaussian2, Uniform, Custom };

  Kind kind = Kind::Gaussian1;
  double value = 0.0;      // Uniform
  std::string expression;  // Custom

  static InitialData gaussian1() { return {Kind::Gaussian1, 0.0, {}}; }
  static InitialData gaussian2() { return {Kind::Gaussian2, 0.0, {}}; }
  static InitialData uniform(double c) { return {Kind::Uniform, c, {}}; }
  static InitialData custom(std::string expr) {
    return {Kind::Custom, 0.0, std::move(expr)};
  }

  std::function<double(double, double)> function() const {
    switch (kind) {
      case Kind::Gaussian1:
        return [](double x, double y) {
          return 0.5 * std::exp(-10.0 * (x * x + y * y));
        };
      case Kind::Gaussian2:
        return [](double x, double y) {
          return 0.5 * std::exp(-10.0 * ((x - 0.7) * (x - 0.7) + y * y)) +
                 0.5 * std::exp(-20.0 * ((x + 0.6) * (x + 0.6) +
                                         (y - 0.2) * (y - 0.2)));
        };
      case Kind::Uniform: {
        const double c = value;
        return [c](double, double) { return c; };
      }
      case Kind::Custom:
        return Expression::parse(expression);
    }
    return {};
  }

  /// "gaussian1", "gaussian2", "uniform:<c>" or "custom:<expr>".
  static InitialData parse(std::string_view text) {
    if (text == "gaussian1") return gaussian1();
    if (text == "gaussian2") return gaussian2();
    if (text.starts_with("uniform:")) {
      const std::string number(text.substr(8));
      char* end = nullptr;
      const double c = std::strtod(number.c_str(), &end);
      if (end == number.c_str() || *end != '\0' || !std::isfinite(c)) {
        throw ConfigError("bad uniform initial value '" + number + "'");
      }
      return uniform(c);
    }
    if (text.starts_with("custom:")) {
      InitialData data = custom(std::string(text.substr(7)));
      (void)Expression::parse(data.expression);
      return data;
    }
    throw ConfigError("unknown initial data '" + std::string(text) + "'");
  }

  std::string to_string() const;
};

struct SimConfig {
  double lo = -2.5;
  double hi = 2.5;
  int n_cells = 40;
  BoundaryCondition bc = BoundaryCondition::Neumann;
  ModelParams params;
  CflConfig cfl;
  EllipticSolverConfig elliptic;
  double t_end = 1.0;
  int output_every = 0;
  std::string output_dir;
  InitialData init;
  bool check_invariants = true;
  Quadrature quadrature = Quadrature::GaussLegendre2x2;

  GridSpec grid() const { return GridSpec::make(lo, hi, n_cells); }

  void validate() const {
    if (n_cells < 4) throw ConfigError("n_cells must be at least 4");
    if (!(std::isfinite(lo) && std::isfinite(hi) && hi > lo)) {
      throw ConfigError("domain bounds must be finite with hi > lo");
    }
    if (!(t_end >= 0.0) || !std::isfinite(t_end)) {
      throw ConfigError("t_end must be finite and nonnegative");
    }
    if (output_every < 0) throw ConfigError("output_every must be >= 0");
    if (init.kind == InitialData::Kind::Uniform && !std::isfinite(init.value)) {
      throw ConfigError("uniform initial value must be finite");
    }
    cfl.validate();
    elliptic.validate();
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return std::string(s.substr(first, last - first + 1));
}

inline double parse_real(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const double x = std::strtod(value.c_str(), &end);
  if (value.empty() || *end != '\0') {
    throw ConfigError("key '" + key + "': expected a number, got '" + value + "'");
  }
  return x;
}

inline int parse_int(const std::string& key, const std::string& value) {
  char* end = nullptr;
  const long x = std::strtol(value.c_str(), &end, 10);
  if (value.empty() || *end != '\0' || x < std::numeric_limits<int>::min() ||
      x > std::numeric_limits<int>::max()) {
    throw ConfigError("key '" + key + "': expected an integer, got '" + value + "'");
  }
  return static_cast<int>(x);
}

inline bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1" || value == "yes") return true;
  if (value == "false" || value == "0" || value == "no") return false;
  throw ConfigError("key '" + key + "': expected a boolean, got '" + value + "'");
}

inline std::string format_real(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

}  // namespace detail

inline std::string InitialData::to_string() const {
  switch (kind) {
    case Kind::Gaussian1: return "gaussian1";
    case Kind::Gaussian2: return "gaussian2";
    case Kind::Uniform: return "uniform:" + detail::format_real(value);
    case Kind::Custom: return "custom:" + expression;
  }
  return {};
}

/// Sets one configuration key. Keys are the SimConfig field names, with the
/// nested parameter blocks flattened.
inline void set_config_value(SimConfig& cfg, const std::string& key,
                             const std::string& value) {
  using detail::parse_int;
  using detail::parse_real;
  const ModelParams& m = cfg.params;
  if (key == "lo") {
    cfg.lo = parse_real(key, value);
  } else if (key == "hi") {
    cfg.hi = parse_real(key, value);
  } else if (key == "n_cells") {
    cfg.n_cells = parse_int(key, value);
  } else if (key == "bc") {
    if (value == "neumann") {
      cfg.bc = BoundaryCondition::Neumann;
    } else if (value == "periodic") {
      cfg.bc = BoundaryCondition::Periodic;
    } else {
      throw ConfigError("bc must be 'neumann' or 'periodic'");
    }
  } else if (key == "mu") {
    cfg.params = ModelParams(parse_real(key, value), m.a(), m.gamma(), m.alpha(), m.beta(), m.theta());
  } else if (key == "a") {
    cfg.params = ModelParams(m.mu(), parse_real(key, value), m.gamma(), m.alpha(), m.beta(), m.theta());
  } else if (key == "gamma") {
    cfg.params = ModelParams(m.mu(), m.a(), parse_real(key, value), m.alpha(), m.beta(), m.theta());
  } else if (key == "alpha") {
    cfg.params = ModelParams(m.mu(), m.a(), m.gamma(), parse_real(key, value), m.beta(), m.theta());
  } else if (key == "beta") {
    cfg.params = ModelParams(m.mu(), m.a(), m.gamma(), m.alpha(), parse_real(key, value), m.theta());
  } else if (key == "theta") {
    cfg.params = ModelParams(m.mu(), m.a(), m.gamma(), m.alpha(), m.beta(), parse_real(key, value));
  } else if (key == "cfl_mode") {
    if (value == "strict_lemma41") {
      cfg.cfl.mode = CflMode::StrictLemma41;
    } else if (value == "strict_lemma43") {
      cfg.cfl.mode = CflMode::StrictLemma43;
    } else if (value == "practical_linear") {
      cfg.cfl.mode = CflMode::PracticalLinear;
    } else {
      throw ConfigError("unknown cfl_mode '" + value + "'");
    }
  } else if (key == "safety") {
    cfg.cfl.safety = parse_real(key, value);
  } else if (key == "practical_number") {
    cfg.cfl.practical_number = parse_real(key, value);
  } else if (key == "max_dt") {
    cfg.cfl.max_dt = parse_real(key, value);
  } else if (key == "rel_tolerance") {
    cfg.elliptic.rel_tolerance = parse_real(key, value);
  } else if (key == "max_iterations") {
    cfg.elliptic.max_iterations = parse_int(key, value);
  } else if (key == "t_end") {
    cfg.t_end = parse_real(key, value);
  } else if (key == "output_every") {
    cfg.output_every = parse_int(key, value);
  } else if (key == "output_dir") {
    cfg.output_dir = value;
  } else if (key == "init") {
    cfg.init = InitialData::parse(value);
  } else if (key == "check_invariants") {
    cfg.check_invariants = detail::parse_bool(key, value);
  } else if (key == "quadrature") {
    if (value == "gauss") {
      cfg.quadrature = Quadrature::GaussLegendre2x2;
    } else if (value == "midpoint") {
      cfg.quadrature = Quadrature::Midpoint;
    } else {
      throw ConfigError("quadrature must be 'gauss' or 'midpoint'");
    }
  } else {
    throw ConfigError("unknown configuration key '" + key + "'");
  }
}

/// Applies "key=value".
inline void apply_override(SimConfig& cfg, std::string_view assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string_view::npos) {
    throw ConfigError("override '" + std::string(assignment) +
                      "' is not of the form key=value");
  }
  set_config_value(cfg, detail::trim(assignment.substr(0, eq)),
                   detail::trim(assignment.substr(eq + 1)));
}

inline SimConfig parse_config(std::string_view text) {
  SimConfig cfg;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    const auto hash = line.find('#');
    const std::string body = detail::trim(
        hash == std::string::npos ? std::string_view(line)
                                  : std::string_view(line).substr(0, hash));
    if (body.empty()) continue;
    try {
      apply_override(cfg, body);
    } catch (const ConfigError& e) {
      throw ConfigError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return cfg;
}

inline SimConfig load_config(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw ConfigError("cannot read config file '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_config(buffer.str());
}

}  // namespace hsgrowth
