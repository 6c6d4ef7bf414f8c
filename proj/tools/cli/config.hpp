#pragma once

// Problem description files.
//
//   file    = { line } ;
//   line    = [ header | entry ] [ comment ] LF ;
//   header  = "[" name "]" ;
//   entry   = key "=" value ;
//   value   = number | string | "true" | "false" | "[" [ value { "," value } ] "]" ;
//   string  = '"' { any character except '"' } '"' ;
//   comment = "#" { any character } ;
//
// Sections and keys are listed in README.md; unknown ones are errors.

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include <lagstab/expr.hpp>

namespace lagstab::cli {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, const std::string& reason);
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct SystemSection {
  std::string builtin;  ///< empty for a custom system
  std::optional<double> a11;
  std::string a12, a22, V;  ///< expression text (custom systems)
  std::optional<double> y_min, y_max;
};

enum class ControlKind { None, Builtin, Explicit, Synthesize, Blm };

struct ControlSection {
  ControlKind kind = ControlKind::None;
  std::string M, N;  ///< expression text
  std::string builtin;  ///< expected builtin control name ("new", "blm", "sine"), optional
  double M0 = 0.0;
  double step = 1e-3;
  std::optional<double> kappa, sigma;
};

struct DissipationSection {
  bool present = false;
  std::string A = "1";  ///< expression text; may use $nu0
  std::optional<double> rho1;
  std::string f;        ///< expression text in x and y; may use $nu0
};

struct RunSection {
  double t_end = 20.0;
  double h = 1e-3;
  std::array<double, 4> state0 = {0.0, 0.1, 0.0, 0.0};  ///< x, y, xdot, ydot
  int grid_points = 256;
  double zero_tol = 1e-9;
  double tol = 1e-9;
  double quad_tol = 1e-10;
  std::string out;  ///< CSV path; empty writes to stdout
  std::string svg;  ///< SVG path; empty disables
  std::vector<std::string> channels = {"y", "ydot", "xdot"};
};

struct ProblemSpec {
  SystemSection system;
  ParameterMap params;
  ControlSection control;
  DissipationSection dissipation;
  RunSection run;
};

ProblemSpec parse_config(const std::string& text);

/// Reads and parses a file; an unreadable file is a ParseError at line 0.
ProblemSpec load_config(const std::string& path);

}  // namespace lagstab::cli
