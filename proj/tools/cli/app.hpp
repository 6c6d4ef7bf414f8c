#pragma once

#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <lagstab/lagstab.hpp>

#include "cli/config.hpp"

namespace lagstab::cli {

/// A parsed config turned into library objects. The multiplier and the
/// dissipative augmentation are built on first use.
class Problem {
 public:
  explicit Problem(ProblemSpec spec);

  const ProblemSpec& spec() const { return spec_; }
  ProblemSpec& spec() { return spec_; }
  const MechanicalSystem& system() const { return sys_; }
  const RstuSode& sode() const { return *sode_; }
  /// Parameters visible to expressions, including nu0 when Phi^2_2(0) != 0.
  const ParameterMap& params() const { return params_; }
  const std::optional<SolvedControl>& solved() const { return solved_; }
  std::string control_description() const;

  const Multiplier& multiplier();
  /// Null without a dissipation f.
  const DissipativeAugmentation* augmentation();

 private:
  ProblemSpec spec_;
  ParameterMap params_;
  MechanicalSystem sys_;
  std::string control_name_;
  std::optional<SolvedControl> solved_;
  std::optional<RstuSode> sode_;
  std::optional<Multiplier> mult_;
  std::optional<DissipativeAugmentation> aug_;
  bool aug_built_ = false;
};

void print_classify(Problem& p, std::ostream& out);
void print_check(Problem& p, std::ostream& out);
void print_stabilize(Problem& p, std::ostream& out);
/// Tabulated M as CSV (y,M,Mp). Throws ValidationError without a synthesize directive.
void write_synthesized(Problem& p, std::ostream& out);
Trajectory simulate(Problem& p);

/// Entry point of the command-line tool; returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace lagstab::cli
