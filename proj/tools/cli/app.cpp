#include "cli/app.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "cli/output.hpp"

namespace lagstab::cli {

namespace {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.10g", v);
  return buf;
}

std::string interval_text(const Interval& iv) { return "(" + num(iv.lo) + ", " + num(iv.hi) + ")"; }

template <class Write>
void write_file(const std::string& path, Write&& write) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot open " + path + " for writing");
  write(f);
  f.flush();
  if (!f) throw IoError("write to " + path + " failed");
}

Expr constant_expr(const std::string& text, const ParameterMap& params, const char* what) {
  Expr e = parse(text, params);
  if (e.depends_on_x() || e.depends_on_y()) throw ValidationError(std::string(what) + " must be a constant");
  return e;
}

}  // namespace

Problem::Problem(ProblemSpec spec) : spec_(std::move(spec)), params_(spec_.params) {
  const SystemSection& ss = spec_.system;
  const ControlSection& cs = spec_.control;
  std::optional<QuadraticControl> builtin_control;
  if (!ss.builtin.empty()) {
    BuiltinSystem b = builtin(ss.builtin, params_);
    sys_ = b.system;
    params_ = b.params;
    builtin_control = b.control;
    control_name_ = b.control_name;
  } else {
    sys_.a11 = *ss.a11;
    sys_.a12 = parse(ss.a12, params_);
    sys_.a22 = parse(ss.a22, params_);
    sys_.V = parse(ss.V, params_);
  }
  if (ss.y_min) sys_.working = Interval{*ss.y_min, *ss.y_max};

  QuadraticControl u;
  Interval working = sys_.working;
  switch (cs.kind) {
    case ControlKind::Builtin:
      if (!builtin_control) throw ValidationError("builtin " + ss.builtin + " has no control for these parameters");
      if (!cs.builtin.empty() && cs.builtin != control_name_)
        throw ValidationError("[control] builtin = \"" + cs.builtin + "\" but the parameters select \"" +
                              control_name_ + "\"");
      u = *builtin_control;
      control_name_ = "builtin " + control_name_;
      break;
    case ControlKind::Explicit:
      u = QuadraticControl{parse(cs.M, params_), parse(cs.N, params_)};
      control_name_ = "explicit";
      break;
    case ControlKind::Synthesize:
      solved_ = solve_M(sys_, Profile(parse(cs.N, params_)), cs.M0, cs.step, sys_.working);
      u = solved_->control;
      working = solved_->interval;
      control_name_ = "synthesized";
      break;
    case ControlKind::Blm:
      u = cs.kappa ? blm_control(sys_, *cs.kappa) : blm_control_sigma(sys_, *cs.sigma);
      control_name_ = "blm";
      break;
    case ControlKind::None:
      control_name_ = "none";
      break;
  }
  sode_ = to_normal_form(sys_, u, working);
  try {
    params_["nu0"] = nu(*sode_, 0.0);
  } catch (const DomainError&) {
    // nu0 stays unbound; expressions using it raise UnboundParameter.
  }
}

std::string Problem::control_description() const { return control_name_; }

const Multiplier& Problem::multiplier() {
  if (!mult_) {
    MultiplierOptions opts;
    opts.A = eval(constant_expr(spec_.dissipation.A, params_, "A"), 0.0);
    if (spec_.dissipation.rho1) opts.rho1 = *spec_.dissipation.rho1;
    opts.quad_tol = spec_.run.quad_tol;
    mult_ = build_multiplier(*sode_, opts);
  }
  return *mult_;
}

const DissipativeAugmentation* Problem::augmentation() {
  if (!aug_built_) {
    if (!spec_.dissipation.f.empty()) aug_ = build_dissipative(sys_, multiplier(), parse(spec_.dissipation.f, params_));
    aug_built_ = true;
  }
  return aug_ ? &*aug_ : nullptr;
}

void print_classify(Problem& p, std::ostream& out) {
  const RunSection& r = p.spec().run;
  const DouglasReport rep = classify(p.sode(), r.grid_points, r.zero_tol);
  out << "classification: " << to_string(rep.overall()) << '\n';
  out << "  interval: " << interval_text(rep.interval) << "  grid points: " << rep.samples.size() << '\n';
  out << "  phi_tol: " << num(rep.phi_tol) << "  disc_tol: " << num(rep.disc_tol) << '\n';
  for (const auto& s : rep.segments)
    out << "  segment [" << num(s.lo) << ", " << num(s.hi) << "]: " << to_string(s.verdict) << '\n';
}

void print_check(Problem& p, std::ostream& out) {
  const RunSection& r = p.spec().run;
  const VariationalityVerdict v = variational_check(p.sode(), r.grid_points, r.tol);
  out << "variational: " << (v.is_variational ? "yes" : "no") << '\n';
  if (v.branch == VariationalBranch::Phi22Zero) {
    out << "  branch: Phi^2_2 vanishes identically\n";
    return;
  }
  out << "  branch: equivalent criteria  tol: " << num(v.tol) << "  grid points: " << v.grid_points << '\n';
  out << "  rank1 residual: " << num(v.rank1_max_residual) << '\n';
  out << "  (U - nu S)' residual: " << num(v.potential_residual) << '\n';
  out << "  nu' - (T - R nu) residual: " << num(v.nu_residual) << '\n';
  out << "  min |Phi^2_2|: " << num(v.min_abs_phi22) << '\n';
}

void print_stabilize(Problem& p, std::ostream& out) {
  const RunSection& r = p.spec().run;
  const VariationalityVerdict v = variational_check(p.sode(), r.grid_points, r.tol);
  const StabilityReport s = stability_report(p.sode(), v, r.tol);
  out << "stable: " << (s.stable ? "yes" : "no") << '\n';
  out << "  equilibrium at 0: " << (s.equilibrium_ok ? "yes" : "no") << "  S(0): " << num(s.s0)
      << "  U(0): " << num(s.u0) << '\n';
  out << "  variational: " << (s.variational ? "yes" : "no") << "  Phi^2_2(0): " << num(s.phi22_0) << '\n';
  out << "  S'(0): " << num(s.s_prime_0) << '\n';
  for (const auto& n : s.notes) out << "  note: " << n << '\n';
  if (!s.stable) {
    out << "lasalle: skipped (equilibrium not shown stable)\n";
    return;
  }
  const LaSalleReport l = lasalle_check(p.sode(), p.multiplier(), p.system(), r.grid_points);
  out << "lasalle (with u2): " << to_string(l.verdict) << '\n';
  out << "  box(0): " << num(l.box) << "  diamond(0): " << num(l.diamond)
      << "  constant: " << (l.constant_terms ? "yes" : "no") << '\n';
  if (!l.detail.empty()) out << "  " << l.detail << '\n';
}

void write_synthesized(Problem& p, std::ostream& out) {
  if (!p.solved()) throw ValidationError("config has no synthesize directive");
  const SolvedControl& s = *p.solved();
  out << "y,M,Mp\n";
  char buf[128];
  for (std::size_t k = 0; k < s.y.size(); ++k) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.y[k], s.M[k], s.Mp[k]);
    out << buf;
  }
}

Trajectory simulate(Problem& p) {
  const RunSection& r = p.spec().run;
  const DissipativeAugmentation* aug = p.augmentation();
  const Multiplier* mult = nullptr;
  try {
    mult = &p.multiplier();
  } catch (const Error&) {
    if (p.spec().dissipation.present) throw;
    // No multiplier for this system: the energy column stays empty.
  }
  const FullState s0{r.state0[0], r.state0[1], r.state0[2], r.state0[3]};
  return integrate_full(p.sode(), aug, s0, r.t_end, r.h, mult);
}

namespace {

void print_simulation_summary(Problem& p, const Trajectory& tr, std::ostream& out) {
  out << "simulation: " << tr.size() - 1 << " steps of h = " << num(tr.h) << " to t = " << num(tr.t.back())
      << '\n';
  out << "  final state: x = " << num(tr.x.back()) << "  y = " << num(tr.y.back())
      << "  xdot = " << num(tr.xdot.back()) << "  ydot = " << num(tr.ydot.back()) << '\n';
  if (!tr.energy.empty()) {
    const EnergyMonitor m = monitor_energy(tr, p.multiplier());
    out << "  energy: E(0) = " << num(m.series.front()) << "  E(end) = " << num(m.series.back())
        << "  max drift = " << num(m.max_drift) << "  nonincreasing: " << (m.monotone ? "yes" : "no") << '\n';
  }
}

void write_outputs(Problem& p, const Trajectory& tr, std::ostream& out, bool csv_to_stdout) {
  const RunSection& r = p.spec().run;
  if (!r.out.empty())
    write_file(r.out, [&](std::ostream& f) { emit_csv(tr, f); });
  else if (csv_to_stdout)
    emit_csv(tr, out);
  if (!r.svg.empty()) write_file(r.svg, [&](std::ostream& f) { emit_svg(tr, r.channels, f); });
}

struct Overrides {
  std::string config;
  std::optional<double> t_end, h;
  std::optional<std::string> out, svg;
};

void add_common(CLI::App* sub, Overrides& o) {
  sub->add_option("config", o.config, "problem description file")->required()->check(CLI::ExistingFile);
}

void add_run_flags(CLI::App* sub, Overrides& o) {
  sub->add_option("--t-end", o.t_end, "simulation end time");
  sub->add_option("--h", o.h, "RK4 step");
  sub->add_option("--svg", o.svg, "SVG plot path");
}

int execute(const std::string& command, const Overrides& o, std::ostream& out) {
  ProblemSpec spec = load_config(o.config);
  if (o.t_end) spec.run.t_end = *o.t_end;
  if (o.h) spec.run.h = *o.h;
  if (o.out) spec.run.out = *o.out;
  if (o.svg) spec.run.svg = *o.svg;
  if (!(spec.run.h > 0)) throw ValidationError("h must be positive");
  if (!(spec.run.t_end >= 0)) throw ValidationError("t_end must be non-negative");

  if (command == "synthesize" && spec.control.kind != ControlKind::Synthesize)
    throw ValidationError("config has no synthesize directive");
  Problem p(std::move(spec));
  if (command == "classify") {
    print_classify(p, out);
  } else if (command == "check") {
    print_check(p, out);
  } else if (command == "synthesize") {
    if (p.spec().run.out.empty())
      write_synthesized(p, out);
    else
      write_file(p.spec().run.out, [&](std::ostream& f) { write_synthesized(p, f); });
  } else if (command == "stabilize") {
    print_stabilize(p, out);
  } else if (command == "simulate") {
    write_outputs(p, simulate(p), out, true);
  } else {
    out << "system: " << (p.spec().system.builtin.empty() ? "custom" : p.spec().system.builtin)
        << "  control: " << p.control_description() << '\n';
    print_classify(p, out);
    print_check(p, out);
    if (p.solved())
      out << "synthesized M: " << p.solved()->y.size() << " nodes on " << interval_text(p.solved()->interval)
          << "  verification: " << num(p.solved()->verification) << '\n';
    print_stabilize(p, out);
    const Trajectory tr = simulate(p);
    print_simulation_summary(p, tr, out);
    write_outputs(p, tr, out, false);
  }
  return 0;
}

bool is_input_error(const Error& e) {
  return dynamic_cast<const SyntaxError*>(&e) || dynamic_cast<const UnboundParameter*>(&e) ||
         dynamic_cast<const UnknownBuiltin*>(&e) || dynamic_cast<const MissingParameter*>(&e);
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stabilizing controls for two-dimensional underactuated mechanical systems", "lagstab"};
  app.set_help_flag("--help", "print help and exit");  // keeps -h free; --h is the step flag
  app.require_subcommand(1);
  Overrides o;
  struct Cmd {
    const char* name;
    const char* help;
    bool run_flags;
  };
  const Cmd cmds[] = {
      {"classify", "Douglas case of the controlled equations", false},
      {"check", "variationality criteria", false},
      {"synthesize", "solve for M given the N ansatz; writes y,M,Mp CSV", false},
      {"stabilize", "stability of the equilibrium and the LaSalle verdict", false},
      {"simulate", "RK4 trajectory as CSV (and SVG)", true},
      {"report", "all of the above", true},
  };
  for (const auto& c : cmds) {
    CLI::App* sub = app.add_subcommand(c.name, c.help);
    add_common(sub, o);
    sub->add_option("--out", o.out, "output CSV path");
    if (c.run_flags) add_run_flags(sub, o);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    return execute(command, o, out);
  } catch (const ParseError& e) {
    err << "lagstab: " << o.config << ": " << e.what() << '\n';
    return 2;
  } catch (const ValidationError& e) {
    err << "lagstab: " << o.config << ": " << e.what() << '\n';
    return 2;
  } catch (const Error& e) {
    err << "lagstab: " << command << ": " << e.what() << '\n';
    return is_input_error(e) ? 2 : 1;
  } catch (const std::exception& e) {
    err << "lagstab: " << command << ": " << e.what() << '\n';
    return 1;
  }
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  std::vector<const char*> argv;
  argv.push_back("lagstab");
  for (const auto& a : args) argv.push_back(a.c_str());
  return run(static_cast<int>(argv.size()), argv.data(), out, err);
}

}  // namespace lagstab::cli
