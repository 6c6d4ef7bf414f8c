#include "lagstab/system.hpp"

#include <cmath>
#include <utility>

#include "lagstab/error.hpp"

namespace lagstab {

Profile::Profile() : Profile(Expr{}) {}

Profile::Profile(Expr e)
    : fn_([e](double y) { return eval_jet<3>(e, y); }), expr_(std::move(e)) {}

Profile::Profile(Fn fn, std::string description) : fn_(std::move(fn)), description_(std::move(description)) {}

std::string Profile::describe() const { return expr_ ? print(*expr_) : description_; }

namespace {

struct MetricJets {
  Jet2 a12, a22, V;     // values with two derivatives
  Jet2 a12p, a22p, Vp;  // first derivatives with two more
};

MetricJets metric_jets(const MechanicalSystem& sys, double y) {
  const Jet3 a12 = eval_jet<3>(sys.a12, y);
  const Jet3 a22 = eval_jet<3>(sys.a22, y);
  const Jet3 V = eval_jet<3>(sys.V, y);
  return {truncate<2>(a12), truncate<2>(a22), truncate<2>(V), derivative(a12), derivative(a22), derivative(V)};
}

InverseMetric invert(double a11, const Jet2& a12, const Jet2& a22, double y) {
  const Jet2 det = a11 * a22 - a12 * a12;
  if (det.value() == 0.0) throw SingularMetric(y);
  const Jet2 inv = reciprocal(det);
  return {a22 * inv, -a12 * inv, a11 * inv};
}

}  // namespace

InverseMetric inverse_metric(const MechanicalSystem& sys, double y) {
  return invert(sys.a11, truncate<2>(eval_jet<3>(sys.a12, y)), truncate<2>(eval_jet<3>(sys.a22, y)), y);
}

SodeCoefficients normal_form_at(const MechanicalSystem& sys, double y, const Jet2& M, const Jet2& N) {
  const MetricJets m = metric_jets(sys, y);
  const InverseMetric a = invert(sys.a11, m.a12, m.a22, y);
  const Jet2 half_a22p = 0.5 * m.a22p;
  const Jet2 gyro = M - m.a12p;
  SodeCoefficients c;
  c.T = a.i12 * (-half_a22p) + a.i11 * gyro;
  c.U = a.i12 * (-m.Vp) + a.i11 * N;
  c.R = a.i22 * (-half_a22p) + a.i12 * gyro;
  c.S = a.i22 * (-m.Vp) + a.i12 * N;
  return c;
}

RstuSode::RstuSode(CoefficientFn fn, Interval working) : fn_(std::move(fn)), working_(working) {}

RstuSode RstuSode::with_interval(Interval working) const {
  RstuSode copy = *this;
  copy.working_ = working;
  return copy;
}

RstuSode to_normal_form(const MechanicalSystem& sys, const QuadraticControl& u, std::optional<Interval> working) {
  if (sys.a11 == 0.0 || !std::isfinite(sys.a11)) throw InvalidParameter("a11 must be a non-zero constant");
  const Interval iv = working.value_or(sys.working);
  if (!(iv.lo < iv.hi)) throw InvalidParameter("working interval is empty");

  // det a must keep one sign on the interval.
  constexpr int kProbe = 257;
  double sign0 = 0.0;
  for (int i = 0; i <= kProbe; ++i) {
    const double y = i == 0 ? 0.5 * (iv.lo + iv.hi) : iv.midpoint(i - 1, kProbe);
    const double a12 = eval(sys.a12, y);
    const double det = sys.a11 * eval(sys.a22, y) - a12 * a12;
    if (det == 0.0 || !std::isfinite(det)) throw SingularMetric(y);
    if (i == 0)
      sign0 = det;
    else if ((det > 0) != (sign0 > 0))
      throw SingularMetric(y);
  }

  auto source = std::make_shared<const RstuSode::Source>(RstuSode::Source{sys, u});
  RstuSode sode(
      [source](double y) {
        const Jet2 M = truncate<2>(source->control.M(y));
        const Jet2 N = truncate<2>(source->control.N(y));
        return normal_form_at(source->system, y, M, N);
      },
      iv);
  sode.source_ = std::move(source);
  return sode;
}

MechanicalSystem free_system() {
  MechanicalSystem s;
  s.a11 = 1.0;
  s.a12 = Expr::constant(0.0);
  s.a22 = Expr::constant(1.0);
  s.V = Expr::constant(0.0);
  return s;
}

namespace {

double require(const ParameterMap& p, const std::string& builtin, const std::string& key) {
  auto it = p.find(key);
  if (it == p.end()) throw MissingParameter(builtin, key);
  if (!std::isfinite(it->second)) throw InvalidParameter(builtin + ": parameter '" + key + "' is not finite");
  return it->second;
}

void require_positive(const std::string& builtin, const std::string& key, double v) {
  if (!(v > 0)) throw InvalidParameter(builtin + ": parameter '" + key + "' must be positive");
}

BuiltinSystem cart_pendulum(const ParameterMap& in) {
  const std::string name = "cart-pendulum";
  const double Mc = require(in, name, "M_cart");
  const double m = require(in, name, "m");
  const double l = require(in, name, "l");
  const double g = require(in, name, "g");
  require_positive(name, "M_cart", Mc);
  require_positive(name, "m", m);
  require_positive(name, "l", l);
  require_positive(name, "g", g);
  if (in.count("d") && in.count("kappa"))
    throw InvalidParameter(name + ": 'd' (new control) and 'kappa' (BLM control) are exclusive");

  BuiltinSystem b;
  b.name = name;
  b.params = in;
  b.params["alpha"] = m * l * l;
  b.params["beta"] = m * l;
  b.params["gamma"] = Mc + m;
  b.params["delta"] = -m * g * l;
  const ParameterMap& p = b.params;

  b.system.a11 = p.at("gamma");
  b.system.a12 = parse("$beta*cos(y)", p);
  b.system.a22 = parse("$alpha", p);
  b.system.V = parse("-$delta*cos(y)", p);
  b.system.working = {-std::numbers::pi / 4, std::numbers::pi / 4};

  if (in.count("d")) {
    b.control_name = "new";
    QuadraticControl u;
    u.N = parse("$d*cos(y)*sin(y)", p);
    u.M = parse(
        "-$d*(2*$beta^2*$delta - 2*$alpha*$gamma*$delta + $alpha*$beta*$d"
        " + $beta*(2*$beta*$delta + $alpha*$d)*cos(2*y))*sin(y)"
        " / ($delta*(2*$gamma*$delta + $beta*$d + $beta*$d*cos(2*y)))",
        p);
    b.control = u;
  } else if (in.count("kappa")) {
    const double kappa = p.at("kappa");
    b.control_name = "blm";
    QuadraticControl u;
    const char* den = "($alpha - $beta^2/$gamma*(1 + $kappa)*cos(y)^2)";
    u.N = parse(std::string("$kappa*$beta*$delta*cos(y)*sin(y)/") + den, p);
    u.M = parse(std::string("$kappa*$beta*$alpha*sin(y)/") + den, p);
    b.control = u;
    // Admissible interval: the denominator keeps the sign it has at 0 while
    // sin^2 phi < (kappa - M/m)/(1 + kappa).
    const double s2 = (kappa - Mc / m) / (1.0 + kappa);
    if (s2 > 0.0 && s2 < 1.0) {
      const double phi = std::asin(std::sqrt(s2));
      b.system.working = {-phi, phi};
    }
  }
  return b;
}

BuiltinSystem inertia_wheel(const ParameterMap& in) {
  const std::string name = "inertia-wheel";
  const double a = require(in, name, "a");
  const double bb = require(in, name, "b");
  const double m = require(in, name, "m");
  require_positive(name, "b", bb);
  require_positive(name, "m", m);
  if (!(a > bb)) throw InvalidParameter(name + ": requires a > b > 0");

  BuiltinSystem b;
  b.name = name;
  b.params = in;
  const ParameterMap& p = b.params;
  b.system.a11 = bb;
  b.system.a12 = parse("$b", p);
  b.system.a22 = parse("$a", p);
  b.system.V = parse("$m*(1 + cos(y))", p);
  b.system.working = {-std::numbers::pi / 2, std::numbers::pi / 2};
  if (in.count("d1")) {
    b.control_name = "sine";
    QuadraticControl u;
    u.N = parse("$d1*sin(y)", p);
    u.M = Expr::constant(0.0);
    b.control = u;
  }
  return b;
}

}  // namespace

BuiltinSystem builtin(std::string_view name, const ParameterMap& params) {
  if (name == "cart-pendulum") return cart_pendulum(params);
  if (name == "inertia-wheel") return inertia_wheel(params);
  throw UnknownBuiltin(std::string(name));
}

}  // namespace lagstab
