#include "cli/config.hpp"

#include <cctype>
#include <charconv>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace lagstab::cli {

ParseError::ParseError(int line, const std::string& reason)
    : std::runtime_error("line " + std::to_string(line) + ": " + reason), line_(line) {}

namespace {

struct Value {
  enum class Kind { Number, String, Bool, Array } kind = Kind::Number;
  double number = 0;
  std::string text;  // string contents, or the literal spelling of a number
  bool boolean = false;
  std::vector<Value> items;
  int line = 0;
};

class LineParser {
 public:
  LineParser(std::string_view s, int line) : s_(s), line_(line) {}

  Value value() {
    skip_ws();
    if (at_end()) fail("expected a value");
    Value v;
    v.line = line_;
    const char c = s_[pos_];
    if (c == '"') {
      const auto close = s_.find('"', pos_ + 1);
      if (close == std::string_view::npos) fail("unterminated string");
      v.kind = Value::Kind::String;
      v.text = std::string(s_.substr(pos_ + 1, close - pos_ - 1));
      pos_ = close + 1;
    } else if (c == '[') {
      ++pos_;
      v.kind = Value::Kind::Array;
      skip_ws();
      if (!at_end() && s_[pos_] == ']') {
        ++pos_;
        return v;
      }
      for (;;) {
        v.items.push_back(value());
        if (v.items.back().kind == Value::Kind::Array) fail("nested arrays are not allowed");
        skip_ws();
        if (at_end()) fail("unterminated array");
        if (s_[pos_] == ']') {
          ++pos_;
          break;
        }
        if (s_[pos_] != ',') fail("expected ',' or ']'");
        ++pos_;
      }
    } else if (s_.substr(pos_, 4) == "true" || s_.substr(pos_, 5) == "false") {
      v.kind = Value::Kind::Bool;
      v.boolean = s_[pos_] == 't';
      pos_ += v.boolean ? 4 : 5;
    } else {
      std::size_t end = pos_;
      while (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '.' ||
                                 s_[end] == '-' || s_[end] == '+'))
        ++end;
      const std::string_view tok = s_.substr(pos_, end - pos_);
      const char* first = tok.data();
      if (!tok.empty() && tok.front() == '+') ++first;
      const auto [ptr, ec] = std::from_chars(first, tok.data() + tok.size(), v.number);
      if (tok.empty() || ec != std::errc() || ptr != tok.data() + tok.size())
        fail("invalid value '" + std::string(tok) + "'");
      v.kind = Value::Kind::Number;
      v.text = std::string(tok);
      pos_ = end;
    }
    return v;
  }

  void expect_end() {
    skip_ws();
    if (!at_end()) fail("unexpected trailing text");
  }

 private:
  [[noreturn]] void fail(const std::string& why) const { throw ParseError(line_, why); }
  bool at_end() const { return pos_ >= s_.size(); }
  void skip_ws() {
    while (!at_end() && (s_[pos_] == ' ' || s_[pos_] == '\t')) ++pos_;
  }

  std::string_view s_;
  std::size_t pos_ = 0;
  int line_;
};

bool is_identifier(std::string_view s) {
  if (s.empty() || !(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_')) return false;
  return true;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Strips a trailing comment, ignoring '#' inside strings.
std::string_view strip_comment(std::string_view s) {
  bool in_string = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

using Section = std::map<std::string, Value, std::less<>>;

const std::map<std::string, std::set<std::string>, std::less<>> kKeys = {
    {"system", {"builtin", "a11", "a12", "a22", "V", "y_min", "y_max"}},
    {"params", {}},
    {"control", {"M", "N", "builtin", "synthesize", "M0", "step", "kappa", "sigma"}},
    {"dissipation", {"A", "rho1", "f"}},
    {"run", {"t_end", "h", "state0", "grid_points", "zero_tol", "tol", "quad_tol", "out", "svg", "channels"}},
};

// Parameters that switch on a builtin's closed-form control.
const std::map<std::string, std::set<std::string>, std::less<>> kBuiltinControlParams = {
    {"cart-pendulum", {"d", "kappa"}},
    {"inertia-wheel", {"d1"}},
};

const std::set<std::string, std::less<>> kChannels = {"x", "y", "xdot", "ydot", "E", "u", "u2"};

[[noreturn]] void invalid(const std::string& why) { throw ValidationError(why); }

double number(const Value& v, const std::string& key) {
  if (v.kind != Value::Kind::Number) throw ParseError(v.line, key + " must be a number");
  return v.number;
}

std::string string(const Value& v, const std::string& key) {
  if (v.kind != Value::Kind::String) throw ParseError(v.line, key + " must be a string");
  return v.text;
}

// Expressions may be written as a bare number or a quoted string.
std::string expression(const Value& v, const std::string& key) {
  if (v.kind == Value::Kind::Number) return v.text;
  if (v.kind == Value::Kind::String) return v.text;
  throw ParseError(v.line, key + " must be an expression string or a number");
}

bool boolean(const Value& v, const std::string& key) {
  if (v.kind != Value::Kind::Bool) throw ParseError(v.line, key + " must be true or false");
  return v.boolean;
}

template <class F>
void with(const Section& s, std::string_view key, F&& f) {
  if (auto it = s.find(key); it != s.end()) f(it->second);
}

}  // namespace

ProblemSpec parse_config(const std::string& text) {
  std::map<std::string, Section, std::less<>> sections;
  Section* current = nullptr;
  std::string current_name;

  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw)) {
    ++line;
    const std::string_view s = trim(strip_comment(raw));
    if (s.empty()) continue;
    if (s.front() == '[') {
      if (s.back() != ']') throw ParseError(line, "malformed section header");
      const std::string name(trim(s.substr(1, s.size() - 2)));
      if (!kKeys.count(name)) throw ParseError(line, "unknown section [" + name + "]");
      if (sections.count(name)) throw ParseError(line, "duplicate section [" + name + "]");
      current = &sections[name];
      current_name = name;
      continue;
    }
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError(line, "expected 'key = value'");
    if (!current) throw ParseError(line, "entry outside any section");
    const std::string key(trim(s.substr(0, eq)));
    if (!is_identifier(key)) throw ParseError(line, "invalid key '" + key + "'");
    const auto& allowed = kKeys.at(current_name);
    if (current_name != "params" && !allowed.count(key))
      throw ParseError(line, "unknown key '" + key + "' in [" + current_name + "]");
    if (current->count(key)) throw ParseError(line, "duplicate key '" + key + "'");
    LineParser p(s.substr(eq + 1), line);
    Value v = p.value();
    p.expect_end();
    current->emplace(key, std::move(v));
  }

  ProblemSpec spec;
  const Section empty;
  auto section = [&](std::string_view name) -> const Section& {
    auto it = sections.find(name);
    return it == sections.end() ? empty : it->second;
  };

  for (const auto& [key, v] : section("params")) {
    if (key == "nu0") invalid("parameter name nu0 is reserved");
    spec.params[key] = number(v, key);
  }

  if (!sections.count("system")) invalid("missing [system] section");
  const Section& sys = section("system");
  SystemSection& ss = spec.system;
  with(sys, "builtin", [&](const Value& v) { ss.builtin = string(v, "builtin"); });
  with(sys, "a11", [&](const Value& v) { ss.a11 = number(v, "a11"); });
  with(sys, "a12", [&](const Value& v) { ss.a12 = expression(v, "a12"); });
  with(sys, "a22", [&](const Value& v) { ss.a22 = expression(v, "a22"); });
  with(sys, "V", [&](const Value& v) { ss.V = expression(v, "V"); });
  with(sys, "y_min", [&](const Value& v) { ss.y_min = number(v, "y_min"); });
  with(sys, "y_max", [&](const Value& v) { ss.y_max = number(v, "y_max"); });
  const bool any_custom = ss.a11 || !ss.a12.empty() || !ss.a22.empty() || !ss.V.empty();
  if (!ss.builtin.empty() && any_custom) invalid("[system] mixes builtin with a11/a12/a22/V");
  if (ss.builtin.empty() && (!ss.a11 || ss.a12.empty() || ss.a22.empty() || ss.V.empty()))
    invalid("custom [system] needs a11, a12, a22 and V");
  if (ss.y_min.has_value() != ss.y_max.has_value()) invalid("y_min and y_max must be given together");
  if (ss.y_min && !(*ss.y_min < *ss.y_max)) invalid("y_min must be below y_max");

  const Section& ctl = section("control");
  ControlSection& cs = spec.control;
  with(ctl, "M", [&](const Value& v) { cs.M = expression(v, "M"); });
  with(ctl, "N", [&](const Value& v) { cs.N = expression(v, "N"); });
  bool synthesize = false;
  with(ctl, "synthesize", [&](const Value& v) { synthesize = boolean(v, "synthesize"); });
  with(ctl, "builtin", [&](const Value& v) { cs.builtin = string(v, "builtin"); });
  with(ctl, "M0", [&](const Value& v) { cs.M0 = number(v, "M0"); });
  with(ctl, "step", [&](const Value& v) { cs.step = number(v, "step"); });
  with(ctl, "kappa", [&](const Value& v) { cs.kappa = number(v, "kappa"); });
  with(ctl, "sigma", [&](const Value& v) { cs.sigma = number(v, "sigma"); });

  std::vector<ControlKind> sources;
  if (synthesize) {
    if (!cs.M.empty()) invalid("[control] has both an explicit M and a synthesize directive");
    if (cs.N.empty()) invalid("synthesize directive needs an N ansatz");
    sources.push_back(ControlKind::Synthesize);
  } else {
    if (ctl.count("M0") || ctl.count("step")) invalid("M0 and step need synthesize = true");
    if (!cs.M.empty() || !cs.N.empty()) {
      if (cs.M.empty() || cs.N.empty()) invalid("explicit control needs both M and N");
      sources.push_back(ControlKind::Explicit);
    }
  }
  if (cs.kappa || cs.sigma) {
    if (cs.kappa && cs.sigma) invalid("give kappa or sigma, not both");
    sources.push_back(ControlKind::Blm);
  }
  if (!cs.builtin.empty()) {
    if (ss.builtin.empty()) invalid("[control] builtin needs a builtin [system]");
    sources.push_back(ControlKind::Builtin);
  } else if (!ss.builtin.empty()) {
    auto it = kBuiltinControlParams.find(ss.builtin);
    if (it != kBuiltinControlParams.end())
      for (const auto& p : it->second)
        if (spec.params.count(p)) {
          sources.push_back(ControlKind::Builtin);
          break;
        }
  }
  if (sources.size() > 1)
    invalid("exactly one control source is allowed (explicit M/N, synthesize, kappa/sigma, or builtin parameters)");
  if (!sources.empty()) cs.kind = sources.front();

  if (sections.count("dissipation")) {
    const Section& dis = section("dissipation");
    DissipationSection& ds = spec.dissipation;
    ds.present = true;
    with(dis, "A", [&](const Value& v) { ds.A = expression(v, "A"); });
    with(dis, "rho1", [&](const Value& v) { ds.rho1 = number(v, "rho1"); });
    with(dis, "f", [&](const Value& v) { ds.f = expression(v, "f"); });
  }

  const Section& run = section("run");
  RunSection& rs = spec.run;
  with(run, "t_end", [&](const Value& v) { rs.t_end = number(v, "t_end"); });
  with(run, "h", [&](const Value& v) { rs.h = number(v, "h"); });
  with(run, "state0", [&](const Value& v) {
    if (v.kind != Value::Kind::Array || v.items.size() != 4)
      throw ParseError(v.line, "state0 must be [x, y, xdot, ydot]");
    for (int k = 0; k < 4; ++k) rs.state0[k] = number(v.items[k], "state0");
  });
  with(run, "grid_points", [&](const Value& v) {
    const double g = number(v, "grid_points");
    if (g != static_cast<int>(g)) throw ParseError(v.line, "grid_points must be an integer");
    rs.grid_points = static_cast<int>(g);
  });
  with(run, "zero_tol", [&](const Value& v) { rs.zero_tol = number(v, "zero_tol"); });
  with(run, "tol", [&](const Value& v) { rs.tol = number(v, "tol"); });
  with(run, "quad_tol", [&](const Value& v) { rs.quad_tol = number(v, "quad_tol"); });
  with(run, "out", [&](const Value& v) { rs.out = string(v, "out"); });
  with(run, "svg", [&](const Value& v) { rs.svg = string(v, "svg"); });
  with(run, "channels", [&](const Value& v) {
    if (v.kind != Value::Kind::Array) throw ParseError(v.line, "channels must be an array of strings");
    rs.channels.clear();
    for (const auto& item : v.items) {
      const std::string c = string(item, "channels");
      if (!kChannels.count(c)) throw ParseError(v.line, "unknown channel '" + c + "'");
      rs.channels.push_back(c);
    }
  });
  if (!(rs.h > 0)) invalid("h must be positive");
  if (!(rs.t_end >= 0)) invalid("t_end must be non-negative");
  if (rs.grid_points < 2) invalid("grid_points must be at least 2");
  if (!(rs.zero_tol > 0) || !(rs.tol > 0) || !(rs.quad_tol > 0)) invalid("tolerances must be positive");
  return spec;
}

ProblemSpec load_config(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ParseError(0, "cannot read " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

}  // namespace lagstab::cli
