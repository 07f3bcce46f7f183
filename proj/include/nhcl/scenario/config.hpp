#pragma once

// Scenario configuration: a flat "key = value" text format.
//
//   # comment lines and trailing comments start with '#'
//   scenario = damped_ho
//   gamma    = 0.1
//   omega_prime = auto      # optional values take "auto"
//
// Every key has a fixed type; unknown keys, duplicates and malformed values
// are rejected with an error naming the key. to_text() writes every key, so
// its output parses back to the same configuration.

#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "nhcl/error.hpp"
#include "nhcl/operators.hpp"

namespace nhcl::scenario {

enum class Kind { damped_ho, driven_ho, cat_state, anharmonic, revival, bloch, husimi, fixed_points, verify };

// Where the oscillator quantum state comes from. closed_form evaluates the exact
// driven-oscillator solution; propagate integrates the Fock-basis equation.
enum class QuantumSource { propagate, closed_form };

inline constexpr std::pair<Kind, const char*> kKindNames[] = {
    {Kind::damped_ho, "damped_ho"},   {Kind::driven_ho, "driven_ho"}, {Kind::cat_state, "cat_state"},
    {Kind::anharmonic, "anharmonic"}, {Kind::revival, "revival"},     {Kind::bloch, "bloch"},
    {Kind::husimi, "husimi"},         {Kind::fixed_points, "fixed_points"}, {Kind::verify, "verify"},
};

inline const char* to_string(Kind k) {
  for (const auto& [kind, name] : kKindNames)
    if (kind == k) return name;
  return "?";
}

inline Kind parse_kind(const std::string& s) {
  for (const auto& [kind, name] : kKindNames)
    if (s == name) return kind;
  throw error(errc::config, "scenario: unknown scenario '" + s + "'");
}

struct ScenarioConfig {
  Kind scenario = Kind::damped_ho;
  std::string out = "out";

  // Oscillator families.
  double m = 1.0;
  double omega = 1.0;
  double hbar = 1.0;
  double gamma = 0.1;
  DampingKind damping = DampingKind::proportional_to_H0;
  std::optional<double> omega_prime;
  double beta = 0.0;
  double f0 = 0.0;
  double Omega = 1.0;
  double q0 = 2.0;
  double p0 = 0.0;
  int dim = 128;
  QuantumSource quantum = QuantumSource::propagate;

  // Integration.
  double tol = 1e-10;
  double t_end = 30.0;
  int n_steps = 600;

  // Spin.
  double L = 40.0;
  double epsilon = 0.0;
  double v = 1.0;
  double g = 1.5;  // classical nonlinearity; the quantum c is g / (2L)
  double theta0 = 0.5;
  double phi0 = 0.45;

  // Husimi grid and averaging window (auto: the last drive period).
  double q_min = -3.0, q_max = 3.0, p_min = -3.0, p_max = 3.0;
  int n_q = 201, n_p = 201;
  std::optional<double> window_begin, window_end;

  int seeds = 64;

  bool operator==(const ScenarioConfig&) const = default;
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

inline std::string format_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline double parse_double(const std::string& key, const std::string& s) {
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(x))
    throw error(errc::config, key + ": expected a finite number, got '" + s + "'");
  return x;
}

inline int parse_int(const std::string& key, const std::string& s) {
  int x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (ec != std::errc() || ptr != s.data() + s.size())
    throw error(errc::config, key + ": expected an integer, got '" + s + "'");
  return x;
}

inline std::optional<double> parse_optional(const std::string& key, const std::string& s) {
  if (s == "auto") return std::nullopt;
  return parse_double(key, s);
}

inline std::string format_optional(const std::optional<double>& x) { return x ? format_double(*x) : "auto"; }

inline const char* damping_name(DampingKind k) {
  switch (k) {
    case DampingKind::proportional_to_H0: return "proportional";
    case DampingKind::kinetic_only: return "kinetic_only";
    case DampingKind::none: return "none";
  }
  return "?";
}

inline DampingKind parse_damping(const std::string& s) {
  if (s == "proportional") return DampingKind::proportional_to_H0;
  if (s == "kinetic_only") return DampingKind::kinetic_only;
  if (s == "none") return DampingKind::none;
  throw error(errc::config, "damping: expected proportional, kinetic_only or none, got '" + s + "'");
}

inline const char* source_name(QuantumSource q) {
  return q == QuantumSource::closed_form ? "closed_form" : "propagate";
}

inline QuantumSource parse_source(const std::string& s) {
  if (s == "propagate") return QuantumSource::propagate;
  if (s == "closed_form") return QuantumSource::closed_form;
  throw error(errc::config, "quantum: expected propagate or closed_form, got '" + s + "'");
}

struct Field {
  const char* key;
  std::function<std::string(const ScenarioConfig&)> get;
  std::function<void(ScenarioConfig&, const std::string&)> set;
};

#define NHCL_DOUBLE(name)                                                        \
  Field {                                                                        \
    #name, [](const ScenarioConfig& c) { return format_double(c.name); },        \
        [](ScenarioConfig& c, const std::string& s) { c.name = parse_double(#name, s); } \
  }
#define NHCL_INT(name)                                                           \
  Field {                                                                        \
    #name, [](const ScenarioConfig& c) { return std::to_string(c.name); },       \
        [](ScenarioConfig& c, const std::string& s) { c.name = parse_int(#name, s); } \
  }
#define NHCL_OPTIONAL(name)                                                      \
  Field {                                                                        \
    #name, [](const ScenarioConfig& c) { return format_optional(c.name); },      \
        [](ScenarioConfig& c, const std::string& s) { c.name = parse_optional(#name, s); } \
  }

inline const std::vector<Field>& fields() {
  static const std::vector<Field> table = {
      {"scenario", [](const ScenarioConfig& c) { return std::string(to_string(c.scenario)); },
       [](ScenarioConfig& c, const std::string& s) { c.scenario = parse_kind(s); }},
      {"out", [](const ScenarioConfig& c) { return c.out; },
       [](ScenarioConfig& c, const std::string& s) {
         if (s.empty()) throw error(errc::config, "out: empty output directory");
         c.out = s;
       }},
      NHCL_DOUBLE(m), NHCL_DOUBLE(omega), NHCL_DOUBLE(hbar), NHCL_DOUBLE(gamma),
      {"damping", [](const ScenarioConfig& c) { return std::string(damping_name(c.damping)); },
       [](ScenarioConfig& c, const std::string& s) { c.damping = parse_damping(s); }},
      NHCL_OPTIONAL(omega_prime), NHCL_DOUBLE(beta), NHCL_DOUBLE(f0), NHCL_DOUBLE(Omega), NHCL_DOUBLE(q0),
      NHCL_DOUBLE(p0), NHCL_INT(dim),
      {"quantum", [](const ScenarioConfig& c) { return std::string(source_name(c.quantum)); },
       [](ScenarioConfig& c, const std::string& s) { c.quantum = parse_source(s); }},
      NHCL_DOUBLE(tol), NHCL_DOUBLE(t_end), NHCL_INT(n_steps), NHCL_DOUBLE(L),
      NHCL_DOUBLE(epsilon), NHCL_DOUBLE(v), NHCL_DOUBLE(g), NHCL_DOUBLE(theta0), NHCL_DOUBLE(phi0),
      NHCL_DOUBLE(q_min), NHCL_DOUBLE(q_max), NHCL_DOUBLE(p_min), NHCL_DOUBLE(p_max), NHCL_INT(n_q), NHCL_INT(n_p),
      NHCL_OPTIONAL(window_begin), NHCL_OPTIONAL(window_end), NHCL_INT(seeds),
  };
  return table;
}

#undef NHCL_DOUBLE
#undef NHCL_INT
#undef NHCL_OPTIONAL

inline const Field& field(const std::string& key) {
  for (const Field& f : fields())
    if (key == f.key) return f;
  throw error(errc::config, key + ": unknown key");
}

}  // namespace detail

using Entries = std::vector<std::pair<std::string, std::string>>;

// Splits the text into (key, value) pairs. Keys are checked against the schema
// here so typos are reported with their line number.
inline Entries parse_entries(const std::string& text) {
  Entries out;
  std::istringstream in(text);
  std::string line;
  for (int lineno = 1; std::getline(in, line); ++lineno) {
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw error(errc::config, "line " + std::to_string(lineno) + ": expected 'key = value'");
    const std::string key = detail::trim(line.substr(0, eq));
    const std::string value = detail::trim(line.substr(eq + 1));
    if (key.empty()) throw error(errc::config, "line " + std::to_string(lineno) + ": missing key");
    detail::field(key);
    for (const auto& [k, v] : out)
      if (k == key) throw error(errc::config, key + ": duplicate key on line " + std::to_string(lineno));
    out.emplace_back(key, value);
  }
  return out;
}

// Entries from "key=value" command-line overrides.
inline std::pair<std::string, std::string> parse_assignment(const std::string& kv) {
  const auto eq = kv.find('=');
  if (eq == std::string::npos) throw error(errc::config, "--set expects key=value, got '" + kv + "'");
  const std::string key = detail::trim(kv.substr(0, eq));
  detail::field(key);
  return {key, detail::trim(kv.substr(eq + 1))};
}

// Figure-caption defaults for each scenario.
inline ScenarioConfig defaults(Kind kind) {
  ScenarioConfig c;
  c.scenario = kind;
  switch (kind) {
    case Kind::damped_ho:
    case Kind::cat_state:
      c.f0 = 0.1;
      c.t_end = 30.0;
      c.n_steps = 600;
      break;
    case Kind::driven_ho:
      // With |alpha| ~ 5 on the cycle, Fock-basis propagation amplifies rounding
      // by up to e^{|alpha|^2 + 2|B alpha|} and loses the state after t ~ 30.
      c.quantum = QuantumSource::closed_form;
      c.f0 = 1.0;
      c.t_end = 60.0;
      c.n_steps = 1200;
      break;
    case Kind::husimi:
      // Twenty drive periods; the ring of radius |Q| ~ 7 needs the wider grid.
      c.quantum = QuantumSource::closed_form;
      c.f0 = 1.0;
      c.t_end = 40.0 * M_PI;
      c.n_steps = 4000;
      c.q_min = c.p_min = -9.0;
      c.q_max = c.p_max = 9.0;
      break;
    case Kind::anharmonic:
      c.beta = 0.4;
      c.t_end = 30.0;
      c.n_steps = 600;
      break;
    case Kind::revival:
      c.beta = 0.4;
      c.gamma = 0.01;
      c.t_end = 80.0;
      c.n_steps = 1600;
      break;
    case Kind::bloch:
    case Kind::fixed_points:
      c.gamma = 0.1;
      c.t_end = 25.0;
      c.n_steps = 500;
      break;
    case Kind::verify: break;
  }
  return c;
}

inline const char* reproduces(Kind kind) {
  switch (kind) {
    case Kind::damped_ho: return "Fig. 1 solid curve (driven damped oscillator, coherent start at (2,0))";
    case Kind::cat_state: return "Fig. 1 dashed curve (cat state of coherent states at (2,0) and (-2,0))";
    case Kind::driven_ho: return "Fig. 2 classical trajectory and quantum limit cycle (f0=1)";
    case Kind::husimi: return "Fig. 2 period-averaged Husimi distribution and its ridge";
    case Kind::revival: return "Fig. 3 collapse and revival (beta=0.4, gamma=0.01)";
    case Kind::anharmonic: return "Fig. 4 anharmonic panel (beta=0.4, gamma=0.1)";
    case Kind::bloch: return "Fig. 5 Bloch sphere dynamics (L=40, g=1.5, gamma=0.1)";
    case Kind::fixed_points: return "Fig. 5 discussion: sink near the south pole, source near the north pole";
    case Kind::verify: return "acceptance checks";
  }
  return "?";
}

inline bool is_spin(Kind k) { return k == Kind::bloch || k == Kind::fixed_points; }
inline bool is_anharmonic(Kind k) { return k == Kind::anharmonic || k == Kind::revival; }

inline void validate(const ScenarioConfig& c) {
  auto need = [](bool ok, const char* key, const std::string& what) {
    if (!ok) throw error(errc::config, std::string(key) + ": " + what);
  };
  need(c.m > 0, "m", "must be positive");
  need(c.omega > 0, "omega", "must be positive");
  need(c.hbar > 0, "hbar", "must be positive");
  need(c.gamma >= 0, "gamma", "must be non-negative");
  need(!c.omega_prime || *c.omega_prime > 0, "omega_prime", "must be positive");
  need(c.beta == 0.0 || is_anharmonic(c.scenario), "beta", "only the anharmonic scenarios take beta");
  need(c.Omega > 0, "Omega", "must be positive");
  if (c.quantum == QuantumSource::closed_form) {
    need(!is_spin(c.scenario) && !is_anharmonic(c.scenario), "quantum",
         "closed_form covers the harmonic scenarios only");
    need(c.damping == DampingKind::proportional_to_H0, "quantum", "closed_form needs proportional damping");
    need(!c.omega_prime || *c.omega_prime == c.omega, "quantum", "closed_form needs omega_prime = omega");
  }
  need(c.dim >= 2, "dim", "must be at least 2");
  need(c.tol > 0 && c.tol < 1e-2, "tol", "must lie in (0, 1e-2)");
  need(c.t_end > 0, "t_end", "must be positive");
  need(c.n_steps >= 2, "n_steps", "must be at least 2");
  const double two_l = 2.0 * c.L;
  need(two_l >= 1.0 && std::abs(two_l - std::round(two_l)) < 1e-12, "L", "2L must be a positive integer");
  need(c.theta0 >= 0 && c.theta0 <= M_PI, "theta0", "must lie in [0, pi]");
  need(c.q_max > c.q_min, "q_max", "must exceed q_min");
  need(c.p_max > c.p_min, "p_max", "must exceed p_min");
  need(c.n_q >= 2, "n_q", "must be at least 2");
  need(c.n_p >= 2, "n_p", "must be at least 2");
  need(!c.window_begin || !c.window_end || *c.window_end > *c.window_begin, "window_end", "must exceed window_begin");
  need(c.seeds >= 1, "seeds", "must be at least 1");
}

// Defaults of the chosen scenario, then file entries, then overrides. The
// scenario comes from the override argument, else from the file.
inline ScenarioConfig resolve(const Entries& file, const std::optional<std::string>& scenario_override = {},
                              const Entries& sets = {}) {
  std::optional<std::string> name = scenario_override;
  for (const auto& [k, v] : sets)
    if (k == "scenario") name = v;
  if (!name)
    for (const auto& [k, v] : file)
      if (k == "scenario") name = v;
  if (!name) throw error(errc::config, "scenario: missing (set it in the file or pass --scenario)");
  ScenarioConfig c = defaults(parse_kind(*name));
  for (const Entries* src : {&file, &sets})
    for (const auto& [k, v] : *src)
      if (k != "scenario") detail::field(k).set(c, v);
  validate(c);
  return c;
}

inline ScenarioConfig parse_config(const std::string& text, const std::optional<std::string>& scenario_override = {}) {
  return resolve(parse_entries(text), scenario_override);
}

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw error(errc::config, "cannot read config file '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::string to_text(const ScenarioConfig& c) {
  std::string out;
  for (const auto& f : detail::fields()) out += std::string(f.key) + " = " + f.get(c) + "\n";
  return out;
}

// Physical model of an oscillator scenario.
inline HamiltonianSpec oscillator_spec(const ScenarioConfig& c) {
  HamiltonianSpec s;
  s.m = c.m;
  s.omega = c.omega;
  s.hbar = c.hbar;
  s.damping = {c.damping, c.gamma / c.omega, c.omega_prime};
  if (is_anharmonic(c.scenario)) {
    s.family = Family::anharmonic;
    s.beta = c.beta;
  } else {
    s.family = c.f0 != 0.0 ? Family::driven_harmonic : Family::harmonic;
  }
  if (c.f0 != 0.0) s.drive = Drive{c.f0, c.Omega};
  return s;
}

inline HamiltonianSpec spin_spec(const ScenarioConfig& c) {
  HamiltonianSpec s;
  s.family = Family::spin;
  s.spin = {c.epsilon, c.v, c.g / (2.0 * c.L), c.gamma, c.L};
  return s;
}

inline std::vector<double> time_grid(const ScenarioConfig& c) {
  std::vector<double> t(static_cast<std::size_t>(c.n_steps) + 1);
  for (int k = 0; k <= c.n_steps; ++k) t[k] = c.t_end * k / c.n_steps;
  return t;
}

}  // namespace nhcl::scenario
