// Copyright 2026 The rotcool Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rotcool/config.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "rotcool/error.hpp"

namespace rotcool {

namespace {

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(ws);
  return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_list(std::string_view s) {
  std::vector<std::string_view> out;
  if (trim(s).empty()) return out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = s.find(',', pos);
    out.push_back(trim(s.substr(pos, comma == std::string_view::npos ? comma : comma - pos)));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

enum class Domain { any, positive, nonnegative, unit };

double parse_real(std::string_view path, std::string_view text, Domain domain = Domain::any) {
  const auto s = trim(text);
  double x = 0.0;
  const auto* first = s.data();
  if (!s.empty() && s.front() == '+') ++first;
  const auto [ptr, ec] = std::from_chars(first, s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    throw ValidationError(std::string(path) + ": '" + std::string(s) + "' is not a number");
  }
  if (!std::isfinite(x)) throw ValidationError(std::string(path) + " must be finite");
  switch (domain) {
    case Domain::any: break;
    case Domain::positive:
      if (!(x > 0.0)) throw ValidationError(std::string(path) + " must be > 0");
      break;
    case Domain::nonnegative:
      if (!(x >= 0.0)) throw ValidationError(std::string(path) + " must be >= 0");
      break;
    case Domain::unit:
      if (!(x >= 0.0 && x <= 1.0)) throw ValidationError(std::string(path) + " must lie in [0, 1]");
      break;
  }
  return x;
}

int parse_int(std::string_view path, std::string_view text, int min) {
  const auto s = trim(text);
  int x = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
  if (s.empty() || ec != std::errc() || ptr != s.data() + s.size()) {
    // Sweeps hand integral axis values over as reals.
    const double r = parse_real(path, s);
    if (r != std::floor(r) || std::abs(r) > 1e9) {
      throw ValidationError(std::string(path) + ": '" + std::string(s) + "' is not an integer");
    }
    x = static_cast<int>(r);
  }
  if (x < min) throw ValidationError(std::string(path) + " must be >= " + std::to_string(min));
  return x;
}

bool parse_bool(std::string_view path, std::string_view text) {
  const auto s = trim(text);
  if (s == "true" || s == "yes" || s == "1") return true;
  if (s == "false" || s == "no" || s == "0") return false;
  throw ValidationError(std::string(path) + ": expected true or false, got '" + std::string(s) + "'");
}

std::optional<double> parse_optional(std::string_view path, std::string_view text, Domain domain) {
  if (trim(text) == "auto") return std::nullopt;
  return parse_real(path, text, domain);
}

std::vector<ChainStep> parse_chain(std::string_view text) {
  std::vector<ChainStep> chain;
  for (auto item : split_list(text)) {
    const auto colon = item.find(':');
    if (colon == std::string_view::npos) {
      throw ValidationError("system.chain: expected upper:lower, got '" + std::string(item) + "'");
    }
    ChainStep step;
    step.upper_j = parse_int("system.chain", item.substr(0, colon), 0);
    step.lower_j = parse_int("system.chain", item.substr(colon + 1), 0);
    chain.push_back(step);
  }
  return chain;
}

std::string_view to_string(InitialState::Kind kind) {
  switch (kind) {
    case InitialState::Kind::thermal: return "thermal";
    case InitialState::Kind::lambda_mixture: return "lambda_mixture";
    case InitialState::Kind::diagonal: return "diagonal";
  }
  return "?";
}

InitialState::Kind parse_initial_kind(std::string_view text) {
  const auto s = trim(text);
  if (s == "thermal") return InitialState::Kind::thermal;
  if (s == "lambda_mixture") return InitialState::Kind::lambda_mixture;
  if (s == "diagonal") return InitialState::Kind::diagonal;
  throw ValidationError("initial.state: unknown state '" + std::string(s) +
                        "' (expected thermal, lambda_mixture or diagonal)");
}

using Setter = void (*)(RunConfig&, std::string_view);
using Getter = std::optional<std::string> (*)(const RunConfig&);

struct Field {
  std::string_view path;
  bool numeric;
  Setter set;
  Getter get;  // null for aliases that are never written out
};

std::optional<std::string> num(double x) { return format_number(x); }
std::optional<std::string> opt(const std::optional<double>& x) {
  if (!x) return std::nullopt;
  return format_number(*x);
}

// Order here is the order of format_config.
const std::array kFields = {
    Field{"run.scheme", false,
          [](RunConfig& c, std::string_view v) { c.scheme = parse_scheme(trim(v)); },
          [](const RunConfig& c) -> std::optional<std::string> { return std::string(to_string(c.scheme)); }},
    Field{"run.cycles", true,
          [](RunConfig& c, std::string_view v) { c.cycles = parse_int("run.cycles", v, 1); },
          [](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.cycles); }},
    Field{"run.output", false,
          [](RunConfig& c, std::string_view v) { c.output = std::string(trim(v)); },
          [](const RunConfig& c) -> std::optional<std::string> {
            if (c.output.empty()) return std::nullopt;
            return c.output;
          }},

    Field{"system.j_max", true,
          [](RunConfig& c, std::string_view v) { c.system.j_max = parse_int("system.j_max", v, 1); },
          [](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.system.j_max); }},
    Field{"system.n_max", true,
          [](RunConfig& c, std::string_view v) { c.system.n_max = parse_int("system.n_max", v, 1); },
          [](const RunConfig& c) -> std::optional<std::string> { return std::to_string(c.system.n_max); }},
    Field{"system.eta", true,
          [](RunConfig& c, std::string_view v) { c.system.eta = parse_real("system.eta", v, Domain::positive); },
          [](const RunConfig& c) { return num(c.system.eta); }},
    Field{"system.gamma_j", true,
          [](RunConfig& c, std::string_view v) {
            c.system.gamma_j = parse_real("system.gamma_j", v, Domain::nonnegative);
          },
          [](const RunConfig& c) { return num(c.system.gamma_j); }},
    Field{"system.gamma_u", true,
          [](RunConfig& c, std::string_view v) {
            c.system.gamma_u = parse_real("system.gamma_u", v, Domain::nonnegative);
          },
          [](const RunConfig& c) { return num(c.system.gamma_u); }},
    Field{"system.gamma", true,
          [](RunConfig& c, std::string_view v) {
            c.system.gamma_j = c.system.gamma_u = parse_real("system.gamma", v, Domain::nonnegative);
          },
          nullptr},
    Field{"system.beta_b", true,
          [](RunConfig& c, std::string_view v) {
            c.system.beta_b = parse_real("system.beta_b", v, Domain::positive);
          },
          [](const RunConfig& c) { return num(c.system.beta_b); }},
    Field{"system.chain", false,
          [](RunConfig& c, std::string_view v) { c.system.chain = parse_chain(v); },
          [](const RunConfig& c) -> std::optional<std::string> {
            if (c.system.chain.empty()) return std::nullopt;
            std::string s;
            for (const auto& step : c.system.chain) {
              if (!s.empty()) s += ", ";
              s += std::to_string(step.upper_j) + ":" + std::to_string(step.lower_j);
            }
            return s;
          }},

    Field{"pulses.omega0_p", true,
          [](RunConfig& c, std::string_view v) {
            c.pulses.omega0_p = parse_real("pulses.omega0_p", v, Domain::nonnegative);
          },
          [](const RunConfig& c) { return num(c.pulses.omega0_p); }},
    Field{"pulses.omega0_s", true,
          [](RunConfig& c, std::string_view v) {
            c.pulses.omega0_s = parse_real("pulses.omega0_s", v, Domain::nonnegative);
          },
          [](const RunConfig& c) { return num(c.pulses.omega0_s); }},
    Field{"pulses.omega0", true,
          [](RunConfig& c, std::string_view v) {
            c.pulses.omega0_p = c.pulses.omega0_s = parse_real("pulses.omega0", v, Domain::nonnegative);
          },
          nullptr},
    Field{"pulses.T", true,
          [](RunConfig& c, std::string_view v) { c.pulses.width = parse_real("pulses.T", v, Domain::positive); },
          [](const RunConfig& c) { return num(c.pulses.width); }},
    Field{"pulses.tau", true,
          [](RunConfig& c, std::string_view v) { c.pulses.tau = parse_real("pulses.tau", v); },
          [](const RunConfig& c) { return num(c.pulses.tau); }},
    Field{"pulses.tau_tilde", true,
          [](RunConfig& c, std::string_view v) {
            c.pulses.tau_tilde = parse_optional("pulses.tau_tilde", v, Domain::positive);
          },
          [](const RunConfig& c) { return opt(c.pulses.tau_tilde); }},
    Field{"pulses.delta_p", true,
          [](RunConfig& c, std::string_view v) { c.pulses.delta_p = parse_real("pulses.delta_p", v); },
          [](const RunConfig& c) { return num(c.pulses.delta_p); }},
    Field{"pulses.delta_s", true,
          [](RunConfig& c, std::string_view v) {
            c.pulses.delta_s = parse_optional("pulses.delta_s", v, Domain::any);
          },
          [](const RunConfig& c) { return opt(c.pulses.delta_s); }},
    Field{"pulses.delta", true,
          [](RunConfig& c, std::string_view v) {
            c.pulses.delta_p = parse_real("pulses.delta", v);
            c.pulses.delta_s.reset();
          },
          nullptr},
    Field{"pulses.alpha", true,
          [](RunConfig& c, std::string_view v) { c.pulses.alpha = parse_real("pulses.alpha", v); },
          [](const RunConfig& c) { return num(c.pulses.alpha); }},

    Field{"integrator.rel_tol", true,
          [](RunConfig& c, std::string_view v) {
            c.integrator.rel_tol = parse_real("integrator.rel_tol", v, Domain::positive);
          },
          [](const RunConfig& c) { return num(c.integrator.rel_tol); }},
    Field{"integrator.abs_tol", true,
          [](RunConfig& c, std::string_view v) {
            c.integrator.abs_tol = parse_real("integrator.abs_tol", v, Domain::positive);
          },
          [](const RunConfig& c) { return num(c.integrator.abs_tol); }},
    Field{"integrator.max_step", true,
          [](RunConfig& c, std::string_view v) {
            c.integrator.max_step = parse_real("integrator.max_step", v, Domain::positive);
          },
          [](const RunConfig& c) { return num(c.integrator.max_step); }},
    Field{"integrator.sample_interval", true,
          [](RunConfig& c, std::string_view v) {
            c.integrator.sample_interval = parse_optional("integrator.sample_interval", v, Domain::positive);
          },
          [](const RunConfig& c) { return opt(c.integrator.sample_interval); }},
    Field{"integrator.hermitize", false,
          [](RunConfig& c, std::string_view v) {
            c.integrator.hermitize_every_step = parse_bool("integrator.hermitize", v);
          },
          [](const RunConfig& c) -> std::optional<std::string> {
            return std::string(c.integrator.hermitize_every_step ? "true" : "false");
          }},

    Field{"initial.state", false,
          [](RunConfig& c, std::string_view v) { c.initial.kind = parse_initial_kind(v); },
          [](const RunConfig& c) -> std::optional<std::string> { return std::string(to_string(c.initial.kind)); }},
    Field{"initial.p_ground", true,
          [](RunConfig& c, std::string_view v) {
            c.initial.p_ground = parse_real("initial.p_ground", v, Domain::unit);
          },
          [](const RunConfig& c) { return num(c.initial.p_ground); }},
    Field{"initial.p_excited", true,
          [](RunConfig& c, std::string_view v) {
            c.initial.p_excited = parse_real("initial.p_excited", v, Domain::unit);
          },
          [](const RunConfig& c) { return num(c.initial.p_excited); }},
    Field{"initial.populations", false,
          [](RunConfig& c, std::string_view v) {
            std::vector<double> p;
            for (auto item : split_list(v)) p.push_back(parse_real("initial.populations", item, Domain::unit));
            c.initial.populations = std::move(p);
          },
          [](const RunConfig& c) -> std::optional<std::string> {
            if (c.initial.populations.empty()) return std::nullopt;
            std::string s;
            for (double p : c.initial.populations) {
              if (!s.empty()) s += ", ";
              s += format_number(p);
            }
            return s;
          }},
};

constexpr std::array<std::string_view, 5> kSections = {"run", "system", "pulses", "integrator", "initial"};

const Field* find_field(std::string_view path) {
  for (const auto& f : kFields) {
    if (f.path == path) return &f;
  }
  return nullptr;
}

std::string located(const std::string& source, int line, const std::string& message) {
  if (line > 0) return source + ":" + std::to_string(line) + ": " + message;
  return source + ": " + message;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& message)
    : ValidationError(located(source, line, message)), line_(line) {}

std::string format_number(double x) {
  std::array<char, 64> buf{};
  const auto [ptr, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  if (ec != std::errc()) throw ValidationError("cannot format number");
  return std::string(buf.data(), ptr);
}

void set_field(RunConfig& cfg, std::string_view path, std::string_view value) {
  const Field* f = find_field(path);
  if (!f) throw ValidationError("unknown parameter '" + std::string(path) + "'");
  f->set(cfg, value);
}

bool is_numeric_field(std::string_view path) {
  const Field* f = find_field(path);
  return f && f->numeric;
}

ConfigText tokenize_config(std::string_view text, const std::string& source) {
  ConfigText out;
  std::string section;
  int lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;

    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ConfigError(source, lineno, "unterminated section header");
      section = std::string(trim(line.substr(1, line.size() - 2)));
      if (section.empty()) throw ConfigError(source, lineno, "empty section name");
      for (const auto& [name, at] : out.sections) {
        if (name == section) {
          throw ConfigError(source, lineno, "section [" + section + "] already opened on line " + std::to_string(at));
        }
      }
      out.sections.emplace_back(section, lineno);
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string_view::npos) throw ConfigError(source, lineno, "expected 'key = value'");
    const auto key = trim(line.substr(0, eq));
    if (key.empty()) throw ConfigError(source, lineno, "missing key before '='");
    if (section.empty()) throw ConfigError(source, lineno, "'" + std::string(key) + "' appears before any section");
    for (const auto& e : out.entries) {
      if (e.section == section && e.key == key) {
        throw ConfigError(source, lineno,
                          "duplicate key '" + std::string(key) + "' (first set on line " + std::to_string(e.line) + ")");
      }
    }
    out.entries.push_back({lineno, section, std::string(key), std::string(trim(line.substr(eq + 1)))});
  }
  return out;
}

void apply_config(RunConfig& cfg, const ConfigText& text, const std::string& source) {
  std::map<std::string, int, std::less<>> header;
  for (const auto& [name, line] : text.sections) header[name] = line;

  for (const auto& e : text.entries) {
    if (std::find(kSections.begin(), kSections.end(), e.section) == kSections.end()) continue;
    const std::string path = e.section + "." + e.key;
    const Field* f = find_field(path);
    if (!f) throw ConfigError(source, e.line, "unknown key '" + e.key + "' in [" + e.section + "]");
    try {
      f->set(cfg, e.value);
    } catch (const ValidationError& err) {
      throw ConfigError(source, e.line, err.what());
    }
  }

  const auto at = [&](std::string_view section) {
    const auto it = header.find(section);
    return it == header.end() ? 0 : it->second;
  };
  try {
    cfg.system.validate();
  } catch (const ValidationError& err) {
    throw ConfigError(source, at("system"), std::string("[system] ") + err.what());
  }
  try {
    build_schedule(cfg);
  } catch (const ValidationError& err) {
    throw ConfigError(source, at("pulses"), std::string("[pulses] ") + err.what());
  }
  try {
    cfg.integrator.validate();
  } catch (const ValidationError& err) {
    throw ConfigError(source, at("integrator"), std::string("[integrator] ") + err.what());
  }
  try {
    build_initial_state(cfg, build_basis(cfg.system));
  } catch (const ValidationError& err) {
    throw ConfigError(source, at("initial"), std::string("[initial] ") + err.what());
  }
}

void RunConfig::validate() const {
  system.validate();
  build_schedule(*this);
  integrator.validate();
  if (cycles < 1) throw ValidationError("cycles must be >= 1");
  build_initial_state(*this, build_basis(system));
}

RunConfig parse_config(std::string_view text, const std::string& source) {
  const auto tokens = tokenize_config(text, source);
  for (const auto& [name, line] : tokens.sections) {
    if (std::find(kSections.begin(), kSections.end(), name) == kSections.end()) {
      throw ConfigError(source, line, "unknown section [" + name + "]");
    }
  }
  RunConfig cfg;
  apply_config(cfg, tokens, source);
  return cfg;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot read configuration '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str(), path);
}

std::string format_config(const RunConfig& cfg) {
  std::string out =
      "# rotcool configuration\n"
      "# units: hbar = 1, trap frequency nu = 1; frequencies and rates in nu,\n"
      "# times in 1/nu, chirp rates (alpha) in nu^2\n";
  std::string_view section;
  for (const auto& f : kFields) {
    if (!f.get) continue;
    const auto value = f.get(cfg);
    if (!value) continue;
    const auto dot = f.path.find('.');
    const auto sec = f.path.substr(0, dot);
    if (sec != section) {
      section = sec;
      out += "\n[" + std::string(sec) + "]\n";
    }
    out += std::string(f.path.substr(dot + 1)) + " = " + *value + "\n";
  }
  return out;
}

PulseSchedule build_schedule(const RunConfig& cfg) {
  return make_schedule(cfg.scheme, cfg.system, cfg.pulses);
}

DensityState build_initial_state(const RunConfig& cfg, const BasisIndex& basis) {
  switch (cfg.initial.kind) {
    case InitialState::Kind::thermal: return thermal_state(basis, cfg.system);
    case InitialState::Kind::lambda_mixture:
      return mixed_lambda_state(basis, cfg.initial.p_ground, cfg.initial.p_excited);
    case InitialState::Kind::diagonal:
      if (cfg.initial.populations.empty()) throw ValidationError("diagonal state needs populations");
      return diagonal_rotational_state(basis, cfg.initial.populations);
  }
  throw ValidationError("unknown initial state");
}

SimResult simulate(const RunConfig& cfg, const std::atomic<bool>* cancel) {
  cfg.validate();
  MasterEquation eq(cfg.system, build_schedule(cfg));
  const auto rho0 = build_initial_state(cfg, eq.basis());
  return run_cycles(eq, rho0, cfg.integrator, cfg.cycles, cancel);
}

}  // namespace rotcool
