// Copyright 2026 The qbus Authors
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

#include "qbus_cli/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include "qbus/errors.hpp"

namespace qbus::cli {

namespace {

namespace pt = boost::property_tree;

std::string trim(std::string s) {
  const auto first = s.find_first_not_of(" \t");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t");
  return s.substr(first, last - first + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, sep);) out.push_back(trim(item));
  return out;
}

// Shortest decimal form that reads back to the same double.
std::string fmt(double x) {
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

double to_double(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t == "inf" || t == "infinity") return std::numeric_limits<double>::infinity();
  double x = 0.0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size() || std::isnan(x))
    throw ConfigError(field + ": not a number: '" + text + "'");
  return x;
}

long long to_integer(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  long long x = 0;
  auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), x);
  if (t.empty() || ec != std::errc{} || ptr != t.data() + t.size())
    throw ConfigError(field + ": not an integer: '" + text + "'");
  return x;
}

bool to_bool(const std::string& field, const std::string& text) {
  const std::string t = trim(text);
  if (t == "true" || t == "1" || t == "yes") return true;
  if (t == "false" || t == "0" || t == "no") return false;
  throw ConfigError(field + ": expected true or false, got '" + text + "'");
}

// Lifetime in us <-> rate in 1/us. The lifetime is written with the fewest
// digits whose reciprocal reproduces the stored rate exactly.
std::string fmt_lifetime(double rate) {
  if (rate == 0.0) return "inf";
  for (int digits = 1; digits <= 17; ++digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, 1.0 / rate);
    if (1.0 / std::strtod(buf, nullptr) == rate) return buf;
  }
  return fmt(1.0 / rate);
}

double to_rate(const std::string& field, const std::string& text) {
  const double lifetime = to_double(field, text);
  if (!(lifetime > 0.0)) throw ConfigError(field + ": lifetime must be positive (use inf for lossless)");
  return std::isinf(lifetime) ? 0.0 : 1.0 / lifetime;
}

struct Field {
  std::string key;
  std::function<std::optional<std::string>(const ExperimentConfig&)> get;  // nullopt: omit
  std::function<void(ExperimentConfig&, const std::string& field, const std::string& value)> set;
};

using Section = std::pair<std::string, std::vector<Field>>;

Field number(std::string key, double ExperimentConfig::*member) {
  return {key, [member](const ExperimentConfig& c) { return std::optional(fmt(c.*member)); },
          [member](ExperimentConfig& c, const std::string& f, const std::string& v) { c.*member = to_double(f, v); }};
}

template <class Get>
Field device_number(std::string key, Get get) {
  return {key, [get](const ExperimentConfig& c) { return std::optional(fmt(get(c.device))); },
          [get](ExperimentConfig& c, const std::string& f, const std::string& v) { get(c.device) = to_double(f, v); }};
}

template <class Get>
Field lifetime(std::string key, Get get) {
  return {key,
          [get](const ExperimentConfig& c) { return std::optional(fmt_lifetime(get(c.device))); },
          [get](ExperimentConfig& c, const std::string& f, const std::string& v) { get(c.device) = to_rate(f, v); }};
}

template <class Get>
Field solver_number(std::string key, Get get) {
  return {key, [get](const ExperimentConfig& c) { return std::optional(fmt(get(c.solver))); },
          [get](ExperimentConfig& c, const std::string& f, const std::string& v) { get(c.solver) = to_double(f, v); }};
}

Field optional_number(std::string key, std::optional<double> Expectation::*member) {
  return {key,
          [member](const ExperimentConfig& c) -> std::optional<std::string> {
            const auto& v = c.expect.*member;
            return v ? std::optional(fmt(*v)) : std::nullopt;
          },
          [member](ExperimentConfig& c, const std::string& f, const std::string& v) {
            c.expect.*member = to_double(f, v);
          }};
}

Experiment parse_experiment(const std::string& field, const std::string& v) {
  for (auto e : {Experiment::transfer, Experiment::cphase5, Experiment::cphase7, Experiment::sweep_kappa,
                 Experiment::sweep_delta, Experiment::validate})
    if (trim(v) == to_string(e)) return e;
  throw ConfigError(field + ": unknown experiment '" + v +
                    "' (transfer, cphase5, cphase7, sweep-kappa, sweep-delta, validate)");
}

const std::vector<Section>& schema() {
  static const std::vector<Section> sections = {
      {"device",
       {
           device_number("omega_bus_ghz", [](auto& d) -> auto& { return d.omega_bus_ghz; }),
           device_number("omega_r1_ghz", [](auto& d) -> auto& { return d.omega_res_ghz[0]; }),
           device_number("omega_r2_ghz", [](auto& d) -> auto& { return d.omega_res_ghz[1]; }),
           device_number("g_ge_mhz", [](auto& d) -> auto& { return d.g_ge_mhz; }),
           device_number("delta_ghz", [](auto& d) -> auto& { return d.delta_ghz; }),
           device_number("g_max_mhz", [](auto& d) -> auto& { return d.g_max_mhz; }),
           device_number("qutrit_tuning_span_ghz", [](auto& d) -> auto& { return d.qutrit_tuning_span_ghz; }),
           lifetime("kappa_r1_inv_us", [](auto& d) -> auto& { return d.kappa_1; }),
           lifetime("kappa_r2_inv_us", [](auto& d) -> auto& { return d.kappa_2; }),
           lifetime("kappa_bus_inv_us", [](auto& d) -> auto& { return d.kappa_bus; }),
           lifetime("gamma_ge_inv_us", [](auto& d) -> auto& { return d.gamma_ge; }),
           lifetime("gamma_ef_inv_us", [](auto& d) -> auto& { return d.gamma_ef; }),
           lifetime("gamma_phi_e_inv_us", [](auto& d) -> auto& { return d.gamma_phi_e; }),
           lifetime("gamma_phi_f_inv_us", [](auto& d) -> auto& { return d.gamma_phi_f; }),
       }},
      {"experiment",
       {
           {"name", [](const ExperimentConfig& c) { return std::optional(to_string(c.experiment)); },
            [](ExperimentConfig& c, const std::string& f, const std::string& v) {
              c.experiment = parse_experiment(f, v);
            }},
           number("theta", &ExperimentConfig::theta),
           number("theta1", &ExperimentConfig::theta1),
           number("theta2", &ExperimentConfig::theta2),
           {"variant", [](const ExperimentConfig& c) { return std::optional(to_string(c.variant)); },
            [](ExperimentConfig& c, const std::string& f, const std::string& v) {
              if (trim(v) == to_string(TransferVariant::sign_minus)) c.variant = TransferVariant::sign_minus;
              else if (trim(v) == to_string(TransferVariant::sign_plus)) c.variant = TransferVariant::sign_plus;
              else throw ConfigError(f + ": expected " + to_string(TransferVariant::sign_minus) + " or " +
                                     to_string(TransferVariant::sign_plus) + ", got '" + v + "'");
            }},
           number("g_op_mhz", &ExperimentConfig::g_op_mhz),
           number("park_ghz", &ExperimentConfig::park_ghz),
           {"grid_n", [](const ExperimentConfig& c) { return std::optional(std::to_string(c.grid_n)); },
            [](ExperimentConfig& c, const std::string& f, const std::string& v) {
              c.grid_n = static_cast<int>(to_integer(f, v));
            }},
           {"truncation",
            [](const ExperimentConfig& c) {
              const auto& t = c.truncation;
              return std::optional(std::to_string(t[0]) + "," + std::to_string(t[1]) + "," + std::to_string(t[2]));
            },
            [](ExperimentConfig& c, const std::string& f, const std::string& v) {
              try {
                c.truncation = parse_truncation(v);
              } catch (const ConfigError& e) {
                throw ConfigError(f + ": " + e.what());
              }
            }},
           {"sweep_values",
            [](const ExperimentConfig& c) -> std::optional<std::string> {
              if (c.sweep_values.empty()) return std::nullopt;
              std::string s;
              for (std::size_t i = 0; i < c.sweep_values.size(); ++i) s += (i ? "," : "") + fmt(c.sweep_values[i]);
              return s;
            },
            [](ExperimentConfig& c, const std::string& f, const std::string& v) {
              c.sweep_values.clear();
              for (const auto& item : split(v, ',')) c.sweep_values.push_back(to_double(f, item));
            }},
           {"validate_trials", [](const ExperimentConfig& c) { return std::optional(std::to_string(c.validate_trials)); },
            [](ExperimentConfig& c, const std::string& f, const std::string& v) {
              c.validate_trials = static_cast<int>(to_integer(f, v));
            }},
           {"validate_seed", [](const ExperimentConfig& c) { return std::optional(std::to_string(c.validate_seed)); },
            [](ExperimentConfig& c, const std::string& f, const std::string& v) {
              const long long s = to_integer(f, v);
              if (s < 0) throw ConfigError(f + ": must be non-negative");
              c.validate_seed = static_cast<std::uint64_t>(s);
            }},
           optional_number("expect_fidelity", &Expectation::fidelity),
           {"fidelity_tol", [](const ExperimentConfig& c) { return std::optional(fmt(c.expect.fidelity_tol)); },
            [](ExperimentConfig& c, const std::string& f, const std::string& v) {
              c.expect.fidelity_tol = to_double(f, v);
            }},
           optional_number("expect_duration_ns", &Expectation::duration_ns),
           {"duration_tol_ns", [](const ExperimentConfig& c) { return std::optional(fmt(c.expect.duration_tol_ns)); },
            [](ExperimentConfig& c, const std::string& f, const std::string& v) {
              c.expect.duration_tol_ns = to_double(f, v);
            }},
           optional_number("expect_max_deviation", &Expectation::max_deviation),
       }},
      {"solver",
       {
           {"method", [](const ExperimentConfig& c) { return std::optional<std::string>(c.solver.method == Method::rk45 ? "rk45" : "rk4"); },
            [](ExperimentConfig& c, const std::string& f, const std::string& v) {
              if (trim(v) == "rk45") c.solver.method = Method::rk45;
              else if (trim(v) == "rk4") c.solver.method = Method::rk4;
              else throw ConfigError(f + ": expected rk45 or rk4, got '" + v + "'");
            }},
           solver_number("abs_tol", [](auto& s) -> auto& { return s.abs_tol; }),
           solver_number("rel_tol", [](auto& s) -> auto& { return s.rel_tol; }),
           solver_number("max_step_ns", [](auto& s) -> auto& { return s.max_step_ns; }),
           solver_number("dt_ns", [](auto& s) -> auto& { return s.dt_ns; }),
           solver_number("sample_every_ns", [](auto& s) -> auto& { return s.sample_every_ns; }),
           {"frame",
            [](const ExperimentConfig& c) {
              return std::optional<std::string>(c.solver.frame == Frame::segment_interaction ? "interaction" : "rotating");
            },
            [](ExperimentConfig& c, const std::string& f, const std::string& v) {
              if (trim(v) == "interaction") c.solver.frame = Frame::segment_interaction;
              else if (trim(v) == "rotating") c.solver.frame = Frame::rotating;
              else throw ConfigError(f + ": expected interaction or rotating, got '" + v + "'");
            }},
           {"restrict_excitations",
            [](const ExperimentConfig& c) { return std::optional<std::string>(c.solver.restrict_excitations ? "true" : "false"); },
            [](ExperimentConfig& c, const std::string& f, const std::string& v) {
              c.solver.restrict_excitations = to_bool(f, v);
            }},
           {"check_physicality",
            [](const ExperimentConfig& c) { return std::optional<std::string>(c.solver.check_physicality ? "true" : "false"); },
            [](ExperimentConfig& c, const std::string& f, const std::string& v) {
              c.solver.check_physicality = to_bool(f, v);
            }},
           {"threads", [](const ExperimentConfig& c) { return std::optional(std::to_string(c.threads)); },
            [](ExperimentConfig& c, const std::string& f, const std::string& v) {
              c.threads = static_cast<int>(to_integer(f, v));
            }},
       }},
      {"output",
       {
           {"dir", [](const ExperimentConfig& c) { return std::optional(c.out_dir); },
            [](ExperimentConfig& c, const std::string&, const std::string& v) { c.out_dir = trim(v); }},
           {"prefix",
            [](const ExperimentConfig& c) -> std::optional<std::string> {
              return c.prefix.empty() ? std::nullopt : std::optional(c.prefix);
            },
            [](ExperimentConfig& c, const std::string&, const std::string& v) { c.prefix = trim(v); }},
       }},
  };
  return sections;
}

void check(const ExperimentConfig& c) {
  auto fail = [](const std::string& field, const std::string& why) { throw ConfigError(field + ": " + why); };
  try {
    c.device.validate();
  } catch (const qbus::Error& e) {
    throw ConfigError(std::string("device: ") + e.what());
  }
  try {
    c.solver.validate();
  } catch (const qbus::Error& e) {
    throw ConfigError(std::string("solver: ") + e.what());
  }
  if (c.grid_n < 4) fail("experiment.grid_n", "must be at least 4");
  if (c.validate_trials < 1) fail("experiment.validate_trials", "must be at least 1");
  if (c.threads < 1) fail("solver.threads", "must be at least 1");
  if (!(c.g_op_mhz > 0.0)) fail("experiment.g_op_mhz", "must be positive");
  if (!(c.park_ghz > 0.0)) fail("experiment.park_ghz", "must be positive");
  for (double t : {c.theta, c.theta1, c.theta2})
    if (!std::isfinite(t)) fail("experiment.theta", "angles must be finite");
  if (c.expect.fidelity_tol < 0.0) fail("experiment.fidelity_tol", "must be non-negative");
  if (c.expect.duration_tol_ns < 0.0) fail("experiment.duration_tol_ns", "must be non-negative");
  for (double x : c.sweep_values)
    if (!(x > 0.0)) fail("experiment.sweep_values", "entries must be positive");
  if (c.out_dir.empty()) fail("output.dir", "must not be empty");
}

}  // namespace

std::string to_string(Experiment e) {
  switch (e) {
    case Experiment::transfer: return "transfer";
    case Experiment::cphase5: return "cphase5";
    case Experiment::cphase7: return "cphase7";
    case Experiment::sweep_kappa: return "sweep-kappa";
    case Experiment::sweep_delta: return "sweep-delta";
    case Experiment::validate: return "validate";
  }
  return "?";
}

std::array<int, 3> parse_truncation(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 3) throw ConfigError("truncation needs three comma-separated dimensions d1,dR,d2");
  std::array<int, 3> dims{};
  for (int i = 0; i < 3; ++i) {
    dims[i] = static_cast<int>(to_integer("truncation", parts[i]));
    if (dims[i] < 2) throw ConfigError("truncation dimensions must be at least 2");
  }
  return dims;
}

ExperimentConfig parse_config(const std::string& text) {
  pt::ptree tree;
  std::istringstream in(text);
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError("line " + std::to_string(e.line()) + ": " + e.message());
  }

  ExperimentConfig config;
  for (const auto& [section_name, section] : tree) {
    if (section.empty() && !section.data().empty())
      throw ConfigError(section_name + ": key outside of any section");
    const std::vector<Field>* fields = nullptr;
    for (const auto& [name, f] : schema())
      if (name == section_name) fields = &f;
    if (!fields) throw ConfigError("unknown section [" + section_name + "]");

    for (const auto& [key, value] : section) {
      const Field* field = nullptr;
      for (const auto& f : *fields)
        if (f.key == key) field = &f;
      const std::string path = section_name + "." + key;
      if (!field) throw ConfigError(path + ": unknown key");
      field->set(config, path, value.data());
    }
  }
  check(config);
  return config;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& config) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [name, fields] : schema()) {
    if (!first) out << '\n';
    first = false;
    out << '[' << name << "]\n";
    for (const auto& f : fields)
      if (auto v = f.get(config)) out << f.key << " = " << *v << '\n';
  }
  return out.str();
}

bool same_config(const ExperimentConfig& a, const ExperimentConfig& b) {
  // Every field is reachable through the schema, so comparing the serialized
  // values is comparing the fields.
  for (const auto& [name, fields] : schema())
    for (const auto& f : fields)
      if (f.get(a) != f.get(b)) return false;
  return true;
}

}  // namespace qbus::cli
