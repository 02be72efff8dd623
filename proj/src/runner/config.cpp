// Copyright 2026 The spinq Authors
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

#include "spinq/runner/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <sstream>

#include "spinq/core/quantum.hpp"

namespace spinq {

namespace {

// Shortest form that reads back to the same double.
// Shortest round-trip text; large and small magnitudes in engineering form
// (18.247e9, 70e-9).
std::string fmt(double v) {
  char buf[64];
  const double a = std::fabs(v);
  if (a != 0.0 && std::isfinite(v) && (a >= 1e4 || a < 1e-3)) {
    const int e3 = 3 * static_cast<int>(std::floor(std::log10(a) / 3.0));
    const double m = v / std::pow(10.0, e3);
    for (int prec = 1; prec <= 17; ++prec) {
      std::snprintf(buf, sizeof buf, "%.*ge%d", prec, m, e3);
      if (std::strtod(buf, nullptr) == v) return buf;
    }
  }
  for (int prec = 1; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

KeySpec real(std::string section, std::string key, std::string def, std::optional<double> min, std::string help) {
  return {std::move(section), std::move(key), ValueType::Real, std::move(def), {}, min, std::move(help)};
}

KeySpec integer(std::string section, std::string key, std::string def, std::optional<double> min, std::string help) {
  return {std::move(section), std::move(key), ValueType::Integer, std::move(def), {}, min, std::move(help)};
}

KeySpec boolean(std::string section, std::string key, std::string def, std::string help) {
  return {std::move(section), std::move(key), ValueType::Boolean, std::move(def), {}, std::nullopt, std::move(help)};
}

KeySpec choice(std::string section, std::string key, std::string def, std::vector<std::string> choices,
               std::string help) {
  return {std::move(section), std::move(key), ValueType::Choice, std::move(def), std::move(choices), std::nullopt,
          std::move(help)};
}

void add_rb_keys(std::vector<KeySpec>& s, const std::string& sec) {
  s.push_back(boolean(sec, "noisy", "true", "dephasing and SPAM on; false gives the ideal device"));
  s.push_back({sec, "lengths", ValueType::IntList, "1,2,4,8,16,32,65", {}, 1.0, "Clifford counts per sequence"});
  s.push_back(integer(sec, "sequences", "125", 2.0, "random sequences per length"));
  s.push_back(integer(sec, "shots", "160", 0.0, "shots per sequence; 0 gives exact probabilities"));
  s.push_back(integer(sec, "noise_realizations", "0", 0.0, "noise draws per sequence; 0 draws one per shot"));
  s.push_back(integer(sec, "resamples", "1000", 100.0, "bootstrap resamples"));
  s.push_back(real(sec, "level", "0.95", 0.0, "confidence level"));
  s.push_back(real(sec, "j_cz", "5e6", 0.0, "CZ plateau exchange, Hz"));
  s.push_back(real(sec, "depolarizing", "", 0.0, "test mode: depolarizing strength per Clifford"));
  s.push_back(real(sec, "drive_ramp", "1e-08", 0.0, "edge ramp of single-qubit pulses, s"));
  s.push_back(boolean(sec, "stark_compensation", "true", "virtual-Z cancellation of drive crosstalk phases"));
}

std::vector<KeySpec> build_schema() {
  std::vector<KeySpec> s;
  s.push_back(choice("", "experiment", "", experiment_names(), "experiment to run"));
  s.push_back(integer("", "seed", "0", 0.0, "master seed"));
  s.push_back({"", "out_dir", ValueType::Text, "", {}, std::nullopt, "output directory"});

  const DeviceParams d;
  for (const auto& f : param_fields()) {
    const auto v = get_param(d, f.name);
    s.push_back(real("device", f.name, v ? fmt(*v) : "", std::nullopt, std::string("unit: ") + (*f.unit ? f.unit : "1")));
  }

  s.push_back(boolean("simulation", "noisy", "true", "dephasing and SPAM on; false gives the ideal device"));
  s.push_back(integer("simulation", "shots", "1000", 0.0, "shots per point; 0 gives exact probabilities"));
  s.push_back(integer("simulation", "noise_realizations", "100", 1.0, "quasi-static noise draws per point"));

  s.push_back(choice("rabi", "qubits", "both", {"both", "1", "2"}, "driven qubit"));
  s.push_back(real("rabi", "f_span", "2e7", 0.0, "full width of the frequency sweep, Hz"));
  s.push_back(integer("rabi", "f_points", "41", 1.0, "frequency points"));
  s.push_back(real("rabi", "tau_max", "1e-06", 0.0, "longest burst, s"));
  s.push_back(integer("rabi", "tau_points", "101", 2.0, "burst lengths from 0 to tau_max"));

  s.push_back(choice("coherence", "qubits", "both", {"both", "1", "2"}, "measured qubit"));
  s.push_back(choice("coherence", "kinds", "both", {"both", "ramsey", "echo"}, "sequences to run"));
  s.push_back(integer("coherence", "points", "40", 4.0, "delays per curve"));
  s.push_back(real("coherence", "ramsey_t_max", "", 0.0, "longest Ramsey delay, s (default 3 T2*)"));
  s.push_back(real("coherence", "echo_t_max", "", 0.0, "longest echo delay, s (default 3 T2echo)"));
  s.push_back(real("coherence", "detuning", "0", std::nullopt, "Ramsey phase advance rate, Hz"));

  s.push_back(choice("exchange", "modes", "both", {"both", "ramsey", "echo"}, "exchange estimators"));
  s.push_back(integer("exchange", "points", "31", 2.0, "barrier voltages"));
  s.push_back(real("exchange", "v_min", "", std::nullopt, "lowest voltage, V (default device V_min)"));
  s.push_back(real("exchange", "v_max", "", std::nullopt, "highest voltage, V (default device V_max)"));

  s.push_back(real("czcal", "j_peak", "5e6", 0.0, "plateau exchange, Hz"));
  s.push_back(real("czcal", "ramp", "", 0.0, "edge ramp, s (default device cz_ramp)"));
  s.push_back(integer("czcal", "phase_points", "73", 2.0, "software phases in the Ramsey scan"));

  s.push_back(choice("belltomo", "variant", "all", {"all", "phi+", "phi-", "psi+", "psi-"}, "Bell state"));
  s.push_back(real("belltomo", "j_cz", "5e6", 0.0, "CZ plateau exchange, Hz"));

  s.push_back(choice("truthtable", "gates", "both", {"both", "cnot", "swap"}, "synthesized gates"));
  s.push_back(real("truthtable", "j_cz", "5e6", 0.0, "CZ plateau exchange, Hz"));
  s.push_back(real("truthtable", "tau_max", "1e-06", 0.0, "longest Q2 drive before the gate, s"));
  s.push_back(integer("truthtable", "tau_points", "51", 2.0, "drive lengths"));

  add_rb_keys(s, "rb");
  add_rb_keys(s, "irb");
  s.push_back(choice("irb", "gate", "cz", {"cz", "cnot"}, "interleaved gate"));
  return s;
}

const KeySpec* find_spec(const std::string& section, const std::string& key) {
  for (const auto& k : config_schema()) {
    if (k.section == section && k.key == key) return &k;
  }
  return nullptr;
}

bool known_section(const std::string& s) {
  if (s == "device" || s == "simulation") return true;
  const auto& e = experiment_names();
  return std::find(e.begin(), e.end(), s) != e.end();
}

// Parses `text` as `spec` demands; returns an error message or "".
std::string convert(const KeySpec& spec, const std::string& text, ConfigValue& out) {
  out.type = spec.type;
  out.set = true;
  auto check_min = [&](double v) -> std::string {
    if (spec.min_value && v < *spec.min_value) return "must be >= " + fmt(*spec.min_value);
    return {};
  };
  switch (spec.type) {
    case ValueType::Real: {
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(text.c_str(), &end);
      if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE || !std::isfinite(v)) {
        return "expected a finite number, got '" + text + "'";
      }
      out.real = v;
      out.text = fmt(v);
      return check_min(v);
    }
    case ValueType::Integer: {
      char* end = nullptr;
      errno = 0;
      const long long v = std::strtoll(text.c_str(), &end, 10);
      if (text.empty() || end != text.c_str() + text.size() || errno == ERANGE) {
        return "expected an integer, got '" + text + "'";
      }
      out.integer = v;
      out.real = static_cast<double>(v);
      out.text = std::to_string(v);
      return check_min(static_cast<double>(v));
    }
    case ValueType::Boolean: {
      if (text == "true" || text == "yes" || text == "1") {
        out.flag = true;
      } else if (text == "false" || text == "no" || text == "0") {
        out.flag = false;
      } else {
        return "expected true or false, got '" + text + "'";
      }
      out.text = out.flag ? "true" : "false";
      return {};
    }
    case ValueType::Choice: {
      if (std::find(spec.choices.begin(), spec.choices.end(), text) == spec.choices.end()) {
        std::string all;
        for (const auto& c : spec.choices) all += (all.empty() ? "" : ", ") + c;
        return "expected one of " + all + ", got '" + text + "'";
      }
      out.text = text;
      return {};
    }
    case ValueType::IntList: {
      out.ints.clear();
      std::stringstream ss(text);
      std::string item;
      while (std::getline(ss, item, ',')) {
        item = trim(item);
        char* end = nullptr;
        errno = 0;
        const long v = std::strtol(item.c_str(), &end, 10);
        if (item.empty() || end != item.c_str() + item.size() || errno == ERANGE) {
          return "expected a comma-separated integer list, got '" + text + "'";
        }
        if (auto e = check_min(static_cast<double>(v)); !e.empty()) return "every entry " + e;
        out.ints.push_back(static_cast<int>(v));
      }
      if (out.ints.empty()) return "list must not be empty";
      for (std::size_t i = 0; i < out.ints.size(); ++i) out.text += (i ? "," : "") + std::to_string(out.ints[i]);
      return {};
    }
    case ValueType::Text:
      out.text = text;
      return {};
  }
  return "unsupported type";
}

}  // namespace

const std::vector<std::string>& experiment_names() {
  static const std::vector<std::string> names{"rabi",    "coherence",  "exchange", "czcal",
                                              "belltomo", "truthtable", "rb",       "irb"};
  return names;
}

std::vector<std::string> sections_for(const std::string& experiment) {
  std::vector<std::string> out{"device"};
  if (experiment != "rb" && experiment != "irb" && experiment != "czcal") out.push_back("simulation");
  out.push_back(experiment);
  return out;
}

const std::vector<KeySpec>& config_schema() {
  static const std::vector<KeySpec> schema = build_schema();
  return schema;
}

const ConfigValue& ExperimentConfig::at(const std::string& section, const std::string& key) const {
  const auto it = values.find(section + "." + key);
  if (it == values.end()) throw SpinqError("config has no key " + section + "." + key);
  return it->second;
}

double ExperimentConfig::real(const std::string& section, const std::string& key) const {
  const auto& v = at(section, key);
  if (!v.set) throw SpinqError("config key " + section + "." + key + " is unset");
  return v.real;
}

std::optional<double> ExperimentConfig::optional_real(const std::string& section, const std::string& key) const {
  const auto& v = at(section, key);
  if (!v.set) return std::nullopt;
  return v.real;
}

std::int64_t ExperimentConfig::integer(const std::string& section, const std::string& key) const {
  return at(section, key).integer;
}

bool ExperimentConfig::flag(const std::string& section, const std::string& key) const {
  return at(section, key).flag;
}

const std::string& ExperimentConfig::text(const std::string& section, const std::string& key) const {
  return at(section, key).text;
}

const std::vector<int>& ExperimentConfig::ints(const std::string& section, const std::string& key) const {
  return at(section, key).ints;
}

std::string to_string(const Diagnostic& d) {
  std::string out;
  if (d.line > 0) out += "line " + std::to_string(d.line) + ": ";
  if (!d.field.empty()) out += d.field + ": ";
  return out + d.message;
}

ParseResult parse_config(std::string_view text) {
  ParseResult res;
  auto diag = [&](int line, std::string field, std::string msg) {
    res.diagnostics.push_back({line, std::move(field), std::move(msg)});
  };

  struct Raw {
    std::string value;
    int line;
  };
  std::map<std::string, Raw> raw;  // "section.key"
  std::set<std::string> seen_sections;
  std::map<std::string, int> section_line;
  std::string section;
  int line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++line_no;
    const auto hash = line.find_first_of("#;");
    const std::string body = trim(line.substr(0, hash));
    if (body.empty()) continue;
    if (body.front() == '[') {
      if (body.back() != ']') {
        diag(line_no, "", "malformed section header '" + body + "'");
        continue;
      }
      section = trim(body.substr(1, body.size() - 2));
      if (!known_section(section)) {
        diag(line_no, "[" + section + "]", "unknown section");
      } else if (!seen_sections.insert(section).second) {
        diag(line_no, "[" + section + "]", "section appears twice");
      }
      section_line.emplace(section, line_no);
      continue;
    }
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      diag(line_no, "", "expected 'key = value', got '" + body + "'");
      continue;
    }
    const std::string key = trim(body.substr(0, eq));
    const std::string value = trim(body.substr(eq + 1));
    const std::string full = section.empty() ? key : section + "." + key;
    if (key.empty()) {
      diag(line_no, "", "missing key before '='");
      continue;
    }
    if (!known_section(section) && !section.empty()) continue;  // already reported
    if (find_spec(section, key) == nullptr) {
      diag(line_no, full, "unknown key");
      continue;
    }
    if (!raw.emplace(section + "." + key, Raw{value, line_no}).second) {
      diag(line_no, full, "key given twice");
    }
  }

  const auto exp_it = raw.find(".experiment");
  if (exp_it == raw.end()) {
    diag(0, "experiment", "missing required key 'experiment'");
    return res;
  }
  ConfigValue exp_value;
  if (auto err = convert(*find_spec("", "experiment"), exp_it->second.value, exp_value); !err.empty()) {
    diag(exp_it->second.line, "experiment", err);
    return res;
  }

  ExperimentConfig cfg;
  cfg.experiment = exp_value.text;
  const auto allowed = sections_for(cfg.experiment);
  for (const auto& [name, line] : section_line) {
    if (known_section(name) && std::find(allowed.begin(), allowed.end(), name) == allowed.end()) {
      diag(line, "[" + name + "]", "section does not apply to experiment " + cfg.experiment);
    }
  }

  for (const auto& spec : config_schema()) {
    if (!spec.section.empty() && std::find(allowed.begin(), allowed.end(), spec.section) == allowed.end()) continue;
    const std::string id = spec.section + "." + spec.key;
    ConfigValue v;
    v.type = spec.type;
    const auto it = raw.find(id);
    const std::string field = spec.section.empty() ? spec.key : id;
    if (it != raw.end()) {
      v.line = it->second.line;
      if (auto err = convert(spec, it->second.value, v); !err.empty()) diag(v.line, field, err);
    } else if (!spec.default_text.empty()) {
      if (auto err = convert(spec, spec.default_text, v); !err.empty()) diag(0, field, "bad default: " + err);
      v.line = 0;
    }
    cfg.values[id] = v;
  }

  cfg.seed = static_cast<std::uint64_t>(cfg.values[".seed"].integer);
  cfg.out_dir = cfg.values[".out_dir"].text;
  for (const auto& f : param_fields()) {
    const auto& v = cfg.values["device." + std::string(f.name)];
    if (v.set) set_param(cfg.device, f.name, v.real);
  }
  for (const auto& msg : cfg.device.violations()) diag(0, "device", msg);

  if (cfg.experiment == "exchange") {
    const double lo = cfg.values["exchange.v_min"].set ? cfg.values["exchange.v_min"].real : cfg.device.V_min;
    const double hi = cfg.values["exchange.v_max"].set ? cfg.values["exchange.v_max"].real : cfg.device.V_max;
    if (!(lo < hi)) diag(0, "exchange", "v_min must be below v_max");
    if (lo < cfg.device.V_min || hi > cfg.device.V_max) {
      diag(0, "exchange", "voltage range must lie within the device sweep range [V_min, V_max]");
    }
  }
  if (cfg.experiment == "rb" || cfg.experiment == "irb") {
    const auto& sec = cfg.experiment;
    const auto& l = cfg.values[sec + ".lengths"].ints;
    if (l.size() < 3) diag(cfg.values[sec + ".lengths"].line, sec + ".lengths", "need at least three lengths");
    for (std::size_t i = 1; i < l.size(); ++i) {
      if (l[i] <= l[i - 1]) {
        diag(cfg.values[sec + ".lengths"].line, sec + ".lengths", "lengths must be strictly ascending");
        break;
      }
    }
    const double level = cfg.values[sec + ".level"].real;
    if (!(level > 0.0 && level < 1.0)) diag(cfg.values[sec + ".level"].line, sec + ".level", "must lie in (0, 1)");
    const auto& dep = cfg.values[sec + ".depolarizing"];
    if (dep.set && dep.real > 1.0) diag(dep.line, sec + ".depolarizing", "must lie in [0, 1]");
  }
  res.config = std::move(cfg);
  return res;
}

std::string resolved_text(const ExperimentConfig& c) {
  std::string out;
  std::string current = "\x01";
  for (const auto& spec : config_schema()) {
    const auto it = c.values.find(spec.section + "." + spec.key);
    if (it == c.values.end()) continue;
    if (spec.section != current) {
      if (!spec.section.empty()) out += "\n[" + spec.section + "]\n";
      current = spec.section;
    }
    if (it->second.set) {
      out += spec.key + " = " + it->second.text + "\n";
    } else {
      out += "# " + spec.key + " = (unset)\n";
    }
  }
  return out;
}

}  // namespace spinq
