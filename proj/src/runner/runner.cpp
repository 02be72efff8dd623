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

#include "spinq/runner/runner.hpp"

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>

#include "json.hpp"

#include "spinq/compiler/calibration.hpp"
#include "spinq/compiler/synthesis.hpp"
#include "spinq/device/experiments.hpp"
#include "spinq/tomo/tomography.hpp"
#include "spinq/util/io.hpp"

#ifndef SPINQ_VERSION
#define SPINQ_VERSION "0.0.0"
#endif

namespace spinq {

namespace {

using Json = nlohmann::ordered_json;

class Csv {
 public:
  explicit Csv(std::initializer_list<const char*> header) {
    bool first = true;
    for (const char* h : header) {
      text_ += first ? "" : ",";
      text_ += h;
      first = false;
    }
    text_ += "\n";
  }
  Csv& cell(double v) { return raw(format_real(v)); }
  Csv& cell(std::int64_t v) { return raw(std::to_string(v)); }
  Csv& cell(int v) { return raw(std::to_string(v)); }
  Csv& cell(const std::string& s) { return raw(s); }
  Csv& cell(const char* s) { return raw(s); }
  Csv& cell(bool b) { return raw(b ? "true" : "false"); }
  void end() {
    text_ += "\n";
    fresh_ = true;
  }
  const std::string& text() const { return text_; }

 private:
  Csv& raw(const std::string& s) {
    if (!fresh_) text_ += ",";
    text_ += s;
    fresh_ = false;
    return *this;
  }
  std::string text_;
  bool fresh_ = true;
};

// JSON has no inf/nan; store them as strings.
Json num(double v) {
  if (std::isfinite(v)) return v;
  return format_real(v);
}

std::vector<double> linspace(double lo, double hi, std::int64_t n) {
  std::vector<double> v(static_cast<std::size_t>(n));
  for (std::int64_t i = 0; i < n; ++i) v[static_cast<std::size_t>(i)] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

std::vector<int> qubits_of(const std::string& s) {
  if (s == "1") return {0};
  if (s == "2") return {1};
  return {0, 1};
}

struct Sim {
  DeviceParams params;
  SimulationMode mode;
};

Sim simulation(const ExperimentConfig& c) {
  Sim s;
  s.mode.noisy = c.flag("simulation", "noisy");
  s.mode.shots = c.integer("simulation", "shots");
  s.mode.noise_realizations = static_cast<int>(c.integer("simulation", "noise_realizations"));
  s.mode.seed = c.seed;
  s.params = s.mode.noisy ? c.device : c.device.noiseless();
  return s;
}

Json fields_json(const DeviceParams& p) {
  Json j = Json::object();
  for (const auto& f : param_fields()) {
    const auto v = get_param(p, f.name);
    j[f.name] = v ? num(*v) : Json(nullptr);
  }
  return j;
}

Json matrix_json(const Mat& m) {
  Json rows = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < m.cols(); ++k) row.push_back(Json::array({m(i, k).real(), m(i, k).imag()}));
    rows.push_back(row);
  }
  return rows;
}

Json calibration_json(const CZCalibration& cal) {
  return Json{{"t_cz_s", cal.t_cz},
              {"j_peak_hz", cal.j_peak},
              {"ramp_s", cal.ramp},
              {"phi1_rad", cal.phi1},
              {"phi2_rad", cal.phi2},
              {"conditional_phase_rad", cal.conditional_phase},
              {"process_fidelity", cal.process_fidelity},
              {"p2_up_control_down", cal.p_target_up_control_down},
              {"p2_up_control_up", cal.p_target_up_control_up}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

ExperimentOutput run_rabi(const ExperimentConfig& c) {
  const Sim sim = simulation(c);
  Csv csv({"qubit", "frequency_hz", "tau_s", "p_up"});
  Json summary = Json::array();
  for (int q : qubits_of(c.text("rabi", "qubits"))) {
    const double f0 = sim.params.frequency(q);
    const double span = c.real("rabi", "f_span");
    const auto fs = linspace(f0 - span / 2, f0 + span / 2, c.integer("rabi", "f_points"));
    const auto taus = linspace(0.0, c.real("rabi", "tau_max"), c.integer("rabi", "tau_points"));
    const auto res = rabi_chevron(sim.params, q, fs, taus, sim.mode);
    double best = -1.0, best_f = f0;
    for (std::size_t i = 0; i < fs.size(); ++i) {
      for (std::size_t k = 0; k < taus.size(); ++k) {
        csv.cell(q + 1).cell(fs[i]).cell(taus[k]).cell(res.p_up[i][k]).end();
        if (res.p_up[i][k] > best) {
          best = res.p_up[i][k];
          best_f = fs[i];
        }
      }
    }
    summary.push_back({{"qubit", q + 1}, {"resonance_hz", f0}, {"peak_frequency_hz", best_f}, {"max_p_up", best}});
  }
  Json j{{"experiment", "rabi"}, {"seed", c.seed}, {"qubits", summary}};
  return {{{"rabi.csv", csv.text()}, {"rabi.json", dump(j)}}};
}

ExperimentOutput run_coherence(const ExperimentConfig& c) {
  const Sim sim = simulation(c);
  Csv csv({"qubit", "kind", "delay_s", "p_up", "stderr"});
  Json fits = Json::array();
  const std::string kinds = c.text("coherence", "kinds");
  for (int q : qubits_of(c.text("coherence", "qubits"))) {
    for (CoherenceKind k : {CoherenceKind::Ramsey, CoherenceKind::HahnEcho}) {
      const bool ramsey = k == CoherenceKind::Ramsey;
      if (kinds != "both" && kinds != (ramsey ? "ramsey" : "echo")) continue;
      const double configured = ramsey ? c.device.t2star(q) : c.device.t2echo(q);
      const auto t_max = c.optional_real("coherence", ramsey ? "ramsey_t_max" : "echo_t_max");
      double hi = t_max ? *t_max : 3.0 * configured;
      if (!std::isfinite(hi)) hi = 1e-5;
      const auto n = c.integer("coherence", "points");
      const auto delays = linspace(hi / static_cast<double>(n), hi, n);
      CoherenceOptions o;
      o.detuning = c.real("coherence", "detuning");
      const auto r = coherence_experiment(sim.params, q, k, delays, sim.mode, o);
      for (std::size_t i = 0; i < delays.size(); ++i) {
        csv.cell(q + 1).cell(to_string(k)).cell(delays[i]).cell(r.p_up[i]).cell(r.stderr_[i]).end();
      }
      fits.push_back({{"qubit", q + 1},
                      {"kind", to_string(k)},
                      {"time_constant_s", num(r.time_constant)},
                      {"configured_s", num(configured)},
                      {"amplitude", r.amplitude},
                      {"offset", r.offset},
                      {"decaying", r.decaying}});
    }
  }
  Json j{{"experiment", "coherence"}, {"seed", c.seed}, {"fits", fits}};
  return {{{"coherence.csv", csv.text()}, {"coherence.json", dump(j)}}};
}

ExperimentOutput run_exchange(const ExperimentConfig& c) {
  const Sim sim = simulation(c);
  const double lo = c.optional_real("exchange", "v_min").value_or(c.device.V_min);
  const double hi = c.optional_real("exchange", "v_max").value_or(c.device.V_max);
  const auto vs = linspace(lo, hi, c.integer("exchange", "points"));
  const std::string modes = c.text("exchange", "modes");
  Csv csv({"mode", "voltage_v", "j_programmed_hz", "j_estimate_hz", "resolvable", "floor_hz"});
  Json summary = Json::array();
  for (ExchangeMode m : {ExchangeMode::RamseyOscillation, ExchangeMode::EchoResidual}) {
    const bool ramsey = m == ExchangeMode::RamseyOscillation;
    if (modes != "both" && modes != (ramsey ? "ramsey" : "echo")) continue;
    const auto pts = exchange_spectroscopy(sim.params, vs, m, sim.mode);
    int resolved = 0;
    double worst = 0.0;
    for (const auto& p : pts) {
      csv.cell(to_string(m)).cell(p.voltage).cell(p.j_programmed).cell(p.j_estimate).cell(p.resolvable).cell(p.floor).end();
      if (p.resolvable) {
        ++resolved;
        worst = std::max(worst, std::abs(p.j_estimate / p.j_programmed - 1.0));
      }
    }
    summary.push_back({{"mode", to_string(m)}, {"resolved_points", resolved}, {"max_relative_error", worst}});
  }
  const double j_lo = exchange_from_voltage(c.device, lo);
  const double j_hi = exchange_from_voltage(c.device, hi);
  Json j{{"experiment", "exchange"},
         {"seed", c.seed},
         {"j_min_hz", j_lo},
         {"j_max_hz", j_hi},
         {"decades", std::log10(j_hi / j_lo)},
         {"modes", summary}};
  return {{{"exchange.csv", csv.text()}, {"exchange.json", dump(j)}}};
}

ExperimentOutput run_czcal(const ExperimentConfig& c) {
  CZCalibrationOptions o;
  if (const auto r = c.optional_real("czcal", "ramp")) o.ramp = *r;
  const CZCalibration cal = calibrate_cz(c.device, c.real("czcal", "j_peak"), o);
  const auto phases = linspace(0.0, kTwoPi, c.integer("czcal", "phase_points"));
  Csv csv({"phase_rad", "p2_up_control_down", "p2_up_control_up"});
  for (const auto& p : cz_phase_scan(c.device, cal, phases)) {
    csv.cell(p.phase).cell(p.p_up_control_down).cell(p.p_up_control_up).end();
  }
  Json j{{"experiment", "czcal"}, {"seed", c.seed}, {"calibration", calibration_json(cal)}};
  return {{{"czcal.csv", csv.text()}, {"czcal.json", dump(j)}}};
}

BellState bell_of(const std::string& s) {
  if (s == "phi+") return BellState::PhiPlus;
  if (s == "phi-") return BellState::PhiMinus;
  if (s == "psi+") return BellState::PsiPlus;
  return BellState::PsiMinus;
}

ExperimentOutput run_belltomo(const ExperimentConfig& c) {
  const Sim sim = simulation(c);
  const CZCalibration cal = calibrate_cz(sim.params, c.real("belltomo", "j_cz"));
  const std::string v = c.text("belltomo", "variant");
  std::vector<BellState> which;
  if (v == "all") {
    which = {BellState::PsiPlus, BellState::PsiMinus, BellState::PhiPlus, BellState::PhiMinus};
  } else {
    which = {bell_of(v)};
  }
  Csv csv({"variant", "setting_q1", "setting_q2", "n_dd", "n_du", "n_ud", "n_uu"});
  Json states = Json::array();
  for (BellState b : which) {
    const auto r = bell_tomography(sim.params, b, cal, sim.mode);
    for (int s = 0; s < 9; ++s) {
      const auto& st = tomography_settings()[static_cast<std::size_t>(s)];
      csv.cell(to_string(b)).cell(to_string(st.q1)).cell(to_string(st.q2));
      const auto& f = r.raw_data.frequencies[static_cast<std::size_t>(s)];
      for (int o = 0; o < 4; ++o) {
        if (r.raw_data.shots_per_setting > 0) {
          csv.cell(static_cast<std::int64_t>(std::llround(f[o] * static_cast<double>(r.raw_data.shots_per_setting))));
        } else {
          csv.cell(f[o]);
        }
      }
      csv.end();
    }
    states.push_back({{"variant", to_string(b)},
                      {"F_u", r.fidelity_raw},
                      {"F_c", r.fidelity_corrected},
                      {"clipped", r.clipped},
                      {"linear_inversion_non_psd", r.linear.non_psd},
                      {"log_likelihood", r.raw.log_likelihood},
                      {"iterations", r.raw.iterations},
                      {"converged", r.raw.converged && r.corrected.converged},
                      {"rho_raw", matrix_json(r.raw.rho.matrix())},
                      {"rho_corrected", matrix_json(r.corrected.rho.matrix())}});
  }
  Json j{{"experiment", "belltomo"},
         {"seed", c.seed},
         {"shots_per_setting", sim.mode.shots},
         {"cz", calibration_json(cal)},
         {"states", states}};
  return {{{"belltomo_counts.csv", csv.text()}, {"belltomo.json", dump(j)}}};
}

ExperimentOutput run_truthtable(const ExperimentConfig& c) {
  const Sim sim = simulation(c);
  const CZCalibration cal = calibrate_cz(sim.params, c.real("truthtable", "j_cz"));
  const std::string g = c.text("truthtable", "gates");
  const char* labels[4] = {"dd", "du", "ud", "uu"};
  Csv table({"gate", "input", "p_dd", "p_du", "p_ud", "p_uu"});
  Csv drive({"gate", "tau_s", "p_dd", "p_du", "p_ud", "p_uu", "p1_up", "p2_up"});
  Json gates = Json::array();
  const auto taus = linspace(0.0, c.real("truthtable", "tau_max"), c.integer("truthtable", "tau_points"));
  for (const std::string name : {"cnot", "swap"}) {
    if (g != "both" && g != name) continue;
    const Circuit gate = name == "cnot" ? synthesize_cnot(0, 1) : synthesize_swap();
    const auto t = truth_table(gate, sim.params, cal, sim.mode);
    const Mat u = ideal_unitary(gate).matrix();
    double dev = 0.0;
    for (int row = 0; row < 4; ++row) {
      table.cell(name).cell(labels[row]);
      for (int col = 0; col < 4; ++col) {
        table.cell(t(row, col));
        dev = std::max(dev, std::abs(t(row, col) - std::norm(u(col, row))));
      }
      table.end();
    }
    // Drive Q2, then the gate: CNOT with Q1 as target, or SWAP onto Q1.
    const Circuit after = name == "cnot" ? synthesize_cnot(1, 0) : synthesize_swap();
    const auto sweep = drive_then_circuit(after, 1, taus, sim.params, cal, sim.mode);
    double anti = 0.0;
    for (std::size_t i = 0; i < taus.size(); ++i) {
      const auto& p = sweep[i];
      drive.cell(name).cell(taus[i]).cell(p[0]).cell(p[1]).cell(p[2]).cell(p[3]);
      drive.cell(marginal_up(p, 0)).cell(marginal_up(p, 1)).end();
      anti = std::max(anti, std::abs(p[0] + p[3] - 1.0));
    }
    Json entry{{"gate", name}, {"cz_count", gate.cz_count()}, {"max_deviation_from_ideal", dev}};
    if (name == "cnot") entry["max_anticorrelation_defect"] = anti;
    gates.push_back(entry);
  }
  Json j{{"experiment", "truthtable"}, {"seed", c.seed}, {"cz", calibration_json(cal)}, {"gates", gates}};
  return {{{"truthtable.csv", table.text()}, {"truthtable_drive.csv", drive.text()}, {"truthtable.json", dump(j)}}};
}

Json fit_json(const DecayFit& f) {
  return Json{{"A", f.A},
              {"B", f.B},
              {"p", f.p},
              {"residual_norm", f.residual_norm},
              {"offset_fixed", f.offset_fixed},
              {"identifiable", f.identifiable}};
}

void curve_rows(Csv& csv, const char* name, const RBCurve& c) {
  for (std::size_t i = 0; i < c.data.lengths.size(); ++i) {
    csv.cell(name).cell(c.data.lengths[i]).cell(c.means[i]).cell(c.stderrs[i]).cell(c.counts[i]).end();
  }
}

ExperimentOutput run_rb_experiment(const ExperimentConfig& c) {
  const std::string& sec = c.experiment;
  const RBConfig cfg = rb_config_from(c);
  const bool noisy = c.flag(sec, "noisy");
  const RBResult r = run_rb(cfg, c.device, noisy);
  Csv csv({"curve", "length", "mean", "stderr", "n"});
  curve_rows(csv, "reference", r.reference);
  if (r.interleaved) curve_rows(csv, "interleaved", *r.interleaved);

  Json config{{"lengths", cfg.lengths},
              {"sequences", cfg.sequences_per_length},
              {"shots", cfg.shots_per_sequence},
              {"noise_realizations", cfg.noise_realizations},
              {"resamples", cfg.bootstrap_resamples},
              {"level", cfg.confidence_level},
              {"j_cz_hz", cfg.j_cz},
              {"noisy", noisy}};
  if (cfg.injected_depolarizing) config["depolarizing"] = *cfg.injected_depolarizing;
  if (sec == "irb") config["gate"] = c.text("irb", "gate");
  Json j{{"experiment", sec}, {"seed", c.seed}, {"config", config}};
  j["reference_fit"] = fit_json(r.reference.fit);
  j["r_ref"] = r.clifford.r;
  j["F_clifford"] = r.clifford.F;
  j["F_clifford_ci"] = {{"level", r.clifford_ci.level}, {"lo", r.clifford_ci.lo}, {"hi", r.clifford_ci.hi}};
  if (r.interleaved) {
    j["interleaved_fit"] = fit_json(r.interleaved->fit);
    j["F_gate"] = r.gate->F;
    j["r_gate"] = r.gate->r;
    j["F_gate_capped"] = r.gate->capped;
    j["F_gate_ci"] = {{"level", r.gate_ci->level}, {"lo", r.gate_ci->lo}, {"hi", r.gate_ci->hi}};
  }
  j["ci_extended"] = r.ci_extended;
  j["cz"] = calibration_json(r.cz);
  return {{{sec + ".csv", csv.text()}, {sec + ".json", dump(j)}}};
}

}  // namespace

std::string default_out_dir() {
  const char* env = std::getenv("SPINQ_OUT_DIR");
  if (env != nullptr && *env != '\0') return env;
  return "spinq_out";
}

RBConfig rb_config_from(const ExperimentConfig& c) {
  const std::string& sec = c.experiment;
  if (sec != "rb" && sec != "irb") throw SpinqError("not an RB experiment: " + sec);
  RBConfig r;
  r.lengths = c.ints(sec, "lengths");
  r.sequences_per_length = static_cast<int>(c.integer(sec, "sequences"));
  r.shots_per_sequence = c.integer(sec, "shots");
  r.noise_realizations = static_cast<int>(c.integer(sec, "noise_realizations"));
  r.bootstrap_resamples = static_cast<int>(c.integer(sec, "resamples"));
  r.confidence_level = c.real(sec, "level");
  r.j_cz = c.real(sec, "j_cz");
  r.injected_depolarizing = c.optional_real(sec, "depolarizing");
  r.compile.drive_ramp = c.real(sec, "drive_ramp");
  r.compile.stark_compensation = c.flag(sec, "stark_compensation");
  r.seed = c.seed;
  if (sec == "irb") {
    if (c.text("irb", "gate") == "cnot") {
      r.interleave = synthesize_cnot(0, 1);
    } else {
      Circuit cz;
      cz.name = "cz";
      cz.add(GateOp::cz());
      r.interleave = cz;
    }
  }
  return r;
}

ExperimentOutput execute(const ExperimentConfig& c) {
  if (c.experiment == "rabi") return run_rabi(c);
  if (c.experiment == "coherence") return run_coherence(c);
  if (c.experiment == "exchange") return run_exchange(c);
  if (c.experiment == "czcal") return run_czcal(c);
  if (c.experiment == "belltomo") return run_belltomo(c);
  if (c.experiment == "truthtable") return run_truthtable(c);
  if (c.experiment == "rb" || c.experiment == "irb") return run_rb_experiment(c);
  throw SpinqError("unknown experiment: " + c.experiment);
}

RunManifest run_experiment(ExperimentConfig c, const RunOptions& opts) {
  const auto t0 = std::chrono::steady_clock::now();
  if (opts.seed) {
    c.seed = *opts.seed;
    auto& v = c.values[".seed"];
    v.integer = static_cast<std::int64_t>(*opts.seed);
    v.text = std::to_string(*opts.seed);
    v.set = true;
  }
  std::string dir = opts.out_dir ? *opts.out_dir : (c.out_dir.empty() ? default_out_dir() : c.out_dir);
  const ExperimentOutput out = execute(c);

  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw SpinqError("cannot create output directory " + dir + ": " + ec.message());

  RunManifest m;
  m.experiment = c.experiment;
  m.seed = c.seed;
  m.version = SPINQ_VERSION;
  m.config = resolved_text(c);
  m.out_dir = dir;
  for (const auto& [name, content] : out.files) {
    write_file_atomic((std::filesystem::path(dir) / name).string(), content);
    m.files.push_back({name, sha256_hex(content), content.size()});
  }
  m.wall_time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

  Json files = Json::array();
  for (const auto& f : m.files) files.push_back({{"name", f.name}, {"sha256", f.sha256}, {"bytes", f.bytes}});
  Json j{{"experiment", m.experiment},
         {"seed", m.seed},
         {"version", m.version},
         {"wall_time_s", m.wall_time_s},
         {"config", m.config},
         {"device", fields_json(c.device)},
         {"files", files}};
  write_file_atomic((std::filesystem::path(dir) / "manifest.json").string(), dump(j));
  return m;
}

}  // namespace spinq
