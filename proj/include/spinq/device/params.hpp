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

#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace spinq {

/// Calibration constants of the two-spin device. Units: Hz, seconds, volts.
/// Defaults are the measured values of the reference device where known.
struct DeviceParams {
  double f1 = 18.247e9;
  double f2 = 17.851e9;
  /// External field in tesla; metadata only, dynamics use f1 and f2.
  double B_E = 0.365;
  double omega1 = 1.0 / (4.0 * 70e-9);
  double omega2 = 1.0 / (4.0 * 70e-9);
  double t_pi2 = 70e-9;

  // J(V) = J_res + J0 * exp((V - V_ref) / V0) over [V_min, V_max].
  double J_res = 0.0;
  double J0 = 1e7;
  double V0 = 0.01 / std::log(2.0);
  double V_ref = 1.0;
  double V_min = 0.9;
  double V_max = 1.0;

  double T2star1 = 1.7e-6;
  double T2star2 = 2.3e-6;
  double T2echo1 = 23e-6;
  double T2echo2 = 102e-6;

  double rho01 = 0.994;
  double rho02 = 0.975;
  double M1 = 0.981;
  double M2 = 0.998;
  // Optional asymmetric readout: P(read down | down) and P(read up | up).
  std::optional<double> M1_down, M1_up, M2_down, M2_up;

  double cz_ramp = 4e-9;

  double delta_ez() const { return f1 - f2; }
  double frequency(int qubit) const { return qubit == 0 ? f1 : f2; }
  double rabi(int qubit) const { return qubit == 0 ? omega1 : omega2; }
  double t2star(int qubit) const { return qubit == 0 ? T2star1 : T2star2; }
  double t2echo(int qubit) const { return qubit == 0 ? T2echo1 : T2echo2; }
  double init_fidelity(int qubit) const { return qubit == 0 ? rho01 : rho02; }
  double readout_down(int qubit) const;
  double readout_up(int qubit) const;

  /// Throws SpinqError naming the first violated invariant.
  void validate() const;
  /// Human-readable violations; empty when valid.
  std::vector<std::string> violations() const;

  /// Copy with infinite coherence times and perfect SPAM.
  DeviceParams noiseless() const;
};

/// Named scalar field of DeviceParams, for serialization.
struct ParamField {
  const char* name;
  const char* unit;
  bool optional;
};

const std::vector<ParamField>& param_fields();

/// Reads a field by name; nullopt for unset optional fields.
std::optional<double> get_param(const DeviceParams& p, std::string_view name);

/// Sets a field by name; returns false for unknown names.
bool set_param(DeviceParams& p, std::string_view name, double value);

/// J(V) on the exponential exchange curve.
double exchange_from_voltage(const DeviceParams& p, double v);

/// Inverse of exchange_from_voltage; throws when J <= J_res.
double voltage_for_exchange(const DeviceParams& p, double j);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace spinq
