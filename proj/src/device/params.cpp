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

#include "spinq/device/params.hpp"

#include <sstream>

#include "spinq/core/quantum.hpp"

namespace spinq {

double DeviceParams::readout_down(int qubit) const {
  const auto& o = qubit == 0 ? M1_down : M2_down;
  return o.value_or(qubit == 0 ? M1 : M2);
}

double DeviceParams::readout_up(int qubit) const {
  const auto& o = qubit == 0 ? M1_up : M2_up;
  return o.value_or(qubit == 0 ? M1 : M2);
}

std::vector<std::string> DeviceParams::violations() const {
  std::vector<std::string> out;
  auto need = [&](bool ok, const std::string& what) {
    if (!ok) out.push_back(what);
  };
  need(f1 > 0 && f2 > 0, "f1 and f2 must be > 0");
  need(f1 != f2, "f1 and f2 must differ");
  need(omega1 > 0 && omega2 > 0, "omega1 and omega2 must be > 0");
  need(t_pi2 > 0, "t_pi2 must be > 0");
  need(J_res >= 0, "J_res must be >= 0");
  need(J0 > 0, "J0 must be > 0 (J(V) strictly increasing)");
  need(V0 > 0, "V0 must be > 0 (J(V) strictly increasing)");
  need(V_max > V_min, "V_max must exceed V_min");
  need(T2star1 > 0 && T2star2 > 0 && T2echo1 > 0 && T2echo2 > 0, "coherence times must be > 0");
  need(T2star1 <= T2echo1, "T2star1 must not exceed T2echo1");
  need(T2star2 <= T2echo2, "T2star2 must not exceed T2echo2");
  auto fid = [&](double v, const char* name) {
    need(v >= 0.5 && v <= 1.0, std::string(name) + " must lie in [0.5, 1]");
  };
  fid(rho01, "rho01");
  fid(rho02, "rho02");
  fid(M1, "M1");
  fid(M2, "M2");
  if (M1_down) fid(*M1_down, "M1_down");
  if (M1_up) fid(*M1_up, "M1_up");
  if (M2_down) fid(*M2_down, "M2_down");
  if (M2_up) fid(*M2_up, "M2_up");
  need(cz_ramp >= 0, "cz_ramp must be >= 0");
  return out;
}

void DeviceParams::validate() const {
  const auto v = violations();
  if (!v.empty()) throw SpinqError("invalid device parameters: " + v.front());
}

DeviceParams DeviceParams::noiseless() const {
  DeviceParams p = *this;
  p.T2star1 = p.T2star2 = p.T2echo1 = p.T2echo2 = kInfinity;
  p.rho01 = p.rho02 = p.M1 = p.M2 = 1.0;
  p.M1_down = p.M1_up = p.M2_down = p.M2_up = std::nullopt;
  return p;
}

namespace {

struct FieldAccess {
  ParamField info;
  double DeviceParams::*plain;
  std::optional<double> DeviceParams::*opt;
};

const std::vector<FieldAccess>& access_table() {
  static const std::vector<FieldAccess> table{
      {{"f1", "Hz", false}, &DeviceParams::f1, nullptr},
      {{"f2", "Hz", false}, &DeviceParams::f2, nullptr},
      {{"B_E", "T", false}, &DeviceParams::B_E, nullptr},
      {{"omega1", "Hz", false}, &DeviceParams::omega1, nullptr},
      {{"omega2", "Hz", false}, &DeviceParams::omega2, nullptr},
      {{"t_pi2", "s", false}, &DeviceParams::t_pi2, nullptr},
      {{"J_res", "Hz", false}, &DeviceParams::J_res, nullptr},
      {{"J0", "Hz", false}, &DeviceParams::J0, nullptr},
      {{"V0", "V", false}, &DeviceParams::V0, nullptr},
      {{"V_ref", "V", false}, &DeviceParams::V_ref, nullptr},
      {{"V_min", "V", false}, &DeviceParams::V_min, nullptr},
      {{"V_max", "V", false}, &DeviceParams::V_max, nullptr},
      {{"T2star1", "s", false}, &DeviceParams::T2star1, nullptr},
      {{"T2star2", "s", false}, &DeviceParams::T2star2, nullptr},
      {{"T2echo1", "s", false}, &DeviceParams::T2echo1, nullptr},
      {{"T2echo2", "s", false}, &DeviceParams::T2echo2, nullptr},
      {{"rho01", "", false}, &DeviceParams::rho01, nullptr},
      {{"rho02", "", false}, &DeviceParams::rho02, nullptr},
      {{"M1", "", false}, &DeviceParams::M1, nullptr},
      {{"M2", "", false}, &DeviceParams::M2, nullptr},
      {{"M1_down", "", true}, nullptr, &DeviceParams::M1_down},
      {{"M1_up", "", true}, nullptr, &DeviceParams::M1_up},
      {{"M2_down", "", true}, nullptr, &DeviceParams::M2_down},
      {{"M2_up", "", true}, nullptr, &DeviceParams::M2_up},
      {{"cz_ramp", "s", false}, &DeviceParams::cz_ramp, nullptr},
  };
  return table;
}

}  // namespace

const std::vector<ParamField>& param_fields() {
  static const std::vector<ParamField> fields = [] {
    std::vector<ParamField> f;
    for (const auto& a : access_table()) f.push_back(a.info);
    return f;
  }();
  return fields;
}

std::optional<double> get_param(const DeviceParams& p, std::string_view name) {
  for (const auto& a : access_table()) {
    if (name != a.info.name) continue;
    if (a.plain != nullptr) return p.*a.plain;
    return p.*a.opt;
  }
  return std::nullopt;
}

bool set_param(DeviceParams& p, std::string_view name, double value) {
  for (const auto& a : access_table()) {
    if (name != a.info.name) continue;
    if (a.plain != nullptr) {
      p.*a.plain = value;
    } else {
      p.*a.opt = value;
    }
    return true;
  }
  return false;
}

double exchange_from_voltage(const DeviceParams& p, double v) {
  return p.J_res + p.J0 * std::exp((v - p.V_ref) / p.V0);
}

double voltage_for_exchange(const DeviceParams& p, double j) {
  if (j <= p.J_res) throw SpinqError("requested exchange is at or below the residual exchange");
  return p.V_ref + p.V0 * std::log((j - p.J_res) / p.J0);
}

}  // namespace spinq
