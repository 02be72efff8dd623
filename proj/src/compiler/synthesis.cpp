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

#include "spinq/compiler/synthesis.hpp"

#include "spinq/util/rng.hpp"

namespace spinq {

Circuit hadamard(int qubit) {
  Circuit c;
  c.name = "H" + std::to_string(qubit + 1);
  c.add(GateOp::z(qubit, kPi)).add(GateOp::y90(qubit));
  return c;
}

Circuit synthesize_cnot(int control, int target) {
  if (control == target) throw SpinqError("CNOT control and target must differ");
  if (control < 0 || control > 1 || target < 0 || target > 1) throw SpinqError("qubit index must be 0 or 1");
  Circuit c;
  c.append(hadamard(target)).add(GateOp::cz()).append(hadamard(target));
  c.name = "CNOT" + std::to_string(control + 1) + std::to_string(target + 1);
  return c;
}

Circuit synthesize_swap() {
  Circuit c;
  c.append(synthesize_cnot(0, 1)).append(synthesize_cnot(1, 0)).append(synthesize_cnot(0, 1));
  c.name = "SWAP";
  return c;
}

Eigen::Matrix4d truth_table(const Circuit& c, const DeviceParams& p, const CZCalibration& cal,
                            const SimulationMode& mode) {
  Eigen::Matrix4d table;
  for (int row = 0; row < 4; ++row) {
    Circuit full;
    for (int q = 0; q < 2; ++q) {
      const int bit = q == 0 ? 2 : 1;
      if (row & bit) full.add(GateOp::x90(q)).add(GateOp::x90(q));
    }
    full.append(c);
    const auto sched = compile_circuit(full, cal, p);
    const auto o = simulate_schedule(p, sched, mode, mix64(0x7ab1e000ULL + static_cast<std::uint64_t>(row)));
    for (int col = 0; col < 4; ++col) table(row, col) = o.probs[col];
  }
  return table;
}

std::vector<ProbabilityVector> drive_then_circuit(const Circuit& c, int drive_qubit, const std::vector<double>& taus,
                                                  const DeviceParams& p, const CZCalibration& cal,
                                                  const SimulationMode& mode) {
  std::vector<ProbabilityVector> out;
  out.reserve(taus.size());
  for (std::size_t i = 0; i < taus.size(); ++i) {
    if (taus[i] < 0.0) throw SpinqError("drive times must be >= 0");
    Compiler comp(p, cal);
    if (taus[i] > 0.0) comp.add_segment(drive_segment(p, drive_qubit, 0.0, taus[i]));
    comp.add(c);
    const auto sched = comp.take();
    out.push_back(simulate_schedule(p, sched, mode, mix64(0xd71fe000ULL + i)).probs);
  }
  return out;
}

}  // namespace spinq
