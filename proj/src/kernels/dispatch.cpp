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

#include <atomic>
#include <cstdlib>
#include <stdexcept>
#include <string>

#include "spinq/kernels/cmat4.hpp"

namespace spinq::kernels {

namespace {

const KernelTable* resolve(std::string_view name) {
  if (name == "scalar") return &scalar_kernels();
  if (name == "avx2") {
    const KernelTable* t = avx2_kernels();
    if (t == nullptr) throw std::invalid_argument("avx2 kernels not supported on this host");
    return t;
  }
  if (name == "auto" || name.empty()) {
    const KernelTable* t = avx2_kernels();
    return t != nullptr ? t : &scalar_kernels();
  }
  throw std::invalid_argument("unknown kernel variant '" + std::string(name) + "'");
}

std::atomic<const KernelTable*>& slot() {
  static std::atomic<const KernelTable*> current{[] {
    const char* env = std::getenv("SPINQ_KERNELS");
    return resolve(env != nullptr ? std::string_view(env) : std::string_view("auto"));
  }()};
  return current;
}

}  // namespace

const KernelTable& active() { return *slot().load(std::memory_order_acquire); }

void select(std::string_view name) { slot().store(resolve(name), std::memory_order_release); }

}  // namespace spinq::kernels
