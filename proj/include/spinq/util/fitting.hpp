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

#include <functional>
#include <span>

namespace spinq {

/// Least-squares y = intercept + slope * x.
struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Best (a, b) for y ~ a * basis + b, with the residual sum of squares.
struct AffineFit {
  double scale = 0.0;
  double offset = 0.0;
  double sse = 0.0;
};
AffineFit fit_affine(std::span<const double> basis, std::span<const double> y);

/// Fit of y = offset + amplitude * envelope(t) * exp(-(t / T)^exponent).
struct EnvelopeFit {
  double time_constant = 0.0;  // +inf when no decay is resolved
  double amplitude = 0.0;
  double offset = 0.0;
  double sse = 0.0;
  bool decaying = false;
  int iterations = 0;
};

/// Variable projection: for each trial T the amplitude and offset are
/// solved linearly, T itself by Brent's method in log space. `envelope`
/// defaults to 1.
EnvelopeFit fit_decay_envelope(std::span<const double> t, std::span<const double> y, double exponent,
                               const std::function<double(double)>& envelope = {});

/// Maximizer of f on [lo, hi]: `coarse` evenly spaced samples, then
/// golden-section refinement around the best sample down to `tol`.
double scan_then_golden_max(const std::function<double(double)>& f, double lo, double hi, int coarse,
                            double tol);

}  // namespace spinq
