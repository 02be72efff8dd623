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

#include "spinq/util/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include <boost/math/tools/minima.hpp>

#include "spinq/core/quantum.hpp"

namespace spinq {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw SpinqError("fit_line needs >= 2 paired points");
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n;
  const double my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw SpinqError("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  return f;
}

AffineFit fit_affine(std::span<const double> basis, std::span<const double> y) {
  const double n = static_cast<double>(y.size());
  double sb = 0, sy = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sb += basis[i];
    sy += y[i];
  }
  const double mb = sb / n;
  const double my = sy / n;
  double sbb = 0, sby = 0;
  for (std::size_t i = 0; i < y.size(); ++i) {
    sbb += (basis[i] - mb) * (basis[i] - mb);
    sby += (basis[i] - mb) * (y[i] - my);
  }
  AffineFit f;
  f.scale = sbb > 1e-300 ? sby / sbb : 0.0;
  f.offset = my - f.scale * mb;
  for (std::size_t i = 0; i < y.size(); ++i) {
    const double r = y[i] - f.offset - f.scale * basis[i];
    f.sse += r * r;
  }
  return f;
}

EnvelopeFit fit_decay_envelope(std::span<const double> t, std::span<const double> y, double exponent,
                               const std::function<double(double)>& envelope) {
  if (t.size() != y.size() || t.size() < 3) throw SpinqError("decay fit needs >= 3 points");
  const double t_max = *std::max_element(t.begin(), t.end());
  double t_min_pos = t_max;
  for (double v : t) {
    if (v > 0.0) t_min_pos = std::min(t_min_pos, v);
  }
  if (!(t_max > 0.0)) throw SpinqError("decay fit needs positive delays");

  std::vector<double> basis(t.size());
  auto project = [&](double log_tc) {
    const double tc = std::exp(log_tc);
    for (std::size_t i = 0; i < t.size(); ++i) {
      const double w = envelope ? envelope(t[i]) : 1.0;
      basis[i] = w * std::exp(-std::pow(t[i] / tc, exponent));
    }
    return fit_affine(basis, y);
  };

  const double lo = std::log(t_min_pos / 100.0);
  const double hi = std::log(t_max * 1e4);
  // Coarse scan guards Brent against the flat far tail.
  double best_x = lo;
  double best_sse = std::numeric_limits<double>::infinity();
  constexpr int kCoarse = 60;
  for (int k = 0; k <= kCoarse; ++k) {
    const double x = lo + (hi - lo) * k / kCoarse;
    const double sse = project(x).sse;
    if (sse < best_sse) {
      best_sse = sse;
      best_x = x;
    }
  }
  const double step = (hi - lo) / kCoarse;
  std::uintmax_t iters = 10000;
  const auto r = boost::math::tools::brent_find_minima([&](double x) { return project(x).sse; },
                                                       std::max(lo, best_x - step), std::min(hi, best_x + step),
                                                       40, iters);
  if (iters >= 10000) throw SpinqError("decay fit did not converge");
  const AffineFit af = project(r.first);

  // Data flat to within noise: the affine part explains everything.
  double mean = 0.0;
  for (double v : y) mean += v;
  mean /= static_cast<double>(y.size());
  double spread = 0.0;
  for (double v : y) spread = std::max(spread, std::abs(v - mean));

  EnvelopeFit out;
  out.amplitude = af.scale;
  out.offset = af.offset;
  out.sse = af.sse;
  out.iterations = static_cast<int>(iters);
  out.time_constant = std::exp(r.first);
  out.decaying = spread > 1e-3 && out.time_constant < 10.0 * t_max;
  if (spread <= 1e-3) out.time_constant = std::numeric_limits<double>::infinity();
  return out;
}

double scan_then_golden_max(const std::function<double(double)>& f, double lo, double hi, int coarse,
                            double tol) {
  if (coarse < 2 || !(hi > lo)) throw SpinqError("invalid scan range");
  double best_x = lo;
  double best_v = -std::numeric_limits<double>::infinity();
  const double step = (hi - lo) / (coarse - 1);
  for (int k = 0; k < coarse; ++k) {
    const double x = lo + step * k;
    const double v = f(x);
    if (v > best_v) {
      best_v = v;
      best_x = x;
    }
  }
  double a = best_x - step;
  double b = best_x + step;
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > tol) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double mid = 0.5 * (a + b);
  return f(mid) >= best_v ? mid : best_x;
}

}  // namespace spinq
