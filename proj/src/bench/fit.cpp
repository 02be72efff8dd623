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

#include "spinq/bench/fit.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <boost/math/tools/minima.hpp>

#include "spinq/core/quantum.hpp"
#include "spinq/util/rng.hpp"

namespace spinq {

namespace {

struct Problem {
  const std::vector<int>& m;
  const std::vector<double>& y;
  bool fixed;
  double b_fixed;

  double sse(double a, double b, double p) const {
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
      const double r = a * std::pow(p, m[i]) + b - y[i];
      s += r * r;
    }
    return s;
  }

  // Best (A, B) for a given p.
  std::array<double, 2> project(double p) const {
    const std::size_t n = m.size();
    double sb = 0, sy = 0, sbb = 0, sby = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double b = std::pow(p, m[i]);
      sb += b;
      sy += y[i];
      sbb += b * b;
      sby += b * y[i];
    }
    if (fixed) {
      const double a = sbb > 0 ? (sby - b_fixed * sb) / sbb : 0.0;
      return {a, b_fixed};
    }
    const double nn = static_cast<double>(n);
    const double det = nn * sbb - sb * sb;
    if (std::abs(det) < 1e-300) return {0.0, sy / nn};
    return {(nn * sby - sb * sy) / det, (sbb * sy - sb * sby) / det};
  }

  double projected_sse(double p) const {
    const auto ab = project(p);
    return sse(ab[0], ab[1], p);
  }
};

// Damped Gauss-Newton with p clamped to [0, 1].
std::array<double, 3> refine(const Problem& pr, std::array<double, 3> th, int max_iter, int& iters, bool& converged) {
  const int k = pr.fixed ? 2 : 3;
  double lambda = 1e-3;
  double cur = pr.sse(th[0], th[1], th[2]);
  converged = false;
  for (iters = 0; iters < max_iter; ++iters) {
    Eigen::MatrixXd jac(pr.m.size(), k);
    Eigen::VectorXd res(pr.m.size());
    for (std::size_t i = 0; i < pr.m.size(); ++i) {
      const double pm = std::pow(th[2], pr.m[i]);
      const double dp = pr.m[i] == 0 ? 0.0 : th[0] * pr.m[i] * std::pow(th[2], pr.m[i] - 1);
      res(static_cast<Eigen::Index>(i)) = th[0] * pm + th[1] - pr.y[i];
      jac(static_cast<Eigen::Index>(i), 0) = pm;
      if (pr.fixed) {
        jac(static_cast<Eigen::Index>(i), 1) = dp;
      } else {
        jac(static_cast<Eigen::Index>(i), 1) = 1.0;
        jac(static_cast<Eigen::Index>(i), 2) = dp;
      }
    }
    if (cur < 1e-30) {
      converged = true;
      break;
    }
    const Eigen::MatrixXd jtj = jac.transpose() * jac;
    const Eigen::VectorXd g = jac.transpose() * res;
    bool stepped = false;
    for (int tries = 0; tries < 60 && !stepped; ++tries) {
      Eigen::MatrixXd a = jtj;
      for (int d = 0; d < k; ++d) a(d, d) += lambda * std::max(jtj(d, d), 1e-300);
      const Eigen::VectorXd delta = a.ldlt().solve(-g);
      std::array<double, 3> next = th;
      next[0] += delta(0);
      if (pr.fixed) {
        next[2] = std::clamp(th[2] + delta(1), 0.0, 1.0);
      } else {
        next[1] += delta(1);
        next[2] = std::clamp(th[2] + delta(2), 0.0, 1.0);
      }
      const double s = pr.sse(next[0], next[1], next[2]);
      if (s <= cur) {
        const double change = std::abs(next[0] - th[0]) + std::abs(next[1] - th[1]) + std::abs(next[2] - th[2]);
        th = next;
        const double drop = cur - s;
        cur = s;
        lambda = std::max(lambda / 3.0, 1e-12);
        stepped = true;
        if (change < 1e-15 || drop <= 1e-16 * std::max(cur, 1e-300)) converged = true;
      } else {
        lambda *= 4.0;
      }
    }
    if (!stepped) converged = true;  // no descent direction left: at a minimum
    if (converged) break;
  }
  return th;
}

}  // namespace

std::vector<double> RBData::means() const {
  std::vector<double> out;
  for (const auto& v : per_sequence) {
    if (v.empty()) throw SpinqError("RB data has a length with no sequences");
    double s = 0.0;
    for (double x : v) s += x;
    out.push_back(s / static_cast<double>(v.size()));
  }
  return out;
}

std::vector<double> RBData::stderrs() const {
  std::vector<double> out;
  const auto mu = means();
  for (std::size_t i = 0; i < per_sequence.size(); ++i) {
    const auto& v = per_sequence[i];
    if (v.size() < 2) {
      out.push_back(0.0);
      continue;
    }
    double s = 0.0;
    for (double x : v) s += (x - mu[i]) * (x - mu[i]);
    const double n = static_cast<double>(v.size());
    out.push_back(std::sqrt(s / (n - 1) / n));
  }
  return out;
}

DecayFit fit_decay(const std::vector<int>& lengths, const std::vector<double>& means, const DecayFitOptions& opts) {
  if (lengths.size() != means.size()) throw SpinqError("fit_decay: lengths and means differ in size");
  if (lengths.size() < 3) throw SpinqError("fit_decay needs at least three lengths");
  for (std::size_t i = 0; i < lengths.size(); ++i) {
    if (lengths[i] < 1) throw SpinqError("fit_decay: lengths must be >= 1");
    if (!std::isfinite(means[i])) throw SpinqError("fit_decay: non-finite data");
  }
  const auto [lo_it, hi_it] = std::minmax_element(means.begin(), means.end());
  const bool fixed = *hi_it - *lo_it < opts.min_spread;
  const Problem pr{lengths, means, fixed, 1.0 / opts.dimension};

  // Start 1: the conventional guess from the first and last lengths.
  std::array<double, 3> guess{means.front() - means.back(), means.back(), 0.9};
  if (fixed) guess = {means.front() - pr.b_fixed, pr.b_fixed, 0.9};
  {
    std::vector<double> xs, ls;
    for (std::size_t i = 0; i < lengths.size(); ++i) {
      const double v = means[i] - guess[1];
      if (v > 0 && guess[0] > 0) {
        xs.push_back(lengths[i]);
        ls.push_back(std::log(v));
      }
    }
    if (xs.size() >= 2) {
      const double n = static_cast<double>(xs.size());
      double mx = 0, my = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i] / n;
        my += ls[i] / n;
      }
      double sxx = 0, sxy = 0;
      for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ls[i] - my);
      }
      if (sxx > 0) guess[2] = std::clamp(std::exp(sxy / sxx), 0.0, 1.0);
    }
  }

  // Start 2: global search over p with (A, B) projected out.
  double best_p = 0.0, best_s = std::numeric_limits<double>::infinity();
  constexpr int kScan = 400;
  for (int i = 0; i <= kScan; ++i) {
    const double p = static_cast<double>(i) / kScan;
    const double s = pr.projected_sse(p);
    if (s < best_s) {
      best_s = s;
      best_p = p;
    }
  }
  std::uintmax_t brent_iters = 200;
  const auto br = boost::math::tools::brent_find_minima([&](double p) { return pr.projected_sse(p); },
                                                        std::max(0.0, best_p - 1.0 / kScan),
                                                        std::min(1.0, best_p + 1.0 / kScan), 52, brent_iters);
  const auto ab = pr.project(br.first);

  DecayFit best;
  double best_sse = std::numeric_limits<double>::infinity();
  int total_iters = static_cast<int>(brent_iters);
  bool any_converged = false;
  for (const auto& start : {std::array<double, 3>{ab[0], ab[1], br.first}, guess}) {
    int it = 0;
    bool conv = false;
    const auto th = refine(pr, start, opts.max_iterations, it, conv);
    total_iters += it;
    any_converged = any_converged || conv;
    const double s = pr.sse(th[0], th[1], th[2]);
    if (conv && s < best_sse) {
      best_sse = s;
      best.A = th[0];
      best.B = th[1];
      best.p = th[2];
    }
  }
  if (!any_converged) {
    throw SpinqError("fit_decay did not converge within " + std::to_string(opts.max_iterations) +
                     " iterations (last p=" + std::to_string(best.p) + ")");
  }
  best.residual_norm = std::sqrt(best_sse);
  best.lengths = lengths;
  best.means = means;
  best.offset_fixed = fixed;
  best.identifiable = std::abs(best.A) > 1e-6;
  best.iterations = total_iters;
  return best;
}

DecayFit fit_decay(const RBData& data, const DecayFitOptions& opts) { return fit_decay(data.lengths, data.means(), opts); }

FidelityEstimate rb_fidelity(double p, int d) {
  if (!(p > 0.0 && p <= 1.0)) throw SpinqError("rb_fidelity needs p in (0, 1]");
  FidelityEstimate f;
  f.r = (d - 1) * (1.0 - p) / d;
  f.F = 1.0 - f.r;
  return f;
}

FidelityEstimate interleaved_fidelity(double p_int, double p_ref, int d) {
  if (!(p_int > 0.0 && p_int <= 1.0 && p_ref > 0.0 && p_ref <= 1.0)) {
    throw SpinqError("interleaved_fidelity needs p values in (0, 1]");
  }
  FidelityEstimate f;
  double ratio = p_int / p_ref;
  if (ratio > 1.0) {
    ratio = 1.0;
    f.capped = true;
  }
  f.r = (d - 1) * (1.0 - ratio) / d;
  f.F = 1.0 - f.r;
  return f;
}

namespace {

double percentile(std::vector<double>& v, double q) {
  std::sort(v.begin(), v.end());
  const double pos = q * static_cast<double>(v.size() - 1);
  const auto i = static_cast<std::size_t>(std::floor(pos));
  const double frac = pos - static_cast<double>(i);
  if (i + 1 >= v.size()) return v.back();
  return v[i] * (1.0 - frac) + v[i + 1] * frac;
}

}  // namespace

ConfidenceInterval bootstrap_ci(const std::vector<RBData>& sets,
                                const std::function<double(const std::vector<DecayFit>&)>& statistic,
                                int resamples, double level, std::uint64_t seed, const DecayFitOptions& opts) {
  if (resamples < 100) throw SpinqError("bootstrap needs at least 100 resamples");
  if (!(level > 0.0 && level < 1.0)) throw SpinqError("bootstrap level must lie in (0, 1)");
  std::vector<double> stats;
  stats.reserve(static_cast<std::size_t>(resamples));
  int failures = 0;
  for (int b = 0; b < resamples; ++b) {
    auto rng = keyed_stream(seed, {tag(StreamTag::Bootstrap), static_cast<std::uint64_t>(b)});
    std::vector<DecayFit> fits;
    try {
      for (const auto& set : sets) {
        std::vector<double> means;
        for (const auto& v : set.per_sequence) {
          if (v.empty()) throw SpinqError("RB data has a length with no sequences");
          std::uniform_int_distribution<std::size_t> pick(0, v.size() - 1);
          double s = 0.0;
          for (std::size_t k = 0; k < v.size(); ++k) s += v[pick(rng)];
          means.push_back(s / static_cast<double>(v.size()));
        }
        fits.push_back(fit_decay(set.lengths, means, opts));
      }
      const double s = statistic(fits);
      if (!std::isfinite(s)) throw SpinqError("non-finite bootstrap statistic");
      stats.push_back(s);
    } catch (const SpinqError&) {
      ++failures;
    }
  }
  if (failures * 10 > resamples) {
    throw SpinqError("bootstrap: " + std::to_string(failures) + " of " + std::to_string(resamples) +
                     " refits failed");
  }
  ConfidenceInterval ci;
  ci.level = level;
  ci.lo = percentile(stats, (1.0 - level) / 2.0);
  ci.hi = percentile(stats, 1.0 - (1.0 - level) / 2.0);
  return ci;
}

ConfidenceInterval bootstrap_ci(const RBData& data, int resamples, double level, std::uint64_t seed,
                                const DecayFitOptions& opts) {
  return bootstrap_ci({data}, [](const std::vector<DecayFit>& f) { return f[0].p; }, resamples, level, seed, opts);
}

}  // namespace spinq
