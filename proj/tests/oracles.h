// Copyright 2026 The Soundmatch Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Straightforward reference implementations used as test oracles. None of
// them share code with the library beyond the synth parameter tables.

#ifndef SOUNDMATCH_TESTS_ORACLES_H_
#define SOUNDMATCH_TESTS_ORACLES_H_

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <vector>

#include "soundmatch/losses.h"
#include "soundmatch/synth.h"

namespace soundmatch::oracle {

// O(n^2) DFT.
inline std::vector<std::complex<double>> Dft(std::span<const std::complex<double>> x) {
  const std::size_t n = x.size();
  std::vector<std::complex<double>> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double a = -2.0 * std::numbers::pi * static_cast<double>(k * t % n) / n;
      acc += x[t] * std::complex<double>(std::cos(a), std::sin(a));
    }
    out[k] = acc;
  }
  return out;
}

// Magnitude of bin k of one Hann-windowed, zero-padded frame.
inline double FrameBinMagnitude(std::span<const double> frame, std::size_t fft_length,
                                std::size_t k) {
  const std::size_t w = frame.size();
  std::complex<double> acc = 0.0;
  for (std::size_t t = 0; t < w; ++t) {
    const double hann = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * t / w);
    const double a = -2.0 * std::numbers::pi * static_cast<double>(k * t) / fft_length;
    acc += frame[t] * hann * std::complex<double>(std::cos(a), std::sin(a));
  }
  return std::abs(acc);
}

// Classic DTW with hard minimum over squared differences.
inline double HardDtw(std::span<const double> x, std::span<const double> y) {
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t m = x.size(), n = y.size();
  std::vector<std::vector<double>> r(m + 1, std::vector<double>(n + 1, inf));
  r[0][0] = 0.0;
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      const double d = (x[i - 1] - y[j - 1]) * (x[i - 1] - y[j - 1]);
      r[i][j] = d + std::min({r[i - 1][j], r[i][j - 1], r[i - 1][j - 1]});
    }
  }
  return r[m][n];
}

// Kruskal-Wallis H with tie correction and its chi-square p-value for df = 1
// (two groups), via the normal tail: P(chi2_1 > h) = erfc(sqrt(h / 2)).
struct KwTwo {
  double h = 0.0;
  double p = 1.0;
};
inline KwTwo KruskalWallisTwo(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<std::pair<double, int>> all;
  for (double v : a) all.push_back({v, 0});
  for (double v : b) all.push_back({v, 1});
  std::sort(all.begin(), all.end());
  const double n = static_cast<double>(all.size());
  double rank_sum[2] = {0.0, 0.0};
  double ties = 0.0;
  for (std::size_t i = 0; i < all.size();) {
    std::size_t j = i;
    while (j < all.size() && all[j].first == all[i].first) ++j;
    const double t = static_cast<double>(j - i);
    const double rank = 0.5 * (static_cast<double>(i + 1) + static_cast<double>(j));
    for (std::size_t k = i; k < j; ++k) rank_sum[all[k].second] += rank;
    ties += t * t * t - t;
    i = j;
  }
  const double na = static_cast<double>(a.size()), nb = static_cast<double>(b.size());
  double h = 12.0 / (n * (n + 1.0)) *
                 (rank_sum[0] * rank_sum[0] / na + rank_sum[1] * rank_sum[1] / nb) -
             3.0 * (n + 1.0);
  const double correction = 1.0 - ties / (n * n * n - n);
  if (correction <= 0.0) return {0.0, 1.0};
  h /= correction;
  h = std::max(h, 0.0);
  return {h, std::erfc(std::sqrt(h / 2.0))};
}

// Cliff's delta by counting all pairs.
inline double CliffsDeltaNaive(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (double x : a) {
    for (double y : b) s += (x > y) - (x < y);
  }
  return s / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

inline double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// Scott-Knott style ranking by enumerating candidate splits exhaustively:
// for each block, every contiguous cut is scored by the between-block sum of
// squares of the pooled values, the best one (first on ties) is tested, and
// accepted cuts recurse. Ranks count accepted cuts to the left.
inline std::vector<int> NpskExhaustive(const std::vector<std::vector<double>>& groups,
                                       bool lower_better) {
  const std::size_t k = groups.size();
  std::vector<std::size_t> order(k);
  for (std::size_t i = 0; i < k; ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const double ma = Median(groups[a]), mb = Median(groups[b]);
    return lower_better ? ma < mb : ma > mb;
  });
  auto pooled = [&](std::size_t lo, std::size_t hi) {
    std::vector<double> v;
    for (std::size_t i = lo; i < hi; ++i) {
      v.insert(v.end(), groups[order[i]].begin(), groups[order[i]].end());
    }
    return v;
  };
  auto mean = [](const std::vector<double>& v) {
    double s = 0.0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
  };
  std::vector<bool> cut(k, false);  // cut[i]: boundary before sorted position i
  std::function<void(std::size_t, std::size_t)> split = [&](std::size_t lo, std::size_t hi) {
    if (hi - lo < 2) return;
    const std::vector<double> all = pooled(lo, hi);
    const double grand = mean(all);
    double best = -1.0;
    std::size_t best_cut = lo + 1;
    for (std::size_t c = lo + 1; c < hi; ++c) {
      const std::vector<double> l = pooled(lo, c), r = pooled(c, hi);
      const double ml = mean(l) - grand, mr = mean(r) - grand;
      const double ss = l.size() * ml * ml + r.size() * mr * mr;
      if (ss > best + 1e-12 * std::max(1.0, std::abs(best))) {
        best = ss;
        best_cut = c;
      }
    }
    const std::vector<double> l = pooled(lo, best_cut), r = pooled(best_cut, hi);
    const KwTwo kw = KruskalWallisTwo(l, r);
    if (kw.p < 0.05 && std::abs(CliffsDeltaNaive(l, r)) >= 0.147) {
      cut[best_cut] = true;
      split(lo, best_cut);
      split(best_cut, hi);
    }
  };
  split(0, k);
  std::vector<int> ranks(k);
  int rank = 1;
  for (std::size_t i = 0; i < k; ++i) {
    if (i > 0 && cut[i]) ++rank;
    ranks[order[i]] = rank;
  }
  return ranks;
}

// The library's smoothed modulus applied to an exact magnitude.
inline double Smoothed(double magnitude) {
  return std::sqrt(magnitude * magnitude + kMagnitudeDelta) - std::sqrt(kMagnitudeDelta);
}

// Sawtooth whose wrap count per sample is frozen at that of `base`, so that
// finite differences in `freq` do not straddle wraps.
inline std::vector<double> FrozenSaw(double base, double freq) {
  std::vector<double> out(kSignalLength);
  double p = 0.0;
  for (std::size_t n = 0; n < out.size(); ++n) {
    p += base / kSampleRate;
    p -= std::floor(p);
    const double unwrapped = static_cast<double>(n + 1) * base / kSampleRate;
    const double wraps = std::round(unwrapped - p);
    out[n] = static_cast<double>(n + 1) * freq / kSampleRate - wraps;
  }
  return out;
}

inline std::vector<double> FrozenSine(double base, double freq) {
  // sin is periodic, so only the saw needs freezing; kept for symmetry.
  (void)base;
  std::vector<double> out(kSignalLength);
  for (std::size_t n = 0; n < out.size(); ++n) {
    out[n] = std::sin(2.0 * std::numbers::pi * static_cast<double>(n + 1) * freq / kSampleRate);
  }
  return out;
}

// Renders `raw` with oscillator wrap counts frozen at `base`; identical to
// the program for noise-based programs.
inline std::vector<double> RenderFrozen(const SynthProgram& program, const Params<double>& base,
                                        const Params<double>& raw, std::uint32_t noise_seed) {
  if (program.id() == ProgramId::kAddSineSaw) {
    std::vector<double> s = FrozenSine(base[1], raw[1]);
    const std::vector<double> w = FrozenSaw(base[0], raw[0]);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] += w[i];
    return s;
  }
  if (program.id() == ProgramId::kSineSawAM) {
    std::vector<double> s = FrozenSine(base[1], raw[1]);
    const std::vector<double> w = FrozenSaw(base[0], raw[0]);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] *= w[i];
    return s;
  }
  return program.Render(raw, noise_seed);
}

// Central difference of the loss with respect to normalized parameter i,
// oscillator wraps frozen at the evaluation point.
inline double CentralDifference(const SynthProgram& program, const Loss& loss,
                                const Params<double>& normalized, std::size_t i, double eps,
                                std::uint32_t noise_seed) {
  const ParamVector at = program.FromNormalized(normalized);
  Params<double> hi = normalized, lo = normalized;
  hi[i] += eps;
  lo[i] -= eps;
  const std::vector<double> a =
      RenderFrozen(program, at.raw, program.FromNormalized(hi).raw, noise_seed);
  const std::vector<double> b =
      RenderFrozen(program, at.raw, program.FromNormalized(lo).raw, noise_seed);
  return (loss.Evaluate(std::span<const double>(a)) - loss.Evaluate(std::span<const double>(b))) /
         (2.0 * eps);
}

}  // namespace soundmatch::oracle

#endif  // SOUNDMATCH_TESTS_ORACLES_H_
