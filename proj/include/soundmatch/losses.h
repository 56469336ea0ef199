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

// Differentiable sound-matching losses. Each maps a candidate signal (plain
// or dual) and a fixed target to a scalar of the candidate's type.

#ifndef SOUNDMATCH_LOSSES_H_
#define SOUNDMATCH_LOSSES_H_

#include <array>
#include <limits>
#include <memory>
#include <span>
#include <string_view>
#include <vector>

#include "soundmatch/dsp.h"
#include "soundmatch/dual.h"
#include "soundmatch/scattering.h"

namespace soundmatch {

enum class LossId { kL1Spec, kSimseSpec, kJtfs, kDtwEnvelope };

inline constexpr std::array<LossId, 4> kAllLosses = {LossId::kL1Spec, LossId::kSimseSpec,
                                                     LossId::kJtfs, LossId::kDtwEnvelope};

std::string_view LossName(LossId id);
LossId ParseLoss(std::string_view name);

struct LossConfig {
  StftConfig stft;
  double dtw_gamma = 0.1;
  JtfsConfig jtfs;
};

inline constexpr double kSimseDelta = 1e-12;

// mean |a - b|
template <typename T, typename U>
T MeanAbsDifference(std::span<const T> a, std::span<const U> b) {
  T sum(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) sum += abs(a[i] - b[i]);
  return sum / static_cast<double>(a.size());
}

// Scale-invariant MSE: with a* = <x, y> / (<y, y> + delta), mean (x - a* y)^2.
// The optimal scale participates in differentiation.
template <typename T>
T ScaleInvariantMse(std::span<const T> candidate, std::span<const double> target) {
  T xy(0.0), yy(0.0);
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    xy += candidate[i] * target[i];
    yy += candidate[i] * candidate[i];
  }
  const T scale = xy / (yy + kSimseDelta);
  T sum(0.0);
  for (std::size_t i = 0; i < candidate.size(); ++i) {
    const T r = target[i] - scale * candidate[i];
    sum += r * r;
  }
  return sum / static_cast<double>(candidate.size());
}

// gamma-smoothed minimum, -gamma log sum exp(-v / gamma), evaluated around
// the hard minimum. Infinite arguments contribute nothing.
template <typename T>
T SoftMin3(const T& a, const T& b, const T& c, double gamma) {
  const T m = min(min(a, b), c);
  const double mv = ValueOf(m);
  if (!std::isfinite(mv)) return m;
  T sum(0.0);
  for (const T* v : {&a, &b, &c}) {
    const double gap = (ValueOf(*v) - mv) / gamma;
    if (gap < 60.0) sum += exp((m - *v) / gamma);
  }
  return m - log(sum) * gamma;
}

// Soft dynamic time warping over the squared-difference cost matrix:
// r[i][j] = (x_i - y_j)^2 + softmin(r[i-1][j], r[i][j-1], r[i-1][j-1]) with
// r[0][0] = 0 and infinite borders. Returns r[m][n]. Throws
// std::invalid_argument for gamma <= 0 or empty inputs.
template <typename T, typename U>
T SoftDtw(std::span<const T> x, std::span<const U> y, double gamma) {
  if (!(gamma > 0.0)) throw std::invalid_argument("soft-dtw gamma must be positive");
  if (x.empty() || y.empty()) throw std::invalid_argument("soft-dtw needs non-empty series");
  const double inf = std::numeric_limits<double>::infinity();
  const std::size_t n = y.size();
  std::vector<T> prev(n + 1, T(inf)), cur(n + 1, T(inf));
  prev[0] = T(0.0);
  for (std::size_t i = 1; i <= x.size(); ++i) {
    cur[0] = T(inf);
    for (std::size_t j = 1; j <= n; ++j) {
      const T d = x[i - 1] - y[j - 1];
      cur[j] = d * d + SoftMin3(prev[j], cur[j - 1], prev[j - 1], gamma);
    }
    std::swap(prev, cur);
  }
  return prev[n];
}

// Pairwise squared differences between two series, row-major m x n.
std::vector<double> CostMatrix(std::span<const double> x, std::span<const double> y);

template <typename T>
T L1Spec(std::span<const T> candidate, std::span<const double> target,
         const StftConfig& config = {}) {
  const Spectrogram<T> c = StftMagnitude(candidate, config);
  const Spectrogram<double> t = StftMagnitude(target, config);
  return MeanAbsDifference<T, double>(c.magnitudes, t.magnitudes);
}

template <typename T>
T SimseSpec(std::span<const T> candidate, std::span<const double> target,
            const StftConfig& config = {}) {
  const Spectrogram<T> c = StftMagnitude(candidate, config);
  const Spectrogram<double> t = StftMagnitude(target, config);
  return ScaleInvariantMse<T>(c.magnitudes, t.magnitudes);
}

template <typename T>
T JtfsLoss(std::span<const T> candidate, std::span<const double> target,
           const JointScattering& jtfs) {
  const std::vector<T> c = jtfs.Transform(candidate);
  const std::vector<double> t = jtfs.Transform(target);
  return MeanAbsDifference<T, double>(c, t);
}

// Envelope comparison by soft-DTW divergence
//   D(x, y) = sdtw(x, y) - (sdtw(x, x) + sdtw(y, y)) / 2
// on envelopes each divided by their own peak, divided by the number of
// frames. D(x, x) = 0 exactly; overall loudness does not enter.
template <typename T>
T DtwEnvelopeLoss(std::span<const T> candidate, std::span<const double> target,
                  double gamma = 0.1, const StftConfig& config = {});

// Shared, lazily built scattering operator for a configuration.
std::shared_ptr<const JointScattering> SharedJointScattering(const JtfsConfig& config);

// A loss bound to one target: target-side features are computed once.
class Loss {
 public:
  virtual ~Loss() = default;
  virtual LossId id() const = 0;
  virtual double Evaluate(std::span<const double> candidate) const = 0;
  virtual Dual2 Evaluate(std::span<const Dual2> candidate) const = 0;
};

std::unique_ptr<Loss> MakeLoss(LossId id, std::span<const double> target,
                               const LossConfig& config = {});

extern template double DtwEnvelopeLoss<double>(std::span<const double>, std::span<const double>,
                                               double, const StftConfig&);
extern template Dual2 DtwEnvelopeLoss<Dual2>(std::span<const Dual2>, std::span<const double>,
                                             double, const StftConfig&);

}  // namespace soundmatch

#endif  // SOUNDMATCH_LOSSES_H_
