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

#include "soundmatch/losses.h"

#include <algorithm>
#include <map>
#include <mutex>
#include <stdexcept>
#include <string>
#include <tuple>

namespace soundmatch {

std::string_view LossName(LossId id) {
  switch (id) {
    case LossId::kL1Spec:
      return "L1Spec";
    case LossId::kSimseSpec:
      return "SIMSESpec";
    case LossId::kJtfs:
      return "JTFS";
    case LossId::kDtwEnvelope:
      return "DTWEnvelope";
  }
  return "?";
}

LossId ParseLoss(std::string_view name) {
  for (LossId id : kAllLosses) {
    if (LossName(id) == name) return id;
  }
  throw std::invalid_argument("unknown loss '" + std::string(name) + "'");
}

std::vector<double> CostMatrix(std::span<const double> x, std::span<const double> y) {
  std::vector<double> c(x.size() * y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    for (std::size_t j = 0; j < y.size(); ++j) {
      const double d = x[i] - y[j];
      c[i * y.size() + j] = d * d;
    }
  }
  return c;
}

namespace {

constexpr double kEnvelopeFloor = 1e-12;

// Divides by the envelope's own peak; a silent envelope is left as is.
template <typename T>
std::vector<T> PeakNormalized(std::vector<T> v) {
  std::size_t arg = 0;
  for (std::size_t i = 1; i < v.size(); ++i) {
    if (ValueOf(v[i]) > ValueOf(v[arg])) arg = i;
  }
  if (v.empty() || ValueOf(v[arg]) < kEnvelopeFloor) return v;
  const T peak = v[arg];
  for (T& x : v) x /= peak;
  return v;
}

template <typename T>
T EnvelopeDivergence(std::span<const T> candidate_env, std::span<const double> target_env,
                     double target_self, double gamma) {
  const T cross = SoftDtw<T, double>(candidate_env, target_env, gamma);
  const T self = SoftDtw<T, T>(candidate_env, candidate_env, gamma);
  return (cross - (self + target_self) * 0.5) / static_cast<double>(candidate_env.size());
}

class SpectrogramLoss : public Loss {
 public:
  SpectrogramLoss(LossId id, std::span<const double> target, const StftConfig& config)
      : id_(id), config_(config), target_(StftMagnitude(target, config).magnitudes) {}

  LossId id() const override { return id_; }
  double Evaluate(std::span<const double> candidate) const override { return Eval(candidate); }
  Dual2 Evaluate(std::span<const Dual2> candidate) const override { return Eval(candidate); }

 private:
  template <typename T>
  T Eval(std::span<const T> candidate) const {
    const Spectrogram<T> c = StftMagnitude(candidate, config_);
    if (id_ == LossId::kL1Spec) return MeanAbsDifference<T, double>(c.magnitudes, target_);
    return ScaleInvariantMse<T>(c.magnitudes, target_);
  }

  LossId id_;
  StftConfig config_;
  std::vector<double> target_;
};

class ScatteringLoss : public Loss {
 public:
  ScatteringLoss(std::span<const double> target, const JtfsConfig& config)
      : jtfs_(SharedJointScattering(config)), target_(jtfs_->Transform(target)) {}

  LossId id() const override { return LossId::kJtfs; }
  double Evaluate(std::span<const double> candidate) const override { return Eval(candidate); }
  Dual2 Evaluate(std::span<const Dual2> candidate) const override { return Eval(candidate); }

 private:
  template <typename T>
  T Eval(std::span<const T> candidate) const {
    const std::vector<T> c = jtfs_->Transform(candidate);
    return MeanAbsDifference<T, double>(c, target_);
  }

  std::shared_ptr<const JointScattering> jtfs_;
  std::vector<double> target_;
};

class EnvelopeLoss : public Loss {
 public:
  EnvelopeLoss(std::span<const double> target, double gamma, const StftConfig& config)
      : gamma_(gamma), config_(config) {
    if (!(gamma > 0.0)) throw std::invalid_argument("soft-dtw gamma must be positive");
    target_ = PeakNormalized(Envelope(target, config));
    target_self_ = SoftDtw<double, double>(target_, target_, gamma);
  }

  LossId id() const override { return LossId::kDtwEnvelope; }
  double Evaluate(std::span<const double> candidate) const override { return Eval(candidate); }
  Dual2 Evaluate(std::span<const Dual2> candidate) const override { return Eval(candidate); }

 private:
  template <typename T>
  T Eval(std::span<const T> candidate) const {
    const std::vector<T> env = PeakNormalized(Envelope(candidate, config_));
    return EnvelopeDivergence<T>(env, target_, target_self_, gamma_);
  }

  double gamma_;
  StftConfig config_;
  std::vector<double> target_;
  double target_self_ = 0.0;
};

}  // namespace

template <typename T>
T DtwEnvelopeLoss(std::span<const T> candidate, std::span<const double> target, double gamma,
                  const StftConfig& config) {
  if (!(gamma > 0.0)) throw std::invalid_argument("soft-dtw gamma must be positive");
  const std::vector<double> y = PeakNormalized(Envelope(target, config));
  const std::vector<T> x = PeakNormalized(Envelope(candidate, config));
  return EnvelopeDivergence<T>(x, y, SoftDtw<double, double>(y, y, gamma), gamma);
}

template double DtwEnvelopeLoss<double>(std::span<const double>, std::span<const double>, double,
                                        const StftConfig&);
template Dual2 DtwEnvelopeLoss<Dual2>(std::span<const Dual2>, std::span<const double>, double,
                                      const StftConfig&);

std::shared_ptr<const JointScattering> SharedJointScattering(const JtfsConfig& config) {
  static std::mutex mu;
  static std::map<std::tuple<int, int, std::size_t, int, int>,
                  std::shared_ptr<const JointScattering>>
      cache;
  const auto key = std::make_tuple(config.octaves, config.per_octave, config.averaging,
                                   config.rates, config.scales);
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[key];
  if (!slot) slot = std::make_shared<const JointScattering>(config);
  return slot;
}

std::unique_ptr<Loss> MakeLoss(LossId id, std::span<const double> target,
                               const LossConfig& config) {
  switch (id) {
    case LossId::kL1Spec:
    case LossId::kSimseSpec:
      return std::make_unique<SpectrogramLoss>(id, target, config.stft);
    case LossId::kJtfs:
      return std::make_unique<ScatteringLoss>(target, config.jtfs);
    case LossId::kDtwEnvelope:
      return std::make_unique<EnvelopeLoss>(target, config.dtw_gamma, config.stft);
  }
  throw std::logic_error("unhandled loss");
}

}  // namespace soundmatch
