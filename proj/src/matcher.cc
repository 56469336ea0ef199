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

#include "soundmatch/matcher.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <random>
#include <stdexcept>

namespace soundmatch {

void MatchConfig::Validate() const {
  if (!(lr > 0.0)) throw std::invalid_argument("lr must be positive");
  if (!(decay > 0.0 && decay < 1.0)) throw std::invalid_argument("decay must lie in (0, 1)");
  if (!(eps > 0.0)) throw std::invalid_argument("eps must be positive");
  if (!(clip_threshold > 0.0)) throw std::invalid_argument("clip threshold must be positive");
  if (max_iterations < 0) throw std::invalid_argument("max_iterations must be >= 0");
  if (param_stride < 1) throw std::invalid_argument("param_stride must be >= 1");
  if (!(loss.dtw_gamma > 0.0)) throw std::invalid_argument("dtw gamma must be positive");
  loss.stft.Validate(kSignalLength);
}

Params<double> ClipGradient(const Params<double>& grad, double threshold) {
  if (!(threshold > 0.0)) throw std::invalid_argument("clip threshold must be positive");
  double sq = 0.0;
  for (double g : grad) sq += g * g;
  const double norm = std::sqrt(sq);
  if (norm <= threshold) return grad;
  Params<double> out = grad;
  for (double& g : out) g *= threshold / norm;
  return out;
}

OptimizerState RmspropStep(const OptimizerState& state, const Params<double>& grad, double lr,
                           double decay, double eps) {
  OptimizerState next = state;
  for (std::size_t i = 0; i < kNumParams; ++i) {
    next.rms[i] = decay * state.rms[i] + (1.0 - decay) * grad[i] * grad[i];
    next.params[i] = state.params[i] - lr * grad[i] / (std::sqrt(next.rms[i]) + eps);
  }
  ++next.iteration;
  return next;
}

ClampResult<Dual2> LiftNormalized(const Params<double>& normalized, const SynthProgram& program) {
  Params<Dual2> raw;
  for (std::size_t i = 0; i < kNumParams; ++i) {
    const ParamSpec& spec = program.params()[i];
    raw[i] = Dual2::Lift(normalized[i], i) * spec.span() + spec.min;
  }
  return ClampForRender(raw, program);
}

std::string_view TrialStatusName(TrialStatus s) {
  return s == TrialStatus::kOk ? "ok" : "failed-numeric";
}

TrialStatus ParseTrialStatus(std::string_view name) {
  if (name == "ok") return TrialStatus::kOk;
  if (name == "failed-numeric") return TrialStatus::kFailedNumeric;
  throw std::invalid_argument("unknown trial status '" + std::string(name) + "'");
}

ParamVector TrialRecord::ClampedFinal(const SynthProgram& program) const {
  const ClampResult<double> c = ClampForRender(final.raw, program);
  return program.FromRaw(c.raw);
}

std::string TrialId(ProgramId program, LossId loss, int index) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "%04d", index);
  return std::string(ProgramName(program)) + "." + std::string(LossName(loss)) + "." + buf;
}

namespace {

bool AllFinite(const Dual2& v) {
  if (!std::isfinite(v.value)) return false;
  for (double g : v.grad) {
    if (!std::isfinite(g)) return false;
  }
  return true;
}

}  // namespace

TrialRecord RunTrialFrom(ProgramId program_id, LossId loss_id,
                         const Params<double>& target_normalized,
                         const Params<double>& initial_normalized, std::uint32_t noise_seed,
                         const MatchConfig& config) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  const SynthProgram program = SynthProgram::Make(program_id);

  TrialRecord rec;
  rec.program = program_id;
  rec.loss = loss_id;
  rec.noise_seed = noise_seed;
  rec.target = program.FromNormalized(target_normalized);
  rec.initial = program.FromNormalized(initial_normalized);

  const std::vector<double> target = program.Render(rec.target.raw, noise_seed);
  const std::unique_ptr<Loss> loss = MakeLoss(loss_id, target, config.loss);

  OptimizerState state;
  state.params = initial_normalized;
  for (int it = 0;; ++it) {
    if (it % config.param_stride == 0 || it == config.max_iterations) {
      rec.trajectory.push_back({it, state.params});
    }
    const ClampResult<Dual2> lifted = LiftNormalized(state.params, program);
    rec.diverged = rec.diverged || lifted.diverged;
    const std::vector<Dual2> candidate = program.Render(lifted.raw, noise_seed);
    const Dual2 value = loss->Evaluate(std::span<const Dual2>(candidate));
    rec.losses.push_back(value.value);
    if (!AllFinite(value)) {
      rec.status = TrialStatus::kFailedNumeric;
      break;
    }
    if (it == config.max_iterations) break;
    const Params<double> grad = ClipGradient(value.grad, config.clip_threshold);
    state = RmspropStep(state, grad, config.lr, config.decay, config.eps);
  }
  rec.final = program.FromNormalized(state.params);
  rec.duration_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rec;
}

TrialRecord RunTrial(ProgramId program_id, LossId loss_id, int index, std::uint64_t seed,
                     const MatchConfig& config) {
  const SynthProgram program = SynthProgram::Make(program_id);
  std::mt19937_64 rng(seed);
  const ParamVector target = SampleParams(program, rng);
  const ParamVector initial = SampleParams(program, rng);
  const auto noise_seed = static_cast<std::uint32_t>(rng() >> 32);
  TrialRecord rec =
      RunTrialFrom(program_id, loss_id, target.normalized, initial.normalized, noise_seed, config);
  rec.id = TrialId(program_id, loss_id, index);
  rec.index = index;
  rec.seed = seed;
  return rec;
}

std::vector<double> RenderTarget(const TrialRecord& record) {
  const SynthProgram program = SynthProgram::Make(record.program);
  const ClampResult<double> c = ClampForRender(record.target.raw, program);
  return PeakNormalize(program.Render(c.raw, record.noise_seed));
}

std::vector<double> RenderFinal(const TrialRecord& record) {
  const SynthProgram program = SynthProgram::Make(record.program);
  const ClampResult<double> c = ClampForRender(record.final.raw, program);
  return PeakNormalize(program.Render(c.raw, record.noise_seed));
}

}  // namespace soundmatch
