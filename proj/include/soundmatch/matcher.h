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

// Gradient-descent sound matching: RMSProp over normalized parameters.

#ifndef SOUNDMATCH_MATCHER_H_
#define SOUNDMATCH_MATCHER_H_

#include <cstdint>
#include <string>
#include <vector>

#include "soundmatch/losses.h"
#include "soundmatch/synth.h"

namespace soundmatch {

struct MatchConfig {
  double lr = 0.045;
  double decay = 0.9;
  double eps = 1e-8;
  double clip_threshold = 1.0;
  int max_iterations = 200;
  // Parameters are stored every `param_stride` iterations plus the last.
  int param_stride = 10;
  LossConfig loss;

  // Throws std::invalid_argument on out-of-domain values.
  void Validate() const;
};

struct OptimizerState {
  Params<double> params{};  // normalized, unclamped
  Params<double> rms{};
  int iteration = 0;
};

// Rescales to L2 norm `threshold` when larger. Throws std::invalid_argument
// for threshold <= 0.
Params<double> ClipGradient(const Params<double>& grad, double threshold);

// s = decay s + (1 - decay) g^2; theta -= lr g / (sqrt(s) + eps).
OptimizerState RmspropStep(const OptimizerState& state, const Params<double>& grad, double lr,
                           double decay, double eps);

// Raw, clamped parameters carrying derivatives with respect to the
// normalized ones.
ClampResult<Dual2> LiftNormalized(const Params<double>& normalized, const SynthProgram& program);

enum class TrialStatus { kOk, kFailedNumeric };

std::string_view TrialStatusName(TrialStatus s);
TrialStatus ParseTrialStatus(std::string_view name);

struct ParamSnapshot {
  int iteration = 0;
  Params<double> normalized{};
};

struct TrialRecord {
  std::string id;
  ProgramId program = ProgramId::kBPNoise;
  LossId loss = LossId::kL1Spec;
  int index = 0;
  std::uint64_t seed = 0;
  std::uint32_t noise_seed = 0;
  ParamVector target;
  ParamVector initial;
  // One entry per evaluated iterate: the initial point and each update.
  std::vector<double> losses;
  std::vector<ParamSnapshot> trajectory;
  // Unclamped optimizer output; render through ClampForRender.
  ParamVector final;
  bool diverged = false;
  TrialStatus status = TrialStatus::kOk;
  // Not part of the persisted dataset; see the harness timings file.
  double duration_seconds = 0.0;

  // Final parameters clamped into range (normalized in [0, 1]).
  ParamVector ClampedFinal(const SynthProgram& program) const;
};

// "<Program>.<Loss>.<index, 4 digits>"
std::string TrialId(ProgramId program, LossId loss, int index);

// Target and initial point are drawn independently and uniformly from the
// seeded generator; target and candidate share one noise stream.
TrialRecord RunTrial(ProgramId program, LossId loss, int index, std::uint64_t seed,
                     const MatchConfig& config = {});

// Variant with explicit target and start (normalized), for tests.
TrialRecord RunTrialFrom(ProgramId program, LossId loss, const Params<double>& target_normalized,
                         const Params<double>& initial_normalized, std::uint32_t noise_seed,
                         const MatchConfig& config = {});

// Peak-normalized audio for a record.
std::vector<double> RenderTarget(const TrialRecord& record);
std::vector<double> RenderFinal(const TrialRecord& record);

}  // namespace soundmatch

#endif  // SOUNDMATCH_MATCHER_H_
