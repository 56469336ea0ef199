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

// The four two-parameter synthesizer programs.

#ifndef SOUNDMATCH_SYNTH_H_
#define SOUNDMATCH_SYNTH_H_

#include <array>
#include <cstdint>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "soundmatch/dsp.h"
#include "soundmatch/dual.h"

namespace soundmatch {

enum class ProgramId { kBPNoise, kAddSineSaw, kNoiseAM, kSineSawAM };

inline constexpr std::array<ProgramId, 4> kAllPrograms = {
    ProgramId::kBPNoise, ProgramId::kAddSineSaw, ProgramId::kNoiseAM, ProgramId::kSineSawAM};

std::string_view ProgramName(ProgramId id);
// Throws std::invalid_argument for unknown names.
ProgramId ParseProgram(std::string_view name);

struct ParamSpec {
  std::string name;
  double min = 0.0;
  double max = 1.0;
  double default_value = 0.0;

  double span() const { return max - min; }
  double Normalize(double raw) const { return (raw - min) / span(); }
  double Denormalize(double normalized) const { return min + normalized * span(); }
};

template <typename T>
using Params = std::array<T, kNumParams>;

struct ParamVector {
  Params<double> raw{};
  Params<double> normalized{};
};

class SynthProgram {
 public:
  // The program with its stock parameter ranges.
  static SynthProgram Make(ProgramId id);
  // Same program with replaced ranges; throws if min >= max or the default
  // falls outside.
  SynthProgram WithRange(std::size_t param, double min, double max) const;

  ProgramId id() const { return id_; }
  std::string_view name() const { return ProgramName(id_); }
  const std::array<ParamSpec, kNumParams>& params() const { return params_; }
  bool uses_noise() const { return id_ == ProgramId::kBPNoise || id_ == ProgramId::kNoiseAM; }

  ParamVector FromRaw(const Params<double>& raw) const;
  ParamVector FromNormalized(const Params<double>& normalized) const;

  // One second at 44.1 kHz from parameters in native units. The parameters
  // must already lie in range (see ClampForRender).
  template <typename T>
  std::vector<T> Render(const Params<T>& raw, std::uint32_t noise_seed) const;

 private:
  ProgramId id_ = ProgramId::kBPNoise;
  std::array<ParamSpec, kNumParams> params_;
};

// Independent uniform draw of every parameter over its range.
ParamVector SampleParams(const SynthProgram& program, std::mt19937_64& rng);

// Uniform double in [0, 1) from the top 53 bits; portable across standard
// library implementations, unlike std::uniform_real_distribution.
double UniformUnit(std::mt19937_64& rng);

template <typename T>
struct ClampResult {
  Params<T> raw;
  bool diverged = false;
};

// Clamps into the declared ranges. The gradient passes through unchanged
// inside the range and is zero for a clamped component. `diverged` is set
// when any component lies outside [min - span / 2, max + span / 2].
template <typename T>
ClampResult<T> ClampForRender(const Params<T>& raw, const SynthProgram& program) {
  ClampResult<T> r{raw, false};
  for (std::size_t i = 0; i < kNumParams; ++i) {
    const ParamSpec& spec = program.params()[i];
    const double v = ValueOf(raw[i]);
    if (v < spec.min - 0.5 * spec.span() || v > spec.max + 0.5 * spec.span()) r.diverged = true;
    if (v < spec.min) {
      r.raw[i] = T(spec.min);
    } else if (v > spec.max) {
      r.raw[i] = T(spec.max);
    }
  }
  return r;
}

// Single-parameter variants used for loss-landscape sweeps.
enum class SweepVariant { kHPNoise, kSNoiseAM };

std::string_view SweepVariantName(SweepVariant v);
SweepVariant ParseSweepVariant(std::string_view name);
ParamSpec SweepParam(SweepVariant v);

template <typename T>
std::vector<T> RenderSweepVariant(SweepVariant v, const T& value, std::uint32_t noise_seed) {
  const std::vector<double> noise = WhiteNoise(kSignalLength, noise_seed);
  if (v == SweepVariant::kHPNoise) {
    return Butterworth<T, double>(noise, 10, value, FilterKind::kHighpass);
  }
  std::vector<T> out = SineOsc(value, kSignalLength);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] *= noise[i];
  return out;
}

extern template std::vector<double> SynthProgram::Render<double>(const Params<double>&,
                                                                 std::uint32_t) const;
extern template std::vector<Dual2> SynthProgram::Render<Dual2>(const Params<Dual2>&,
                                                               std::uint32_t) const;

}  // namespace soundmatch

#endif  // SOUNDMATCH_SYNTH_H_
