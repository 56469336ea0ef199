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

#include "soundmatch/synth.h"

#include <algorithm>
#include <stdexcept>

namespace soundmatch {

std::string_view ProgramName(ProgramId id) {
  switch (id) {
    case ProgramId::kBPNoise:
      return "BPNoise";
    case ProgramId::kAddSineSaw:
      return "AddSineSaw";
    case ProgramId::kNoiseAM:
      return "NoiseAM";
    case ProgramId::kSineSawAM:
      return "SineSawAM";
  }
  return "?";
}

ProgramId ParseProgram(std::string_view name) {
  for (ProgramId id : kAllPrograms) {
    if (ProgramName(id) == name) return id;
  }
  throw std::invalid_argument("unknown program '" + std::string(name) + "'");
}

SynthProgram SynthProgram::Make(ProgramId id) {
  SynthProgram p;
  p.id_ = id;
  switch (id) {
    case ProgramId::kBPNoise:
      p.params_ = {ParamSpec{"lp_cut", 50, 1000, 900}, ParamSpec{"hp_cut", 1, 120, 100}};
      break;
    case ProgramId::kAddSineSaw:
      p.params_ = {ParamSpec{"saw_freq", 20, 1000, 800}, ParamSpec{"sine_freq", 20, 1000, 300}};
      break;
    case ProgramId::kNoiseAM:
      p.params_ = {ParamSpec{"amp", 0, 5, 0.5}, ParamSpec{"modulator", 0, 4, 0.5}};
      break;
    case ProgramId::kSineSawAM:
      p.params_ = {ParamSpec{"carrier", 20, 1000, 100}, ParamSpec{"amp", 1, 20, 6}};
      break;
  }
  return p;
}

SynthProgram SynthProgram::WithRange(std::size_t param, double min, double max) const {
  if (param >= kNumParams) throw std::out_of_range("parameter index out of range");
  if (!(min < max)) throw std::invalid_argument("parameter range needs min < max");
  SynthProgram p = *this;
  ParamSpec& spec = p.params_[param];
  spec.min = min;
  spec.max = max;
  spec.default_value = std::clamp(spec.default_value, min, max);
  return p;
}

ParamVector SynthProgram::FromRaw(const Params<double>& raw) const {
  ParamVector v;
  v.raw = raw;
  for (std::size_t i = 0; i < kNumParams; ++i) v.normalized[i] = params_[i].Normalize(raw[i]);
  return v;
}

ParamVector SynthProgram::FromNormalized(const Params<double>& normalized) const {
  ParamVector v;
  v.normalized = normalized;
  for (std::size_t i = 0; i < kNumParams; ++i) {
    v.raw[i] = params_[i].Denormalize(normalized[i]);
  }
  return v;
}

template <typename T>
std::vector<T> SynthProgram::Render(const Params<T>& raw, std::uint32_t noise_seed) const {
  switch (id_) {
    case ProgramId::kBPNoise: {
      // noise -> lowpass(3, lp_cut) -> highpass(10, hp_cut)
      const std::vector<double> noise = WhiteNoise(kSignalLength, noise_seed);
      const std::vector<T> low =
          Butterworth<T, double>(noise, 3, raw[0], FilterKind::kLowpass);
      return Butterworth<T, T>(low, 10, raw[1], FilterKind::kHighpass);
    }
    case ProgramId::kAddSineSaw: {
      std::vector<T> out = SineOsc(raw[1], kSignalLength);
      const std::vector<T> saw = SawOsc(raw[0], kSignalLength);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] += saw[i];
      return out;
    }
    case ProgramId::kNoiseAM: {
      // noise * sineOsc(modulator) * amp
      const std::vector<double> noise = WhiteNoise(kSignalLength, noise_seed);
      std::vector<T> out = SineOsc(raw[1], kSignalLength);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = out[i] * noise[i] * raw[0];
      return out;
    }
    case ProgramId::kSineSawAM: {
      // sineOsc(amp) * sawOsc(carrier)
      std::vector<T> out = SineOsc(raw[1], kSignalLength);
      const std::vector<T> saw = SawOsc(raw[0], kSignalLength);
      for (std::size_t i = 0; i < out.size(); ++i) out[i] *= saw[i];
      return out;
    }
  }
  throw std::logic_error("unhandled program");
}

template std::vector<double> SynthProgram::Render<double>(const Params<double>&,
                                                          std::uint32_t) const;
template std::vector<Dual2> SynthProgram::Render<Dual2>(const Params<Dual2>&,
                                                        std::uint32_t) const;

double UniformUnit(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

ParamVector SampleParams(const SynthProgram& program, std::mt19937_64& rng) {
  Params<double> normalized;
  for (double& v : normalized) v = UniformUnit(rng);
  return program.FromNormalized(normalized);
}

std::string_view SweepVariantName(SweepVariant v) {
  return v == SweepVariant::kHPNoise ? "hp-noise" : "snoise-am";
}

SweepVariant ParseSweepVariant(std::string_view name) {
  if (name == "hp-noise" || name == "HPNoise") return SweepVariant::kHPNoise;
  if (name == "snoise-am" || name == "SNoiseAM") return SweepVariant::kSNoiseAM;
  throw std::invalid_argument("unknown sweep variant '" + std::string(name) + "'");
}

ParamSpec SweepParam(SweepVariant v) {
  if (v == SweepVariant::kHPNoise) return ParamSpec{"hp_cut", 100, 20000, 1000};
  return ParamSpec{"rate", 0.1, 20, 5};
}

}  // namespace soundmatch
