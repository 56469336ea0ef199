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

// Differentiable signal-processing kernels. Everything here is templated on
// the scalar type and produces identical values for `double` and `Dual<N>`.

#ifndef SOUNDMATCH_DSP_H_
#define SOUNDMATCH_DSP_H_

#include <cstddef>
#include <cstdint>
#include <numbers>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "soundmatch/dual.h"
#include "soundmatch/fft.h"

namespace soundmatch {

inline constexpr double kSampleRate = 44100.0;
inline constexpr std::size_t kSignalLength = 44100;  // one second

template <typename T>
struct Signal {
  std::vector<T> samples;
  double sample_rate = kSampleRate;

  std::size_t size() const { return samples.size(); }
  std::span<const T> view() const { return samples; }
};

// Phase accumulator p[n] = frac(p[n-1] + f / sr) with p[-1] = 0.
template <typename T>
std::vector<T> PhaseAccumulator(const T& freq, std::size_t length,
                                double sample_rate = kSampleRate) {
  std::vector<T> phase(length);
  const T increment = freq / sample_rate;
  T p(0.0);
  for (std::size_t n = 0; n < length; ++n) {
    p = frac(p + increment);
    phase[n] = p;
  }
  return phase;
}

template <typename T>
std::vector<T> SineOsc(const T& freq, std::size_t length, double sample_rate = kSampleRate) {
  std::vector<T> out = PhaseAccumulator(freq, length, sample_rate);
  for (T& p : out) p = sin(p * (2.0 * std::numbers::pi));
  return out;
}

// Naive sawtooth in [0, 1).
template <typename T>
std::vector<T> SawOsc(const T& freq, std::size_t length, double sample_rate = kSampleRate) {
  return PhaseAccumulator(freq, length, sample_rate);
}

// White noise uniform in [-1, 1] from the 32-bit linear congruential
// generator r[n] = 1103515245 * r[n-1] + 12345 (mod 2^32), read as a signed
// integer and divided by 2^31 - 1. `seed` is r[-1].
std::vector<double> WhiteNoise(std::size_t length, std::uint32_t seed);

enum class FilterKind { kLowpass, kHighpass };

// One section of a cascade in transposed direct form II. First-order
// sections have b2 = a2 = 0.
template <typename T>
struct Biquad {
  T b0, b1, b2, a1, a2;
};

// Butterworth design: analog prototype poles, bilinear transform with the
// cutoff prewarped, factored into second-order sections plus one first-order
// section for odd orders. Coefficients are differentiable in `cutoff`.
template <typename T>
std::vector<Biquad<T>> ButterworthSections(int order, const T& cutoff, FilterKind kind,
                                           double sample_rate = kSampleRate) {
  if (order < 1) throw std::invalid_argument("butterworth order must be >= 1");
  const double c = ValueOf(cutoff);
  if (!(c > 0.0 && c < sample_rate / 2.0)) {
    throw std::domain_error("butterworth cutoff " + std::to_string(c) +
                            " Hz outside (0, Nyquist)");
  }
  const T k = tan(cutoff * (std::numbers::pi / sample_rate));
  const T k2 = k * k;
  std::vector<Biquad<T>> sections;
  for (int i = 1; i <= order / 2; ++i) {
    // Pole pair at angle (2i - 1) pi / (2 order) from the imaginary axis.
    const double inv_q = 2.0 * std::sin((2.0 * i - 1.0) * std::numbers::pi / (2.0 * order));
    const T norm = 1.0 / (1.0 + k * inv_q + k2);
    Biquad<T> s;
    if (kind == FilterKind::kLowpass) {
      s.b0 = k2 * norm;
      s.b1 = s.b0 * 2.0;
      s.b2 = s.b0;
    } else {
      s.b0 = norm;
      s.b1 = norm * -2.0;
      s.b2 = norm;
    }
    s.a1 = (k2 - 1.0) * 2.0 * norm;
    s.a2 = (1.0 - k * inv_q + k2) * norm;
    sections.push_back(s);
  }
  if (order % 2 == 1) {
    const T norm = 1.0 / (1.0 + k);
    Biquad<T> s;
    if (kind == FilterKind::kLowpass) {
      s.b0 = k * norm;
      s.b1 = s.b0;
    } else {
      s.b0 = norm;
      s.b1 = -norm;
    }
    s.b2 = T(0.0);
    s.a1 = (k - 1.0) * norm;
    s.a2 = T(0.0);
    sections.push_back(s);
  }
  return sections;
}

template <typename T, typename U>
std::vector<T> ApplySections(std::span<const U> input, std::span<const Biquad<T>> sections) {
  std::vector<T> x(input.begin(), input.end());
  for (const Biquad<T>& s : sections) {
    T z1(0.0), z2(0.0);
    for (T& v : x) {
      const T y = s.b0 * v + z1;
      z1 = s.b1 * v - s.a1 * y + z2;
      z2 = s.b2 * v - s.a2 * y;
      v = y;
    }
  }
  return x;
}

// Butterworth filter of the given order. The output scalar follows the
// cutoff: a Dual cutoff on a plain input yields Dual output.
template <typename T, typename U>
std::vector<T> Butterworth(std::span<const U> input, int order, const T& cutoff,
                           FilterKind kind, double sample_rate = kSampleRate) {
  const std::vector<Biquad<T>> sections = ButterworthSections(order, cutoff, kind, sample_rate);
  return ApplySections<T, U>(input, sections);
}

struct StftConfig {
  std::size_t fft_length = 1024;
  std::size_t window_length = 600;
  std::size_t hop = 100;

  std::size_t bins() const { return fft_length / 2 + 1; }
  std::size_t Frames(std::size_t signal_length) const {
    return (signal_length - window_length) / hop + 1;
  }
  // Throws std::invalid_argument for inconsistent settings.
  void Validate(std::size_t signal_length) const;
};

// Magnitudes stored row-major, frames x bins.
template <typename T>
struct Spectrogram {
  std::size_t frames = 0;
  std::size_t bins = 0;
  StftConfig config;
  std::vector<T> magnitudes;

  const T& at(std::size_t frame, std::size_t bin) const {
    return magnitudes[frame * bins + bin];
  }
};

// Periodic Hann window.
std::vector<double> HannWindow(std::size_t length);

// Hann-windowed frames without centering, zero-padded to fft_length.
// Magnitudes use the smoothed modulus so silent bins stay differentiable.
template <typename T>
Spectrogram<T> StftMagnitude(std::span<const T> input, const StftConfig& config = {}) {
  config.Validate(input.size());
  const FftPlan& plan = GetFftPlan(config.fft_length);
  const std::vector<double> window = HannWindow(config.window_length);
  Spectrogram<T> spec;
  spec.config = config;
  spec.frames = config.Frames(input.size());
  spec.bins = config.bins();
  spec.magnitudes.resize(spec.frames * spec.bins);

  std::vector<T> frame_a(config.window_length), frame_b(config.window_length);
  std::vector<Complex<T>> scratch(config.fft_length), out_a(spec.bins), out_b(spec.bins);
  auto load = [&](std::size_t frame, std::vector<T>& dst) {
    const std::size_t start = frame * config.hop;
    for (std::size_t i = 0; i < config.window_length; ++i) {
      dst[i] = input[start + i] * window[i];
    }
  };
  for (std::size_t f = 0; f < spec.frames; f += 2) {
    const bool pair = f + 1 < spec.frames;
    load(f, frame_a);
    if (pair) {
      load(f + 1, frame_b);
    } else {
      std::fill(frame_b.begin(), frame_b.end(), T(0.0));
    }
    ForwardRealPair<T>(plan, frame_a, frame_b, scratch, out_a, out_b);
    for (std::size_t k = 0; k < spec.bins; ++k) {
      spec.magnitudes[f * spec.bins + k] = Modulus(out_a[k]);
      if (pair) spec.magnitudes[(f + 1) * spec.bins + k] = Modulus(out_b[k]);
    }
  }
  return spec;
}

// Per-frame sum of STFT magnitudes (a loudness-over-time curve).
template <typename T>
std::vector<T> EnvelopeFromSpectrogram(const Spectrogram<T>& spec) {
  std::vector<T> env(spec.frames, T(0.0));
  for (std::size_t f = 0; f < spec.frames; ++f) {
    T sum(0.0);
    for (std::size_t k = 0; k < spec.bins; ++k) sum += spec.magnitudes[f * spec.bins + k];
    env[f] = sum;
  }
  return env;
}

template <typename T>
std::vector<T> Envelope(std::span<const T> input, const StftConfig& config = {}) {
  return EnvelopeFromSpectrogram(StftMagnitude(input, config));
}

// Scales a real signal so that max |x| = 1. Signals whose peak is below
// 1e-9 are returned unchanged.
std::vector<double> PeakNormalize(std::span<const double> x);

}  // namespace soundmatch

#endif  // SOUNDMATCH_DSP_H_
