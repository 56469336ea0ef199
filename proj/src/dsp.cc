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

#include "soundmatch/dsp.h"

#include <algorithm>
#include <cmath>

namespace soundmatch {

std::vector<double> WhiteNoise(std::size_t length, std::uint32_t seed) {
  std::vector<double> out(length);
  std::uint32_t state = seed;
  for (std::size_t n = 0; n < length; ++n) {
    state = state * 1103515245u + 12345u;
    // INT32_MIN would map just below -1.
    out[n] = std::max(-1.0, static_cast<double>(static_cast<std::int32_t>(state)) / 2147483647.0);
  }
  return out;
}

void StftConfig::Validate(std::size_t signal_length) const {
  if (!IsPowerOfTwo(fft_length)) {
    throw std::invalid_argument("stft fft_length must be a power of two");
  }
  if (window_length == 0 || window_length > fft_length) {
    throw std::invalid_argument("stft window_length " + std::to_string(window_length) +
                                " exceeds fft_length " + std::to_string(fft_length));
  }
  if (hop == 0) throw std::invalid_argument("stft hop must be positive");
  if (signal_length < window_length) {
    throw std::invalid_argument("signal shorter than stft window");
  }
}

std::vector<double> HannWindow(std::size_t length) {
  std::vector<double> w(length);
  for (std::size_t i = 0; i < length; ++i) {
    w[i] = 0.5 - 0.5 * std::cos(2.0 * std::numbers::pi * static_cast<double>(i) /
                                static_cast<double>(length));
  }
  return w;
}

std::vector<double> PeakNormalize(std::span<const double> x) {
  double peak = 0.0;
  for (double v : x) peak = std::max(peak, std::abs(v));
  std::vector<double> out(x.begin(), x.end());
  if (peak < 1e-9) return out;
  for (double& v : out) v /= peak;
  return out;
}

}  // namespace soundmatch
