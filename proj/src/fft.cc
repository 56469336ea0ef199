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

#include "soundmatch/fft.h"

#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace soundmatch {

std::size_t NextPowerOfTwo(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

FftPlan::FftPlan(std::size_t size) : size_(size) {
  if (!IsPowerOfTwo(size)) {
    throw std::invalid_argument("fft size must be a power of two, got " +
                                std::to_string(size));
  }
  int bits = 0;
  while ((std::size_t{1} << bits) < size) ++bits;
  bit_reverse_.resize(size);
  for (std::size_t i = 0; i < size; ++i) {
    std::uint32_t r = 0;
    for (int b = 0; b < bits; ++b) {
      if (i & (std::size_t{1} << b)) r |= 1u << (bits - 1 - b);
    }
    bit_reverse_[i] = r;
  }
  cos_.resize(size / 2);
  sin_.resize(size / 2);
  for (std::size_t k = 0; k < size / 2; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(size);
    cos_[k] = std::cos(angle);
    sin_[k] = std::sin(angle);
  }
}

const FftPlan& GetFftPlan(std::size_t size) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<FftPlan>> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = plans[size];
  if (!slot) slot = std::make_unique<FftPlan>(size);
  return *slot;
}

RealFftPlan::RealFftPlan(std::size_t size) : size_(size) {
  if (!IsPowerOfTwo(size) || size < 2) {
    throw std::invalid_argument("real fft size must be a power of two >= 2");
  }
  half_ = &GetFftPlan(size / 2);
  cos_.resize(size / 2 + 1);
  sin_.resize(size / 2 + 1);
  for (std::size_t k = 0; k <= size / 2; ++k) {
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) /
                         static_cast<double>(size);
    cos_[k] = std::cos(angle);
    sin_[k] = std::sin(angle);
  }
}

const RealFftPlan& GetRealFftPlan(std::size_t size) {
  static std::mutex mu;
  static std::map<std::size_t, std::unique_ptr<RealFftPlan>> plans;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = plans[size];
  if (!slot) slot = std::make_unique<RealFftPlan>(size);
  return *slot;
}

}  // namespace soundmatch
