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

#ifndef SOUNDMATCH_FFT_H_
#define SOUNDMATCH_FFT_H_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "soundmatch/dual.h"

namespace soundmatch {

// Complex number over a generic scalar. std::complex is only specified for
// the built-in floating point types, so duals need their own.
template <typename T>
struct Complex {
  T re{};
  T im{};
};

template <typename T>
Complex<T> operator+(const Complex<T>& a, const Complex<T>& b) {
  return {a.re + b.re, a.im + b.im};
}
template <typename T>
Complex<T> operator-(const Complex<T>& a, const Complex<T>& b) {
  return {a.re - b.re, a.im - b.im};
}
template <typename T>
Complex<T> operator*(const Complex<T>& a, const Complex<T>& b) {
  return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
}
// Product with a constant complex (wr, wi).
template <typename T>
Complex<T> MulConst(const Complex<T>& a, double wr, double wi) {
  return {a.re * wr - a.im * wi, a.re * wi + a.im * wr};
}
template <typename T>
Complex<T> Scale(const Complex<T>& a, double c) {
  return {a.re * c, a.im * c};
}

// Smoothed modulus sqrt(re^2 + im^2 + delta) - sqrt(delta): differentiable
// at zero and exactly zero for a zero input.
inline constexpr double kMagnitudeDelta = 1e-12;
template <typename T>
T Modulus(const Complex<T>& z) {
  static const double kFloor = std::sqrt(kMagnitudeDelta);
  return sqrt(z.re * z.re + z.im * z.im + kMagnitudeDelta) - kFloor;
}

inline bool IsPowerOfTwo(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }
std::size_t NextPowerOfTwo(std::size_t n);

// Radix-2 decimation-in-time plan. Immutable after construction and safe to
// share between threads.
class FftPlan {
 public:
  explicit FftPlan(std::size_t size);

  std::size_t size() const { return size_; }

  template <typename T>
  void Forward(std::span<Complex<T>> data) const {
    Transform(data, /*inverse=*/false);
  }
  // Unnormalized inverse; callers scale by 1/size when they need to.
  template <typename T>
  void Inverse(std::span<Complex<T>> data) const {
    Transform(data, /*inverse=*/true);
  }

 private:
  template <typename T>
  void Transform(std::span<Complex<T>> data, bool inverse) const;

  std::size_t size_;
  std::vector<std::uint32_t> bit_reverse_;
  std::vector<double> cos_;  // cos(2 pi k / size), k < size / 2
  std::vector<double> sin_;  // sin(2 pi k / size), k < size / 2
};

// Process-wide plan cache keyed by size.
const FftPlan& GetFftPlan(std::size_t size);

template <typename T>
void FftPlan::Transform(std::span<Complex<T>> data, bool inverse) const {
  if (data.size() != size_) {
    throw std::invalid_argument("fft input length does not match plan");
  }
  for (std::size_t i = 0; i < size_; ++i) {
    const std::size_t j = bit_reverse_[i];
    if (i < j) std::swap(data[i], data[j]);
  }
  const double sign = inverse ? 1.0 : -1.0;
  for (std::size_t len = 2; len <= size_; len <<= 1) {
    const std::size_t half = len >> 1;
    const std::size_t stride = size_ / len;
    for (std::size_t start = 0; start < size_; start += len) {
      for (std::size_t k = 0; k < half; ++k) {
        Complex<T>& a = data[start + k];
        Complex<T>& b = data[start + k + half];
        Complex<T> t = k == 0 ? b : MulConst(b, cos_[k * stride], sign * sin_[k * stride]);
        b = a - t;
        a = a + t;
      }
    }
  }
}

// Spectrum of one real sequence of even length n via an n/2-point complex
// transform. Immutable and shareable.
class RealFftPlan {
 public:
  explicit RealFftPlan(std::size_t size);

  std::size_t size() const { return size_; }

  // `x` is zero-padded to size(); `out` receives bins 0..size/2 inclusive.
  template <typename T>
  void Forward(std::span<const T> x, std::span<Complex<T>> out) const;

 private:
  std::size_t size_;
  const FftPlan* half_;
  std::vector<double> cos_;  // cos(2 pi k / size), k <= size / 2
  std::vector<double> sin_;
};

const RealFftPlan& GetRealFftPlan(std::size_t size);

template <typename T>
void RealFftPlan::Forward(std::span<const T> x, std::span<Complex<T>> out) const {
  const std::size_t h = size_ / 2;
  std::vector<Complex<T>> z(h);
  for (std::size_t n = 0; n < h; ++n) {
    z[n].re = 2 * n < x.size() ? x[2 * n] : T(0.0);
    z[n].im = 2 * n + 1 < x.size() ? x[2 * n + 1] : T(0.0);
  }
  half_->Forward<T>(z);
  for (std::size_t k = 0; k <= h; ++k) {
    const Complex<T>& a = z[k % h];
    const Complex<T>& b = z[(h - k) % h];
    // Even part E = (a + conj b) / 2, odd part O = (a - conj b) / 2i.
    const Complex<T> even{(a.re + b.re) * 0.5, (a.im - b.im) * 0.5};
    const Complex<T> odd{(a.im + b.im) * 0.5, (b.re - a.re) * 0.5};
    out[k] = even + MulConst(odd, cos_[k], -sin_[k]);
  }
}

// Spectra of two real sequences computed with one complex transform.
// `a` and `b` are zero-padded to the plan size; `out_a` and `out_b` receive
// bins 0..size/2 inclusive. `scratch` must hold plan.size() entries.
template <typename T>
void ForwardRealPair(const FftPlan& plan, std::span<const T> a, std::span<const T> b,
                     std::span<Complex<T>> scratch, std::span<Complex<T>> out_a,
                     std::span<Complex<T>> out_b) {
  const std::size_t n = plan.size();
  for (std::size_t i = 0; i < n; ++i) {
    scratch[i].re = i < a.size() ? a[i] : T(0.0);
    scratch[i].im = i < b.size() ? b[i] : T(0.0);
  }
  plan.Forward(scratch);
  for (std::size_t k = 0; k <= n / 2; ++k) {
    const Complex<T>& z = scratch[k];
    const Complex<T>& w = scratch[(n - k) % n];
    // A = (Z_k + conj(Z_{n-k})) / 2, B = (Z_k - conj(Z_{n-k})) / 2i
    out_a[k] = {(z.re + w.re) * 0.5, (z.im - w.im) * 0.5};
    out_b[k] = {(z.im + w.im) * 0.5, (w.re - z.re) * 0.5};
  }
}

}  // namespace soundmatch

#endif  // SOUNDMATCH_FFT_H_
