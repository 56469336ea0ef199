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

#ifndef SOUNDMATCH_DUAL_H_
#define SOUNDMATCH_DUAL_H_

#include <array>
#include <cmath>
#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <type_traits>

namespace soundmatch {

// Number of synthesizer parameters carried by every dual number.
inline constexpr std::size_t kNumParams = 2;

// Forward-mode dual number: a value plus N partial derivatives.
//
// Every DSP kernel in this library is a template over its scalar type and
// runs unchanged on `double` and on `Dual<N>`. Constants convert implicitly
// (zero partials) so mixed expressions read like plain arithmetic.
template <std::size_t N>
struct Dual {
  double value = 0.0;
  std::array<double, N> grad{};

  constexpr Dual() = default;
  constexpr Dual(double v) : value(v) {}  // NOLINT: implicit constant lift.
  constexpr Dual(double v, const std::array<double, N>& g) : value(v), grad(g) {}

  // Lifts `v` either as a constant (no index) or as the seed of parameter
  // `index`, whose partial vector is the unit vector e_index.
  static Dual Lift(double v, std::optional<std::size_t> index = std::nullopt) {
    Dual d(v);
    if (index.has_value()) {
      if (*index >= N) {
        throw std::out_of_range("dual seed index " + std::to_string(*index) +
                                " >= parameter count " + std::to_string(N));
      }
      d.grad[*index] = 1.0;
    }
    return d;
  }

  Dual& operator+=(const Dual& o) {
    value += o.value;
    for (std::size_t i = 0; i < N; ++i) grad[i] += o.grad[i];
    return *this;
  }
  Dual& operator-=(const Dual& o) {
    value -= o.value;
    for (std::size_t i = 0; i < N; ++i) grad[i] -= o.grad[i];
    return *this;
  }
  Dual& operator*=(const Dual& o) {
    for (std::size_t i = 0; i < N; ++i) {
      grad[i] = grad[i] * o.value + value * o.grad[i];
    }
    value *= o.value;
    return *this;
  }
  Dual& operator/=(const Dual& o);
  Dual& operator+=(double c) {
    value += c;
    return *this;
  }
  Dual& operator-=(double c) {
    value -= c;
    return *this;
  }
  Dual& operator*=(double c) {
    value *= c;
    for (auto& g : grad) g *= c;
    return *this;
  }
  Dual& operator/=(double c) {
    // Divide rather than multiply by 1/c so values match the double path bit for bit.
    value /= c;
    for (auto& g : grad) g /= c;
    return *this;
  }
};

using Dual2 = Dual<kNumParams>;

template <typename T>
struct IsDual : std::false_type {};
template <std::size_t N>
struct IsDual<Dual<N>> : std::true_type {};
template <typename T>
inline constexpr bool kIsDual = IsDual<T>::value;

inline double ValueOf(double x) { return x; }
template <std::size_t N>
double ValueOf(const Dual<N>& x) {
  return x.value;
}

// Scales the partials by `d` and replaces the value: the chain rule for a
// unary function with f(x.value) = v and f'(x.value) = d.
template <std::size_t N>
Dual<N> ChainRule(const Dual<N>& x, double v, double d) {
  Dual<N> r(v);
  for (std::size_t i = 0; i < N; ++i) r.grad[i] = x.grad[i] * d;
  return r;
}

template <std::size_t N>
Dual<N> operator-(const Dual<N>& a) {
  return ChainRule(a, -a.value, -1.0);
}

template <std::size_t N>
Dual<N> operator+(Dual<N> a, const Dual<N>& b) {
  return a += b;
}
template <std::size_t N>
Dual<N> operator-(Dual<N> a, const Dual<N>& b) {
  return a -= b;
}
template <std::size_t N>
Dual<N> operator*(Dual<N> a, const Dual<N>& b) {
  return a *= b;
}
template <std::size_t N>
Dual<N> operator/(Dual<N> a, const Dual<N>& b) {
  return a /= b;
}

template <std::size_t N>
Dual<N> operator+(Dual<N> a, double c) {
  return a += c;
}
template <std::size_t N>
Dual<N> operator+(double c, Dual<N> a) {
  return a += c;
}
template <std::size_t N>
Dual<N> operator-(Dual<N> a, double c) {
  return a -= c;
}
template <std::size_t N>
Dual<N> operator-(double c, const Dual<N>& a) {
  return ChainRule(a, c - a.value, -1.0);
}
template <std::size_t N>
Dual<N> operator*(Dual<N> a, double c) {
  return a *= c;
}
template <std::size_t N>
Dual<N> operator*(double c, Dual<N> a) {
  return a *= c;
}
template <std::size_t N>
Dual<N> operator/(Dual<N> a, double c) {
  return a /= c;
}
template <std::size_t N>
Dual<N> operator/(double c, const Dual<N>& a) {
  if (a.value == 0.0) throw std::domain_error("dual division by zero");
  const double inv = 1.0 / a.value;
  return ChainRule(a, c * inv, -c * inv * inv);
}

template <std::size_t N>
Dual<N>& Dual<N>::operator/=(const Dual<N>& o) {
  if (o.value == 0.0) throw std::domain_error("dual division by zero");
  const double q = value / o.value;
  for (std::size_t i = 0; i < N; ++i) {
    grad[i] = (grad[i] - q * o.grad[i]) / o.value;
  }
  value = q;
  return *this;
}

// Comparisons look at the value channel only.
template <std::size_t N>
bool operator<(const Dual<N>& a, const Dual<N>& b) {
  return a.value < b.value;
}
template <std::size_t N>
bool operator>(const Dual<N>& a, const Dual<N>& b) {
  return a.value > b.value;
}
template <std::size_t N>
bool operator<=(const Dual<N>& a, const Dual<N>& b) {
  return a.value <= b.value;
}
template <std::size_t N>
bool operator>=(const Dual<N>& a, const Dual<N>& b) {
  return a.value >= b.value;
}

// Out of line so the compiler cannot fuse sin and cos of one argument into
// sincos, whose last bit can differ from sin and break double/Dual parity.
[[gnu::noinline]] inline double SinOutOfLine(double x) { return std::sin(x); }
[[gnu::noinline]] inline double CosOutOfLine(double x) { return std::cos(x); }

template <std::size_t N>
Dual<N> sin(const Dual<N>& x) {
  return ChainRule(x, std::sin(x.value), CosOutOfLine(x.value));
}
template <std::size_t N>
Dual<N> cos(const Dual<N>& x) {
  return ChainRule(x, std::cos(x.value), -SinOutOfLine(x.value));
}
template <std::size_t N>
Dual<N> tan(const Dual<N>& x) {
  const double t = std::tan(x.value);
  return ChainRule(x, t, 1.0 + t * t);
}
template <std::size_t N>
Dual<N> exp(const Dual<N>& x) {
  const double e = std::exp(x.value);
  return ChainRule(x, e, e);
}
template <std::size_t N>
Dual<N> log(const Dual<N>& x) {
  if (!(x.value > 0.0)) throw std::domain_error("dual log of non-positive value");
  return ChainRule(x, std::log(x.value), 1.0 / x.value);
}
template <std::size_t N>
Dual<N> sqrt(const Dual<N>& x) {
  if (!(x.value > 0.0)) throw std::domain_error("dual sqrt of non-positive value");
  const double s = std::sqrt(x.value);
  return ChainRule(x, s, 0.5 / s);
}
// d|x|/dx at exactly 0 is taken as 0.
template <std::size_t N>
Dual<N> abs(const Dual<N>& x) {
  const double sign = x.value > 0.0 ? 1.0 : (x.value < 0.0 ? -1.0 : 0.0);
  return ChainRule(x, std::abs(x.value), sign);
}
template <std::size_t N>
Dual<N> max(const Dual<N>& a, const Dual<N>& b) {
  return a.value >= b.value ? a : b;
}
template <std::size_t N>
Dual<N> min(const Dual<N>& a, const Dual<N>& b) {
  return a.value <= b.value ? a : b;
}

// Fractional part x - floor(x). The derivative is 1 everywhere: the jumps
// are ignored so phase accumulators keep carrying frequency gradients.
inline double frac(double x) { return x - std::floor(x); }
template <std::size_t N>
Dual<N> frac(const Dual<N>& x) {
  Dual<N> r = x;
  r.value = frac(x.value);
  return r;
}

template <std::size_t N>
bool IsFinite(const Dual<N>& x) {
  if (!std::isfinite(x.value)) return false;
  for (double g : x.grad) {
    if (!std::isfinite(g)) return false;
  }
  return true;
}
inline bool IsFinite(double x) { return std::isfinite(x); }

// Generic kernels call these unqualified so one body serves both scalars.
using std::abs;
using std::cos;
using std::exp;
using std::log;
using std::max;
using std::min;
using std::sin;
using std::sqrt;
using std::tan;

}  // namespace soundmatch

#endif  // SOUNDMATCH_DUAL_H_
