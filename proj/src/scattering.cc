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

#include "soundmatch/scattering.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace soundmatch {
namespace {

// Spectral averaging leaves roundoff-level negatives; averaged moduli are >= 0.
template <typename T>
T NonNegative(const T& v) {
  return ValueOf(v) < 0.0 ? T(0.0) : v;
}

constexpr double kSupportTolerance = 1e-6;

// Center of the highest second-order temporal wavelet.
constexpr double kMaxModulationHz = 16.0;
// Highest frequential wavelet: one period every four channels.
constexpr double kMaxFrequential = 0.25;
// Width of the channel-axis averaging, in channels (standard deviation).
constexpr double kChannelAveraging = 6.0;
// Second-order wavelets are one octave apart: width = center / 3.
constexpr double kOctaveWaveletWidth = 3.0;
// Channel-axis subsampling of the second-order output.
constexpr std::size_t kChannelStride = 4;

std::size_t Wrap(long bin, std::size_t size) {
  const long n = static_cast<long>(size);
  return static_cast<std::size_t>(((bin % n) + n) % n);
}

template <typename T>
Complex<T> Conj(const Complex<T>& z) {
  return {z.re, -z.im};
}

template <typename T>
void Fft2d(std::vector<Complex<T>>& data, std::size_t rows, std::size_t cols, bool inverse) {
  const FftPlan& row_plan = GetFftPlan(cols);
  const FftPlan& col_plan = GetFftPlan(rows);
  for (std::size_t r = 0; r < rows; ++r) {
    std::span<Complex<T>> row(data.data() + r * cols, cols);
    if (inverse) {
      row_plan.Inverse(row);
    } else {
      row_plan.Forward(row);
    }
  }
  std::vector<Complex<T>> column(rows);
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) column[r] = data[r * cols + c];
    if (inverse) {
      col_plan.Inverse<T>(column);
    } else {
      col_plan.Forward<T>(column);
    }
    for (std::size_t r = 0; r < rows; ++r) data[r * cols + c] = column[r];
  }
}

}  // namespace

BandFilter MorletResponse(double center, double sigma, std::size_t grid, bool mirror) {
  if (!(center > 0.0 && center < 0.5) || !(sigma > 0.0)) {
    throw std::invalid_argument("morlet center must lie in (0, 0.5) with positive width");
  }
  const long nyquist = static_cast<long>(grid / 2);
  const double kappa = std::exp(-center * center / (2.0 * sigma * sigma));
  std::vector<double> values(nyquist + 1, 0.0);
  double peak = 0.0;
  for (long b = 1; b <= nyquist; ++b) {
    const double w = static_cast<double>(b) / static_cast<double>(grid);
    const double d = w - center;
    values[b] = std::exp(-d * d / (2.0 * sigma * sigma)) -
                kappa * std::exp(-w * w / (2.0 * sigma * sigma));
    peak = std::max(peak, values[b]);
  }
  long first = nyquist, last = 1;
  for (long b = 1; b <= nyquist; ++b) {
    values[b] /= peak;
    if (values[b] >= kSupportTolerance) {
      first = std::min(first, b);
      last = std::max(last, b);
    }
  }
  BandFilter f;
  f.center = mirror ? -center : center;
  f.sigma = sigma;
  f.response.assign(values.begin() + first, values.begin() + last + 1);
  f.first_bin = first;
  if (mirror) {
    std::reverse(f.response.begin(), f.response.end());
    f.first_bin = -last;
  }
  return f;
}

BandFilter GaussianLowpass(double sigma, std::size_t grid) {
  const double g = static_cast<double>(grid);
  // Half-width where exp(-w^2 / 2 sigma^2) reaches the support tolerance.
  const long half = std::min<long>(
      static_cast<long>(grid / 2) - 1,
      static_cast<long>(std::ceil(sigma * g * std::sqrt(-2.0 * std::log(kSupportTolerance)))));
  BandFilter f;
  f.center = 0.0;
  f.sigma = sigma;
  f.first_bin = -half;
  for (long b = -half; b <= half; ++b) {
    const double w = static_cast<double>(b) / g;
    f.response.push_back(std::exp(-w * w / (2.0 * sigma * sigma)));
  }
  return f;
}

MorletFilterbank MakeMorletFilterbank(int octaves, int per_octave, std::size_t fft_length,
                                      std::size_t averaging) {
  if (octaves < 1 || per_octave < 1) {
    throw std::invalid_argument("filterbank needs at least one octave and one filter per octave");
  }
  if (!IsPowerOfTwo(fft_length)) throw std::invalid_argument("filterbank length must be 2^k");
  MorletFilterbank bank;
  bank.fft_length = fft_length;
  bank.octaves = octaves;
  bank.per_octave = per_octave;
  const double spacing = 1.0 - std::exp2(-1.0 / per_octave);
  for (int i = 0; i < octaves * per_octave; ++i) {
    const double center = kMorletMaxCenter * std::exp2(-static_cast<double>(i) / per_octave);
    const double sigma = center * spacing / kMorletSpacingToWidth;
    bank.bandpass.push_back(MorletResponse(center, sigma, fft_length));
  }
  bank.lowpass = GaussianLowpass(0.1 / static_cast<double>(averaging), fft_length);
  return bank;
}

JointScattering::JointScattering(const JtfsConfig& config, std::size_t signal_length)
    : config_(config), signal_length_(signal_length) {
  if (config.rates < 1 || config.scales < 1) {
    throw std::invalid_argument("jtfs needs at least one rate and one scale");
  }
  if (!IsPowerOfTwo(config.averaging) || config.averaging < 4) {
    throw std::invalid_argument("jtfs averaging scale must be a power of two >= 4");
  }
  const std::size_t n = NextPowerOfTwo(signal_length);
  if (config.averaging > n / 8) throw std::invalid_argument("jtfs averaging too long for signal");
  bank_ = MakeMorletFilterbank(config.octaves, config.per_octave, n, config.averaging);
  channels_ = bank_.bandpass.size();

  const std::size_t scalogram_hop = config.averaging / 2;
  time_grid_ = n / scalogram_hop;
  out_time_grid_ = n / config.averaging;
  freq_grid_ = NextPowerOfTwo(2 * channels_);
  out_freq_grid_ = std::max<std::size_t>(2, freq_grid_ / kChannelStride);
  order1_frames_ = (signal_length + scalogram_hop - 1) / scalogram_hop;
  order2_frames_ = (signal_length + config.averaging - 1) / config.averaging;
  order2_rows_ = (channels_ + kChannelStride - 1) / kChannelStride;

  // Bin b of every time grid here is the frequency b / n cycles per sample.
  time_lowpass_ = GaussianLowpass(0.1 * static_cast<double>(scalogram_hop) /
                                      static_cast<double>(config.averaging),
                                  time_grid_);
  freq_lowpass_ = GaussianLowpass(1.0 / (2.0 * std::numbers::pi * kChannelAveraging), freq_grid_);

  const double top_rate = kMaxModulationHz / kSampleRate * static_cast<double>(scalogram_hop);
  for (int r = 0; r < config.rates; ++r) {
    const double rate = top_rate * std::exp2(-r);
    const BandFilter time = MorletResponse(rate, rate / kOctaveWaveletWidth, time_grid_);
    for (int s = 0; s < config.scales; ++s) {
      const double scale = kMaxFrequential * std::exp2(-s);
      for (bool mirror : {false, true}) {
        wavelets_.push_back(
            {time, MorletResponse(scale, scale / kOctaveWaveletWidth, freq_grid_, mirror)});
      }
    }
  }
}

std::size_t JointScattering::size() const {
  return channels_ * order1_frames_ + wavelets_.size() * order2_rows_ * order2_frames_;
}

template <typename T>
std::vector<T> JointScattering::Transform(std::span<const T> signal) const {
  if (signal.size() != signal_length_) {
    throw std::invalid_argument("jtfs signal length mismatch");
  }
  const std::size_t n = bank_.fft_length;
  std::vector<Complex<T>> spectrum(n / 2 + 1);
  GetRealFftPlan(n).Forward<T>(signal, spectrum);

  std::vector<T> out;
  out.reserve(size());

  // First order. Each band is shifted down to baseband before the inverse
  // transform; the modulus is unaffected and the grid shrinks to the band.
  const std::size_t g = time_grid_;
  std::vector<T> scalogram(freq_grid_ * g, T(0.0));
  for (std::size_t ch = 0; ch < channels_; ++ch) {
    const BandFilter& f = bank_.bandpass[ch];
    const std::size_t m = std::max(g, NextPowerOfTwo(f.response.size()));
    const long center = std::lround(f.center * static_cast<double>(n));
    std::vector<Complex<T>> band(m);
    for (long b = f.first_bin; b <= f.last_bin(); ++b) {
      band[Wrap(b - center, m)] = Scale(spectrum[b], f.response[b - f.first_bin]);
    }
    GetFftPlan(m).Inverse<T>(band);
    std::vector<T> modulus(m);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < m; ++i) modulus[i] = Modulus(Scale(band[i], inv_n));

    std::vector<Complex<T>> low(m / 2 + 1);
    GetRealFftPlan(m).Forward<T>(modulus, low);
    // Pack the unaveraged (re) and averaged (im) outputs in one inverse.
    std::vector<Complex<T>> packed(g);
    const long half = static_cast<long>(g / 2);
    for (long j = -half + 1; j < half; ++j) {
      const Complex<T> v = j >= 0 ? low[j] : Conj(low[-j]);
      const double lp = time_lowpass_.at(j);
      packed[Wrap(j, g)] = {v.re - v.im * lp, v.im + v.re * lp};
    }
    GetFftPlan(g).Inverse<T>(packed);
    const double inv_m = 1.0 / static_cast<double>(m);
    for (std::size_t t = 0; t < g; ++t) scalogram[ch * g + t] = packed[t].re * inv_m;
    for (std::size_t t = 0; t < order1_frames_; ++t) out.push_back(NonNegative(packed[t].im * inv_m));
  }

  // Second order: 2-D spectrum of the scalogram (channels x time).
  const std::size_t gf = freq_grid_;
  std::vector<Complex<T>> plane(gf * g);
  {
    const RealFftPlan& row_plan = GetRealFftPlan(g);
    std::vector<Complex<T>> row(g / 2 + 1);
    for (std::size_t ch = 0; ch < channels_; ++ch) {
      row_plan.Forward<T>(std::span<const T>(scalogram.data() + ch * g, g), row);
      for (std::size_t k = 0; k <= g / 2; ++k) plane[ch * g + k] = row[k];
      for (std::size_t k = g / 2 + 1; k < g; ++k) plane[ch * g + k] = Conj(row[g - k]);
    }
    const FftPlan& col_plan = GetFftPlan(gf);
    std::vector<Complex<T>> column(gf);
    for (std::size_t k = 0; k < g; ++k) {
      for (std::size_t r = 0; r < gf; ++r) column[r] = plane[r * g + k];
      col_plan.Forward<T>(column);
      for (std::size_t r = 0; r < gf; ++r) plane[r * g + k] = column[r];
    }
  }

  const std::size_t ot = out_time_grid_, of = out_freq_grid_;
  const double inv_plane = 1.0 / static_cast<double>(gf * g);
  for (const Wavelet2& w : wavelets_) {
    const std::size_t mt = std::max(ot, NextPowerOfTwo(w.time.response.size()));
    const std::size_t mf = std::max(of, NextPowerOfTwo(w.freq.response.size()));
    const long ct = std::lround(w.time.center * static_cast<double>(g));
    const long cf = std::lround(w.freq.center * static_cast<double>(gf));
    std::vector<Complex<T>> band(mf * mt);
    for (long kf = w.freq.first_bin; kf <= w.freq.last_bin(); ++kf) {
      const double rf = w.freq.response[kf - w.freq.first_bin];
      const std::size_t src_row = Wrap(kf, gf) * g;
      const std::size_t dst_row = Wrap(kf - cf, mf) * mt;
      for (long kt = w.time.first_bin; kt <= w.time.last_bin(); ++kt) {
        const double gain = rf * w.time.response[kt - w.time.first_bin];
        band[dst_row + Wrap(kt - ct, mt)] = Scale(plane[src_row + Wrap(kt, g)], gain);
      }
    }
    Fft2d(band, mf, mt, /*inverse=*/true);
    std::vector<Complex<T>> modulus(mf * mt);
    for (std::size_t i = 0; i < band.size(); ++i) {
      modulus[i].re = Modulus(Scale(band[i], inv_plane));
    }
    Fft2d(modulus, mf, mt, /*inverse=*/false);

    std::vector<Complex<T>> averaged(of * ot);
    const long hf = static_cast<long>(of / 2), ht = static_cast<long>(ot / 2);
    for (long jf = -hf + 1; jf < hf; ++jf) {
      const double lf = freq_lowpass_.at(jf);
      for (long jt = -ht + 1; jt < ht; ++jt) {
        averaged[Wrap(jf, of) * ot + Wrap(jt, ot)] =
            Scale(modulus[Wrap(jf, mf) * mt + Wrap(jt, mt)], lf * time_lowpass_.at(jt));
      }
    }
    Fft2d(averaged, of, ot, /*inverse=*/true);
    const double inv_m = 1.0 / static_cast<double>(mf * mt);
    for (std::size_t r = 0; r < order2_rows_; ++r) {
      for (std::size_t t = 0; t < order2_frames_; ++t) {
        out.push_back(NonNegative(averaged[r * ot + t].re * inv_m));
      }
    }
  }
  return out;
}

template std::vector<double> JointScattering::Transform<double>(std::span<const double>) const;
template std::vector<Dual2> JointScattering::Transform<Dual2>(std::span<const Dual2>) const;

}  // namespace soundmatch
