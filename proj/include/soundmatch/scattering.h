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

// Morlet wavelet filterbanks and a compact joint time-frequency scattering
// transform built on them.

#ifndef SOUNDMATCH_SCATTERING_H_
#define SOUNDMATCH_SCATTERING_H_

#include <cstddef>
#include <span>
#include <vector>

#include "soundmatch/dsp.h"

namespace soundmatch {

// A real frequency response sampled on the bins of a periodic grid, stored
// over its support only. Bins are signed: negative bins index the upper half
// of the grid.
struct BandFilter {
  double center = 0.0;  // cycles per grid sample
  double sigma = 0.0;   // Gaussian width, cycles per grid sample
  long first_bin = 0;
  std::vector<double> response;

  long last_bin() const { return first_bin + static_cast<long>(response.size()) - 1; }
  double at(long bin) const {
    const long i = bin - first_bin;
    return i < 0 || i >= static_cast<long>(response.size()) ? 0.0 : response[i];
  }
};

// Analytic Morlet response on a grid of `grid` bins: a Gaussian at `center`
// minus a DC-correction Gaussian so the response vanishes at 0, zero for
// non-positive frequencies, scaled to unit peak. With `mirror` the response
// is reflected onto negative frequencies. Support is truncated where the
// response falls below 1e-6 of its peak.
BandFilter MorletResponse(double center, double sigma, std::size_t grid, bool mirror = false);

// Symmetric Gaussian low-pass centered at DC, unit gain at DC.
BandFilter GaussianLowpass(double sigma, std::size_t grid);

struct MorletFilterbank {
  std::size_t fft_length = 0;
  int octaves = 0;
  int per_octave = 0;
  std::vector<BandFilter> bandpass;  // descending center frequency
  BandFilter lowpass;
};

inline constexpr double kMorletMaxCenter = 0.35;  // cycles per sample
// Ratio of adjacent-center spacing to Gaussian width; keeps the summed
// squared responses between about 0.66 and 1.03 across the band.
inline constexpr double kMorletSpacingToWidth = 2.1;

// `octaves` x `per_octave` band-pass filters with centers
// 0.35 * 2^(-i / per_octave) and one Gaussian averaging filter of time scale
// `averaging` samples. For a Gabor-shaped filter unit peak response equals
// unit time-domain L1 norm.
MorletFilterbank MakeMorletFilterbank(int octaves, int per_octave,
                                      std::size_t fft_length = NextPowerOfTwo(kSignalLength),
                                      std::size_t averaging = 1024);

struct JtfsConfig {
  int octaves = 8;
  int per_octave = 8;
  std::size_t averaging = 1024;  // temporal averaging scale, samples
  int rates = 4;                 // temporal modulation octaves, 16 Hz down
  int scales = 3;                // frequential octaves, 4 channels up
};

// Joint time-frequency scattering, simplified:
//  order 1: |x * psi_lambda| averaged in time (scalogram);
//  order 2: the unaveraged scalogram filtered by separable 2-D Morlet
//           wavelets over (time, log-frequency), both spins, modulus, then
//           averaged in time and frequency.
// Coefficients of both orders are concatenated into one flat vector.
class JointScattering {
 public:
  explicit JointScattering(const JtfsConfig& config = {},
                           std::size_t signal_length = kSignalLength);

  template <typename T>
  std::vector<T> Transform(std::span<const T> signal) const;

  const MorletFilterbank& filterbank() const { return bank_; }
  std::size_t order1_frames() const { return order1_frames_; }
  std::size_t order2_frames() const { return order2_frames_; }
  std::size_t order2_rows() const { return order2_rows_; }
  std::size_t num_wavelets2() const { return wavelets_.size(); }
  std::size_t size() const;

 private:
  struct Wavelet2 {
    BandFilter time;
    BandFilter freq;
  };

  JtfsConfig config_;
  std::size_t signal_length_;
  MorletFilterbank bank_;
  std::size_t channels_;       // number of first-order bands
  std::size_t time_grid_;      // scalogram samples over the padded length
  std::size_t freq_grid_;      // channel axis padded for the 2-D transform
  std::size_t out_time_grid_;  // second-order output samples over padded length
  std::size_t out_freq_grid_;
  std::size_t order1_frames_;
  std::size_t order2_frames_;
  std::size_t order2_rows_;
  BandFilter time_lowpass_;  // on the scalogram grid
  BandFilter freq_lowpass_;  // on the channel grid
  std::vector<Wavelet2> wavelets_;
};

extern template std::vector<double> JointScattering::Transform<double>(
    std::span<const double>) const;
extern template std::vector<Dual2> JointScattering::Transform<Dual2>(
    std::span<const Dual2>) const;

}  // namespace soundmatch

#endif  // SOUNDMATCH_SCATTERING_H_
