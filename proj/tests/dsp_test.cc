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
#include <numbers>
#include <numeric>

#include <gtest/gtest.h>

#include "oracles.h"

namespace soundmatch {
namespace {

TEST(OscillatorTest, Sine) {
  for (double v : SineOsc(0.0, 100)) EXPECT_EQ(v, 0.0);
  const std::vector<double> s = SineOsc(kSampleRate / 4, 4);
  const double expect[] = {1, 0, -1, 0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s[i], expect[i], 1e-12);
}

TEST(OscillatorTest, SineFrequencyDerivative) {
  const double f = 220.0;
  const std::vector<Dual2> d = SineOsc(Dual2::Lift(f, 0), 2000);
  for (std::size_t n : {0ul, 10ul, 999ul, 1999ul}) {
    const double h = 1e-6;
    const double fd =
        (std::sin(2 * std::numbers::pi * (n + 1) * (f + h) / kSampleRate) -
         std::sin(2 * std::numbers::pi * (n + 1) * (f - h) / kSampleRate)) /
        (2 * h);
    EXPECT_NEAR(d[n].grad[0], fd, 1e-6 * std::max(1.0, std::abs(fd)));
    const double phase = 2 * std::numbers::pi * (n + 1) * f / kSampleRate;
    EXPECT_NEAR(d[n].grad[0], 2 * std::numbers::pi * (n + 1) / kSampleRate * std::cos(phase),
                1e-9);
  }
}

TEST(OscillatorTest, Saw) {
  for (double v : SawOsc(0.0, 100)) EXPECT_EQ(v, 0.0);
  const std::vector<double> s = SawOsc(kSampleRate / 4, 4);
  const double expect[] = {0.25, 0.5, 0.75, 0.0};
  for (int i = 0; i < 4; ++i) EXPECT_NEAR(s[i], expect[i], 1e-12);
  std::mt19937_64 rng(1);
  for (int k = 0; k < 20; ++k) {
    const double f = 20 + 980 * UniformUnit(rng);
    for (double v : SawOsc(f, kSignalLength)) {
      ASSERT_GE(v, 0.0);
      ASSERT_LT(v, 1.0);
    }
  }
}

TEST(NoiseTest, DeterministicBoundedCentered) {
  const std::vector<double> a = WhiteNoise(kSignalLength, 1), b = WhiteNoise(kSignalLength, 1);
  EXPECT_EQ(a, b);
  EXPECT_NE(a, WhiteNoise(kSignalLength, 2));
  for (double v : a) {
    ASSERT_GE(v, -1.0);
    ASSERT_LE(v, 1.0);
  }
  const double mean = std::accumulate(a.begin(), a.end(), 0.0) / a.size();
  EXPECT_GT(mean, -0.02);
  EXPECT_LT(mean, 0.02);
}

// Steady-state amplitude of a filtered sine, measured on the last half.
double SineGain(int order, double cutoff, FilterKind kind, double freq) {
  const std::vector<double> x = SineOsc(freq, kSignalLength);
  const std::vector<double> y = Butterworth<double, double>(x, order, cutoff, kind);
  double peak_in = 0.0, peak_out = 0.0;
  for (std::size_t i = kSignalLength / 2; i < kSignalLength; ++i) {
    peak_in = std::max(peak_in, std::abs(x[i]));
    peak_out = std::max(peak_out, std::abs(y[i]));
  }
  return peak_out / peak_in;
}

TEST(ButterworthTest, DcGain) {
  const std::vector<double> ones(kSignalLength, 1.0);
  for (double fc : {50.0, 300.0, 1000.0, 15000.0}) {
    const auto lp = Butterworth<double, double>(ones, 3, fc, FilterKind::kLowpass);
    EXPECT_NEAR(lp.back(), 1.0, 1e-3) << fc;
    const auto hp = Butterworth<double, double>(ones, 10, fc, FilterKind::kHighpass);
    EXPECT_NEAR(hp.back(), 0.0, 1e-3) << fc;
  }
}

TEST(ButterworthTest, HalfPowerAtCutoff) {
  for (double fc : {200.0, 1000.0, 5000.0}) {
    EXPECT_NEAR(SineGain(3, fc, FilterKind::kLowpass, fc), 1 / std::sqrt(2.0), 0.02 / std::sqrt(2.0));
    EXPECT_NEAR(SineGain(10, fc, FilterKind::kHighpass, fc), 1 / std::sqrt(2.0),
                0.02 / std::sqrt(2.0));
  }
}

TEST(ButterworthTest, MatchesDigitalMagnitudeResponse) {
  // |H(e^jw)|^2 = 1 / (1 + (tan(w/2) / tan(wc/2))^(2n)) for the bilinear design.
  const double fc = 800.0;
  for (double f : {200.0, 1600.0, 4000.0}) {
    const double r = std::tan(std::numbers::pi * f / kSampleRate) /
                     std::tan(std::numbers::pi * fc / kSampleRate);
    const double lp = 1 / std::sqrt(1 + std::pow(r, 6));
    const double hp = 1 / std::sqrt(1 + std::pow(1 / r, 20));
    EXPECT_NEAR(SineGain(3, fc, FilterKind::kLowpass, f), lp, 0.01);
    EXPECT_NEAR(SineGain(10, fc, FilterKind::kHighpass, f), hp, 0.01);
  }
}

TEST(ButterworthTest, CutoffDerivativeMatchesFiniteDifference) {
  const std::vector<double> noise = WhiteNoise(4000, 9);
  const double fc = 700.0;
  const auto d = Butterworth<Dual2, double>(noise, 3, Dual2::Lift(fc, 0), FilterKind::kLowpass);
  const double h = 1e-3;
  const auto hi = Butterworth<double, double>(noise, 3, fc + h, FilterKind::kLowpass);
  const auto lo = Butterworth<double, double>(noise, 3, fc - h, FilterKind::kLowpass);
  for (std::size_t i : {100ul, 1000ul, 3999ul}) {
    EXPECT_NEAR(d[i].grad[0], (hi[i] - lo[i]) / (2 * h), 1e-7);
  }
}

TEST(ButterworthTest, RejectsBadCutoffs) {
  const std::vector<double> x(100, 0.0);
  EXPECT_THROW((Butterworth<double, double>(x, 3, 0.0, FilterKind::kLowpass)), std::domain_error);
  EXPECT_THROW((Butterworth<double, double>(x, 3, 30000.0, FilterKind::kLowpass)),
               std::domain_error);
  EXPECT_THROW((Butterworth<double, double>(x, 0, 100.0, FilterKind::kLowpass)),
               std::invalid_argument);
}

TEST(StftTest, FrameCountAndValidation) {
  const StftConfig c;
  EXPECT_EQ(c.Frames(kSignalLength), 436u);
  EXPECT_EQ(c.bins(), 513u);
  EXPECT_THROW((StftConfig{1000, 600, 100}.Validate(kSignalLength)), std::invalid_argument);
  EXPECT_THROW((StftConfig{512, 600, 100}.Validate(kSignalLength)), std::invalid_argument);
  EXPECT_THROW((StftConfig{1024, 600, 0}.Validate(kSignalLength)), std::invalid_argument);
  EXPECT_THROW(c.Validate(100), std::invalid_argument);
}

TEST(StftTest, SilenceIsNearZero) {
  const std::vector<double> zeros(kSignalLength, 0.0);
  const Spectrogram<double> s = StftMagnitude<double>(zeros);
  for (double m : s.magnitudes) ASSERT_LE(m, std::sqrt(kMagnitudeDelta));
}

TEST(StftTest, MatchesDirectDft) {
  const std::vector<double> x = WhiteNoise(3000, 4);
  const Spectrogram<double> s = StftMagnitude<double>(x);
  for (std::size_t f : {0ul, 7ul, s.frames - 1}) {
    const std::span<const double> frame(x.data() + f * 100, 600);
    for (std::size_t k : {0ul, 1ul, 100ul, 512ul}) {
      EXPECT_NEAR(s.at(f, k), oracle::Smoothed(oracle::FrameBinMagnitude(frame, 1024, k)), 1e-9);
    }
  }
}

TEST(StftTest, SinePeakBin) {
  const std::vector<double> x = SineOsc(440.0, kSignalLength);
  const Spectrogram<double> s = StftMagnitude<double>(x);
  const std::span<const double> frame(x.data() + 200 * 100, 600);
  std::size_t oracle_best = 0, best = 0;
  for (std::size_t k = 0; k < s.bins; ++k) {
    if (oracle::FrameBinMagnitude(frame, 1024, k) >
        oracle::FrameBinMagnitude(frame, 1024, oracle_best)) {
      oracle_best = k;
    }
    if (s.at(200, k) > s.at(200, best)) best = k;
  }
  EXPECT_EQ(best, 10u);
  EXPECT_EQ(oracle_best, 10u);
}

TEST(EnvelopeTest, SilenceLinearityAndModulation) {
  const std::vector<double> zeros(kSignalLength, 0.0);
  for (double e : Envelope<double>(zeros)) EXPECT_EQ(e, 0.0);

  const std::vector<double> noise = WhiteNoise(kSignalLength, 3);
  const std::vector<double> mod = SineOsc(2.0, kSignalLength);
  std::vector<double> x(kSignalLength), scaled(kSignalLength);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = noise[i] * mod[i];
    scaled[i] = 3.0 * x[i];
  }
  const std::vector<double> e = Envelope<double>(x), e3 = Envelope<double>(scaled);
  // Each of the 513 smoothed bins is homogeneous up to 2 sqrt(delta).
  const double slack = 2.0 * 513 * std::sqrt(kMagnitudeDelta);
  for (std::size_t i = 0; i < e.size(); ++i) EXPECT_NEAR(e3[i], 3.0 * e[i], slack + 1e-9 * e3[i]);

  // |sin| at 2 Hz has four loudness lobes in one second.
  std::vector<double> smooth(e.size());
  for (std::size_t i = 0; i < e.size(); ++i) {
    double s = 0.0;
    int n = 0;
    for (long j = static_cast<long>(i) - 10; j <= static_cast<long>(i) + 10; ++j) {
      if (j >= 0 && j < static_cast<long>(e.size())) {
        s += e[j];
        ++n;
      }
    }
    smooth[i] = s / n;
  }
  const double top = *std::max_element(smooth.begin(), smooth.end());
  int peaks = 0;
  bool above = false;
  for (double v : smooth) {
    if (!above && v > 0.6 * top) {
      ++peaks;
      above = true;
    } else if (above && v < 0.3 * top) {
      above = false;
    }
  }
  EXPECT_EQ(peaks, 4);
}

TEST(PeakNormalizeTest, Scales) {
  const std::vector<double> x = {0.1, -0.5, 0.25};
  const std::vector<double> y = PeakNormalize(x);
  EXPECT_DOUBLE_EQ(y[1], -1.0);
  EXPECT_DOUBLE_EQ(y[0], 0.2);
  const std::vector<double> quiet = {1e-12, 0.0};
  EXPECT_EQ(PeakNormalize(quiet), quiet);
}

}  // namespace
}  // namespace soundmatch
