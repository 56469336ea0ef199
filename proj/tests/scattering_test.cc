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

#include <gtest/gtest.h>

#include "soundmatch/losses.h"

namespace soundmatch {
namespace {

TEST(FilterbankTest, GeometricCentersUnitPeaks) {
  const MorletFilterbank bank = MakeMorletFilterbank(8, 8);
  ASSERT_EQ(bank.bandpass.size(), 64u);
  for (std::size_t i = 1; i < bank.bandpass.size(); ++i) {
    EXPECT_NEAR(bank.bandpass[i - 1].center / bank.bandpass[i].center, std::exp2(1.0 / 8), 1e-12);
  }
  for (const BandFilter& f : bank.bandpass) {
    const double peak = *std::max_element(f.response.begin(), f.response.end());
    EXPECT_NEAR(peak, 1.0, 1e-3);
    EXPECT_EQ(f.at(0), 0.0);  // no DC
  }
  EXPECT_NEAR(bank.lowpass.at(0), 1.0, 1e-12);
}

TEST(FilterbankTest, EnergyCoverage) {
  const MorletFilterbank bank = MakeMorletFilterbank(8, 8);
  const double n = static_cast<double>(bank.fft_length);
  const long lo = static_cast<long>(std::ceil(bank.bandpass.back().center * n));
  const long hi = static_cast<long>(std::floor(bank.bandpass.front().center * n));
  double worst_lo = 1e9, worst_hi = 0;
  for (long b = lo; b <= hi; b += 7) {
    double s = 0.0;
    for (const BandFilter& f : bank.bandpass) s += f.at(b) * f.at(b);
    worst_lo = std::min(worst_lo, s);
    worst_hi = std::max(worst_hi, s);
  }
  EXPECT_GE(worst_lo, 0.5);
  EXPECT_LE(worst_hi, 1.05);
}

TEST(FilterbankTest, RejectsBadArguments) {
  EXPECT_THROW(MakeMorletFilterbank(0, 8), std::invalid_argument);
  EXPECT_THROW(MakeMorletFilterbank(8, 8, 1000), std::invalid_argument);
  EXPECT_THROW(MorletResponse(0.6, 0.01, 1024), std::invalid_argument);
}

std::vector<double> AmSine(double rate) {
  std::vector<double> carrier = SineOsc(440.0, kSignalLength);
  const std::vector<double> mod = SineOsc(rate, kSignalLength);
  for (std::size_t i = 0; i < carrier.size(); ++i) carrier[i] *= 0.5 * (1.0 + mod[i]);
  return carrier;
}

TEST(JointScatteringTest, NonNegativeAndSized) {
  const auto jtfs = SharedJointScattering(JtfsConfig{});
  const std::vector<double> c = jtfs->Transform<double>(AmSine(4.0));
  EXPECT_EQ(c.size(), jtfs->size());
  for (double v : c) ASSERT_GE(v, 0.0);
}

TEST(JointScatteringTest, RateSensitivity) {
  const auto jtfs = SharedJointScattering(JtfsConfig{});
  const std::vector<double> two = AmSine(2.0), eight = AmSine(8.0), near = AmSine(2.5);
  EXPECT_EQ(JtfsLoss<double>(two, two, *jtfs), 0.0);
  EXPECT_GT(JtfsLoss<double>(two, eight, *jtfs), JtfsLoss<double>(two, near, *jtfs));
}

TEST(JointScatteringTest, DualMatchesDoublePath) {
  const auto jtfs = SharedJointScattering(JtfsConfig{});
  const std::vector<double> x = AmSine(3.0);
  std::vector<Dual2> d(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) d[i] = Dual2(x[i], {x[i], 0.0});
  const std::vector<Dual2> cd = jtfs->Transform<Dual2>(d);
  const std::vector<double> c = jtfs->Transform<double>(x);
  ASSERT_EQ(cd.size(), c.size());
  for (std::size_t i = 0; i < c.size(); i += 17) {
    EXPECT_NEAR(cd[i].value, c[i], 1e-9 * std::max(1.0, c[i]));
    // Moduli are 1-homogeneous up to the delta smoothing, so d/ds T((1+s) x)
    // at s=0 is T(x) within a few sqrt(delta).
    EXPECT_NEAR(cd[i].grad[0], c[i], 1e-5 * std::max(1.0, c[i]));
  }
}

}  // namespace
}  // namespace soundmatch
