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
#include <cmath>

#include <gtest/gtest.h>

namespace soundmatch {
namespace {

TEST(SynthTest, NamesRoundTrip) {
  for (ProgramId id : kAllPrograms) EXPECT_EQ(ParseProgram(ProgramName(id)), id);
  EXPECT_THROW(ParseProgram("FM"), std::invalid_argument);
  EXPECT_EQ(ParseSweepVariant("hp-noise"), SweepVariant::kHPNoise);
  EXPECT_EQ(ParseSweepVariant("snoise-am"), SweepVariant::kSNoiseAM);
  EXPECT_THROW(ParseSweepVariant("x"), std::invalid_argument);
}

TEST(SynthTest, RangesAndDefaults) {
  const auto bp = SynthProgram::Make(ProgramId::kBPNoise);
  EXPECT_EQ(bp.params()[0].min, 50);
  EXPECT_EQ(bp.params()[0].max, 1000);
  EXPECT_EQ(bp.params()[1].min, 1);
  EXPECT_EQ(bp.params()[1].max, 120);
  for (ProgramId id : kAllPrograms) {
    for (const ParamSpec& p : SynthProgram::Make(id).params()) {
      EXPECT_LT(p.min, p.max);
      EXPECT_GE(p.default_value, p.min);
      EXPECT_LE(p.default_value, p.max);
    }
  }
  EXPECT_THROW(bp.WithRange(0, 10, 5), std::invalid_argument);
}

TEST(SynthTest, RenderLengthAndDeterminism) {
  for (ProgramId id : kAllPrograms) {
    const auto p = SynthProgram::Make(id);
    Params<double> raw{p.params()[0].default_value, p.params()[1].default_value};
    const auto a = p.Render(raw, 5), b = p.Render(raw, 5);
    EXPECT_EQ(a.size(), kSignalLength);
    EXPECT_EQ(a, b);
    for (double v : a) ASSERT_TRUE(std::isfinite(v));
  }
}

TEST(SynthTest, NoiseAmZeroModulatorIsSilent) {
  const auto p = SynthProgram::Make(ProgramId::kNoiseAM);
  for (double v : p.Render(Params<double>{3.0, 0.0}, 1)) ASSERT_EQ(v, 0.0);
}

TEST(SynthTest, AddSineSawRange) {
  const auto p = SynthProgram::Make(ProgramId::kAddSineSaw);
  for (double v : p.Render(Params<double>{123.4, 567.8}, 1)) {
    ASSERT_GE(v, -1.0);
    ASSERT_LT(v, 2.0);
  }
}

TEST(SynthTest, BandPassNoiseSpectralShape) {
  const auto p = SynthProgram::Make(ProgramId::kBPNoise);
  const std::vector<double> x = p.Render(Params<double>{900.0, 100.0}, 1);
  const Spectrogram<double> s = StftMagnitude<double>(x);
  auto band_energy = [&](double hz) {
    const std::size_t k = static_cast<std::size_t>(std::lround(hz * 1024 / kSampleRate));
    double e = 0.0;
    for (std::size_t f = 0; f < s.frames; ++f) e += s.at(f, k) * s.at(f, k);
    return e;
  };
  const double db = 10.0 * std::log10(band_energy(300.0) / band_energy(5000.0));
  EXPECT_GE(db, 20.0);
}

TEST(SampleTest, DeterministicUniform) {
  const auto p = SynthProgram::Make(ProgramId::kBPNoise);
  std::mt19937_64 a(9), b(9);
  for (int i = 0; i < 10; ++i) {
    const ParamVector x = SampleParams(p, a), y = SampleParams(p, b);
    EXPECT_EQ(x.raw, y.raw);
  }
  std::mt19937_64 rng(1);
  double lo = 1e9, hi = -1e9, sum = 0.0;
  for (int i = 0; i < 10000; ++i) {
    const ParamVector v = SampleParams(p, rng);
    lo = std::min(lo, v.raw[0]);
    hi = std::max(hi, v.raw[0]);
    sum += v.normalized[0];
    EXPECT_NEAR(p.params()[0].Denormalize(v.normalized[0]), v.raw[0], 1e-9);
  }
  EXPECT_GE(lo, 50.0);
  EXPECT_LE(hi, 1000.0);
  EXPECT_GT(sum / 10000, 0.48);
  EXPECT_LT(sum / 10000, 0.52);
}

TEST(ClampTest, Examples) {
  const auto p = SynthProgram::Make(ProgramId::kBPNoise);
  auto r = ClampForRender(Params<double>{500.0, 60.0}, p);
  EXPECT_EQ(r.raw, (Params<double>{500.0, 60.0}));
  EXPECT_FALSE(r.diverged);
  r = ClampForRender(Params<double>{2000.0, 60.0}, p);
  EXPECT_EQ(r.raw[0], 1000.0);
  EXPECT_TRUE(r.diverged);
  r = ClampForRender(Params<double>{1200.0, 60.0}, p);
  EXPECT_EQ(r.raw[0], 1000.0);
  EXPECT_FALSE(r.diverged);
  r = ClampForRender(Params<double>{10.0, -200.0}, p);
  EXPECT_EQ(r.raw, (Params<double>{50.0, 1.0}));
  EXPECT_TRUE(r.diverged);
}

TEST(ClampTest, GradientZeroWhenClamped) {
  const auto p = SynthProgram::Make(ProgramId::kBPNoise);
  const auto r = ClampForRender(Params<Dual2>{Dual2::Lift(1200.0, 0), Dual2::Lift(60.0, 1)}, p);
  EXPECT_EQ(r.raw[0].grad[0], 0.0);
  EXPECT_EQ(r.raw[1].grad[1], 1.0);
}

TEST(SweepVariantTest, Ranges) {
  EXPECT_EQ(SweepParam(SweepVariant::kHPNoise).min, 100);
  EXPECT_EQ(SweepParam(SweepVariant::kHPNoise).max, 20000);
  EXPECT_DOUBLE_EQ(SweepParam(SweepVariant::kSNoiseAM).min, 0.1);
  EXPECT_EQ(SweepParam(SweepVariant::kSNoiseAM).max, 20);
  EXPECT_EQ(RenderSweepVariant<double>(SweepVariant::kSNoiseAM, 5.0, 1).size(), kSignalLength);
}

}  // namespace
}  // namespace soundmatch
