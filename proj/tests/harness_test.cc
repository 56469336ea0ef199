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

#include "soundmatch/harness.h"

#include <cstring>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include <gtest/gtest.h>

namespace soundmatch {
namespace {

namespace fs = std::filesystem;

std::string ReadFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path FreshDir(const std::string& name) {
  const fs::path d = fs::temp_directory_path() / ("soundmatch_harness_" + name);
  fs::remove_all(d);
  return d;
}

TEST(RunConfigTest, ParsesAndRejects) {
  const RunConfig c = ParseRunConfig(
      R"({"programs":["NoiseAM"],"losses":["JTFS","L1Spec"],"trials_per_combo":4,
          "max_iterations":7,"lr":0.01,"master_seed":12,"workers":2,"output_dir":"x",
          "write_wav":false})");
  EXPECT_EQ(c.programs, std::vector<ProgramId>{ProgramId::kNoiseAM});
  EXPECT_EQ(c.losses, (std::vector<LossId>{LossId::kJtfs, LossId::kL1Spec}));
  EXPECT_EQ(c.trials_per_combo, 4);
  EXPECT_EQ(c.match.max_iterations, 7);
  EXPECT_EQ(c.match.lr, 0.01);
  EXPECT_EQ(c.master_seed, 12u);
  EXPECT_FALSE(c.write_wav);
  EXPECT_EQ(ParseRunConfig(RunConfigToJson(c)).master_seed, 12u);

  EXPECT_EQ(ParseRunConfig("{}").trials_per_combo, 300);
  for (const char* bad :
       {"[]", "{", R"({"trials_per_combo":0})", R"({"programs":["FM"]})",
        R"({"losses":[]})", R"({"lr":-1})", R"({"unknown":1})", R"({"workers":0})",
        R"({"programs":["NoiseAM","NoiseAM"]})", R"({"trials_per_combo":1.5})",
        R"({"master_seed":-3})"}) {
    EXPECT_THROW(ParseRunConfig(bad), ConfigError) << bad;
  }
  EXPECT_THROW(LoadRunConfig("/nonexistent/cfg.json"), ConfigError);
}

TEST(SeedTest, DistinctPerTrial) {
  std::set<std::uint64_t> seeds;
  for (ProgramId p : kAllPrograms) {
    for (LossId l : kAllLosses) {
      for (int i = 0; i < 50; ++i) seeds.insert(TrialSeed(kDefaultMasterSeed, p, l, i));
    }
  }
  EXPECT_EQ(seeds.size(), 4u * 4u * 50u);
  EXPECT_NE(TrialSeed(1, ProgramId::kNoiseAM, LossId::kJtfs, 0),
            TrialSeed(2, ProgramId::kNoiseAM, LossId::kJtfs, 0));
}

TEST(RecordTest, TrialRoundTrip) {
  MatchConfig c;
  c.max_iterations = 12;
  TrialRecord r = RunTrial(ProgramId::kSineSawAM, LossId::kDtwEnvelope, 7, 31, c);
  const std::string line = SerializeTrial(r);
  const TrialRecord back = ParseTrial(line);
  EXPECT_EQ(SerializeTrial(back), line);
  EXPECT_EQ(back.id, r.id);
  EXPECT_EQ(back.losses, r.losses);
  EXPECT_EQ(back.final.raw, r.final.raw);
  EXPECT_EQ(back.trajectory.size(), r.trajectory.size());
  EXPECT_EQ(line.find('\n'), std::string::npos);
  EXPECT_NE(line.find("\"version\":1"), std::string::npos);

  r.status = TrialStatus::kFailedNumeric;
  r.losses.push_back(std::numeric_limits<double>::quiet_NaN());
  const std::string failed = SerializeTrial(r);
  EXPECT_EQ(SerializeTrial(ParseTrial(failed)), failed);
  EXPECT_TRUE(std::isnan(ParseTrial(failed).losses.back()));

  EXPECT_THROW(ParseTrial("{}"), std::invalid_argument);
  EXPECT_THROW(ParseTrial("not json"), std::invalid_argument);
}

TEST(RecordTest, EvalAndLikertRoundTrip) {
  EvalResult e{"NoiseAM.JTFS.0001", ProgramId::kNoiseAM, LossId::kJtfs, 0.1 / 3, 1e-17, false};
  const std::string line = SerializeEval(e);
  EXPECT_EQ(SerializeEval(ParseEval(line)), line);
  EXPECT_EQ(ParseEval(line).p_loss, e.p_loss);

  LikertScore s{"NoiseAM.JTFS.0001", "rater-1", 4, "2026-05-01T10:00:00Z"};
  const std::string ls = SerializeLikert(s);
  EXPECT_EQ(SerializeLikert(ParseLikert(ls)), ls);
  EXPECT_THROW(ParseLikert(R"({"version":1,"trial_id":"a","rater_id":"b","score":9,"timestamp":"t"})"),
               std::invalid_argument);
}

TEST(WavTest, RoundTripAndFormat) {
  std::vector<double> x(kSignalLength);
  for (std::size_t i = 0; i < x.size(); ++i) x[i] = std::sin(0.01 * i) * 0.9;
  x[5] = 3.0;  // clipped
  const std::string bytes = EncodeWav(x);
  ASSERT_EQ(bytes.size(), 44u + 2u * kSignalLength);
  EXPECT_EQ(bytes.substr(0, 4), "RIFF");
  EXPECT_EQ(bytes.substr(8, 4), "WAVE");
  std::uint16_t channels, bits;
  std::uint32_t rate;
  std::memcpy(&channels, bytes.data() + 22, 2);
  std::memcpy(&rate, bytes.data() + 24, 4);
  std::memcpy(&bits, bytes.data() + 34, 2);
  EXPECT_EQ(channels, 1);
  EXPECT_EQ(rate, 44100u);
  EXPECT_EQ(bits, 16);
  int sr = 0;
  const std::vector<double> y = DecodeWav(bytes, &sr);
  EXPECT_EQ(sr, 44100);
  ASSERT_EQ(y.size(), x.size());
  EXPECT_NEAR(y[5], 1.0, 1e-4);
  for (std::size_t i = 10; i < 100; ++i) EXPECT_NEAR(y[i], x[i], 1.0 / 32767);
  EXPECT_THROW(DecodeWav("RIFF"), std::invalid_argument);
}

RunConfig SmallConfig(const fs::path& dir) {
  RunConfig c;
  c.programs = {ProgramId::kBPNoise, ProgramId::kNoiseAM};
  c.losses = {LossId::kL1Spec, LossId::kDtwEnvelope};
  c.trials_per_combo = 3;
  c.match.max_iterations = 4;
  c.output_dir = dir.string();
  return c;
}

TEST(RunMatrixTest, CountsResumesAndTornLines) {
  const fs::path dir = FreshDir("matrix");
  const RunConfig c = SmallConfig(dir);
  const RunSummary s = RunMatrix(c);
  EXPECT_EQ(s.completed, 12);
  EXPECT_EQ(s.skipped, 0);
  const std::vector<TrialRecord> trials = ReadTrials((dir / kTrialsFile).string());
  ASSERT_EQ(trials.size(), 12u);
  EXPECT_EQ(trials.front().id, "BPNoise.L1Spec.0000");
  EXPECT_EQ(trials.back().id, "NoiseAM.DTWEnvelope.0002");
  int wavs = 0;
  for (const auto& e : fs::directory_iterator(dir / kWavDir)) {
    ++wavs;
    EXPECT_EQ(DecodeWav(ReadFile(e.path())).size(), kSignalLength);
  }
  EXPECT_EQ(wavs, 24);
  EXPECT_EQ(ReadFile(dir / kTimingsFile).find("\"seconds\"") != std::string::npos, true);

  const std::string before = ReadFile(dir / kTrialsFile);
  const RunSummary again = RunMatrix(c);
  EXPECT_EQ(again.completed, 0);
  EXPECT_EQ(again.skipped, 12);
  EXPECT_EQ(ReadFile(dir / kTrialsFile), before);

  // A crash mid-write leaves a torn last line; the rerun replaces it.
  const std::size_t cut = before.rfind('\n', before.size() - 2) + 1;
  {
    std::ofstream out(dir / kTrialsFile, std::ios::binary | std::ios::trunc);
    out << before.substr(0, cut + 40);
  }
  EXPECT_EQ(ReadTrials((dir / kTrialsFile).string()).size(), 11u);
  const RunSummary healed = RunMatrix(c);
  EXPECT_EQ(healed.completed, 1);
  EXPECT_EQ(ReadFile(dir / kTrialsFile), before);
}

TEST(RunMatrixTest, WorkerCountDoesNotChangeOutput) {
  const fs::path a = FreshDir("w1"), b = FreshDir("w3");
  RunConfig ca = SmallConfig(a), cb = SmallConfig(b);
  ca.write_wav = cb.write_wav = false;
  ca.workers = 1;
  cb.workers = 3;
  RunMatrix(ca);
  RunMatrix(cb);
  EXPECT_EQ(ReadFile(a / kTrialsFile), ReadFile(b / kTrialsFile));
}

TEST(RunMatrixTest, UnwritableOutput) {
  RunConfig c = SmallConfig("/proc/soundmatch_cannot_write");
  EXPECT_THROW(RunMatrix(c), std::runtime_error);
}

TEST(EvaluateTrialsTest, OrderAndParallelism) {
  MatchConfig m;
  m.max_iterations = 2;
  std::vector<TrialRecord> trials;
  for (int i = 0; i < 5; ++i) trials.push_back(RunTrial(ProgramId::kNoiseAM, LossId::kL1Spec, i, i, m));
  const auto one = EvaluateTrials(trials, 1), many = EvaluateTrials(trials, 4);
  ASSERT_EQ(one.size(), 5u);
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_EQ(one[i].trial_id, trials[i].id);
    EXPECT_EQ(SerializeEval(one[i]), SerializeEval(many[i]));
  }
}

TEST(SweepTest, ShapeAndNormalization) {
  SweepSpec spec;
  spec.variant = SweepVariant::kSNoiseAM;
  spec.grid = 16;
  const SweepTable t = SweepLandscape(spec);
  EXPECT_EQ(t.grid.size(), 16u);
  EXPECT_DOUBLE_EQ(t.grid.front(), 0.1);
  EXPECT_DOUBLE_EQ(t.grid.back(), 20.0);
  EXPECT_EQ(t.target, 5.0);
  for (const auto& col : t.normalized) {
    ASSERT_EQ(col.size(), 16u);
    EXPECT_DOUBLE_EQ(*std::min_element(col.begin(), col.end()), 0.0);
    EXPECT_DOUBLE_EQ(*std::max_element(col.begin(), col.end()), 1.0);
  }
  const std::string tsv = SweepToTsv(t);
  EXPECT_EQ(std::count(tsv.begin(), tsv.end(), '\n'), 17);
  EXPECT_EQ(tsv.substr(0, tsv.find('\n')), "rate\tL1Spec\tSIMSESpec\tJTFS\tDTWEnvelope");

  SweepSpec bad;
  bad.grid = 8;
  EXPECT_THROW(SweepLandscape(bad), ConfigError);
  bad.grid = 32;
  bad.target = 50.0;
  EXPECT_THROW(SweepLandscape(bad), ConfigError);
}

TEST(RankingJsonTest, Serializes) {
  std::vector<EvalResult> evals;
  for (int i = 0; i < 10; ++i) {
    evals.push_back({"a" + std::to_string(i), ProgramId::kNoiseAM, LossId::kL1Spec, 0.1 * i, 1, false});
    evals.push_back({"b" + std::to_string(i), ProgramId::kNoiseAM, LossId::kJtfs, 1 + 0.1 * i, 2, false});
  }
  RankingOptions o;
  o.bootstrap_samples = 50;
  const std::string j = RankingToJson(BuildRankingReport(evals, nullptr, o));
  EXPECT_NE(j.find("NoiseAM"), std::string::npos);
  EXPECT_NE(j.find("P-Loss"), std::string::npos);
}

}  // namespace
}  // namespace soundmatch
