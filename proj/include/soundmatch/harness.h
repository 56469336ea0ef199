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

// Experiment orchestration: run configuration, the trial matrix, persisted
// datasets, WAV export and loss-landscape sweeps.

#ifndef SOUNDMATCH_HARNESS_H_
#define SOUNDMATCH_HARNESS_H_

#include <array>
#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "soundmatch/evaluation.h"
#include "soundmatch/matcher.h"
#include "soundmatch/statistics.h"

namespace soundmatch {

inline constexpr int kDatasetVersion = 1;
inline constexpr std::uint64_t kDefaultMasterSeed = 20260;

inline constexpr std::string_view kTrialsFile = "trials.jsonl";
inline constexpr std::string_view kTimingsFile = "timings.jsonl";
inline constexpr std::string_view kEvalFile = "eval.jsonl";
inline constexpr std::string_view kLikertFile = "likert.jsonl";
inline constexpr std::string_view kRankingJsonFile = "ranking.json";
inline constexpr std::string_view kRankingTextFile = "ranking.txt";
inline constexpr std::string_view kWavDir = "wav";

// Invalid configuration; the command line maps it to exit status 2.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RunConfig {
  std::vector<ProgramId> programs{kAllPrograms.begin(), kAllPrograms.end()};
  std::vector<LossId> losses{kAllLosses.begin(), kAllLosses.end()};
  int trials_per_combo = 300;
  MatchConfig match;
  std::uint64_t master_seed = kDefaultMasterSeed;
  int workers = 1;
  std::string output_dir = "out";
  bool write_wav = true;

  // Throws ConfigError.
  void Validate() const;
};

// Parses a JSON object; unknown keys and bad values raise ConfigError.
RunConfig ParseRunConfig(std::string_view json_text);
RunConfig LoadRunConfig(const std::string& path);
std::string RunConfigToJson(const RunConfig& config);

// Stable per-trial seed; independent of scheduling.
std::uint64_t TrialSeed(std::uint64_t master_seed, ProgramId program, LossId loss, int index);

// One JSON object per line. Parse throws std::invalid_argument.
std::string SerializeTrial(const TrialRecord& record);
TrialRecord ParseTrial(std::string_view line);
std::string SerializeEval(const EvalResult& result);
EvalResult ParseEval(std::string_view line);
std::string SerializeLikert(const LikertScore& score);
LikertScore ParseLikert(std::string_view line);

// Reads every complete line; a torn trailing line (no newline) is ignored.
std::vector<TrialRecord> ReadTrials(const std::string& path);
std::vector<EvalResult> ReadEvals(const std::string& path);
std::vector<LikertScore> ReadLikert(const std::string& path);

// 16-bit PCM mono RIFF. Samples are clipped to [-1, 1].
std::string EncodeWav(std::span<const double> samples, int sample_rate = kSampleRate);
// Inverse of EncodeWav for 16-bit mono files; throws std::invalid_argument.
std::vector<double> DecodeWav(std::string_view bytes, int* sample_rate = nullptr);
void WriteWav(const std::string& path, std::span<const double> samples);
void WriteTrialWavs(const std::string& dir, const TrialRecord& record);

struct RunSummary {
  int completed = 0;
  int skipped = 0;
  int failed = 0;
  double seconds = 0.0;
};

// Runs every (program, loss, index) job not already in the dataset and
// appends records in canonical order, whatever the worker count. `progress`
// is called from the writer after each record.
RunSummary RunMatrix(const RunConfig& config,
                     const std::function<void(const TrialRecord&)>& progress = {});

std::vector<EvalResult> EvaluateTrials(const std::vector<TrialRecord>& trials, int workers = 1);

std::string RankingToJson(const RankingReport& report);

struct SweepSpec {
  SweepVariant variant = SweepVariant::kHPNoise;
  int grid = 128;
  // Defaults to the variant's default value when unset (NaN).
  double target = std::numeric_limits<double>::quiet_NaN();
  std::uint32_t noise_seed = 1;
  LossConfig loss;

  void Validate() const;
};

struct SweepTable {
  SweepVariant variant = SweepVariant::kHPNoise;
  double target = 0.0;
  int target_cell = 0;  // grid point closest to the target on a log axis
  std::vector<double> grid;
  std::array<std::vector<double>, 4> raw;         // indexed like kAllLosses
  std::array<std::vector<double>, 4> normalized;  // min-max scaled per column
};

// Log-spaced grid over the variant's range; every loss against one target.
SweepTable SweepLandscape(const SweepSpec& spec);
// Tab-separated: parameter value then the four normalized loss columns.
std::string SweepToTsv(const SweepTable& table);

}  // namespace soundmatch

#endif  // SOUNDMATCH_HARNESS_H_
