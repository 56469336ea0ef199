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

// Automatic match quality measures and Likert score bookkeeping.

#ifndef SOUNDMATCH_EVALUATION_H_
#define SOUNDMATCH_EVALUATION_H_

#include <array>
#include <map>
#include <set>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "soundmatch/matcher.h"
#include "soundmatch/synth.h"

namespace soundmatch {

// Mean absolute difference of normalized parameters. Both must already be
// clamped into [0, 1].
double PLoss(const ParamVector& final, const ParamVector& target);

inline constexpr std::array<std::size_t, 4> kMssFftSizes = {512, 1024, 2048, 4096};
inline constexpr std::size_t kMssHop = 100;

// Multi-scale spectral distance: the mean, over Hann windows of 512 to 4096
// samples (window = FFT size, hop 100), of the mean absolute magnitude
// difference. Both inputs are peak-normalized first.
double Mss(std::span<const double> output, std::span<const double> target);

struct EvalResult {
  std::string trial_id;
  ProgramId program = ProgramId::kBPNoise;
  LossId loss = LossId::kL1Spec;
  double p_loss = 0.0;
  double mss = 0.0;
  bool failed = false;
};

EvalResult Evaluate(const TrialRecord& record);

struct LikertScore {
  std::string trial_id;
  std::string rater_id;
  int score = 0;
  std::string timestamp;
};

// Throws std::invalid_argument unless 1 <= score <= 5.
void ValidateLikertScore(int score);

// Scores accepted so far, with pooled per-(program, loss) lists. Pools keep
// submission order; that is, raters' scores concatenated as they arrive.
class LikertDataset {
 public:
  // trial id -> (program, loss) for every known trial.
  explicit LikertDataset(std::map<std::string, std::pair<ProgramId, LossId>> trials);

  // Returns an empty string on success, otherwise the rejection reason; the
  // dataset is unchanged on rejection.
  std::string Ingest(const LikertScore& s);

  const std::vector<LikertScore>& scores() const { return scores_; }
  std::vector<int> Pool(ProgramId program, LossId loss) const;
  // Scores by trial for one rater.
  std::map<std::string, int> ByRater(const std::string& rater) const;

 private:
  std::map<std::string, std::pair<ProgramId, LossId>> trials_;
  std::set<std::pair<std::string, std::string>> seen_;
  std::vector<LikertScore> scores_;
};

}  // namespace soundmatch

#endif  // SOUNDMATCH_EVALUATION_H_
