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

#include "soundmatch/evaluation.h"

#include <cmath>
#include <stdexcept>

#include "soundmatch/dsp.h"

namespace soundmatch {

double PLoss(const ParamVector& final, const ParamVector& target) {
  double sum = 0.0;
  for (std::size_t i = 0; i < kNumParams; ++i) {
    sum += std::abs(final.normalized[i] - target.normalized[i]);
  }
  return sum / kNumParams;
}

double Mss(std::span<const double> output, std::span<const double> target) {
  if (output.size() != target.size()) {
    throw std::invalid_argument("mss inputs differ in length");
  }
  const std::vector<double> a = PeakNormalize(output);
  const std::vector<double> b = PeakNormalize(target);
  double total = 0.0;
  for (std::size_t fft : kMssFftSizes) {
    const StftConfig config{fft, fft, kMssHop};
    const Spectrogram<double> sa = StftMagnitude<double>(a, config);
    const Spectrogram<double> sb = StftMagnitude<double>(b, config);
    double sum = 0.0;
    for (std::size_t i = 0; i < sa.magnitudes.size(); ++i) {
      sum += std::abs(sa.magnitudes[i] - sb.magnitudes[i]);
    }
    total += sum / static_cast<double>(sa.magnitudes.size());
  }
  return total / static_cast<double>(kMssFftSizes.size());
}

EvalResult Evaluate(const TrialRecord& record) {
  const SynthProgram program = SynthProgram::Make(record.program);
  EvalResult r;
  r.trial_id = record.id;
  r.program = record.program;
  r.loss = record.loss;
  r.failed = record.status != TrialStatus::kOk;
  r.p_loss = PLoss(record.ClampedFinal(program), record.target);
  r.mss = Mss(RenderFinal(record), RenderTarget(record));
  return r;
}

void ValidateLikertScore(int score) {
  if (score < 1 || score > 5) {
    throw std::invalid_argument("likert score must be an integer in 1..5");
  }
}

LikertDataset::LikertDataset(std::map<std::string, std::pair<ProgramId, LossId>> trials)
    : trials_(std::move(trials)) {}

std::string LikertDataset::Ingest(const LikertScore& s) {
  if (s.score < 1 || s.score > 5) return "score out of range 1..5";
  if (!trials_.count(s.trial_id)) return "unknown trial id '" + s.trial_id + "'";
  if (s.rater_id.empty()) return "empty rater id";
  if (!seen_.insert({s.trial_id, s.rater_id}).second) {
    return "duplicate rating of '" + s.trial_id + "' by '" + s.rater_id + "'";
  }
  scores_.push_back(s);
  return {};
}

std::vector<int> LikertDataset::Pool(ProgramId program, LossId loss) const {
  std::vector<int> out;
  for (const LikertScore& s : scores_) {
    const auto& combo = trials_.at(s.trial_id);
    if (combo.first == program && combo.second == loss) out.push_back(s.score);
  }
  return out;
}

std::map<std::string, int> LikertDataset::ByRater(const std::string& rater) const {
  std::map<std::string, int> out;
  for (const LikertScore& s : scores_) {
    if (s.rater_id == rater) out[s.trial_id] = s.score;
  }
  return out;
}

}  // namespace soundmatch
