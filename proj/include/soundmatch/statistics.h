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

// Ranking statistics: bootstrap, Kruskal-Wallis, non-parametric Scott-Knott
// clustering and Spearman correlation.

#ifndef SOUNDMATCH_STATISTICS_H_
#define SOUNDMATCH_STATISTICS_H_

#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "soundmatch/evaluation.h"

namespace soundmatch {

inline constexpr double kSignificance = 0.05;
inline constexpr double kNegligibleDelta = 0.147;
inline constexpr int kBootstrapSamples = 1000;

struct BootstrapDistribution {
  std::vector<double> means;
  std::size_t source_size = 0;
  std::uint64_t seed = 0;
};

// k means of with-replacement resamples of the full input. Throws
// std::invalid_argument for empty input or k < 1.
BootstrapDistribution Bootstrap(std::span<const double> values, int k = kBootstrapSamples,
                                std::uint64_t seed = 0);

// 1-based ranks, ties sharing their mean rank.
std::vector<double> MidRanks(std::span<const double> values);

struct KruskalWallisResult {
  double h = 0.0;
  double p = 1.0;
  int df = 0;
  bool reject = false;
};

// Tie-corrected H with a chi-square(groups - 1) p-value. Throws
// std::invalid_argument for fewer than two groups or an empty group.
KruskalWallisResult KruskalWallis(const std::vector<std::vector<double>>& groups,
                                  double alpha = kSignificance);

// (#{a > b} - #{a < b}) / (|a| |b|).
double CliffsDelta(std::span<const double> a, std::span<const double> b);

enum class Direction { kLowerBetter, kHigherBetter };

// Rank (1 = best) per input group. Groups are ordered by median, best first,
// then split recursively into contiguous blocks. Each step picks the split
// maximizing the between-block sum of squares of the pooled values and keeps
// it only if Kruskal-Wallis on the two blocks rejects and |Cliff's delta| is
// at least 0.147. Throws std::invalid_argument for fewer than two groups.
std::vector<int> NpskRank(const std::vector<std::vector<double>>& groups, Direction direction);

struct SpearmanResult {
  double rho = 0.0;
  double p = 1.0;
};

// Pearson correlation of midranks, two-sided p from the t approximation.
// Throws std::invalid_argument for unequal lengths or n < 3 and
// std::domain_error when either input is constant.
SpearmanResult Spearman(std::span<const double> x, std::span<const double> y);

enum class Method { kMss, kPLoss, kLikert };
std::string_view MethodName(Method m);
Direction MethodDirection(Method m);

struct MethodRanking {
  Method method = Method::kMss;
  KruskalWallisResult kw;
  std::map<LossId, int> ranks;
  std::map<LossId, double> mean;
  std::map<LossId, std::size_t> samples;
};

struct ProgramRanking {
  ProgramId program = ProgramId::kBPNoise;
  std::vector<MethodRanking> methods;
};

struct RankingReport {
  std::vector<ProgramRanking> programs;
  int bootstrap_samples = kBootstrapSamples;
  std::uint64_t seed = 0;

  const MethodRanking* Find(ProgramId program, Method method) const;
  // Aligned table: one row per loss, one column per (program, method).
  std::string ToText() const;
};

struct RankingOptions {
  int bootstrap_samples = kBootstrapSamples;
  std::uint64_t seed = 0;
  bool include_failed = false;
};

// Ranks every program with at least two losses present. Likert ranks are
// added when `likert` is given and holds scores for the program.
RankingReport BuildRankingReport(const std::vector<EvalResult>& results,
                                 const LikertDataset* likert, const RankingOptions& options = {});

}  // namespace soundmatch

#endif  // SOUNDMATCH_STATISTICS_H_
