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

#include "soundmatch/statistics.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <random>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/students_t.hpp>

#include "soundmatch/seed.h"

namespace soundmatch {

BootstrapDistribution Bootstrap(std::span<const double> values, int k, std::uint64_t seed) {
  if (values.empty()) throw std::invalid_argument("bootstrap needs at least one value");
  if (k < 1) throw std::invalid_argument("bootstrap needs k >= 1");
  BootstrapDistribution d;
  d.source_size = values.size();
  d.seed = seed;
  d.means.resize(k);
  std::mt19937_64 rng(seed);
  const double n = static_cast<double>(values.size());
  for (int s = 0; s < k; ++s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < values.size(); ++i) {
      const auto j = static_cast<std::size_t>(UniformUnit(rng) * n);
      sum += values[std::min(j, values.size() - 1)];
    }
    d.means[s] = sum / n;
  }
  return d;
}

std::vector<double> MidRanks(std::span<const double> values) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i + 1;
    while (j < order.size() && values[order[j]] == values[order[i]]) ++j;
    const double mid = 0.5 * static_cast<double>(i + j + 1);
    for (std::size_t t = i; t < j; ++t) ranks[order[t]] = mid;
    i = j;
  }
  return ranks;
}

KruskalWallisResult KruskalWallis(const std::vector<std::vector<double>>& groups, double alpha) {
  if (groups.size() < 2) throw std::invalid_argument("kruskal-wallis needs >= 2 groups");
  std::vector<double> pooled;
  for (const auto& g : groups) {
    if (g.empty()) throw std::invalid_argument("kruskal-wallis group is empty");
    pooled.insert(pooled.end(), g.begin(), g.end());
  }
  const std::vector<double> ranks = MidRanks(pooled);
  const double n = static_cast<double>(pooled.size());

  double sum = 0.0;
  std::size_t offset = 0;
  for (const auto& g : groups) {
    double r = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) r += ranks[offset + i];
    sum += r * r / static_cast<double>(g.size());
    offset += g.size();
  }

  // tie correction 1 - sum(t^3 - t) / (N^3 - N)
  std::vector<double> sorted = pooled;
  std::sort(sorted.begin(), sorted.end());
  double ties = 0.0;
  for (std::size_t i = 0; i < sorted.size();) {
    std::size_t j = i + 1;
    while (j < sorted.size() && sorted[j] == sorted[i]) ++j;
    const double t = static_cast<double>(j - i);
    ties += t * t * t - t;
    i = j;
  }
  const double correction = 1.0 - ties / (n * n * n - n);

  KruskalWallisResult r;
  r.df = static_cast<int>(groups.size()) - 1;
  if (correction <= 0.0) return r;  // all values tied
  r.h = std::max(0.0, (12.0 / (n * (n + 1.0)) * sum - 3.0 * (n + 1.0)) / correction);
  r.p = boost::math::cdf(boost::math::complement(boost::math::chi_squared(r.df), r.h));
  r.reject = r.p < alpha;
  return r;
}

double CliffsDelta(std::span<const double> a, std::span<const double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("cliff's delta needs data");
  std::vector<double> sb(b.begin(), b.end());
  std::sort(sb.begin(), sb.end());
  double more = 0.0, less = 0.0;
  for (double x : a) {
    less += static_cast<double>(sb.end() - std::upper_bound(sb.begin(), sb.end(), x));
    more += static_cast<double>(std::lower_bound(sb.begin(), sb.end(), x) - sb.begin());
  }
  return (more - less) / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

namespace {

double Median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

std::vector<double> PoolRange(const std::vector<const std::vector<double>*>& groups,
                              std::size_t lo, std::size_t hi) {
  std::vector<double> out;
  for (std::size_t g = lo; g < hi; ++g) out.insert(out.end(), groups[g]->begin(), groups[g]->end());
  return out;
}

void Split(const std::vector<const std::vector<double>*>& groups, std::size_t lo, std::size_t hi,
           std::vector<std::size_t>& cuts) {
  if (hi - lo < 2) return;
  std::vector<double> sums(hi - lo), counts(hi - lo);
  for (std::size_t g = lo; g < hi; ++g) {
    sums[g - lo] = std::accumulate(groups[g]->begin(), groups[g]->end(), 0.0);
    counts[g - lo] = static_cast<double>(groups[g]->size());
  }
  const double total = std::accumulate(sums.begin(), sums.end(), 0.0);
  const double count = std::accumulate(counts.begin(), counts.end(), 0.0);
  const double grand = total / count;

  std::size_t best = lo + 1;
  double best_ss = -1.0;
  double left_sum = 0.0, left_count = 0.0;
  for (std::size_t s = lo + 1; s < hi; ++s) {
    left_sum += sums[s - 1 - lo];
    left_count += counts[s - 1 - lo];
    const double ml = left_sum / left_count;
    const double mr = (total - left_sum) / (count - left_count);
    const double ss = left_count * (ml - grand) * (ml - grand) +
                      (count - left_count) * (mr - grand) * (mr - grand);
    if (ss > best_ss) {
      best_ss = ss;
      best = s;
    }
  }

  const std::vector<double> left = PoolRange(groups, lo, best);
  const std::vector<double> right = PoolRange(groups, best, hi);
  const KruskalWallisResult kw = KruskalWallis({left, right});
  if (!kw.reject || std::abs(CliffsDelta(left, right)) < kNegligibleDelta) return;
  Split(groups, lo, best, cuts);
  cuts.push_back(best);
  Split(groups, best, hi, cuts);
}

}  // namespace

std::vector<int> NpskRank(const std::vector<std::vector<double>>& groups, Direction direction) {
  if (groups.size() < 2) throw std::invalid_argument("npsk needs >= 2 groups");
  std::vector<double> medians(groups.size());
  for (std::size_t g = 0; g < groups.size(); ++g) {
    if (groups[g].empty()) throw std::invalid_argument("npsk group is empty");
    medians[g] = Median(groups[g]);
  }
  std::vector<std::size_t> order(groups.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return direction == Direction::kLowerBetter ? medians[a] < medians[b]
                                                : medians[a] > medians[b];
  });
  std::vector<const std::vector<double>*> sorted;
  for (std::size_t g : order) sorted.push_back(&groups[g]);

  std::vector<std::size_t> cuts;
  Split(sorted, 0, sorted.size(), cuts);

  std::vector<int> ranks(groups.size());
  int rank = 1;
  std::size_t next_cut = 0;
  for (std::size_t pos = 0; pos < sorted.size(); ++pos) {
    if (next_cut < cuts.size() && cuts[next_cut] == pos) {
      ++rank;
      ++next_cut;
    }
    ranks[order[pos]] = rank;
  }
  return ranks;
}

SpearmanResult Spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("spearman inputs differ in length");
  if (x.size() < 3) throw std::invalid_argument("spearman needs at least 3 pairs");
  const std::vector<double> rx = MidRanks(x), ry = MidRanks(y);
  const double n = static_cast<double>(x.size());
  const double mx = std::accumulate(rx.begin(), rx.end(), 0.0) / n;
  const double my = std::accumulate(ry.begin(), ry.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    sxy += (rx[i] - mx) * (ry[i] - my);
    sxx += (rx[i] - mx) * (rx[i] - mx);
    syy += (ry[i] - my) * (ry[i] - my);
  }
  if (sxx == 0.0 || syy == 0.0) throw std::domain_error("spearman rho undefined for constant input");
  SpearmanResult r;
  r.rho = std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
  if (std::abs(r.rho) >= 1.0) {
    r.p = 0.0;
  } else {
    const double t = r.rho * std::sqrt((n - 2.0) / (1.0 - r.rho * r.rho));
    r.p = 2.0 * boost::math::cdf(boost::math::complement(boost::math::students_t(n - 2.0),
                                                         std::abs(t)));
  }
  return r;
}

std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kMss:
      return "MSS";
    case Method::kPLoss:
      return "P-Loss";
    case Method::kLikert:
      return "Likert";
  }
  return "?";
}

Direction MethodDirection(Method m) {
  return m == Method::kLikert ? Direction::kHigherBetter : Direction::kLowerBetter;
}

const MethodRanking* RankingReport::Find(ProgramId program, Method method) const {
  for (const ProgramRanking& p : programs) {
    if (p.program != program) continue;
    for (const MethodRanking& m : p.methods) {
      if (m.method == method) return &m;
    }
  }
  return nullptr;
}

std::string RankingReport::ToText() const {
  std::vector<std::string> headers{"Loss"};
  std::vector<const MethodRanking*> columns;
  for (const ProgramRanking& p : programs) {
    for (const MethodRanking& m : p.methods) {
      headers.push_back(std::string(ProgramName(p.program)) + "/" + std::string(MethodName(m.method)));
      columns.push_back(&m);
    }
  }
  std::vector<std::vector<std::string>> rows;
  for (LossId loss : kAllLosses) {
    std::vector<std::string> row{std::string(LossName(loss))};
    bool any = false;
    for (const MethodRanking* m : columns) {
      const auto it = m->ranks.find(loss);
      if (it == m->ranks.end()) {
        row.push_back("-");
      } else {
        row.push_back(std::to_string(it->second));
        any = true;
      }
    }
    if (any) rows.push_back(row);
  }
  std::vector<std::string> kw_h{"KW H"}, kw_p{"KW p"};
  for (const MethodRanking* m : columns) {
    std::ostringstream h, p;
    h << std::fixed << std::setprecision(2) << m->kw.h;
    p << std::scientific << std::setprecision(2) << m->kw.p;
    kw_h.push_back(h.str());
    kw_p.push_back(p.str() + (m->kw.reject ? "*" : ""));
  }
  rows.push_back(kw_h);
  rows.push_back(kw_p);

  std::vector<std::size_t> width(headers.size());
  for (std::size_t c = 0; c < headers.size(); ++c) {
    width[c] = headers[c].size();
    for (const auto& r : rows) width[c] = std::max(width[c], r[c].size());
  }
  std::ostringstream out;
  auto emit = [&](const std::vector<std::string>& r) {
    for (std::size_t c = 0; c < r.size(); ++c) {
      out << (c ? "  " : "") << std::setw(static_cast<int>(width[c]))
          << (c ? std::right : std::left) << r[c];
    }
    out << "\n";
  };
  emit(headers);
  for (const auto& r : rows) emit(r);
  return out.str();
}

RankingReport BuildRankingReport(const std::vector<EvalResult>& results,
                                 const LikertDataset* likert, const RankingOptions& options) {
  RankingReport report;
  report.bootstrap_samples = options.bootstrap_samples;
  report.seed = options.seed;
  for (ProgramId program : kAllPrograms) {
    ProgramRanking pr;
    pr.program = program;
    for (Method method : {Method::kMss, Method::kPLoss, Method::kLikert}) {
      std::map<LossId, std::vector<double>> values;
      if (method == Method::kLikert) {
        if (!likert) continue;
        for (LossId loss : kAllLosses) {
          for (int s : likert->Pool(program, loss)) values[loss].push_back(s);
        }
      } else {
        for (const EvalResult& r : results) {
          if (r.program != program || (r.failed && !options.include_failed)) continue;
          values[r.loss].push_back(method == Method::kMss ? r.mss : r.p_loss);
        }
      }
      if (values.size() < 2) continue;

      MethodRanking mr;
      mr.method = method;
      std::vector<LossId> ids;
      std::vector<std::vector<double>> dists;
      for (const auto& [loss, v] : values) {
        const std::uint64_t seed = HashSeed({options.seed, static_cast<std::uint64_t>(program),
                                             static_cast<std::uint64_t>(method),
                                             static_cast<std::uint64_t>(loss)});
        BootstrapDistribution d = Bootstrap(v, options.bootstrap_samples, seed);
        ids.push_back(loss);
        mr.mean[loss] = std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
        mr.samples[loss] = v.size();
        dists.push_back(std::move(d.means));
      }
      mr.kw = KruskalWallis(dists);
      const std::vector<int> ranks = NpskRank(dists, MethodDirection(method));
      for (std::size_t i = 0; i < ids.size(); ++i) mr.ranks[ids[i]] = ranks[i];
      pr.methods.push_back(std::move(mr));
    }
    if (!pr.methods.empty()) report.programs.push_back(std::move(pr));
  }
  return report;
}

}  // namespace soundmatch
