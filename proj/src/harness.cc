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

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <condition_variable>
#include <cstdio>
#include <cstring>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

#include "json.hpp"
#include "soundmatch/seed.h"

namespace soundmatch {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

template <typename T, typename Parse>
std::vector<T> ParseList(const Json& j, const char* key, Parse parse) {
  if (!j.is_array() || j.empty()) throw ConfigError(std::string(key) + " must be a non-empty array");
  std::vector<T> out;
  for (const Json& item : j) {
    if (!item.is_string()) throw ConfigError(std::string(key) + " entries must be strings");
    try {
      out.push_back(parse(item.get<std::string>()));
    } catch (const std::invalid_argument& e) {
      throw ConfigError(e.what());
    }
  }
  return out;
}

double GetNumber(const Json& j, const char* key) {
  if (!j.is_number()) throw ConfigError(std::string(key) + " must be a number");
  return j.get<double>();
}

std::int64_t GetInteger(const Json& j, const char* key) {
  if (!j.is_number_integer()) throw ConfigError(std::string(key) + " must be an integer");
  return j.get<std::int64_t>();
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Complete lines only; a trailing fragment without newline is dropped.
std::vector<std::string> ReadLines(const std::string& path) {
  std::vector<std::string> lines;
  if (!fs::exists(path)) return lines;
  const std::string text = ReadFile(path);
  std::size_t start = 0;
  for (std::size_t nl; (nl = text.find('\n', start)) != std::string::npos; start = nl + 1) {
    if (nl > start) lines.push_back(text.substr(start, nl - start));
  }
  return lines;
}

// Drops a torn final line left by an interrupted writer.
void TruncateTornLine(const std::string& path) {
  if (!fs::exists(path)) return;
  const std::string text = ReadFile(path);
  if (text.empty() || text.back() == '\n') return;
  const std::size_t nl = text.rfind('\n');
  fs::resize_file(path, nl == std::string::npos ? 0 : nl + 1);
}

Json NumberOrNull(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

double NumberOrNan(const Json& j) {
  return j.is_null() ? std::numeric_limits<double>::quiet_NaN() : j.get<double>();
}

Json ParamsJson(const ParamVector& p) {
  Json j;
  j["raw"] = {NumberOrNull(p.raw[0]), NumberOrNull(p.raw[1])};
  j["normalized"] = {NumberOrNull(p.normalized[0]), NumberOrNull(p.normalized[1])};
  return j;
}

ParamVector ParseParams(const Json& j) {
  ParamVector p;
  for (std::size_t i = 0; i < kNumParams; ++i) {
    p.raw[i] = NumberOrNan(j.at("raw").at(i));
    p.normalized[i] = NumberOrNan(j.at("normalized").at(i));
  }
  return p;
}

Json ParseLine(std::string_view line) {
  Json j;
  try {
    j = Json::parse(line);
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("malformed record: ") + e.what());
  }
  if (!j.is_object()) throw std::invalid_argument("record is not an object");
  if (!j.contains("version") || j["version"] != kDatasetVersion) {
    throw std::invalid_argument("unsupported or missing record version");
  }
  return j;
}

template <typename F>
auto Guard(F f) {
  try {
    return f();
  } catch (const Json::exception& e) {
    throw std::invalid_argument(std::string("bad record field: ") + e.what());
  }
}

void AppendLine(std::ofstream& out, const std::string& line) {
  out << line << '\n';
  out.flush();
  if (!out) throw std::runtime_error("write failed");
}

struct Job {
  ProgramId program;
  LossId loss;
  int index;
};

// Runs `work(i)` for i in [0, n) on `workers` threads and hands results to
// `sink` on the calling thread in index order.
template <typename R>
void OrderedParallel(std::size_t n, int workers, const std::function<R(std::size_t)>& work,
                     const std::function<void(std::size_t, R&)>& sink) {
  struct Slot {
    std::optional<R> value;
    std::exception_ptr error;
  };
  std::vector<Slot> slots(n);
  std::atomic<std::size_t> next{0};
  std::atomic<bool> stop{false};
  std::mutex mu;
  std::condition_variable cv;
  auto run = [&] {
    for (std::size_t i; !stop && (i = next++) < n;) {
      Slot s;
      try {
        s.value = work(i);
      } catch (...) {
        s.error = std::current_exception();
      }
      std::lock_guard<std::mutex> lock(mu);
      slots[i] = std::move(s);
      cv.notify_all();
    }
  };
  std::vector<std::thread> threads;
  const int count = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  for (int t = 0; t < count; ++t) threads.emplace_back(run);

  std::exception_ptr failure;
  for (std::size_t i = 0; i < n && !failure; ++i) {
    Slot s;
    {
      std::unique_lock<std::mutex> lock(mu);
      cv.wait(lock, [&] { return slots[i].value.has_value() || slots[i].error; });
      s = std::move(slots[i]);
      slots[i] = Slot{};
    }
    if (s.error) {
      failure = s.error;
      break;
    }
    try {
      sink(i, *s.value);
    } catch (...) {
      failure = std::current_exception();
    }
  }
  stop = true;
  for (std::thread& t : threads) t.join();
  if (failure) std::rethrow_exception(failure);
}

}  // namespace

void RunConfig::Validate() const {
  if (programs.empty()) throw ConfigError("programs must not be empty");
  if (losses.empty()) throw ConfigError("losses must not be empty");
  if (std::set<ProgramId>(programs.begin(), programs.end()).size() != programs.size()) {
    throw ConfigError("programs contain duplicates");
  }
  if (std::set<LossId>(losses.begin(), losses.end()).size() != losses.size()) {
    throw ConfigError("losses contain duplicates");
  }
  if (trials_per_combo < 1) throw ConfigError("trials_per_combo must be >= 1");
  if (trials_per_combo > 9999) throw ConfigError("trials_per_combo must be <= 9999");
  if (workers < 1) throw ConfigError("workers must be >= 1");
  if (output_dir.empty()) throw ConfigError("output_dir must not be empty");
  try {
    match.Validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

RunConfig ParseRunConfig(std::string_view json_text) {
  Json j;
  try {
    j = Json::parse(json_text);
  } catch (const Json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, v] : j.items()) {
    if (key == "programs") {
      c.programs = ParseList<ProgramId>(v, "programs", ParseProgram);
    } else if (key == "losses") {
      c.losses = ParseList<LossId>(v, "losses", ParseLoss);
    } else if (key == "trials_per_combo") {
      c.trials_per_combo = static_cast<int>(GetInteger(v, "trials_per_combo"));
    } else if (key == "max_iterations") {
      c.match.max_iterations = static_cast<int>(GetInteger(v, "max_iterations"));
    } else if (key == "param_stride") {
      c.match.param_stride = static_cast<int>(GetInteger(v, "param_stride"));
    } else if (key == "lr") {
      c.match.lr = GetNumber(v, "lr");
    } else if (key == "decay") {
      c.match.decay = GetNumber(v, "decay");
    } else if (key == "eps") {
      c.match.eps = GetNumber(v, "eps");
    } else if (key == "clip_threshold") {
      c.match.clip_threshold = GetNumber(v, "clip_threshold");
    } else if (key == "dtw_gamma") {
      c.match.loss.dtw_gamma = GetNumber(v, "dtw_gamma");
    } else if (key == "master_seed") {
      if (!v.is_number_unsigned()) throw ConfigError("master_seed must be a non-negative integer");
      c.master_seed = v.get<std::uint64_t>();
    } else if (key == "workers") {
      c.workers = static_cast<int>(GetInteger(v, "workers"));
    } else if (key == "output_dir") {
      if (!v.is_string()) throw ConfigError("output_dir must be a string");
      c.output_dir = v.get<std::string>();
    } else if (key == "write_wav") {
      if (!v.is_boolean()) throw ConfigError("write_wav must be a boolean");
      c.write_wav = v.get<bool>();
    } else {
      throw ConfigError("unknown config key '" + key + "'");
    }
  }
  c.Validate();
  return c;
}

RunConfig LoadRunConfig(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ParseRunConfig(ss.str());
}

std::string RunConfigToJson(const RunConfig& c) {
  Json j;
  j["programs"] = Json::array();
  for (ProgramId p : c.programs) j["programs"].push_back(std::string(ProgramName(p)));
  j["losses"] = Json::array();
  for (LossId l : c.losses) j["losses"].push_back(std::string(LossName(l)));
  j["trials_per_combo"] = c.trials_per_combo;
  j["max_iterations"] = c.match.max_iterations;
  j["param_stride"] = c.match.param_stride;
  j["lr"] = c.match.lr;
  j["decay"] = c.match.decay;
  j["eps"] = c.match.eps;
  j["clip_threshold"] = c.match.clip_threshold;
  j["dtw_gamma"] = c.match.loss.dtw_gamma;
  j["master_seed"] = c.master_seed;
  j["workers"] = c.workers;
  j["output_dir"] = c.output_dir;
  j["write_wav"] = c.write_wav;
  return j.dump(2);
}

std::uint64_t TrialSeed(std::uint64_t master_seed, ProgramId program, LossId loss, int index) {
  return HashSeed({master_seed, static_cast<std::uint64_t>(program),
                   static_cast<std::uint64_t>(loss), static_cast<std::uint64_t>(index)});
}

std::string SerializeTrial(const TrialRecord& r) {
  Json j;
  j["version"] = kDatasetVersion;
  j["id"] = r.id;
  j["program"] = std::string(ProgramName(r.program));
  j["loss"] = std::string(LossName(r.loss));
  j["index"] = r.index;
  j["seed"] = r.seed;
  j["noise_seed"] = r.noise_seed;
  j["status"] = std::string(TrialStatusName(r.status));
  j["diverged"] = r.diverged;
  j["target"] = ParamsJson(r.target);
  j["initial"] = ParamsJson(r.initial);
  j["final"] = ParamsJson(r.final);
  j["losses"] = Json::array();
  for (double v : r.losses) j["losses"].push_back(NumberOrNull(v));
  j["trajectory"] = Json::array();
  for (const ParamSnapshot& s : r.trajectory) {
    j["trajectory"].push_back(
        {s.iteration, NumberOrNull(s.normalized[0]), NumberOrNull(s.normalized[1])});
  }
  return j.dump();
}

TrialRecord ParseTrial(std::string_view line) {
  const Json j = ParseLine(line);
  return Guard([&] {
    TrialRecord r;
    r.id = j.at("id").get<std::string>();
    r.program = ParseProgram(j.at("program").get<std::string>());
    r.loss = ParseLoss(j.at("loss").get<std::string>());
    r.index = j.at("index").get<int>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.noise_seed = j.at("noise_seed").get<std::uint32_t>();
    r.status = ParseTrialStatus(j.at("status").get<std::string>());
    r.diverged = j.at("diverged").get<bool>();
    r.target = ParseParams(j.at("target"));
    r.initial = ParseParams(j.at("initial"));
    r.final = ParseParams(j.at("final"));
    for (const Json& v : j.at("losses")) r.losses.push_back(NumberOrNan(v));
    for (const Json& s : j.at("trajectory")) {
      r.trajectory.push_back({s.at(0).get<int>(), {NumberOrNan(s.at(1)), NumberOrNan(s.at(2))}});
    }
    return r;
  });
}

std::string SerializeEval(const EvalResult& r) {
  Json j;
  j["version"] = kDatasetVersion;
  j["trial_id"] = r.trial_id;
  j["program"] = std::string(ProgramName(r.program));
  j["loss"] = std::string(LossName(r.loss));
  j["p_loss"] = NumberOrNull(r.p_loss);
  j["mss"] = NumberOrNull(r.mss);
  j["failed"] = r.failed;
  return j.dump();
}

EvalResult ParseEval(std::string_view line) {
  const Json j = ParseLine(line);
  return Guard([&] {
    EvalResult r;
    r.trial_id = j.at("trial_id").get<std::string>();
    r.program = ParseProgram(j.at("program").get<std::string>());
    r.loss = ParseLoss(j.at("loss").get<std::string>());
    r.p_loss = NumberOrNan(j.at("p_loss"));
    r.mss = NumberOrNan(j.at("mss"));
    r.failed = j.at("failed").get<bool>();
    return r;
  });
}

std::string SerializeLikert(const LikertScore& s) {
  Json j;
  j["version"] = kDatasetVersion;
  j["trial_id"] = s.trial_id;
  j["rater_id"] = s.rater_id;
  j["score"] = s.score;
  j["timestamp"] = s.timestamp;
  return j.dump();
}

LikertScore ParseLikert(std::string_view line) {
  const Json j = ParseLine(line);
  return Guard([&] {
    LikertScore s;
    s.trial_id = j.at("trial_id").get<std::string>();
    s.rater_id = j.at("rater_id").get<std::string>();
    if (!j.at("score").is_number_integer()) throw std::invalid_argument("score must be an integer");
    s.score = j.at("score").get<int>();
    ValidateLikertScore(s.score);
    s.timestamp = j.value("timestamp", "");
    return s;
  });
}

std::vector<TrialRecord> ReadTrials(const std::string& path) {
  std::vector<TrialRecord> out;
  for (const std::string& line : ReadLines(path)) out.push_back(ParseTrial(line));
  return out;
}

std::vector<EvalResult> ReadEvals(const std::string& path) {
  std::vector<EvalResult> out;
  for (const std::string& line : ReadLines(path)) out.push_back(ParseEval(line));
  return out;
}

std::vector<LikertScore> ReadLikert(const std::string& path) {
  std::vector<LikertScore> out;
  for (const std::string& line : ReadLines(path)) out.push_back(ParseLikert(line));
  return out;
}

std::string EncodeWav(std::span<const double> samples, int sample_rate) {
  const auto data_bytes = static_cast<std::uint32_t>(samples.size() * 2);
  std::string out;
  out.reserve(44 + data_bytes);
  auto u32 = [&](std::uint32_t v) {
    for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
  };
  auto u16 = [&](std::uint16_t v) {
    out.push_back(static_cast<char>(v & 0xff));
    out.push_back(static_cast<char>(v >> 8));
  };
  out += "RIFF";
  u32(36 + data_bytes);
  out += "WAVEfmt ";
  u32(16);
  u16(1);  // PCM
  u16(1);  // mono
  u32(static_cast<std::uint32_t>(sample_rate));
  u32(static_cast<std::uint32_t>(sample_rate) * 2);
  u16(2);
  u16(16);
  out += "data";
  u32(data_bytes);
  for (double x : samples) {
    const double c = std::isfinite(x) ? std::clamp(x, -1.0, 1.0) : 0.0;
    u16(static_cast<std::uint16_t>(static_cast<std::int16_t>(std::lround(c * 32767.0))));
  }
  return out;
}

std::vector<double> DecodeWav(std::string_view bytes, int* sample_rate) {
  auto u32 = [&](std::size_t at) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(bytes[at + i]);
    return v;
  };
  auto u16 = [&](std::size_t at) {
    return static_cast<std::uint16_t>(static_cast<unsigned char>(bytes[at]) |
                                      (static_cast<unsigned char>(bytes[at + 1]) << 8));
  };
  if (bytes.size() < 44 || bytes.substr(0, 4) != "RIFF" || bytes.substr(8, 4) != "WAVE") {
    throw std::invalid_argument("not a RIFF/WAVE file");
  }
  if (u16(20) != 1 || u16(22) != 1 || u16(34) != 16) {
    throw std::invalid_argument("expected 16-bit mono PCM");
  }
  if (sample_rate) *sample_rate = static_cast<int>(u32(24));
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::uint32_t size = u32(pos + 4);
    if (bytes.substr(pos, 4) == "data") {
      if (pos + 8 + size > bytes.size()) throw std::invalid_argument("truncated data chunk");
      std::vector<double> out(size / 2);
      for (std::size_t i = 0; i < out.size(); ++i) {
        out[i] = static_cast<std::int16_t>(u16(pos + 8 + 2 * i)) / 32767.0;
      }
      return out;
    }
    pos += 8 + size + (size & 1);
  }
  throw std::invalid_argument("no data chunk");
}

void WriteWav(const std::string& path, std::span<const double> samples) {
  const std::string bytes = EncodeWav(samples);
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw std::runtime_error("cannot write " + tmp);
  }
  fs::rename(tmp, path);
}

void WriteTrialWavs(const std::string& dir, const TrialRecord& record) {
  fs::create_directories(dir);
  WriteWav((fs::path(dir) / (record.id + ".target.wav")).string(), RenderTarget(record));
  WriteWav((fs::path(dir) / (record.id + ".final.wav")).string(), RenderFinal(record));
}

RunSummary RunMatrix(const RunConfig& config,
                     const std::function<void(const TrialRecord&)>& progress) {
  config.Validate();
  const auto start = std::chrono::steady_clock::now();
  std::error_code ec;
  fs::create_directories(config.output_dir, ec);
  if (ec || !fs::is_directory(config.output_dir)) {
    throw std::runtime_error("cannot create output directory " + config.output_dir);
  }
  const std::string trials_path = (fs::path(config.output_dir) / kTrialsFile).string();
  const std::string timings_path = (fs::path(config.output_dir) / kTimingsFile).string();
  const std::string wav_dir = (fs::path(config.output_dir) / kWavDir).string();

  TruncateTornLine(trials_path);
  TruncateTornLine(timings_path);
  std::set<std::string> done;
  for (const TrialRecord& r : ReadTrials(trials_path)) done.insert(r.id);

  RunSummary summary;
  std::vector<Job> jobs;
  for (ProgramId p : config.programs) {
    for (LossId l : config.losses) {
      for (int i = 0; i < config.trials_per_combo; ++i) {
        if (done.count(TrialId(p, l, i))) {
          ++summary.skipped;
        } else {
          jobs.push_back({p, l, i});
        }
      }
    }
  }

  std::ofstream trials(trials_path, std::ios::app | std::ios::binary);
  std::ofstream timings(timings_path, std::ios::app | std::ios::binary);
  if (!trials || !timings) throw std::runtime_error("cannot open dataset in " + config.output_dir);

  OrderedParallel<TrialRecord>(
      jobs.size(), config.workers,
      [&](std::size_t i) {
        const Job& job = jobs[i];
        TrialRecord r = RunTrial(job.program, job.loss, job.index,
                                 TrialSeed(config.master_seed, job.program, job.loss, job.index),
                                 config.match);
        if (config.write_wav) WriteTrialWavs(wav_dir, r);
        return r;
      },
      [&](std::size_t, TrialRecord& r) {
        AppendLine(trials, SerializeTrial(r));
        Json t;
        t["version"] = kDatasetVersion;
        t["id"] = r.id;
        t["seconds"] = r.duration_seconds;
        AppendLine(timings, t.dump());
        ++summary.completed;
        if (r.status != TrialStatus::kOk) ++summary.failed;
        if (progress) progress(r);
      });
  summary.seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return summary;
}

std::vector<EvalResult> EvaluateTrials(const std::vector<TrialRecord>& trials, int workers) {
  std::vector<EvalResult> out(trials.size());
  OrderedParallel<EvalResult>(
      trials.size(), workers, [&](std::size_t i) { return Evaluate(trials[i]); },
      [&](std::size_t i, EvalResult& r) { out[i] = std::move(r); });
  return out;
}

std::string RankingToJson(const RankingReport& report) {
  Json j;
  j["version"] = kDatasetVersion;
  j["bootstrap_samples"] = report.bootstrap_samples;
  j["seed"] = report.seed;
  j["programs"] = Json::array();
  for (const ProgramRanking& p : report.programs) {
    Json pj;
    pj["program"] = std::string(ProgramName(p.program));
    pj["methods"] = Json::array();
    for (const MethodRanking& m : p.methods) {
      Json mj;
      mj["method"] = std::string(MethodName(m.method));
      mj["direction"] = MethodDirection(m.method) == Direction::kLowerBetter ? "lower_better"
                                                                            : "higher_better";
      mj["kruskal_wallis"] = {{"h", m.kw.h}, {"p", m.kw.p}, {"df", m.kw.df}, {"reject", m.kw.reject}};
      Json ranks, means, samples;
      for (const auto& [loss, rank] : m.ranks) {
        const std::string name(LossName(loss));
        ranks[name] = rank;
        means[name] = NumberOrNull(m.mean.at(loss));
        samples[name] = m.samples.at(loss);
      }
      mj["ranks"] = ranks;
      mj["mean"] = means;
      mj["samples"] = samples;
      pj["methods"].push_back(mj);
    }
    j["programs"].push_back(pj);
  }
  return j.dump(2);
}

void SweepSpec::Validate() const {
  if (grid < 16) throw ConfigError("sweep grid must have at least 16 points");
  const ParamSpec p = SweepParam(variant);
  const double t = std::isnan(target) ? p.default_value : target;
  if (!(t >= p.min && t <= p.max)) throw ConfigError("sweep target outside the sweep range");
  if (!(loss.dtw_gamma > 0.0)) throw ConfigError("dtw gamma must be positive");
}

SweepTable SweepLandscape(const SweepSpec& spec) {
  spec.Validate();
  const ParamSpec p = SweepParam(spec.variant);
  SweepTable t;
  t.variant = spec.variant;
  t.target = std::isnan(spec.target) ? p.default_value : spec.target;
  t.grid.resize(spec.grid);
  const double ratio = p.max / p.min;
  for (int i = 0; i < spec.grid; ++i) {
    t.grid[i] = p.min * std::pow(ratio, static_cast<double>(i) / (spec.grid - 1));
  }
  t.grid.back() = p.max;
  for (int i = 1; i < spec.grid; ++i) {
    if (std::abs(std::log(t.grid[i] / t.target)) <
        std::abs(std::log(t.grid[t.target_cell] / t.target))) {
      t.target_cell = i;
    }
  }

  const std::vector<double> target = RenderSweepVariant<double>(spec.variant, t.target, spec.noise_seed);
  std::vector<std::vector<double>> candidates(spec.grid);
  for (int i = 0; i < spec.grid; ++i) {
    candidates[i] = RenderSweepVariant<double>(spec.variant, t.grid[i], spec.noise_seed);
  }
  for (std::size_t l = 0; l < kAllLosses.size(); ++l) {
    const std::unique_ptr<Loss> loss = MakeLoss(kAllLosses[l], target, spec.loss);
    std::vector<double>& col = t.raw[l];
    col.resize(spec.grid);
    for (int i = 0; i < spec.grid; ++i) col[i] = loss->Evaluate(std::span<const double>(candidates[i]));
    const auto [lo, hi] = std::minmax_element(col.begin(), col.end());
    const double min = *lo, range = *hi - *lo;
    t.normalized[l].resize(spec.grid);
    for (int i = 0; i < spec.grid; ++i) {
      t.normalized[l][i] = range > 0.0 ? (col[i] - min) / range : 0.0;
    }
  }
  return t;
}

std::string SweepToTsv(const SweepTable& t) {
  std::ostringstream out;
  out << std::string(SweepParam(t.variant).name);
  for (LossId l : kAllLosses) out << '\t' << LossName(l);
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < t.grid.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g", t.grid[i]);
    out << buf;
    for (std::size_t l = 0; l < kAllLosses.size(); ++l) {
      std::snprintf(buf, sizeof(buf), "%.9g", t.normalized[l][i]);
      out << '\t' << buf;
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace soundmatch
