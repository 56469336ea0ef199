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

// soundmatch: run, evaluate and rank sound-matching experiments.
//
// Exit status: 0 success, 1 runtime failure, 2 usage or configuration error.

#include <chrono>
#include <csignal>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <set>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "soundmatch/harness.h"
#include "soundmatch/listening.h"

namespace fs = std::filesystem;
using namespace soundmatch;

namespace {

constexpr int kExitRuntime = 1;
constexpr int kExitConfig = 2;

struct CommonFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::optional<int> workers;
  std::optional<std::string> out;
};

void AddCommon(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "JSON run configuration")->check(CLI::ExistingFile);
  cmd->add_option("--seed", f.seed, "master seed (overrides the config)");
  cmd->add_option("--workers", f.workers, "worker threads (overrides the config)");
  cmd->add_option("--out", f.out, "output directory (overrides the config)");
}

RunConfig Resolve(const CommonFlags& f) {
  RunConfig c = f.config.empty() ? RunConfig{} : LoadRunConfig(f.config);
  if (f.seed) c.master_seed = *f.seed;
  if (f.workers) c.workers = *f.workers;
  if (f.out) c.output_dir = *f.out;
  c.Validate();
  return c;
}

std::string InDir(const std::string& dir, std::string_view name) {
  return (fs::path(dir) / name).string();
}

void WriteText(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path);
}

// A dataset must not mix trials from different seeds or optimizer settings.
void CheckSnapshot(const RunConfig& c) {
  const std::string path = InDir(c.output_dir, "run_config.json");
  RunConfig pinned = c;
  pinned.trials_per_combo = 1;
  pinned.workers = 1;
  pinned.programs.assign(kAllPrograms.begin(), kAllPrograms.end());
  pinned.losses.assign(kAllLosses.begin(), kAllLosses.end());
  const std::string text = RunConfigToJson(pinned) + "\n";
  if (fs::exists(path)) {
    std::ifstream in(path);
    std::string existing((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (existing != text) {
      throw ConfigError(c.output_dir +
                        " holds trials from a different seed or optimizer setting; "
                        "use a fresh --out directory");
    }
    return;
  }
  fs::create_directories(c.output_dir);
  WriteText(path, text);
}

int CmdRun(const CommonFlags& f, std::optional<int> trials, bool no_wav, bool quiet) {
  RunConfig c = Resolve(f);
  if (trials) c.trials_per_combo = *trials;
  if (no_wav) c.write_wav = false;
  c.Validate();
  CheckSnapshot(c);
  const std::size_t total = c.programs.size() * c.losses.size() * c.trials_per_combo;
  std::size_t seen = 0;
  const RunSummary s = RunMatrix(c, [&](const TrialRecord& r) {
    ++seen;
    if (!quiet) {
      std::fprintf(stderr, "[%zu] %s %s loss=%.6g %.1fs\n", seen, r.id.c_str(),
                   std::string(TrialStatusName(r.status)).c_str(),
                   r.losses.empty() ? 0.0 : r.losses.back(), r.duration_seconds);
    }
  });
  std::printf("%d trials run, %d already present, %d failed, %zu total, %.1f s\n", s.completed,
              s.skipped, s.failed, total, s.seconds);
  return 0;
}

int CmdSweep(const std::string& variant, int grid, std::optional<double> target,
             std::uint32_t noise_seed, const std::string& out_file) {
  SweepSpec spec;
  try {
    spec.variant = ParseSweepVariant(variant);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  spec.grid = grid;
  if (target) spec.target = *target;
  spec.noise_seed = noise_seed;
  spec.Validate();
  const SweepTable t = SweepLandscape(spec);
  const std::string path =
      out_file.empty() ? "sweep_" + std::string(SweepVariantName(spec.variant)) + ".tsv" : out_file;
  if (fs::path(path).has_parent_path()) fs::create_directories(fs::path(path).parent_path());
  WriteText(path, SweepToTsv(t));
  std::printf("wrote %s (%d rows, target %.6g at cell %d)\n", path.c_str(), grid, t.target,
              t.target_cell);
  return 0;
}

int CmdEvaluate(const CommonFlags& f) {
  const RunConfig c = Resolve(f);
  const std::string trials_path = InDir(c.output_dir, kTrialsFile);
  if (!fs::exists(trials_path)) {
    throw ConfigError("no " + trials_path + "; run 'soundmatch run' first");
  }
  const std::vector<TrialRecord> trials = ReadTrials(trials_path);
  const std::vector<EvalResult> evals = EvaluateTrials(trials, c.workers);
  std::string text;
  for (const EvalResult& e : evals) text += SerializeEval(e) + "\n";
  WriteText(InDir(c.output_dir, kEvalFile), text);
  std::printf("evaluated %zu trials -> %s\n", evals.size(),
              InDir(c.output_dir, kEvalFile).c_str());
  return 0;
}

int CmdRank(const CommonFlags& f, const std::string& likert_path, int bootstrap,
            bool include_failed) {
  const RunConfig c = Resolve(f);
  const std::string eval_path = InDir(c.output_dir, kEvalFile);
  if (!fs::exists(eval_path)) {
    throw ConfigError("no " + eval_path + "; run 'soundmatch evaluate --out " + c.output_dir +
                      "' first");
  }
  const std::vector<EvalResult> evals = ReadEvals(eval_path);

  std::unique_ptr<LikertDataset> likert;
  const std::string lpath = likert_path.empty() ? InDir(c.output_dir, kLikertFile) : likert_path;
  if (!likert_path.empty() && !fs::exists(lpath)) throw ConfigError("no Likert file " + lpath);
  if (fs::exists(lpath)) {
    std::map<std::string, std::pair<ProgramId, LossId>> known;
    for (const EvalResult& e : evals) known[e.trial_id] = {e.program, e.loss};
    likert = std::make_unique<LikertDataset>(known);
    int rejected = 0;
    for (const LikertScore& s : ReadLikert(lpath)) {
      if (!likert->Ingest(s).empty()) ++rejected;
    }
    if (rejected) std::fprintf(stderr, "%d Likert rows rejected\n", rejected);
  }

  RankingOptions opt;
  opt.bootstrap_samples = bootstrap;
  opt.seed = c.master_seed;
  opt.include_failed = include_failed;
  const RankingReport report = BuildRankingReport(evals, likert.get(), opt);
  WriteText(InDir(c.output_dir, kRankingJsonFile), RankingToJson(report) + "\n");
  const std::string text = report.ToText();
  WriteText(InDir(c.output_dir, kRankingTextFile), text);
  std::fputs(text.c_str(), stdout);
  return 0;
}

int CmdExportWav(const CommonFlags& f, std::vector<std::string> ids, bool all) {
  const RunConfig c = Resolve(f);
  const std::string trials_path = InDir(c.output_dir, kTrialsFile);
  if (!fs::exists(trials_path)) throw ConfigError("no " + trials_path);
  if (ids.empty() && !all) throw ConfigError("name trial ids or pass --all");
  const std::vector<TrialRecord> trials = ReadTrials(trials_path);
  std::set<std::string> wanted(ids.begin(), ids.end());
  const std::string dir = InDir(c.output_dir, kWavDir);
  int written = 0;
  for (const TrialRecord& r : trials) {
    if (all || wanted.erase(r.id)) {
      WriteTrialWavs(dir, r);
      ++written;
    }
  }
  if (!wanted.empty()) {
    throw ConfigError("unknown trial id " + *wanted.begin());
  }
  std::printf("wrote %d WAV pairs to %s\n", written, dir.c_str());
  return 0;
}

volatile std::sig_atomic_t g_stop = 0;

void OnSignal(int) { g_stop = 1; }

int CmdServe(const CommonFlags& f, const std::string& host, int port, int per_combo) {
  const RunConfig c = Resolve(f);
  ListeningOptions opt;
  opt.output_dir = c.output_dir;
  opt.per_combo = per_combo;
  ListeningService service(opt);
  ListeningServer server(service);
  std::signal(SIGINT, OnSignal);
  std::signal(SIGTERM, OnSignal);
  const int bound = server.Start(host, port);
  std::printf("serving %zu trials on http://%s:%d\n", service.trials().size(), host.c_str(), bound);
  std::fflush(stdout);
  while (!g_stop) std::this_thread::sleep_for(std::chrono::milliseconds(100));
  server.Stop();
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Differentiable iterative sound-matching benchmark"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Expand all help");

  CommonFlags run_f, eval_f, rank_f, wav_f, serve_f;

  CLI::App* run = app.add_subcommand("run", "Run the trial matrix (resumable)");
  AddCommon(run, run_f);
  std::optional<int> run_trials;
  bool no_wav = false, quiet = false;
  run->add_option("--trials", run_trials, "trials per (program, loss)");
  run->add_flag("--no-wav", no_wav, "skip WAV export");
  run->add_flag("--quiet", quiet, "no per-trial progress");

  CLI::App* sweep = app.add_subcommand("sweep", "Single-parameter loss landscape");
  std::string variant = "hp-noise", sweep_out;
  int grid = 128;
  std::optional<double> target;
  std::uint32_t noise_seed = 1;
  sweep->add_option("--variant", variant, "hp-noise or snoise-am")->capture_default_str();
  sweep->add_option("--grid", grid, "grid points")->capture_default_str();
  sweep->add_option("--target", target, "target parameter value");
  sweep->add_option("--noise-seed", noise_seed, "noise generator seed")->capture_default_str();
  sweep->add_option("--out", sweep_out, "output table (TSV)");

  CLI::App* evaluate = app.add_subcommand("evaluate", "Compute P-Loss and MSS for a dataset");
  AddCommon(evaluate, eval_f);

  CLI::App* rank = app.add_subcommand("rank", "Bootstrap + NPSK ranking of evaluated trials");
  AddCommon(rank, rank_f);
  std::string likert_path;
  int bootstrap = kBootstrapSamples;
  bool include_failed = false;
  rank->add_option("--likert", likert_path, "Likert ratings file");
  rank->add_option("--bootstrap", bootstrap, "bootstrap samples")->capture_default_str();
  rank->add_flag("--include-failed", include_failed, "keep failed trials");

  CLI::App* wav = app.add_subcommand("export-wav", "Re-render target/final WAVs");
  AddCommon(wav, wav_f);
  std::vector<std::string> ids;
  bool all = false;
  wav->add_option("ids", ids, "trial ids");
  wav->add_flag("--all", all, "every trial");

  CLI::App* serve = app.add_subcommand("serve", "Listening-test HTTP service");
  AddCommon(serve, serve_f);
  std::string host = "127.0.0.1";
  int port = 8080, per_combo = 40;
  serve->add_option("--host", host, "bind address")->capture_default_str();
  serve->add_option("--port", port, "listen port (0 picks a free one)")->capture_default_str();
  serve->add_option("--per-combo", per_combo, "pairs per (program, loss)")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (*run) return CmdRun(run_f, run_trials, no_wav, quiet);
    if (*sweep) return CmdSweep(variant, grid, target, noise_seed, sweep_out);
    if (*evaluate) return CmdEvaluate(eval_f);
    if (*rank) return CmdRank(rank_f, likert_path, bootstrap, include_failed);
    if (*wav) return CmdExportWav(wav_f, ids, all);
    if (*serve) return CmdServe(serve_f, host, port, per_combo);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitConfig;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kExitRuntime;
  }
  return kExitConfig;
}
