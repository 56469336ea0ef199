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

// Blinded listening test: per-rater sessions of opaque target/output pairs
// and an append-only Likert ratings file, served over HTTP.

#ifndef SOUNDMATCH_LISTENING_H_
#define SOUNDMATCH_LISTENING_H_

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "soundmatch/evaluation.h"
#include "soundmatch/matcher.h"

namespace soundmatch {

inline constexpr std::string_view kSessionRegistryFile = "sessions.json";

struct RatingSession {
  std::string rater;
  std::uint64_t seed = 0;
  std::vector<std::string> trial_ids;  // presentation order
};

// Stratified sample of `per_combo` trials from every (program, loss) present,
// drawn without replacement and shuffled globally. Failed trials are never
// sampled. Throws std::invalid_argument naming a combo with too few trials.
RatingSession BuildSession(const std::vector<TrialRecord>& trials, const std::string& rater,
                           int per_combo, std::uint64_t seed);

struct PairView {
  std::string token;
  std::string target_audio;  // request paths
  std::string output_audio;
  int position = 0;  // 1-based
  int total = 0;
};

struct RatingOutcome {
  int status = 200;  // 200, 400, 404, 409 or 422
  std::string message;
  int completed = 0;
  int total = 0;
};

struct ListeningOptions {
  std::string output_dir;
  int per_combo = 40;
  // Token key; read from (or stored in) the session registry when absent.
  std::optional<std::uint64_t> key;
};

class ListeningService {
 public:
  // Loads trials.jsonl, the ratings file and the session registry from the
  // output directory. Throws ConfigError when a combo has fewer than
  // per_combo usable trials.
  explicit ListeningService(const ListeningOptions& options);

  static bool ValidRaterId(const std::string& rater);

  // nullopt when the rater has rated every pair. Repeated calls without a
  // rating return the same pair.
  std::optional<PairView> Next(const std::string& rater);
  RatingOutcome Submit(const std::string& rater, const std::string& token, int score);
  int Completed(const std::string& rater);
  int SessionSize(const std::string& rater);

  // WAV bytes for an audio token, nullopt if unknown.
  std::optional<std::string> Audio(const std::string& audio_token) const;

  const std::vector<TrialRecord>& trials() const { return trials_; }

 private:
  struct Session {
    RatingSession plan;
    std::size_t cursor = 0;
  };
  Session& SessionFor(const std::string& rater);
  std::string Token(const std::string& trial_id, int role) const;
  void SaveRegistry() const;

  ListeningOptions options_;
  std::uint64_t key_ = 0;
  std::vector<TrialRecord> trials_;
  std::map<std::string, std::size_t> by_id_;
  std::map<std::string, std::pair<std::string, int>> audio_;  // token -> (trial, role)
  std::map<std::string, std::string> pair_;                   // token -> trial
  std::map<std::string, std::uint64_t> registry_;             // rater -> session seed
  std::map<std::string, Session> sessions_;
  std::unique_ptr<LikertDataset> ratings_;
  std::string ratings_path_;
  mutable std::mutex mu_;
};

// Blocking HTTP server:
//   GET  /session/{rater}/next
//   POST /session/{rater}/rating   {"token": ..., "score": 1..5}
//   GET  /audio/{token}
class ListeningServer {
 public:
  explicit ListeningServer(ListeningService& service);
  ~ListeningServer();

  // Binds (port 0 picks a free port) and serves on a background thread.
  int Start(const std::string& host, int port);
  // Binds and serves on the calling thread until Stop().
  void Run(const std::string& host, int port);
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace soundmatch

#endif  // SOUNDMATCH_LISTENING_H_
