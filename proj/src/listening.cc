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

#include "soundmatch/listening.h"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <thread>

#include "httplib.h"
#include "json.hpp"
#include "soundmatch/harness.h"
#include "soundmatch/seed.h"

namespace soundmatch {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kRolePair = 0;
constexpr int kRoleTarget = 1;
constexpr int kRoleOutput = 2;

std::string Hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string UtcNow() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

// Fisher-Yates over the portable uniform draw.
template <typename T>
void Shuffle(std::vector<T>& v, std::mt19937_64& rng) {
  for (std::size_t i = v.size(); i > 1; --i) {
    const auto j = std::min(static_cast<std::size_t>(UniformUnit(rng) * i), i - 1);
    std::swap(v[i - 1], v[j]);
  }
}

}  // namespace

RatingSession BuildSession(const std::vector<TrialRecord>& trials, const std::string& rater,
                           int per_combo, std::uint64_t seed) {
  if (per_combo < 1) throw std::invalid_argument("per_combo must be >= 1");
  std::map<std::pair<ProgramId, LossId>, std::vector<std::string>> combos;
  std::map<std::pair<ProgramId, LossId>, int> failed;
  for (const TrialRecord& r : trials) {
    if (r.status == TrialStatus::kOk) {
      combos[{r.program, r.loss}].push_back(r.id);
    } else {
      combos[{r.program, r.loss}];
    }
  }
  RatingSession s;
  s.rater = rater;
  s.seed = seed;
  std::mt19937_64 rng(seed);
  for (auto& [combo, ids] : combos) {
    if (static_cast<int>(ids.size()) < per_combo) {
      throw std::invalid_argument(std::string(ProgramName(combo.first)) + "/" +
                                  std::string(LossName(combo.second)) + " has " +
                                  std::to_string(ids.size()) + " usable trials, " +
                                  std::to_string(per_combo) + " needed");
    }
    std::sort(ids.begin(), ids.end());
    Shuffle(ids, rng);
    s.trial_ids.insert(s.trial_ids.end(), ids.begin(), ids.begin() + per_combo);
  }
  Shuffle(s.trial_ids, rng);
  return s;
}

ListeningService::ListeningService(const ListeningOptions& options) : options_(options) {
  if (options_.per_combo < 1) throw ConfigError("per_combo must be >= 1");
  const fs::path dir(options_.output_dir);
  const std::string trials_path = (dir / kTrialsFile).string();
  if (!fs::exists(trials_path)) {
    throw ConfigError("no trial dataset at " + trials_path + "; run the matrix first");
  }
  trials_ = ReadTrials(trials_path);
  std::map<std::string, std::pair<ProgramId, LossId>> known;
  for (std::size_t i = 0; i < trials_.size(); ++i) {
    by_id_[trials_[i].id] = i;
    known[trials_[i].id] = {trials_[i].program, trials_[i].loss};
  }

  const std::string registry_path = (dir / kSessionRegistryFile).string();
  if (fs::exists(registry_path)) {
    std::ifstream in(registry_path);
    const Json j = Json::parse(in, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw ConfigError("corrupt " + registry_path);
    key_ = std::stoull(j.value("key", "0"), nullptr, 16);
    if (j.contains("raters")) {
      for (const auto& [rater, seed] : j["raters"].items()) registry_[rater] = seed.get<std::uint64_t>();
    }
  } else {
    std::random_device rd;
    key_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
  }
  if (options_.key) key_ = *options_.key;

  // Validates the stratification once up front.
  try {
    BuildSession(trials_, "", options_.per_combo, 0);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }

  for (const TrialRecord& r : trials_) {
    pair_[Token(r.id, kRolePair)] = r.id;
    audio_[Token(r.id, kRoleTarget)] = {r.id, kRoleTarget};
    audio_[Token(r.id, kRoleOutput)] = {r.id, kRoleOutput};
  }

  ratings_ = std::make_unique<LikertDataset>(known);
  ratings_path_ = (dir / kLikertFile).string();
  for (const LikertScore& s : ReadLikert(ratings_path_)) ratings_->Ingest(s);
  SaveRegistry();
}

bool ListeningService::ValidRaterId(const std::string& rater) {
  if (rater.empty() || rater.size() > 64) return false;
  return std::all_of(rater.begin(), rater.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.';
  });
}

std::string ListeningService::Token(const std::string& trial_id, int role) const {
  return Hex64(HashSeed({key_, StringHash(trial_id), static_cast<std::uint64_t>(role)}));
}

void ListeningService::SaveRegistry() const {
  Json j;
  j["key"] = Hex64(key_);
  j["raters"] = Json::object();
  for (const auto& [rater, seed] : registry_) j["raters"][rater] = seed;
  const fs::path path = fs::path(options_.output_dir) / kSessionRegistryFile;
  const fs::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp);
    out << j.dump(2) << '\n';
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
  }
  fs::rename(tmp, path);
}

ListeningService::Session& ListeningService::SessionFor(const std::string& rater) {
  auto it = sessions_.find(rater);
  if (it != sessions_.end()) return it->second;
  auto reg = registry_.find(rater);
  if (reg == registry_.end()) {
    reg = registry_.emplace(rater, HashSeed({key_, StringHash(rater)})).first;
    SaveRegistry();
  }
  Session s;
  s.plan = BuildSession(trials_, rater, options_.per_combo, reg->second);
  const std::map<std::string, int> rated = ratings_->ByRater(rater);
  while (s.cursor < s.plan.trial_ids.size() && rated.count(s.plan.trial_ids[s.cursor])) ++s.cursor;
  return sessions_.emplace(rater, std::move(s)).first->second;
}

std::optional<PairView> ListeningService::Next(const std::string& rater) {
  std::lock_guard<std::mutex> lock(mu_);
  Session& s = SessionFor(rater);
  if (s.cursor >= s.plan.trial_ids.size()) return std::nullopt;
  const std::string& id = s.plan.trial_ids[s.cursor];
  PairView v;
  v.token = Token(id, kRolePair);
  v.target_audio = "/audio/" + Token(id, kRoleTarget);
  v.output_audio = "/audio/" + Token(id, kRoleOutput);
  v.position = static_cast<int>(s.cursor) + 1;
  v.total = static_cast<int>(s.plan.trial_ids.size());
  return v;
}

RatingOutcome ListeningService::Submit(const std::string& rater, const std::string& token,
                                       int score) {
  std::lock_guard<std::mutex> lock(mu_);
  Session& s = SessionFor(rater);
  RatingOutcome out;
  out.total = static_cast<int>(s.plan.trial_ids.size());
  out.completed = static_cast<int>(s.cursor);
  if (score < 1 || score > 5) {
    out.status = 422;
    out.message = "score must be an integer in 1..5";
    return out;
  }
  const auto pair = pair_.find(token);
  if (pair == pair_.end()) {
    out.status = 409;
    out.message = "unknown pair token";
    return out;
  }
  if (ratings_->ByRater(rater).count(pair->second)) {
    out.status = 409;
    out.message = "pair already rated";
    return out;
  }
  if (s.cursor >= s.plan.trial_ids.size() || s.plan.trial_ids[s.cursor] != pair->second) {
    out.status = 409;
    out.message = "token is not the current pair";
    return out;
  }
  LikertScore rec{pair->second, rater, score, UtcNow()};
  const std::string reason = ratings_->Ingest(rec);
  if (!reason.empty()) {
    out.status = 409;
    out.message = reason;
    return out;
  }
  {
    std::ofstream f(ratings_path_, std::ios::app | std::ios::binary);
    f << SerializeLikert(rec) << '\n';
    if (!f) throw std::runtime_error("cannot append to " + ratings_path_);
  }
  ++s.cursor;
  out.completed = static_cast<int>(s.cursor);
  out.message = "recorded";
  return out;
}

int ListeningService::Completed(const std::string& rater) {
  std::lock_guard<std::mutex> lock(mu_);
  return static_cast<int>(SessionFor(rater).cursor);
}

int ListeningService::SessionSize(const std::string& rater) {
  std::lock_guard<std::mutex> lock(mu_);
  return static_cast<int>(SessionFor(rater).plan.trial_ids.size());
}

std::optional<std::string> ListeningService::Audio(const std::string& audio_token) const {
  const auto it = audio_.find(audio_token);
  if (it == audio_.end()) return std::nullopt;
  const TrialRecord& r = trials_[by_id_.at(it->second.first)];
  const std::vector<double> x = it->second.second == kRoleTarget ? RenderTarget(r) : RenderFinal(r);
  return EncodeWav(x);
}

struct ListeningServer::Impl {
  ListeningService& service;
  httplib::Server server;
  std::thread thread;

  explicit Impl(ListeningService& s) : service(s) {
    auto json_reply = [](httplib::Response& res, int status, const Json& body) {
      res.status = status;
      res.set_content(body.dump(), "application/json");
    };
    server.set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
    server.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
      res.status = 204;
    });
    server.Get(R"(/session/([^/]+)/next)", [this, json_reply](const httplib::Request& req,
                                                              httplib::Response& res) {
      const std::string rater = req.matches[1];
      if (!ListeningService::ValidRaterId(rater)) {
        return json_reply(res, 400, {{"error", "invalid rater id"}});
      }
      const std::optional<PairView> v = service.Next(rater);
      if (!v) {
        const int n = service.SessionSize(rater);
        return json_reply(res, 200, {{"done", true}, {"completed", n}, {"total", n}});
      }
      json_reply(res, 200,
                 {{"done", false},
                  {"token", v->token},
                  {"target", v->target_audio},
                  {"output", v->output_audio},
                  {"position", v->position},
                  {"total", v->total}});
    });
    server.Post(R"(/session/([^/]+)/rating)", [this, json_reply](const httplib::Request& req,
                                                                 httplib::Response& res) {
      const std::string rater = req.matches[1];
      if (!ListeningService::ValidRaterId(rater)) {
        return json_reply(res, 400, {{"error", "invalid rater id"}});
      }
      const Json body = Json::parse(req.body, nullptr, false);
      if (body.is_discarded() || !body.is_object() || !body.contains("token") ||
          !body["token"].is_string() || !body.contains("score")) {
        return json_reply(res, 400, {{"error", "expected {\"token\": string, \"score\": 1..5}"}});
      }
      if (!body["score"].is_number_integer()) {
        return json_reply(res, 422, {{"error", "score must be an integer in 1..5"}});
      }
      const std::int64_t raw = body["score"].get<std::int64_t>();
      const int score = raw < 0 || raw > 5 ? 0 : static_cast<int>(raw);
      const RatingOutcome out = service.Submit(rater, body["token"].get<std::string>(), score);
      if (out.status != 200) return json_reply(res, out.status, {{"error", out.message}});
      json_reply(res, 200,
                 {{"accepted", true}, {"completed", out.completed}, {"total", out.total}});
    });
    server.Get(R"(/audio/([0-9a-f]+))", [this, json_reply](const httplib::Request& req,
                                                           httplib::Response& res) {
      const std::optional<std::string> wav = service.Audio(req.matches[1]);
      if (!wav) return json_reply(res, 404, {{"error", "unknown audio token"}});
      res.set_content(*wav, "audio/wav");
    });
  }
};

ListeningServer::ListeningServer(ListeningService& service)
    : impl_(std::make_unique<Impl>(service)) {}

ListeningServer::~ListeningServer() { Stop(); }

int ListeningServer::Start(const std::string& host, int port) {
  int bound = port;
  if (port == 0) {
    bound = impl_->server.bind_to_any_port(host);
  } else if (!impl_->server.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) throw std::runtime_error("cannot bind " + host + ":" + std::to_string(port));
  impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
  impl_->server.wait_until_ready();
  return bound;
}

void ListeningServer::Run(const std::string& host, int port) {
  if (!impl_->server.listen(host, port)) {
    throw std::runtime_error("cannot serve on " + host + ":" + std::to_string(port));
  }
}

void ListeningServer::Stop() {
  if (!impl_) return;
  impl_->server.stop();
  if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace soundmatch
