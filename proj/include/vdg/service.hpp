#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "vdg/error.hpp"
#include "vdg/game.hpp"
#include "vdg/graph_io.hpp"
#include "vdg/limits.hpp"
#include "vdg/transcript.hpp"

namespace vdg {

struct HttpRequest {
  std::string method;
  std::string path;
  std::map<std::string, std::string> query;
  std::string body;
};

struct HttpResponse {
  int status = 200;
  std::string content_type = "application/json";
  std::string body;
};

enum class SessionStatus { kAwaitingChallenge, kFinished, kFailed };

inline const char* status_name(SessionStatus s) {
  switch (s) {
    case SessionStatus::kAwaitingChallenge:
      return "awaiting-challenge";
    case SessionStatus::kFinished:
      return "finished";
    case SessionStatus::kFailed:
      return "failed";
  }
  return "failed";
}

inline SessionStatus parse_status(const std::string& s) {
  if (s == "awaiting-challenge") return SessionStatus::kAwaitingChallenge;
  if (s == "finished") return SessionStatus::kFinished;
  if (s == "failed") return SessionStatus::kFailed;
  throw SpecError("unknown session status '" + s + "'");
}

struct SessionRecord {
  std::string id;
  std::string created;  // UTC, ISO 8601
  SessionStatus status = SessionStatus::kAwaitingChallenge;
  GameState state;
  // Requests on one session run one at a time.
  std::mutex mutex;
};

// Game sessions behind a small JSON request/response interface. Transport
// agnostic; http_server.hpp binds it to sockets.
class GameService {
 public:
  explicit GameService(Limits limits = {}, std::optional<std::filesystem::path> state_dir = std::nullopt)
      : limits_(limits), state_dir_(std::move(state_dir)) {
    if (state_dir_) {
      std::filesystem::create_directories(*state_dir_);
      load_snapshots();
    }
  }

  HttpResponse handle(const HttpRequest& req) {
    try {
      return route(req);
    } catch (const BadIndexError& e) {
      return error(400, e.what());
    } catch (const SpecError& e) {
      return error(400, e.what());
    } catch (const json::exception& e) {
      return error(400, std::string("malformed JSON: ") + e.what());
    } catch (const LimitError& e) {
      return error(422, e.what());
    } catch (const std::exception& e) {
      return error(500, e.what());
    }
  }

  std::size_t session_count() const {
    std::lock_guard lock(sessions_mutex_);
    return sessions_.size();
  }

 private:
  using SessionPtr = std::shared_ptr<SessionRecord>;

  static HttpResponse reply(int status, const json& body) { return {status, "application/json", body.dump()}; }
  static HttpResponse error(int status, const std::string& message) {
    json body;
    body["error"] = message;
    return reply(status, body);
  }

  static std::vector<std::string> split_path(const std::string& path) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : path) {
      if (c == '/') {
        if (!cur.empty()) parts.push_back(std::move(cur));
        cur.clear();
      } else {
        cur += c;
      }
    }
    if (!cur.empty()) parts.push_back(std::move(cur));
    return parts;
  }

  HttpResponse route(const HttpRequest& req) {
    const std::vector<std::string> parts = split_path(req.path);
    if (parts.empty() || parts[0] != "games" || parts.size() > 3) return error(404, "no route for " + req.path);
    if (parts.size() == 1) {
      if (req.method != "POST") return error(405, "use POST /games");
      return create(req);
    }
    const SessionPtr session = find(parts[1]);
    if (!session) return error(404, "unknown session " + parts[1]);
    std::lock_guard lock(session->mutex);
    if (parts.size() == 2) {
      if (req.method != "GET") return error(405, "use GET /games/{id}");
      return reply(200, session_json(*session));
    }
    if (parts[2] == "challenge") {
      if (req.method != "POST") return error(405, "use POST /games/{id}/challenge");
      return challenge(*session, req);
    }
    if (parts[2] == "graph") {
      if (req.method != "GET") return error(405, "use GET /games/{id}/graph");
      return graph(*session, req);
    }
    return error(404, "no route for " + req.path);
  }

  SessionPtr find(const std::string& id) const {
    std::lock_guard lock(sessions_mutex_);
    const auto it = sessions_.find(id);
    return it == sessions_.end() ? nullptr : it->second;
  }

  HttpResponse create(const HttpRequest& req) {
    const json body = json::parse(req.body);
    if (!body.is_object() || !body.contains("groups") || !body["groups"].is_array()) {
      throw SpecError("expected {\"groups\": [spec, ...], \"rounds\": n}");
    }
    GameConfig config;
    for (const json& g : body["groups"]) {
      if (!g.is_string()) throw SpecError("group specs must be strings");
      config.groups.push_back(g.get<std::string>());
    }
    if (!body.contains("rounds") || !body["rounds"].is_number_integer()) throw SpecError("rounds must be an integer");
    config.rounds = body["rounds"].get<int>();

    auto session = std::make_shared<SessionRecord>();
    session->state = build_game(config, limits_, true);
    session->created = now_utc();
    {
      std::lock_guard lock(sessions_mutex_);
      session->id = next_id();
      sessions_[session->id] = session;
    }
    std::lock_guard lock(session->mutex);
    save(*session);
    json out;
    out["session"] = session->id;
    out["status"] = status_name(session->status);
    out["k"] = session->state.k();
    out["rounds"] = config.rounds;
    out["remaining_rounds"] = session->state.remaining_rounds();
    out["graph"] = graph_to_json(session->state.graph);
    json aut;
    aut["order"] = order_to_json(*session->state.initial_order);
    aut["verified"] = *session->state.initial_verified;
    out["aut"] = std::move(aut);
    return reply(201, out);
  }

  HttpResponse challenge(SessionRecord& session, const HttpRequest& req) {
    if (session.status != SessionStatus::kAwaitingChallenge) {
      return error(409, std::string("session is ") + status_name(session.status));
    }
    const json body = json::parse(req.body);
    if (!body.is_object() || !body.contains("group_index") || !body["group_index"].is_number_integer()) {
      throw SpecError("expected {\"group_index\": i}");
    }
    bool full = true;
    if (const auto it = req.query.find("verify"); it != req.query.end()) {
      if (it->second == "false") {
        full = false;
      } else if (it->second != "true") {
        throw SpecError("verify must be true or false");
      }
    }
    GameState& s = session.state;
    const int index = body["group_index"].get<int>();
    s.resolve(index);  // a bad index is a 400 and must not fail the session
    MoveRecord rec;
    try {
      rec = play_round(s, index, full ? Verify::kFull : Verify::kOrderOnly);
    } catch (...) {
      session.status = SessionStatus::kFailed;
      save(session);
      throw;
    }
    if (rec.verified == false) {
      session.status = SessionStatus::kFailed;
    } else if (s.finished()) {
      session.status = SessionStatus::kFinished;
    }
    save(session);
    json out;
    out["round"] = s.round;
    out["challenge"] = index;
    out["deleted_vertex"] = raw(rec.deleted);
    out["deleted_tag"] = tag_to_json(s.initial->tag(rec.deleted));
    json aut;
    aut["order"] = order_to_json(*rec.aut_order);
    aut["verified"] = rec.verified ? json(*rec.verified) : json(nullptr);
    aut["partial"] = rec.partial;
    out["aut"] = std::move(aut);
    out["remaining_rounds"] = s.remaining_rounds();
    out["status"] = status_name(session.status);
    return reply(200, out);
  }

  HttpResponse graph(const SessionRecord& session, const HttpRequest& req) {
    std::string format = "json";
    if (const auto it = req.query.find("format"); it != req.query.end()) format = it->second;
    if (format == "json") return {200, "application/json", graph_to_json(session.state.graph).dump()};
    if (format == "dot") return {200, "text/vnd.graphviz", graph_to_dot(session.state.graph, session.id)};
    throw SpecError("format must be json or dot");
  }

  static json session_json(const SessionRecord& session) {
    json out;
    out["session"] = session.id;
    out["created"] = session.created;
    out["status"] = status_name(session.status);
    out["k"] = session.state.k();
    out["round"] = session.state.round;
    out["remaining_rounds"] = session.state.remaining_rounds();
    out["transcript"] = transcript_to_json(session.state);
    return out;
  }

  std::string next_id() {
    std::ostringstream id;
    id << "g" << std::hex << (0x1000 + next_serial_++);
    return id.str();
  }

  static std::string now_utc() {
    const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&t, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    return buf;
  }

  // Snapshots are the session metadata plus the transcript; loading replays
  // the transcript, so a restarted service verifies what it restores.
  void save(const SessionRecord& session) const {
    if (!state_dir_) return;
    const std::filesystem::path target = *state_dir_ / (session.id + ".json");
    const std::filesystem::path tmp = *state_dir_ / (session.id + ".json.tmp");
    {
      std::ofstream out(tmp);
      out << session_json(session).dump(2) << '\n';
      if (!out) throw Error("cannot write snapshot " + tmp.string());
    }
    std::filesystem::rename(tmp, target);
  }

  void load_snapshots() {
    std::vector<std::filesystem::path> files;
    for (const auto& entry : std::filesystem::directory_iterator(*state_dir_)) {
      if (entry.path().extension() == ".json") files.push_back(entry.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& file : files) {
      std::ifstream in(file);
      const json doc = json::parse(in);
      auto session = std::make_shared<SessionRecord>();
      session->id = doc.at("session").get<std::string>();
      session->created = doc.at("created").get<std::string>();
      session->status = parse_status(doc.at("status").get<std::string>());
      session->state = replay_transcript(doc.at("transcript"), limits_);
      if (session->id.size() > 1 && session->id[0] == 'g') {
        const std::uint64_t serial = std::stoull(session->id.substr(1), nullptr, 16);
        if (serial >= 0x1000 + next_serial_) next_serial_ = serial - 0x1000 + 1;
      }
      sessions_[session->id] = std::move(session);
    }
  }

  Limits limits_;
  std::optional<std::filesystem::path> state_dir_;
  mutable std::mutex sessions_mutex_;
  std::map<std::string, SessionPtr> sessions_;
  std::uint64_t next_serial_ = 0;
};

}  // namespace vdg
