#pragma once

#include <string>
#include <vector>

#include "vdg/automorphism.hpp"
#include "vdg/error.hpp"
#include "vdg/game.hpp"
#include "vdg/graph_io.hpp"
#include "vdg/limits.hpp"

namespace vdg {

inline json config_to_json(const GameConfig& config) {
  json out;
  out["groups"] = config.groups;
  out["rounds"] = config.rounds;
  return out;
}

inline GameConfig config_from_json(const json& doc) {
  try {
    GameConfig config;
    config.groups = doc.at("groups").get<std::vector<std::string>>();
    config.rounds = doc.at("rounds").get<int>();
    return config;
  } catch (const json::exception& e) {
    throw SpecError(std::string("malformed game config: ") + e.what());
  }
}

inline json move_to_json(const MoveRecord& m, int round) {
  json out;
  out["round"] = round;
  out["challenge"] = m.challenge;
  out["group_index"] = m.group_index;
  out["deleted_vertex"] = raw(m.deleted);
  out["aut_order"] = m.aut_order ? order_to_json(*m.aut_order) : json(nullptr);
  out["verified"] = m.verified ? json(*m.verified) : json(nullptr);
  out["partial"] = m.partial;
  return out;
}

// Config, G_0 hash and the move list. Enough to rebuild the game exactly.
inline json transcript_to_json(const GameState& s) {
  json out;
  out["config"] = config_to_json(s.config);
  out["g0_hash"] = s.initial_hash;
  out["g0_aut_order"] = s.initial_order ? order_to_json(*s.initial_order) : json(nullptr);
  json moves = json::array();
  for (std::size_t r = 0; r < s.history.size(); ++r) moves.push_back(move_to_json(s.history[r], static_cast<int>(r) + 1));
  out["moves"] = std::move(moves);
  return out;
}

// Rebuilds the game from a transcript and replays its challenges. Each move
// is verified the way it was originally (full, order-only, or not at all);
// a different G_0, deleted vertex or Aut order is a VerificationError.
inline GameState replay_transcript(const json& doc, const Limits& limits = {}, bool verify_initial = true) {
  GameState s = build_game(config_from_json(doc.contains("config") ? doc.at("config") : doc), limits, verify_initial);
  if (doc.contains("g0_hash") && doc.at("g0_hash").get<std::string>() != s.initial_hash) {
    throw VerificationError("transcript G_0 hash " + doc.at("g0_hash").get<std::string>() + " does not match rebuilt " +
                            s.initial_hash);
  }
  if (!doc.contains("moves")) return s;
  for (const json& m : doc.at("moves")) {
    int challenge = 0;
    Verify mode = Verify::kNone;
    try {
      challenge = m.at("challenge").get<int>();
      if (m.contains("verified") && !m.at("verified").is_null()) {
        mode = Verify::kFull;
      } else if (m.contains("aut_order") && !m.at("aut_order").is_null()) {
        mode = Verify::kOrderOnly;
      }
    } catch (const json::exception& e) {
      throw SpecError(std::string("malformed move: ") + e.what());
    }
    const MoveRecord& rec = play_round(s, challenge, mode);
    if (m.contains("deleted_vertex") && m.at("deleted_vertex").get<int>() != raw(rec.deleted)) {
      throw VerificationError("round " + std::to_string(s.round) + " deleted " + to_string(rec.deleted) +
                              ", transcript says " + std::to_string(m.at("deleted_vertex").get<int>()));
    }
    if (mode != Verify::kNone && order_from_json(m.at("aut_order")) != *rec.aut_order) {
      throw VerificationError("round " + std::to_string(s.round) + " Aut order " + rec.aut_order->str() +
                              " differs from the transcript");
    }
  }
  return s;
}

}  // namespace vdg
