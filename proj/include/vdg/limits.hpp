#pragma once

#include <cstdint>
#include <cstdlib>
#include <string>

#include "vdg/error.hpp"

namespace vdg {

// Size guardrails shared by every module. Exceeding one is a hard error.
struct Limits {
  std::size_t max_group_order = 64;
  // Largest graph handed to the automorphism engine outside of games.
  std::size_t max_aut_vertices = 5000;
  // Largest projected game graph G_0; games pass this bound to the engine.
  std::size_t max_game_vertices = 20000;
  // Automorphism groups up to this order are enumerated element by element.
  std::size_t enumeration_cap = 10000;
  // Upper bound on k^rounds for exhaustive verification.
  std::size_t exhaustive_budget = 256;

  // Defaults overridden by VDG_MAX_GROUP_ORDER, VDG_MAX_AUT_VERTICES,
  // VDG_MAX_GAME_VERTICES, VDG_ENUMERATION_CAP and VDG_EXHAUSTIVE_BUDGET.
  static Limits from_env() {
    Limits limits;
    read_env("VDG_MAX_GROUP_ORDER", limits.max_group_order);
    read_env("VDG_MAX_AUT_VERTICES", limits.max_aut_vertices);
    read_env("VDG_MAX_GAME_VERTICES", limits.max_game_vertices);
    read_env("VDG_ENUMERATION_CAP", limits.enumeration_cap);
    read_env("VDG_EXHAUSTIVE_BUDGET", limits.exhaustive_budget);
    return limits;
  }

 private:
  static void read_env(const char* name, std::size_t& out) {
    const char* value = std::getenv(name);
    if (value == nullptr || *value == '\0') return;
    char* end = nullptr;
    const unsigned long long parsed = std::strtoull(value, &end, 10);
    if (end == nullptr || *end != '\0' || parsed == 0) {
      throw SpecError(std::string("invalid value for ") + name + ": " + value);
    }
    out = static_cast<std::size_t>(parsed);
  }
};

}  // namespace vdg
