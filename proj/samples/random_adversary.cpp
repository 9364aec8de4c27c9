// Plays the deletion game against a random adversary and prints each round.
//
//   random_adversary [seed] [rounds] [Γ_0 Γ_1 ... Γ_k]
//
// Defaults: seed 1, two rounds, groups C2 C3 C2xC2.

#include <iostream>
#include <random>
#include <string>
#include <vector>

#include "vdg/game.hpp"

int main(int argc, char** argv) {
  unsigned seed = argc > 1 ? static_cast<unsigned>(std::stoul(argv[1])) : 1;
  vdg::GameConfig config{{"C2", "C3", "C2xC2"}, argc > 2 ? std::stoi(argv[2]) : 2};
  if (argc > 4) config.groups.assign(argv + 3, argv + argc);

  try {
    vdg::GameState s = vdg::build_game(config);
    std::cout << "G_0 has " << s.graph.num_vertices() << " vertices, |Aut(G_0)| = " << *s.initial_order << " ("
              << s.groups[0].name() << ")\n";
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> pick(1, s.k());
    while (!s.finished()) {
      const int c = pick(rng);
      const vdg::MoveRecord& rec = vdg::play_round(s, c);
      std::cout << "round " << s.round << ": adversary names " << config.groups[static_cast<std::size_t>(c)]
                << ", player deletes " << vdg::raw(rec.deleted) << ", |Aut| = " << *rec.aut_order
                << (*rec.verified ? " (isomorphic)" : " (MISMATCH)") << '\n';
    }
  } catch (const vdg::Error& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }
  return 0;
}
