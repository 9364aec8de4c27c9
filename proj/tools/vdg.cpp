// vdg: build gadgets and game graphs, play the deletion game, serve the API.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "vdg/constructions.hpp"
#include "vdg/game.hpp"
#include "vdg/graph_io.hpp"
#include "vdg/group_spec.hpp"
#include "vdg/http_server.hpp"
#include "vdg/service.hpp"
#include "vdg/transcript.hpp"

namespace {

using namespace vdg;

// Exit codes. 0 means every requested verification passed.
constexpr int kFailed = 1;
constexpr int kBadInput = 2;
constexpr int kTooLarge = 3;
constexpr int kUnverified = 4;

json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw SpecError(path + ": " + e.what());
  }
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  out << text;
  if (!out) throw Error("cannot write " + path);
}

json report_json(const InvariantReport& report) {
  json out = json::array();
  for (const auto& c : report.checks) {
    json item;
    item["name"] = c.name;
    item["passed"] = c.passed;
    item["detail"] = c.detail;
    out.push_back(std::move(item));
  }
  return out;
}

json ids_json(const std::vector<VertexId>& ids) {
  json out = json::array();
  for (VertexId v : ids) out.push_back(raw(v));
  return out;
}

void print_report(const InvariantReport& report) {
  for (const auto& c : report.checks) {
    std::cout << (c.passed ? "  ok    " : "  FAIL  ") << c.name;
    if (!c.detail.empty()) std::cout << "  " << c.detail;
    std::cout << '\n';
  }
}

struct GadgetArgs {
  std::string group;
  std::string out;
  bool base = false;
  bool skip_verify = false;
};

int build_gadget(const GadgetArgs& args, bool as_json, const Limits& limits) {
  const FiniteGroup group = build_group(args.group, limits);
  ConstructionOptions options;
  options.limits = limits;
  options.verify = !args.skip_verify;
  json doc;
  doc["group"] = group.name();
  InvariantReport report;
  if (args.base) {
    const StabilizedGraph s = frucht_with_trivial_stabilizer(group, options);
    if (options.verify) report = verify_stabilized_graph(s, options.aut());
    doc["kind"] = "stabilized-graph";
    doc["verified"] = s.verified;
    doc["anchor"] = raw(s.anchor);
    doc["graph"] = graph_to_json(s.graph);
  } else {
    RevealGadget h = build_reveal_gadget(group, options);
    if (options.verify) report = verify_reveal_gadget(h, options.aut());
    doc["kind"] = "reveal-gadget";
    doc["verified"] = h.verified;
    doc["x"] = raw(h.x);
    doc["y"] = raw(h.y);
    doc["orbit"] = ids_json(h.orbit);
    doc["layout"] = {{"n", h.layout.n}, {"t", h.layout.bits}, {"path_length", h.layout.path_length}};
    doc["graph"] = graph_to_json(h.graph);
  }
  doc["invariants"] = report_json(report);
  if (!args.out.empty()) write_text(args.out, doc.dump() + "\n");
  const std::size_t vertices = doc["graph"]["vertices"].size();
  if (as_json) {
    json summary = doc;
    if (!args.out.empty()) summary.erase("graph");
    summary["vertices"] = vertices;
    std::cout << summary.dump() << '\n';
  } else {
    std::cout << doc["kind"].get<std::string>() << " for " << group.name() << ": " << vertices << " vertices"
              << (options.verify ? "" : " (unverified)") << '\n';
    print_report(report);
  }
  return options.verify && !report.all_passed() ? kUnverified : 0;
}

struct GameArgs {
  std::vector<std::string> groups;
  int rounds = 1;
  std::string out;
  std::string graph_out;
  bool skip_verify = false;
};

int build_game_cmd(const GameArgs& args, bool as_json, const Limits& limits) {
  const GameState s = build_game({args.groups, args.rounds}, limits, !args.skip_verify);
  const json transcript = transcript_to_json(s);
  if (!args.out.empty()) write_text(args.out, transcript.dump(2) + "\n");
  if (!args.graph_out.empty()) write_text(args.graph_out, graph_to_json(s.graph).dump());
  if (as_json) {
    json out = transcript;
    out["vertices"] = s.graph.num_vertices();
    out["edges"] = s.graph.num_edges();
    out["distinct_k"] = s.distinct_k();
    std::cout << out.dump() << '\n';
  } else {
    std::cout << "G_0: " << s.graph.num_vertices() << " vertices, " << s.graph.num_edges() << " edges, "
              << s.distinct_k() << " distinct challenge group(s)\n";
    if (s.initial_order) std::cout << "|Aut(G_0)| = " << *s.initial_order << ", verified\n";
    std::cout << "hash " << s.initial_hash << '\n';
  }
  return 0;
}

struct PlayArgs {
  std::string game;
  std::vector<int> challenges;
  std::string out;
  std::string graph_out;
  bool skip_verify = false;
};

void print_move(const GameState& s, const MoveRecord& rec, bool as_json) {
  if (as_json) {
    std::cout << move_to_json(rec, s.round).dump() << '\n';
    return;
  }
  std::cout << "round " << s.round << ": challenge " << rec.challenge << " (" << s.groups[rec.group_index].name()
            << "), deleted vertex " << raw(rec.deleted);
  if (rec.aut_order) std::cout << ", |Aut| = " << *rec.aut_order;
  if (rec.verified) std::cout << (*rec.verified ? ", verified" : ", NOT isomorphic");
  if (rec.partial) std::cout << " (order only)";
  std::cout << '\n';
}

int play(const PlayArgs& args, bool as_json, const Limits& limits) {
  const json doc = read_json_file(args.game);
  GameState s = replay_transcript(doc, limits, !args.skip_verify);
  const Verify mode = args.skip_verify ? Verify::kNone : Verify::kFull;
  bool all_ok = true;
  auto move = [&](int c) {
    const MoveRecord& rec = play_round(s, c, mode);
    all_ok = all_ok && rec.verified.value_or(true);
    print_move(s, rec, as_json);
  };
  auto save = [&] { write_text(args.out.empty() ? args.game : args.out, transcript_to_json(s).dump(2) + "\n"); };

  if (!args.challenges.empty()) {
    try {
      for (int c : args.challenges) move(c);
    } catch (const PreconditionError&) {
      save();
      throw;
    }
  } else {
    std::string line;
    while (!s.finished()) {
      std::cerr << "round " << s.round + 1 << " of " << s.config.rounds << ", challenge 1.." << s.k() << "> "
                << std::flush;
      if (!std::getline(std::cin, line) || line == "q" || line == "quit") break;
      if (line.empty()) continue;
      try {
        move(std::stoi(line));
      } catch (const BadIndexError& e) {
        std::cerr << e.what() << '\n';
      } catch (const std::logic_error&) {
        std::cerr << "expected a group index\n";
      }
    }
  }
  save();
  if (!args.graph_out.empty()) write_text(args.graph_out, graph_to_json(s.graph).dump());
  return all_ok ? 0 : kUnverified;
}

int verify_exhaustive_cmd(const GameArgs& args, bool as_json, const Limits& limits) {
  const ExhaustiveReport report = verify_exhaustive({args.groups, args.rounds}, limits);
  if (as_json) {
    json out;
    out["vertices"] = report.graph_vertices;
    out["g0_aut_order"] = order_to_json(report.initial_order);
    json seqs = json::array();
    for (const SequenceResult& r : report.sequences) {
      json item;
      item["challenges"] = r.challenges;
      item["deleted"] = ids_json(r.deleted);
      json orders = json::array();
      for (const GroupOrder& o : r.orders) orders.push_back(order_to_json(o));
      item["aut_orders"] = std::move(orders);
      item["passed"] = r.passed;
      seqs.push_back(std::move(item));
    }
    out["sequences"] = std::move(seqs);
    out["all_passed"] = report.all_passed();
    std::cout << out.dump() << '\n';
  } else {
    std::cout << "G_0: " << report.graph_vertices << " vertices, |Aut(G_0)| = " << report.initial_order << '\n';
    for (const SequenceResult& r : report.sequences) {
      std::cout << (r.passed ? "  pass " : "  FAIL ");
      for (std::size_t j = 0; j < r.challenges.size(); ++j) {
        std::cout << (j ? " -> " : "") << r.challenges[j] << ":" << r.orders[j];
      }
      std::cout << '\n';
    }
    std::cout << report.sequences.size() << " sequence(s), " << (report.all_passed() ? "all passed" : "FAILURES")
              << '\n';
  }
  return report.all_passed() ? 0 : kUnverified;
}

struct DotArgs {
  std::string game;
  std::string graph;
  std::string out;
};

int export_dot(const DotArgs& args, const Limits& limits) {
  if (args.game.empty() == args.graph.empty()) throw SpecError("give exactly one of --game or --graph");
  if (!args.game.empty()) {
    const GameState s = replay_transcript(read_json_file(args.game), limits, false);
    write_text(args.out, graph_to_dot(s.graph, "game"));
    return 0;
  }
  json doc = read_json_file(args.graph);
  if (doc.contains("graph")) doc = doc["graph"];
  write_text(args.out, graph_to_dot(graph_from_json(doc), "g"));
  return 0;
}

struct ServeArgs {
  std::string host = "127.0.0.1";
  int port = 8080;
  std::string state_dir;
  std::string origin = "*";
};

int serve(const ServeArgs& args, const Limits& limits) {
  std::optional<std::filesystem::path> dir;
  if (!args.state_dir.empty()) dir = args.state_dir;
  GameService service(limits, dir);
  HttpServer server(service, args.origin);
  const int port = server.bind(args.host, args.port);
  if (port < 0) throw Error("cannot bind " + args.host + ":" + std::to_string(args.port));
  std::cerr << "listening on http://" << args.host << ":" << port << " (" << service.session_count()
            << " restored session(s))\n";
  return server.run() ? 0 : kFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Graphs whose automorphism groups change in prescribed ways under vertex deletion"};
  app.require_subcommand(1);
  bool as_json = false;
  app.add_flag("--json", as_json, "Machine-readable JSON on stdout");

  GadgetArgs gadget;
  auto* cmd_gadget = app.add_subcommand("build-gadget", "Build and verify a reveal gadget (or its base graph)");
  cmd_gadget->add_option("--group", gadget.group, "Group spec, e.g. C3, D4, S3, C2xC2, table:file.txt")->required();
  cmd_gadget->add_option("-o,--output", gadget.out, "Write the construction document here");
  cmd_gadget->add_flag("--base", gadget.base, "Only the base graph with a trivially stabilized anchor");
  cmd_gadget->add_flag("--skip-verify", gadget.skip_verify, "Skip verification; output is marked unverified");

  GameArgs game;
  auto add_game_options = [&](CLI::App* cmd) {
    cmd->add_option("--groups", game.groups, "Comma-separated specs: Γ_0 first, then the challenge groups")
        ->required()
        ->delimiter(',');
    cmd->add_option("--rounds", game.rounds, "Number of rounds")->required();
  };
  auto* cmd_game = app.add_subcommand("build-game", "Build the game graph G_0");
  add_game_options(cmd_game);
  cmd_game->add_option("-o,--output", game.out, "Write the game transcript (input for play)");
  cmd_game->add_option("--graph-out", game.graph_out, "Write the graph JSON of G_0");
  cmd_game->add_flag("--skip-verify", game.skip_verify, "Do not verify Aut(G_0)");

  PlayArgs play_args;
  auto* cmd_play = app.add_subcommand("play", "Play challenges against a game transcript");
  cmd_play->add_option("--game", play_args.game, "Game transcript from build-game or an earlier play")->required();
  cmd_play->add_option("--challenges", play_args.challenges, "Comma-separated group indices; omit to read stdin")
      ->delimiter(',');
  cmd_play->add_option("-o,--output", play_args.out, "Write the updated transcript here instead of --game");
  cmd_play->add_option("--graph-out", play_args.graph_out, "Write the graph JSON of the current graph");
  cmd_play->add_flag("--skip-verify", play_args.skip_verify, "Do not compute Aut after each move");

  auto* cmd_exhaustive = app.add_subcommand("verify-exhaustive", "Verify every challenge sequence");
  add_game_options(cmd_exhaustive);

  DotArgs dot;
  auto* cmd_dot = app.add_subcommand("export-dot", "Render a graph or the current game graph as DOT");
  cmd_dot->add_option("--game", dot.game, "Game transcript");
  cmd_dot->add_option("--graph", dot.graph, "Graph JSON, or a build-gadget document");
  cmd_dot->add_option("-o,--output", dot.out, "Output file (default stdout)");

  ServeArgs serve_args;
  auto* cmd_serve = app.add_subcommand("serve", "Run the HTTP/JSON game service");
  cmd_serve->add_option("--host", serve_args.host, "Bind address")->capture_default_str();
  cmd_serve->add_option("--port", serve_args.port, "Port, 0 for any free port")->capture_default_str();
  cmd_serve->add_option("--state-dir", serve_args.state_dir, "Persist session snapshots here");
  cmd_serve->add_option("--origin", serve_args.origin, "Allowed CORS origin")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kBadInput;
  }

  try {
    const Limits limits = Limits::from_env();
    if (*cmd_gadget) return build_gadget(gadget, as_json, limits);
    if (*cmd_game) return build_game_cmd(game, as_json, limits);
    if (*cmd_play) return play(play_args, as_json, limits);
    if (*cmd_exhaustive) return verify_exhaustive_cmd(game, as_json, limits);
    if (*cmd_dot) return export_dot(dot, limits);
    if (*cmd_serve) return serve(serve_args, limits);
  } catch (const SpecError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const PreconditionError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kBadInput;
  } catch (const LimitError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kTooLarge;
  } catch (const VerificationError& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kUnverified;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFailed;
  }
  return kFailed;
}
