#include <random>
#include <set>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "vdg/graph.hpp"
#include "vdg/graph_io.hpp"

namespace vdg {
namespace {

VertexTag plain_tag(int) { return {}; }

TEST(DeleteVertexTest, SpecExamples) {
  const Graph k3 = graphs::complete(3);
  for (VertexId v : k3.vertices()) {
    const Graph g = delete_vertex(k3, v);
    EXPECT_EQ(g.num_vertices(), 2u);
    EXPECT_EQ(g.num_edges(), 1u);
  }
  const Graph star = delete_vertex(graphs::star(3), vertex_id(0));
  EXPECT_EQ(star.num_vertices(), 3u);
  EXPECT_EQ(star.num_edges(), 0u);
  const Graph p3 = delete_vertex(graphs::cycle(4), vertex_id(2));
  EXPECT_EQ(p3.num_edges(), 2u);
  EXPECT_EQ(degree_sequence(p3), (std::vector<std::size_t>{1, 1, 2}));
  EXPECT_TRUE(is_connected(p3));
}

TEST(DeleteVertexTest, UnknownVertexThrows) {
  Graph g = graphs::path(3);
  EXPECT_THROW(g.delete_vertex(vertex_id(7)), PreconditionError);
  g.delete_vertex(vertex_id(1));
  EXPECT_THROW(g.delete_vertex(vertex_id(1)), PreconditionError);
}

TEST(DeleteVertexTest, IdsAreNeverReused) {
  Graph g = graphs::path(3);
  g.delete_vertex(vertex_id(2));
  EXPECT_EQ(g.add_vertex(), vertex_id(3));
  EXPECT_FALSE(g.contains(vertex_id(2)));
}

TEST(DeleteVertexTest, TagsAndOtherIdsUnchanged) {
  Graph g = graphs::path(4);
  g.set_tag(vertex_id(3), VertexTag{Role::kAnchor, 2, std::nullopt, std::nullopt});
  const Graph h = delete_vertex(g, vertex_id(0));
  EXPECT_EQ(h.tag(vertex_id(3)).role, Role::kAnchor);
  EXPECT_EQ(h.vertices(), (std::vector<VertexId>{vertex_id(1), vertex_id(2), vertex_id(3)}));
}

TEST(IsConnectedTest, SpecExamples) {
  EXPECT_TRUE(is_connected(graphs::path(4)));
  Graph two_edges = graphs::empty(4);
  two_edges.add_edge(vertex_id(0), vertex_id(1));
  two_edges.add_edge(vertex_id(2), vertex_id(3));
  EXPECT_FALSE(is_connected(two_edges));
  EXPECT_TRUE(is_connected(Graph{}));
  EXPECT_TRUE(is_connected(graphs::empty(1)));
}

TEST(AttachPendantPathTest, SpecExamples) {
  auto [p3, path] = attach_pendant_path(graphs::empty(1), vertex_id(0), 2, plain_tag);
  EXPECT_EQ(p3.num_vertices(), 3u);
  EXPECT_EQ(degree_sequence(p3), (std::vector<std::size_t>{1, 1, 2}));
  EXPECT_EQ(path, (std::vector<VertexId>{vertex_id(1), vertex_id(2)}));

  auto [paw, tail] = attach_pendant_path(graphs::complete(3), vertex_id(1), 1, plain_tag);
  EXPECT_EQ(paw.num_vertices(), 4u);
  EXPECT_EQ(paw.num_edges(), 4u);
  EXPECT_EQ(degree_sequence(paw), (std::vector<std::size_t>{1, 2, 2, 3}));
}

TEST(AttachPendantPathTest, TagsByPositionAndErrors) {
  Graph g = graphs::empty(1);
  const auto path = g.attach_pendant_path(vertex_id(0), 4, [](int i) {
    return VertexTag{Role::kGadgetPath, i, std::nullopt, std::nullopt};
  });
  EXPECT_EQ(g.num_vertices(), 5u);
  for (int i = 0; i < 4; ++i) EXPECT_EQ(g.tag(path[static_cast<std::size_t>(i)]).index, i + 1);
  EXPECT_THROW(g.attach_pendant_path(vertex_id(0), 0, plain_tag), PreconditionError);
  EXPECT_THROW(g.attach_pendant_path(vertex_id(99), 1, plain_tag), PreconditionError);
}

TEST(JoinVertexToSetTest, SpecExamples) {
  Graph edge = graphs::path(2);
  const VertexId hub = edge.add_vertex();
  const std::vector<VertexId> ends{vertex_id(0), vertex_id(1)};
  const Graph triangle = join_vertex_to_set(edge, hub, ends);
  EXPECT_EQ(triangle.num_edges(), 3u);

  Graph c4 = graphs::cycle(4);
  const VertexId center = c4.add_vertex();
  const std::vector<VertexId> rim{vertex_id(0), vertex_id(1), vertex_id(2), vertex_id(3)};
  const Graph wheel = join_vertex_to_set(c4, center, rim);
  EXPECT_EQ(degree_sequence(wheel), (std::vector<std::size_t>{3, 3, 3, 3, 4}));

  Graph g = graphs::path(3);
  const VertexId lonely = g.add_vertex();
  const Graph same = join_vertex_to_set(g, lonely, std::vector<VertexId>{});
  EXPECT_EQ(same.num_edges(), 2u);
  EXPECT_EQ(same.degree(lonely), 0u);
}

TEST(JoinVertexToSetTest, RejectsLoop) {
  Graph g = graphs::path(3);
  const std::vector<VertexId> targets{vertex_id(0), vertex_id(1)};
  EXPECT_THROW(g.join_vertex_to_set(vertex_id(1), targets), PreconditionError);
  EXPECT_EQ(g.num_edges(), 2u);
}

TEST(JoinVertexToSetTest, EdgeCountFormulaOnRandomGraphs) {
  // |E(join(g, v, S))| = |E(g)| + |S \ N(v)|
  std::mt19937 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    Graph g = graphs::empty(10);
    std::bernoulli_distribution coin(0.3);
    for (int a = 0; a < 10; ++a) {
      for (int b = a + 1; b < 10; ++b) {
        if (coin(rng)) g.add_edge(vertex_id(a), vertex_id(b));
      }
    }
    const VertexId v = vertex_id(static_cast<int>(rng() % 10));
    std::vector<VertexId> targets;
    std::size_t fresh = 0;
    for (int a = 0; a < 10; ++a) {
      if (vertex_id(a) == v || !coin(rng)) continue;
      targets.push_back(vertex_id(a));
      fresh += g.has_edge(v, vertex_id(a)) ? 0 : 1;
    }
    const Graph joined = join_vertex_to_set(g, v, targets);
    EXPECT_EQ(joined.num_edges(), g.num_edges() + fresh);
    joined.check_invariants();
  }
}

TEST(DisjointCopyTest, SpecExamples) {
  auto [g, map] = disjoint_copy(graphs::complete(3), graphs::complete(3));
  EXPECT_EQ(g.num_vertices(), 6u);
  EXPECT_EQ(g.num_edges(), 6u);
  EXPECT_FALSE(is_connected(g));
  // The map is a bijection onto the fresh IDs.
  std::set<VertexId> images;
  for (const auto& [from, to] : map) images.insert(to);
  EXPECT_EQ(images, (std::set<VertexId>{vertex_id(3), vertex_id(4), vertex_id(5)}));

  const Graph source = graphs::star(4);
  auto [h, m2] = disjoint_copy(graphs::path(2), source);
  const std::vector<VertexId> copied{m2.at(vertex_id(0)), m2.at(vertex_id(1)), m2.at(vertex_id(2)),
                                     m2.at(vertex_id(3)), m2.at(vertex_id(4))};
  EXPECT_EQ(degree_sequence(h.induced(copied)), degree_sequence(source));
}

TEST(DisjointCopyTest, TagRemap) {
  Graph g;
  const IdMap map = g.disjoint_copy(graphs::path(2), [](const VertexTag& t) {
    VertexTag out = t;
    out.layer = 3;
    return out;
  });
  for (const auto& [from, to] : map) EXPECT_EQ(g.tag(to).layer, 3);
}

TEST(GraphJsonTest, CanonicalAndRoundTrips) {
  Graph g = graphs::cycle(5);
  g.set_tag(vertex_id(2), VertexTag{Role::kRevealX, -1, 1, 4});
  g.delete_vertex(vertex_id(0));
  const json doc = graph_to_json(g);
  EXPECT_EQ(doc.dump(),
            R"({"vertices":[{"id":1,"tag":{"role":"plain"}},{"id":2,"tag":{"role":"reveal-x","layer":1,"gadget":4}},)"
            R"({"id":3,"tag":{"role":"plain"}},{"id":4,"tag":{"role":"plain"}}],"edges":[[1,2],[2,3],[3,4]]})");
  const Graph back = graph_from_json(doc);
  EXPECT_EQ(graph_to_json(back), doc);
  EXPECT_EQ(graph_hash(back), graph_hash(g));
  EXPECT_EQ(doc.dump().find("\"id\":0"), std::string::npos);
}

TEST(GraphJsonTest, RejectsMalformedDocuments) {
  EXPECT_THROW(graph_from_json(json::parse(R"({"vertices":[{"id":0}]})")), SpecError);
  EXPECT_THROW(graph_from_json(json::parse(R"({"vertices":[{"id":0},{"id":0}],"edges":[]})")), SpecError);
  EXPECT_THROW(graph_from_json(json::parse(R"({"vertices":[{"id":0}],"edges":[[0,0]]})")), SpecError);
  EXPECT_THROW(graph_from_json(json::parse(R"({"vertices":[{"id":0}],"edges":[[0,5]]})")), SpecError);
}

TEST(GraphDotTest, OneNodeLinePerVertex) {
  Graph g = graphs::star(3);
  g.set_tag(vertex_id(0), VertexTag{Role::kAnchor, 0, std::nullopt, std::nullopt});
  const std::string dot = graph_to_dot(g);
  EXPECT_NE(dot.find("0 [shape=diamond"), std::string::npos);
  EXPECT_NE(dot.find("0 -- 3;"), std::string::npos);
  std::size_t nodes = 0;
  for (std::size_t p = dot.find("[shape="); p != std::string::npos; p = dot.find("[shape=", p + 1)) ++nodes;
  EXPECT_EQ(nodes, 4u);
}

}  // namespace
}  // namespace vdg
