#include <gtest/gtest.h>

#include <random>

#include "relaxmdim/graph.hpp"
#include "support/oracles.hpp"

using namespace relaxmdim;

TEST(EdgeList, PathFromIntegers) {
  auto d = load_edge_list(std::string("0 1\n1 2"));
  EXPECT_EQ(d.graph.order(), 3u);
  EXPECT_EQ(d.graph.size(), 2u);
  EXPECT_TRUE(is_tree(d.graph));
}

TEST(EdgeList, DuplicateAndCommentCollapsed) {
  auto d = load_edge_list(std::string("a b\nb a\n# c"));
  EXPECT_EQ(d.graph.order(), 2u);
  EXPECT_EQ(d.graph.size(), 1u);
  EXPECT_EQ(d.duplicates_dropped, 1u);
  EXPECT_EQ(d.labels, (std::vector<std::string>{"a", "b"}));
}

TEST(EdgeList, FirstAppearanceOrderAndSelfLoops) {
  auto d = load_edge_list(std::string("% header\n10,7\n7 7\n3 10 # trailing\n"));
  EXPECT_EQ(d.labels, (std::vector<std::string>{"10", "7", "3"}));
  EXPECT_EQ(d.self_loops_dropped, 1u);
  EXPECT_TRUE(d.graph.has_edge(0, 1));
  EXPECT_TRUE(d.graph.has_edge(0, 2));
}

TEST(EdgeList, RootHeader) {
  auto d = load_edge_list(std::string("# root 5\n4 5\n5 6\n"));
  ASSERT_TRUE(d.root.has_value());
  EXPECT_EQ(*d.root, 1u);
}

TEST(EdgeList, MalformedLineReportsLineNumber) {
  try {
    load_edge_list(std::string("0 1\n\n1 2 3\n"));
    FAIL() << "expected a parse error";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
    EXPECT_EQ(e.exit_code(), 2);
  }
  EXPECT_THROW(load_edge_list(std::string("0\n")), ParseError);
}

TEST(Graph, InvariantsOnRandomInput) {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<Vertex> pick(0, 29);
  std::vector<Edge> edges;
  for (int i = 0; i < 120; ++i) edges.emplace_back(pick(rng), pick(rng));
  auto g = Graph::from_edges(30, edges);
  for (Vertex u = 0; u < g.order(); ++u) {
    auto nb = g.neighbors(u);
    EXPECT_TRUE(std::is_sorted(nb.begin(), nb.end()));
    EXPECT_EQ(std::adjacent_find(nb.begin(), nb.end()), nb.end());
    for (Vertex v : nb) {
      EXPECT_NE(u, v);
      EXPECT_TRUE(g.has_edge(v, u));
    }
  }
}

TEST(Graph, RejectsOutOfRangeEndpoint) {
  std::vector<Edge> e{{0, 3}};
  EXPECT_THROW(Graph::from_edges(3, e), ValidationError);
}

TEST(Components, LargestComponent) {
  auto g = oracle::make_graph(5, {{0, 1}, {2, 3}, {3, 4}});
  auto sub = largest_connected_component(g);
  EXPECT_EQ(sub.graph.order(), 3u);
  EXPECT_EQ(sub.original, (std::vector<Vertex>{2, 3, 4}));
}

TEST(Components, TieGoesToSmallestId) {
  auto g = oracle::make_graph(4, {{2, 3}, {0, 1}});
  auto sub = largest_connected_component(g);
  EXPECT_EQ(sub.original, (std::vector<Vertex>{0, 1}));
}

TEST(Components, ConnectedGraphUnchanged) {
  auto g = oracle::cycle(6);
  auto sub = largest_connected_component(g);
  EXPECT_EQ(sub.graph, g);
}

TEST(Components, EmptyGraphThrows) {
  EXPECT_THROW(largest_connected_component(Graph{}), ValidationError);
}

TEST(Distances, SmallExamples) {
  auto p = all_pairs_distances(oracle::path(4));
  EXPECT_EQ(p(0, 3), 3u);
  auto s = all_pairs_distances(oracle::star(2));
  EXPECT_EQ(s(1, 2), 2u);
  auto c = all_pairs_distances(oracle::cycle(4));
  EXPECT_EQ(c(0, 2), 2u);
  EXPECT_EQ(c(0, 1), 1u);
}

TEST(Distances, MatchFloydWarshallAndMetricAxioms) {
  std::mt19937_64 rng(5);
  for (int rep = 0; rep < 10; ++rep) {
    auto g = oracle::random_unicyclic(25, rng);
    auto dm = all_pairs_distances(g);
    auto ref = oracle::distances(g);
    for (Vertex u = 0; u < 25; ++u) {
      EXPECT_EQ(dm(u, u), 0u);
      for (Vertex v = 0; v < 25; ++v) {
        EXPECT_EQ(static_cast<int>(dm(u, v)), ref[u][v]);
        EXPECT_EQ(dm(u, v), dm(v, u));
        EXPECT_EQ(dm(u, v) == 1, g.has_edge(u, v));
      }
    }
    std::uniform_int_distribution<Vertex> pick(0, 24);
    for (int t = 0; t < 1000; ++t) {
      Vertex a = pick(rng), b = pick(rng), c = pick(rng);
      EXPECT_LE(dm(a, c), dm(a, b) + dm(b, c));
    }
  }
}

TEST(Distances, DisconnectedUsesSentinel) {
  auto dm = all_pairs_distances(oracle::make_graph(3, {{0, 1}}));
  EXPECT_EQ(dm(0, 2), kUnreachable);
  EXPECT_FALSE(dm.connected());
}

TEST(Identification, Examples) {
  auto dm = all_pairs_distances(oracle::path(4));
  std::vector<Vertex> s{0};
  EXPECT_EQ(identification_vector(dm, 2, s), (std::vector<Distance>{2}));
  auto c4 = all_pairs_distances(oracle::cycle(4));
  std::vector<Vertex> s2{0, 1};
  EXPECT_EQ(identification_vector(c4, 3, s2), (std::vector<Distance>{1, 2}));
  EXPECT_TRUE(identification_vector(c4, 3, {}).empty());
  std::vector<Vertex> dup{1, 1};
  EXPECT_THROW(identification_vector(c4, 0, dup), ValidationError);
}

TEST(Partition, FourCycleSingleSensor) {
  auto dm = all_pairs_distances(oracle::cycle(4));
  std::vector<Vertex> s{0};
  auto p = equivalence_partition(dm, s);
  EXPECT_EQ(p.blocks, (std::vector<std::vector<Vertex>>{{0}, {1, 3}, {2}}));
  EXPECT_EQ(p.alpha, 2u);
  EXPECT_EQ(p.non_resolved_count, 2u);
  EXPECT_TRUE(is_k_relaxed_resolving(dm, s, 2));
  EXPECT_FALSE(is_k_relaxed_resolving(dm, s, 1));
}

TEST(Partition, AllAndNoSensors) {
  auto g = oracle::cycle(7);
  auto dm = all_pairs_distances(g);
  std::vector<Vertex> all(7);
  std::iota(all.begin(), all.end(), Vertex{0});
  auto p = equivalence_partition(dm, all);
  EXPECT_EQ(p.alpha, 1u);
  EXPECT_EQ(p.blocks.size(), 7u);
  auto q = equivalence_partition(dm, {});
  EXPECT_EQ(q.alpha, 7u);
  EXPECT_EQ(q.blocks.size(), 1u);
  EXPECT_TRUE(is_k_relaxed_resolving(dm, {}, dm.diameter()));
}

TEST(Partition, PropertiesOnRandomGraphs) {
  std::mt19937_64 rng(17);
  for (int rep = 0; rep < 40; ++rep) {
    auto g = oracle::random_unicyclic(12, rng);
    auto dm = all_pairs_distances(g);
    auto ref = oracle::distances(g);
    std::vector<Vertex> s;
    std::bernoulli_distribution coin(0.3);
    for (Vertex v = 0; v < 12; ++v)
      if (coin(rng)) s.push_back(v);
    std::shuffle(s.begin(), s.end(), rng);
    auto p = equivalence_partition(dm, s);

    EXPECT_EQ(p.blocks, oracle::classes(ref, s));
    std::vector<int> hits(12, 0);
    for (const auto& b : p.blocks)
      for (Vertex v : b) ++hits[v];
    EXPECT_TRUE(std::all_of(hits.begin(), hits.end(), [](int h) { return h == 1; }));
    for (Vertex x : s) EXPECT_EQ(p.blocks[p.block_of[x]].size(), 1u);

    // The graph-only path agrees with the matrix path.
    auto pg = equivalence_partition(g, s);
    EXPECT_EQ(pg.blocks, p.blocks);

    bool zero = is_k_relaxed_resolving(dm, s, 0);
    EXPECT_EQ(zero, p.alpha == 1);
    for (int k = 0; k <= 6; ++k) {
      bool ok = is_k_relaxed_resolving(dm, s, k);
      EXPECT_EQ(ok, oracle::resolves(ref, s, k));
      EXPECT_EQ(ok, is_k_relaxed_resolving(g, s, k));
      if (ok) {
        EXPECT_TRUE(is_k_relaxed_resolving(dm, s, k + 1));
      }
    }

    // Adding a sensor refines.
    Vertex extra = static_cast<Vertex>(rng() % 12);
    if (std::find(s.begin(), s.end(), extra) == s.end()) {
      auto s2 = s;
      s2.push_back(extra);
      auto p2 = equivalence_partition(dm, s2);
      for (const auto& b : p2.blocks) {
        auto owner = p.block_of[b.front()];
        for (Vertex v : b) EXPECT_EQ(p.block_of[v], owner);
      }
    }
  }
}

TEST(Stats, PathAndCycle) {
  auto p = graph_stats(oracle::path(4));
  EXPECT_EQ(p.n, 4u);
  EXPECT_EQ(p.m, 3u);
  EXPECT_EQ(p.diameter, 3u);
  EXPECT_EQ(p.shell1_size, 4u);
  EXPECT_DOUBLE_EQ(p.avg_degree, 1.5);
  EXPECT_DOUBLE_EQ(p.avg_spl, (3 * 1 + 2 * 2 + 1 * 3) / 6.0);
  auto c = graph_stats(oracle::cycle(4));
  EXPECT_EQ(c.shell1_size, 0u);
}

TEST(Stats, InvariantsOnRandomGraphs) {
  std::mt19937_64 rng(23);
  for (int rep = 0; rep < 20; ++rep) {
    auto g = oracle::random_unicyclic(30, rng);
    auto s = graph_stats(g);
    EXPECT_EQ(s.shell1_size, 30 - oracle::peel(g, 30).size());
    EXPECT_GE(static_cast<double>(s.diameter), s.avg_spl);
    EXPECT_EQ(static_cast<int>(s.diameter), oracle::diameter(g));
  }
}

TEST(Stats, DisconnectedIsRejected) {
  EXPECT_THROW(graph_stats(oracle::make_graph(4, {{0, 1}, {2, 3}})), ValidationError);
}
