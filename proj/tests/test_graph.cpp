#include <gtest/gtest.h>

#include <random>

#include "kss/brute_force.hpp"
#include "kss/graph.hpp"
#include "kss/graph6.hpp"
#include "test_util.hpp"

namespace kss {
namespace {

TEST(UpperTriangle, CompleteAndEmpty) {
  EXPECT_EQ(encode_upper_triangle(test::complete(3)).to_string(), "111");
  EXPECT_EQ(encode_upper_triangle(Graph(3)).to_string(), "000");
}

TEST(UpperTriangle, PathCentreFirst) {
  EXPECT_EQ(encode_upper_triangle(Graph(3, {{0, 1}, {0, 2}})).to_string(), "110");
  EXPECT_EQ(encode_upper_triangle(Graph(3, {{0, 1}, {1, 2}})).to_string(), "101");
}

TEST(UpperTriangle, BijectionOnFiveVertices) {
  for (std::uint32_t index = 0; index < (1U << 10); ++index) {
    const Graph g = brute::graph_from_index(5, index);
    const auto code = encode_upper_triangle(g);
    EXPECT_EQ(decode_upper_triangle(code), g);
    std::uint32_t back = 0;
    for (bool b : code.bits) back = (back << 1) | (b ? 1U : 0U);
    EXPECT_EQ(back, index);
  }
}

TEST(UpperTriangle, HexRoundTrip) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 200; ++trial) {
    const Graph g = test::random_graph(rng, 1 + trial % 20, 0.4);
    EXPECT_EQ(graph_from_hex(code_to_hex(g)), g);
  }
}

TEST(SquareFree, Examples) {
  EXPECT_FALSE(is_square_free(test::cycle(4)));
  EXPECT_TRUE(is_square_free(test::complete(3)));
  EXPECT_FALSE(is_square_free(test::complete(4)));
  EXPECT_TRUE(is_square_free(test::cycle(5)));
}

TEST(SquareFree, AgreesWithSubsetScan) {
  for (int n = 1; n <= 6; ++n) {
    const int length = n * (n - 1) / 2;
    for (std::uint32_t index = 0; index < (1U << length); ++index) {
      const Graph g = brute::graph_from_index(n, index);
      ASSERT_EQ(is_square_free(g), !brute::has_square(g)) << encode_upper_triangle(g).to_string();
    }
  }
}

TEST(Connected, Examples) {
  EXPECT_TRUE(is_connected(Graph(1)));
  EXPECT_FALSE(is_connected(Graph(2)));
  EXPECT_TRUE(is_connected(test::path(3)));
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 2000; ++trial) {
    const Graph g = test::random_graph(rng, 1 + trial % 12, 0.2);
    ASSERT_EQ(is_connected(g), brute::connected(g));
  }
}

TEST(Triangles, Examples) {
  EXPECT_EQ(triangles(test::complete(3)), (std::vector<Triangle>{{0, 1, 2}}));
  EXPECT_TRUE(triangles(test::cycle(4)).empty());
  EXPECT_EQ(triangles(test::complete(4)).size(), 4U);
}

TEST(Triangles, CountMatchesTraceOfCube) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 500; ++trial) {
    const int n = 1 + trial % 12;
    const Graph g = test::random_graph(rng, n, 0.5);
    std::vector<std::vector<long>> a(n, std::vector<long>(n, 0)), a2 = a;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) a[i][j] = g.has_edge(i, j);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) a2[i][j] += a[i][k] * a[k][j];
    long trace = 0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k) trace += a2[i][k] * a[k][i];
    const auto list = triangles(g);
    ASSERT_EQ(static_cast<long>(list.size()), trace / 6);
    ASSERT_TRUE(std::is_sorted(list.begin(), list.end()));
    ASSERT_EQ(triangles(to_sparse(g)), list);
  }
}

TEST(Degree, Examples) {
  EXPECT_EQ(min_degree(test::complete(4)), 3);
  EXPECT_TRUE(every_vertex_in_triangle(test::complete(4)));
  EXPECT_EQ(min_degree(test::path(3)), 1);
  EXPECT_FALSE(every_vertex_in_triangle(test::path(3)));
  EXPECT_EQ(min_degree(test::cycle(4)), 2);
  EXPECT_FALSE(every_vertex_in_triangle(test::cycle(4)));
}

TEST(Graph6, SingleVertex) { EXPECT_EQ(graph6_encode(Graph(1)), "@"); }

TEST(Graph6, KnownStrings) {
  // Bits 111 padded to 111000 = 56, plus 63 = 'w'.
  EXPECT_EQ(graph6_encode(test::complete(3)), "Bw");
  EXPECT_EQ(graph6_decode("Bw"), test::complete(3));
  EXPECT_EQ(graph6_decode(">>graph6<<Bw\n"), test::complete(3));
}

TEST(Graph6, RoundTripRandom) {
  std::mt19937_64 rng(1);
  for (int trial = 0; trial < 10000; ++trial) {
    const Graph g = test::random_graph(rng, 1 + trial % 32, 0.3);
    ASSERT_EQ(graph6_decode(graph6_encode(g)), g);
  }
  const Graph big = test::random_graph(rng, 64, 0.5);
  EXPECT_EQ(graph6_decode(graph6_encode(big)), big);
}

TEST(Graph6, MalformedInput) {
  EXPECT_THROW(graph6_decode("D"), ParseError);
  EXPECT_THROW(graph6_decode(""), ParseError);
  try {
    graph6_decode("Dq");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 2U);
  }
  try {
    graph6_decode("B\x01");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.offset(), 1U);
  }
  EXPECT_THROW(graph6_decode("Bww"), ParseError);
}

TEST(AdjacencyJson, RoundTrip) {
  const Graph g(4, {{0, 1}, {1, 2}, {2, 3}});
  const auto j = adjacency_json(g);
  EXPECT_EQ(j["adj"][1], (nlohmann::json{0, 2}));
  EXPECT_EQ(graph_from_adjacency_json(j), g);
}

}  // namespace
}  // namespace kss
