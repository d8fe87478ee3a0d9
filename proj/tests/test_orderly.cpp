#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <set>

#include "kss/brute_force.hpp"
#include "kss/canonical.hpp"
#include "kss/orderly.hpp"
#include "test_util.hpp"

namespace kss {
namespace {

std::string code(const Graph& g) { return encode_upper_triangle(g).to_string(); }

std::set<std::string> codes(const std::vector<Graph>& gs) {
  std::set<std::string> out;
  for (const auto& g : gs) out.insert(code(g));
  return out;
}

TEST(Canonical, SmallExamples) {
  EXPECT_TRUE(is_canonical(test::complete(3)));
  EXPECT_TRUE(is_canonical(Graph(3, {{0, 1}, {0, 2}})));   // 110
  EXPECT_FALSE(is_canonical(Graph(3, {{0, 1}, {1, 2}})));  // 101
  const Graph star = test::star(3);
  EXPECT_EQ(code(star), "110100");
  EXPECT_TRUE(is_canonical(star));
  EXPECT_FALSE(is_canonical(Graph(4, {{3, 0}, {3, 1}, {3, 2}})));
}

TEST(Canonical, LabelOfPath) {
  for (const Graph& p3 : {Graph(3, {{0, 1}, {1, 2}}), Graph(3, {{0, 2}, {1, 2}}),
                          Graph(3, {{0, 1}, {0, 2}})})
    EXPECT_EQ(code(canonical_label(p3)), "110");
  EXPECT_NE(code(canonical_label(test::path(3))), code(canonical_label(test::complete(3))));
}

TEST(Canonical, AgreesWithExhaustiveMaximum) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 300; ++trial) {
    const int n = 1 + trial % 7;
    const Graph g = test::random_graph(rng, n, 0.45);
    const Graph label = canonical_label(g);
    const auto best = brute::max_code_index(g);
    ASSERT_EQ(label, brute::graph_from_index(n, best));
    ASSERT_EQ(is_canonical(g), g == label);
  }
}

TEST(Canonical, InvariantUnderRelabeling) {
  std::mt19937_64 rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 2 + trial % 20;
    const Graph g = test::random_square_free(rng, n, 3 * n);
    std::vector<int> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    const Graph h = g.relabeled(perm);
    ASSERT_EQ(canonical_label(g), canonical_label(h));
    ASSERT_TRUE(is_canonical(canonical_label(g)));
  }
}

TEST(Canonical, NodeLimit) {
  EXPECT_THROW(canonical_label(Graph(12), 100), BudgetExceeded);
}

TEST(Extend, FromSingleVertex) {
  const PrefixState k1{Graph(1)};
  const auto all = extend(k1, {true, false});
  ASSERT_EQ(all.size(), 2U);
  EXPECT_EQ(all[0].graph, test::complete(2));
  EXPECT_EQ(all[1].graph, Graph(2));
  const auto connected = extend(k1, {true, true});
  ASSERT_EQ(connected.size(), 1U);
  EXPECT_EQ(connected[0].graph, test::complete(2));
}

TEST(Extend, FromEdge) {
  const auto out = extend(PrefixState{test::complete(2)}, {true, true});
  ASSERT_EQ(out.size(), 2U);
  EXPECT_EQ(out[0].graph, test::complete(3));
  EXPECT_EQ(code(out[1].graph), "110");
}

TEST(Extend, NeverClosesSquare) {
  // Path 0-1-2: a new vertex joined to 0 and 2 would close the square.
  const PrefixState p{Graph(3, {{0, 1}, {0, 2}})};
  for (const auto& child : extend(p, {true, false})) EXPECT_TRUE(is_square_free(child.graph));
  for (const auto& child : extend(PrefixState{test::path(3)}, {false, false}))
    EXPECT_TRUE(is_canonical(child.graph));
}

TEST(Enumerate, SmallCounts) {
  EXPECT_EQ(enumerate_all(3, {}).size(), 2U);
  const auto four = enumerate_all(4, {});
  ASSERT_EQ(four.size(), 3U);
  // Descending code order: paw, star, path.
  EXPECT_EQ(code(four[0]), "111100");
  EXPECT_EQ(code(four[1]), "110100");
  EXPECT_EQ(code(four[2]), "110010");
}

TEST(Enumerate, MatchesBruteForceClasses) {
  for (int n = 1; n <= 7; ++n) {
    for (const EnumFilters f : {EnumFilters{true, true}, EnumFilters{true, false},
                                EnumFilters{false, true}}) {
      if (!f.square_free && n > 6) continue;
      const auto fast = enumerate_all(n, f);
      const auto slow = brute::brute_force_classes(n, f);
      ASSERT_EQ(fast.size(), slow.size()) << "n=" << n;
      EXPECT_EQ(codes(fast), codes(slow)) << "n=" << n;
    }
  }
}

TEST(Enumerate, BruteForceSmallCases) {
  EXPECT_EQ(brute::brute_force_classes(2, {false, true}).size(), 1U);
  EXPECT_EQ(brute::brute_force_classes(4, {true, true}).size(), 3U);
  EXPECT_EQ(brute::brute_force_classes(5, {true, true}).size(), enumerate_all(5, {}).size());
}

TEST(Enumerate, OutputIsDescendingAndDistinct) {
  for (int n = 2; n <= 8; ++n) {
    const auto gs = enumerate_all(n, {});
    for (std::size_t i = 0; i < gs.size(); ++i) {
      ASSERT_TRUE(is_canonical(gs[i]));
      ASSERT_TRUE(is_connected(gs[i]));
      ASSERT_TRUE(is_square_free(gs[i]));
    }
    EXPECT_EQ(codes(gs).size(), gs.size());
  }
}

TEST(Enumerate, PrefixClosedness) {
  for (int n = 2; n <= 8; ++n) {
    for (const auto& g : enumerate_all(n, {true, true})) {
      Graph p = g;
      while (p.n() > 1) {
        p = p.without_last();
        ASSERT_TRUE(is_canonical(p));
        ASSERT_TRUE(is_connected(p));
      }
    }
  }
}

TEST(Enumerate, ConnectedPruningLosesNothing) {
  for (int n = 1; n <= 7; ++n) {
    std::size_t post_hoc = 0;
    enumerate(n, {true, false}, [&](const Graph& g) { post_hoc += is_connected(g); });
    EXPECT_EQ(enumerate_all(n, {true, true}).size(), post_hoc) << "n=" << n;
  }
}

TEST(Enumerate, CanonicalPrefixesOfConnectedGraphsAreConnected) {
  // Every connected graph on up to 8 vertices, not only square-free ones.
  for (int n = 2; n <= 8; ++n) {
    enumerate(n, {false, false}, [&](const Graph& g) {
      if (!is_connected(g)) return;
      Graph p = g;
      while (p.n() > 1) {
        p = p.without_last();
        ASSERT_TRUE(is_connected(p));
      }
    });
  }
}

TEST(Tickets, PartitionEnumeration) {
  for (int n = 1; n <= 9; ++n) {
    const auto whole = enumerate_all(n, {});
    for (int d = 1; d <= 5; ++d) {
      std::vector<Graph> parts;
      for (const auto& t : make_tickets(n, {}, d)) {
        const auto again = SubtreeTicket::from_id(t.id());
        ASSERT_EQ(again.prefix.graph, t.prefix.graph);
        enumerate(n, {}, [&](const Graph& g) { parts.push_back(g); }, &again);
      }
      ASSERT_EQ(parts.size(), whole.size()) << "n=" << n << " d=" << d;
      EXPECT_EQ(parts, whole);
    }
  }
}

}  // namespace
}  // namespace kss
