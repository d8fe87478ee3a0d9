#include <gtest/gtest.h>

#include <set>

#include "kss/brute_force.hpp"
#include "kss/colouring.hpp"
#include "kss/grid.hpp"
#include "kss/grid_embed.hpp"
#include "kss/grid_search.hpp"
#include "kss/orderly.hpp"
#include "test_util.hpp"

namespace kss {
namespace {

TEST(Grid, DirectionCountsMatchFormula) {
  EXPECT_EQ(GridSystem(1).size(), 13);
  EXPECT_EQ(GridSystem(2).size(), 49);
  EXPECT_EQ(GridSystem(4).size(), 193);
  for (int N = 1; N <= 12; ++N) EXPECT_EQ(GridSystem(N).size(), grid_direction_count(N)) << N;
}

TEST(Grid, DirectionCountsMatchRawPointCount) {
  for (int N = 1; N <= 4; ++N) {
    int surface = 0;
    for (int x = -N; x <= N; ++x)
      for (int y = -N; y <= N; ++y)
        for (int z = -N; z <= N; ++z)
          surface += std::max({std::abs(x), std::abs(y), std::abs(z)}) == N;
    EXPECT_EQ(GridSystem(N).size() * 2, surface);
  }
}

TEST(Grid, NormalizationIdentifiesAntipodes) {
  const GridSystem sys(3);
  std::set<GridDirection> seen;
  for (const auto& d : sys.directions()) {
    const GridDirection minus{-d.x, -d.y, -d.z};
    EXPECT_EQ(minus.normalized(), d);
    EXPECT_EQ(sys.index_of(minus), sys.index_of(d));
    seen.insert(d);
    for (const auto& e : sys.directions()) {
      EXPECT_EQ(dot(d, e) == 0, dot(minus, e) == 0);
      if (!(d == e)) EXPECT_NE(cross(d, e), (GridDirection{0, 0, 0}));  // never parallel
    }
  }
  EXPECT_EQ(static_cast<int>(seen.size()), sys.size());
}

TEST(Grid, OrthogonalPairAfterNormalization) {
  EXPECT_EQ(dot({1, 1, 2}, {1, 1, -1}), 0);
  const GridSystem sys(2);
  const int a = sys.index_of({1, 1, 2});
  const int b = sys.index_of({2, 2, -2});
  ASSERT_GE(a, 0);
  ASSERT_GE(b, 0);
  EXPECT_EQ(sys.direction(b), (GridDirection{-2, -2, 2}));
  EXPECT_TRUE(grid_graph(sys).has_edge(a, b));
}

TEST(Grid, UnitGridGraph) {
  const GridSystem sys(1);
  const SparseGraph g = grid_graph(sys);
  const int up = sys.index_of({0, 0, 1});
  std::set<GridDirection> neighbours;
  for (int w : g.adj[up]) neighbours.insert(sys.direction(w));
  EXPECT_EQ(neighbours, (std::set<GridDirection>{{1, 0, 0}, {0, 1, 0}, {1, 1, 0}, {-1, 1, 0}}));
  const Graph dense = to_dense(g);
  // Recorded by direct check: the N = 1 grid graph has no square and 4 triangles.
  EXPECT_TRUE(is_square_free(dense));
  EXPECT_FALSE(brute::has_square(dense));
  EXPECT_EQ(triangles(dense).size(), 4U);
  const Triangle axes{sys.index_of({1, 0, 0}), sys.index_of({0, 1, 0}), up};
  std::array<int, 3> sorted = axes;
  std::sort(sorted.begin(), sorted.end());
  const auto tris = triangles(dense);
  EXPECT_NE(std::find(tris.begin(), tris.end(), Triangle{sorted[0], sorted[1], sorted[2]}),
            tris.end());
}

TEST(Grid, OrbitRepresentativesCoverTheGrid) {
  for (int N : {1, 2, 5}) {
    const GridSystem sys(N);
    std::set<int> covered;
    for (int r : orbit_representatives(sys))
      for (const auto& image : cube_images(sys.direction(r))) covered.insert(sys.index_of(image));
    EXPECT_EQ(static_cast<int>(covered.size()), sys.size());
  }
}

TEST(GridEmbed, TriangleOnAxes) {
  const auto r = grid_embed(test::complete(3), 1);
  ASSERT_EQ(r.outcome, GridOutcome::kEmbedded);
  EXPECT_TRUE(r.pinned);
  EXPECT_EQ(r.embedding, (GridEmbedding{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}));
}

TEST(GridEmbed, SquareIsNeverFound) {
  for (int N : {1, 2, 3}) EXPECT_EQ(grid_embed(test::cycle(4), N).outcome, GridOutcome::kNotFound);
  EXPECT_EQ(grid_embed(test::complete(4), 2).outcome, GridOutcome::kNotFound);
}

TEST(GridEmbed, StarOnSecondGrid) {
  const Graph star = test::star(3);
  const auto r = grid_embed(star, 2);
  ASSERT_EQ(r.outcome, GridOutcome::kEmbedded);
  EXPECT_TRUE(valid_grid_embedding(star, r.embedding, 2));
  for (int leaf = 1; leaf <= 3; ++leaf) EXPECT_EQ(dot(r.embedding[0], r.embedding[leaf]), 0);
  // The hand example: centre on the z axis, leaves on the equator.
  const GridEmbedding by_hand{{0, 0, 2}, {2, 0, 0}, {0, 2, 0}, {2, 2, 0}};
  EXPECT_TRUE(valid_grid_embedding(star, by_hand, 2));
}

TEST(GridEmbed, ValidatorRejectsBadWitnesses) {
  const Graph star = test::star(3);
  EXPECT_FALSE(valid_grid_embedding(star, {{0, 0, 2}, {2, 0, 0}, {0, 2, 0}, {2, 0, 0}}, 2));
  EXPECT_FALSE(valid_grid_embedding(star, {{0, 0, 2}, {2, 0, 0}, {0, 2, 0}, {2, 0, 1}}, 2));
  EXPECT_FALSE(valid_grid_embedding(star, {{0, 0, 2}, {2, 0, 0}, {0, 2, 0}, {-2, 0, 0}}, 2));
}

TEST(GridEmbed, BudgetIsReportedSeparately) {
  std::mt19937_64 rng(3);
  const Graph g = test::random_square_free(rng, 14, 80);
  const auto r = grid_embed(g, 4, 3);
  EXPECT_EQ(r.outcome, GridOutcome::kBudgetExceeded);
}

TEST(GridEmbed, SmallGraphsEmbedAndAreFourColourable) {
  for (int n = 1; n <= 7; ++n)
    enumerate(n, {}, [&](const Graph& g) {
      bool found = false;
      for (int N = 1; N <= 5 && !found; ++N) {
        const auto r = grid_embed(g, N);
        if (r.outcome != GridOutcome::kEmbedded) continue;
        found = true;
        ASSERT_TRUE(valid_grid_embedding(g, r.embedding, N));
        ASSERT_TRUE(is_k_colourable(g, 4));
      }
      ASSERT_TRUE(found) << encode_upper_triangle(g).to_string();
    });
}

TEST(GridSearch, MinimizeSecondGrid) {
  const GridSystem sys(2);
  EXPECT_FALSE(is_101_colourable(grid_graph(sys)));
  const auto sub = minimize_uncolourable(sys, 0);
  EXPECT_GE(sub.vertices.size(), 31U);
  EXPECT_FALSE(is_101_colourable(sub.graph));
  EXPECT_TRUE(is_critical(sub.graph));
}

TEST(GridSearch, MinimizeRejectsColourableGrid) {
  EXPECT_THROW(minimize_uncolourable(GridSystem(1)), std::invalid_argument);
}

TEST(GridSearch, UnitGridHasNoUncolourableSubsystem) {
  const auto r = enumerate_grid_subsystems(GridSystem(1), {});
  EXPECT_TRUE(r.grid_colourable);
  EXPECT_TRUE(r.systems.empty());
  EXPECT_FALSE(r.truncated);
  const auto witness = solve_101(grid_graph(GridSystem(1)));
  ASSERT_TRUE(witness.colourable());
  EXPECT_TRUE(valid_101(grid_graph(GridSystem(1)), *witness.colouring));
}

TEST(GridSearch, SampledSecondGridYieldsOneClassOfSize31) {
  SubsystemSearchOptions opt;
  opt.size_bound = 31;
  opt.budget = 12;
  const GridSystem sys(2);
  const auto r = enumerate_grid_subsystems(sys, opt);
  ASSERT_EQ(r.systems.size(), 1U);
  EXPECT_EQ(r.systems[0].vertices.size(), 31U);
  EXPECT_TRUE(r.truncated);
  const Graph ck = to_dense(r.systems[0].graph);
  EXPECT_TRUE(is_square_free(ck));
  const auto embedded = grid_embed(ck, 2);
  ASSERT_EQ(embedded.outcome, GridOutcome::kEmbedded);
  EXPECT_TRUE(is_k_colourable(ck, 4));
}

TEST(GridSearch, ExhaustiveModeIsBudgeted) {
  SubsystemSearchOptions opt;
  opt.mode = SubsystemMode::kExhaustive;
  opt.budget = 200;
  const auto r = enumerate_grid_subsystems(GridSystem(2), opt);
  EXPECT_TRUE(r.truncated);
  for (const auto& s : r.systems) EXPECT_LE(s.vertices.size(), 31U);
}

}  // namespace
}  // namespace kss
