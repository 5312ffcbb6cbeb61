#include <gtest/gtest.h>

#include <random>
#include <set>

#include "qccp/digraph.hpp"
#include "test_support.hpp"

namespace qccp {
namespace {

using testing::bidirected_triangle;
using testing::two_cycle;

TEST(Digraph, TwoCycleHasBothSuccessorPairs) {
  const Digraph g = two_cycle();
  EXPECT_EQ(g.num_arcs(), 2);
  const auto sp = g.successor_pairs();
  ASSERT_EQ(sp.size(), 2u);
  EXPECT_EQ(sp[0], (SuccessorPair{0, 1}));
  EXPECT_EQ(sp[1], (SuccessorPair{1, 0}));
}

TEST(Digraph, CompleteOnThreeNodesHasTwelveSuccessorPairs) {
  const Digraph g = testing::complete_digraph(3);
  EXPECT_EQ(g.num_arcs(), 6);
  EXPECT_EQ(g.successor_pairs().size(), 12u);
}

TEST(Digraph, RejectsSelfLoop) {
  const std::vector<Arc> arcs{{0, 0}};
  EXPECT_THROW(build_digraph(2, arcs), GraphError);
}

TEST(Digraph, RejectsDuplicateArc) {
  const std::vector<Arc> arcs{{0, 1}, {0, 1}};
  EXPECT_THROW(build_digraph(2, arcs), GraphError);
}

TEST(Digraph, RejectsOutOfRangeNode) {
  const std::vector<Arc> arcs{{0, 2}};
  EXPECT_THROW(build_digraph(2, arcs), GraphError);
  const std::vector<Arc> negative{{-1, 0}};
  EXPECT_THROW(build_digraph(2, negative), GraphError);
}

TEST(Digraph, ArcIdsFollowInputOrder) {
  const Digraph g = bidirected_triangle();
  EXPECT_EQ(g.tail(3), 1);
  EXPECT_EQ(g.head(3), 0);
  EXPECT_EQ(g.find_arc(0, 2), 5);
  EXPECT_EQ(g.find_arc(0, 0), -1);
}

TEST(Incidence, TwoCycleMatrices) {
  const IncidenceMatrices inc = incidence(two_cycle());
  using Row = std::vector<std::uint8_t>;
  EXPECT_EQ(inc.starts, (std::vector<Row>{{1, 0}, {0, 1}}));
  EXPECT_EQ(inc.ends, (std::vector<Row>{{0, 1}, {1, 0}}));
}

TEST(Incidence, TriangleOutDegreesAreTwo) {
  const IncidenceMatrices inc = incidence(bidirected_triangle());
  for (const auto& row : inc.starts) {
    EXPECT_EQ(std::accumulate(row.begin(), row.end(), 0), 2);
  }
}

// Structural invariants on random graphs.
TEST(DigraphProperty, RandomGraphsAreConsistent) {
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const int n = 2 + trial % 9;
    const Digraph g = testing::random_coverable_graph(n, 0.4, rng);
    const int m = g.num_arcs();
    const IncidenceMatrices inc = incidence(g);

    int out_total = 0, in_total = 0;
    for (NodeId i = 0; i < n; ++i) {
      out_total += static_cast<int>(g.out_arcs(i).size());
      in_total += static_cast<int>(g.in_arcs(i).size());
      for (ArcId e : g.out_arcs(i)) EXPECT_EQ(g.tail(e), i);
      for (ArcId e : g.in_arcs(i)) EXPECT_EQ(g.head(e), i);
    }
    EXPECT_EQ(out_total, m);
    EXPECT_EQ(in_total, m);

    for (ArcId e = 0; e < m; ++e) {
      int su = 0, sv = 0;
      for (NodeId i = 0; i < n; ++i) {
        su += inc.starts[i][e];
        sv += inc.ends[i][e];
      }
      EXPECT_EQ(su, 1);
      EXPECT_EQ(sv, 1);
      EXPECT_EQ(inc.starts[g.tail(e)][e], 1);
      EXPECT_EQ(inc.ends[g.head(e)][e], 1);
    }

    // Successor pairs are exactly the pairs sharing head(e) == tail(f).
    std::set<std::pair<int, int>> listed;
    for (const SuccessorPair& sp : g.successor_pairs()) listed.insert({sp.first, sp.second});
    std::set<std::pair<int, int>> expected;
    for (ArcId e = 0; e < m; ++e) {
      for (ArcId f = 0; f < m; ++f) {
        bool shared = false;
        for (NodeId i = 0; i < n; ++i) shared |= inc.ends[i][e] && inc.starts[i][f];
        if (e != f && shared) expected.insert({e, f});
      }
    }
    EXPECT_EQ(listed, expected);
  }
}

}  // namespace
}  // namespace qccp
