#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

#include "qccp/generators.hpp"
#include "test_support.hpp"

namespace qccp {
namespace {

TEST(ErdosRenyi, CompleteWhenPIsOne) {
  const QccpInstance inst = gen_erdos_renyi(5, 1.0, 0, 100, 9);
  EXPECT_EQ(inst.num_arcs(), 20);
}

TEST(ErdosRenyi, SameSeedSameInstance) {
  const QccpInstance a = gen_erdos_renyi(9, 0.4, 1, 100, 42);
  const QccpInstance b = gen_erdos_renyi(9, 0.4, 1, 100, 42);
  ASSERT_EQ(a.num_arcs(), b.num_arcs());
  for (ArcId e = 0; e < a.num_arcs(); ++e) EXPECT_EQ(a.graph().arc(e), b.graph().arc(e));
  EXPECT_TRUE(a.costs().to_dense() == b.costs().to_dense());
  const QccpInstance c = gen_erdos_renyi(9, 0.4, 1, 100, 43);
  EXPECT_FALSE(c.num_arcs() == a.num_arcs() && c.costs().to_dense() == a.costs().to_dense());
}

TEST(ErdosRenyi, CostsInRangeOnSuccessorPairsOnly) {
  const QccpInstance inst = gen_erdos_renyi(10, 0.5, 1, 100, 5);
  const Digraph& g = inst.graph();
  for (const CostEntry& c : inst.costs().entries()) {
    EXPECT_TRUE(g.is_successor(c.row, c.col));
    EXPECT_GE(c.value, 1.0);
    EXPECT_LE(c.value, 100.0);
    EXPECT_EQ(c.value, std::round(c.value));
  }
}

TEST(ErdosRenyi, MeanArcCountMatchesBinomial) {
  const int n = 20;
  const double p = 0.3;
  const int runs = 10000;
  double sum = 0.0;
  for (int s = 1; s <= runs; ++s) sum += gen_erdos_renyi(n, p, 0, 100, s).num_arcs();
  const double pairs = n * (n - 1);
  const double mean = sum / runs;
  const double sd_of_mean = std::sqrt(pairs * p * (1 - p) / runs);
  EXPECT_NEAR(mean, pairs * p, 3 * sd_of_mean);
}

TEST(ErdosRenyi, RejectsBadParameters) {
  EXPECT_THROW(gen_erdos_renyi(1, 0.5, 0, 10, 1), InstanceError);
  EXPECT_THROW(gen_erdos_renyi(5, 0.0, 0, 10, 1), InstanceError);
  EXPECT_THROW(gen_erdos_renyi(5, 1.5, 0, 10, 1), InstanceError);
  EXPECT_THROW(gen_erdos_renyi(5, 0.5, 10, 0, 1), InstanceError);
}

TEST(Manhattan, TableSizes) {
  auto size = [](std::vector<int> dims) {
    const QccpInstance inst = gen_manhattan(dims, 0, 10, 1);
    return std::pair{inst.num_nodes(), inst.num_arcs()};
  };
  EXPECT_EQ(size({5, 5}), std::pair(25, 50));
  EXPECT_EQ(size({4, 4, 4}), std::pair(64, 192));
  EXPECT_EQ(size({10, 10, 10}), std::pair(1000, 3000));
}

TEST(Manhattan, OneArcPerDimensionWithAlternatingDirection) {
  const QccpInstance inst = gen_manhattan({4, 6}, 0, 10, 2);
  const Digraph& g = inst.graph();
  for (NodeId v = 0; v < g.num_nodes(); ++v) {
    EXPECT_EQ(g.out_arcs(v).size(), 2u);
    EXPECT_EQ(g.in_arcs(v).size(), 2u);
  }
  // Node v = x + 4 y. Along dimension 0 the direction depends on the parity
  // of y; along dimension 1 on the parity of x.
  for (int y = 0; y < 6; ++y) {
    for (int x = 0; x < 4; ++x) {
      const NodeId v = x + 4 * y;
      const int dx = y % 2 == 0 ? 1 : -1;
      const int dy = x % 2 == 0 ? 1 : -1;
      EXPECT_GE(g.find_arc(v, (x + dx + 4) % 4 + 4 * y), 0);
      EXPECT_GE(g.find_arc(v, x + 4 * ((y + dy + 6) % 6)), 0);
    }
  }
}

TEST(Manhattan, RejectsShortDimension) {
  EXPECT_THROW(gen_manhattan({5, 1}, 0, 10, 1), InstanceError);
  EXPECT_THROW(gen_manhattan({}, 0, 10, 1), InstanceError);
}

TEST(AngleDistance, ArcCountsFromTable) {
  EXPECT_EQ(gen_angle_distance(20, 0.3, 40, 500, 1).instance.num_arcs(), 114);
  EXPECT_EQ(gen_angle_distance(20, 0.5, 40, 500, 1).instance.num_arcs(), 190);
}

TEST(AngleDistance, StraightContinuationCost) {
  EXPECT_EQ(angle_distance_cost(0.0, 10.0, 10.0, 40.0), 1.0);
  EXPECT_NEAR(turning_angle(1, 0, 0, 1), std::numbers::pi / 2, 1e-12);
  EXPECT_NEAR(turning_angle(1, 0, -1, 0), std::numbers::pi, 1e-12);
  EXPECT_NEAR(turning_angle(2, 2, 1, 1), 0.0, 1e-12);
}

TEST(AngleDistance, CostsMatchCoordinates) {
  const AngleDistanceInstance ad = gen_angle_distance(12, 0.4, 40, 500, 8);
  const Digraph& g = ad.instance.graph();
  std::set<std::pair<std::int64_t, std::int64_t>> distinct;
  for (const Point& pt : ad.coords) distinct.insert({pt.x, pt.y});
  EXPECT_EQ(distinct.size(), ad.coords.size());
  bool asymmetric = false;
  for (const SuccessorPair& sp : g.successor_pairs()) {
    const Point& a = ad.coords[g.tail(sp.first)];
    const Point& b = ad.coords[g.head(sp.first)];
    const Point& c = ad.coords[g.head(sp.second)];
    const double ux = b.x - a.x, uy = b.y - a.y, vx = c.x - b.x, vy = c.y - b.y;
    const double angle = std::acos(std::clamp((ux * vx + uy * vy) / std::hypot(ux, uy) /
                                                  std::hypot(vx, vy),
                                              -1.0, 1.0));
    const double expected =
        std::ceil(0.1 * (40.0 * angle + (std::hypot(ux, uy) + std::hypot(vx, vy)) / 2.0));
    EXPECT_NEAR(ad.instance.cost(sp.first, sp.second), expected, 1e-9);
    if (g.is_successor(sp.second, sp.first) &&
        ad.instance.cost(sp.first, sp.second) != ad.instance.cost(sp.second, sp.first)) {
      asymmetric = true;
    }
  }
  (void)asymmetric;  // symmetry is not assumed either way
}

QapData fixed_qap3() {
  QapData qap;
  qap.weights.resize(3, 3);
  qap.distances.resize(3, 3);
  qap.weights << 0, 5, 2, 1, 0, 3, 4, 2, 0;
  qap.distances << 0, 1, 7, 2, 0, 4, 6, 3, 0;
  return qap;
}

TEST(QapGadget, NodeCountsMatchClosedForm) {
  for (int n : {3, 4}) {
    const QapGadget gadget = gen_qap_reduction(random_qap(n, 9, 1));
    EXPECT_EQ(gadget.instance.num_nodes(), qap_gadget_formula_size(n).nodes);
    EXPECT_EQ(gadget.instance.num_nodes(), qap_gadget_built_size(n).nodes);
    EXPECT_EQ(gadget.instance.num_arcs(), qap_gadget_built_size(n).arcs);
  }
  EXPECT_EQ(qap_gadget_formula_size(4).nodes, 60);
  EXPECT_EQ(qap_gadget_formula_size(4).arcs, 72);
  EXPECT_EQ(qap_gadget_formula_size(2).nodes, 6);
  EXPECT_EQ(qap_gadget_formula_size(2).arcs, 8);
}

TEST(QapGadget, RejectsTooSmallOrBadData) {
  EXPECT_THROW(gen_qap_reduction(random_qap(2, 9, 1)), InstanceError);
  QapData bad = fixed_qap3();
  bad.weights(0, 0) = 1;
  EXPECT_THROW(gen_qap_reduction(bad), InstanceError);
}

TEST(QapGadget, FiniteCoversDecodeToAssignmentsWithTheirCost) {
  const QapData qap = fixed_qap3();
  const QapGadget gadget = gen_qap_reduction(qap);
  const Digraph& g = gadget.instance.graph();
  const Eigen::MatrixXd q = gadget.instance.costs().to_dense();
  std::set<std::vector<int>> seen;
  int finite = 0;
  for (const auto& arcs : testing::brute_force_covers(g)) {
    const double cost = testing::brute_objective(q, arcs);
    const std::vector<int> assignment = decode_qap_cover(gadget, CycleCover::from_arcs(g, arcs));
    if (cost < gadget.big_m) {
      ++finite;
      ASSERT_EQ(assignment.size(), 3u);
      EXPECT_NEAR(cost, qap_objective(qap, assignment), 1e-9);
      seen.insert(assignment);
    }
  }
  EXPECT_GT(finite, 0);
  EXPECT_EQ(seen.size(), 6u);  // every permutation is realized
}

}  // namespace
}  // namespace qccp
