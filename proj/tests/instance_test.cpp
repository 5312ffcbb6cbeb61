#include <gtest/gtest.h>

#include <sstream>

#include "qccp/generators.hpp"
#include "qccp/instance.hpp"
#include "qccp/instance_io.hpp"
#include "test_support.hpp"

namespace qccp {
namespace {

using testing::bidirected_triangle;
using testing::two_cycle;

TEST(Objective, TwoCycleSumsBothEntries) {
  CostMatrix q(2);
  q.set(0, 1, 3);
  q.set(1, 0, 4);
  const QccpInstance inst(two_cycle(), q);
  const std::vector<ArcId> arcs{0, 1};
  EXPECT_DOUBLE_EQ(objective(inst, CycleCover::from_arcs(inst.graph(), arcs)), 7.0);
}

TEST(Objective, ZeroCostsGiveZero) {
  const QccpInstance inst(bidirected_triangle(), CostMatrix(6));
  const std::vector<ArcId> arcs{0, 1, 2};
  EXPECT_DOUBLE_EQ(objective(inst, CycleCover::from_arcs(inst.graph(), arcs)), 0.0);
}

TEST(Objective, UnitTriangleCoversCostThree) {
  const QccpInstance inst = testing::unit_successor_costs(bidirected_triangle());
  const std::vector<ArcId> cw{0, 1, 2}, ccw{3, 4, 5};
  EXPECT_DOUBLE_EQ(objective(inst, CycleCover::from_arcs(inst.graph(), cw)), 3.0);
  EXPECT_DOUBLE_EQ(objective(inst, CycleCover::from_arcs(inst.graph(), ccw)), 3.0);
}

TEST(Objective, DiagonalCountsOnce) {
  CostMatrix q(2);
  q.set(0, 0, 5);
  const QccpInstance inst(two_cycle(), q);
  const std::vector<ArcId> arcs{0, 1};
  EXPECT_DOUBLE_EQ(objective(inst, CycleCover::from_arcs(inst.graph(), arcs)), 5.0);
}

TEST(CycleCover, RejectsNonCover) {
  const Digraph g = bidirected_triangle();
  EXPECT_THROW(CycleCover(g, {1, 1, 0, 0, 0, 0}), InstanceError);
  EXPECT_THROW(CycleCover(g, {1, 0, 0, 1, 0, 0}), InstanceError);
}

TEST(CycleCover, CyclesStartAtSmallestNode) {
  const Digraph g = bidirected_triangle();
  const std::vector<ArcId> arcs{3, 4, 5};
  const auto cycles = CycleCover::from_arcs(g, arcs).cycles(g);
  ASSERT_EQ(cycles.size(), 1u);
  EXPECT_EQ(cycles[0], (std::vector<NodeId>{0, 2, 1}));
}

TEST(Instance, SuccessorOnlyRejectsOffSupportCost) {
  CostMatrix q(6);
  q.set(0, 3, 1.0);  // (0,1) then (1,0) is a successor pair: fine
  EXPECT_NO_THROW(QccpInstance(bidirected_triangle(), q));
  q.set(0, 2, 1.0);  // (0,1) then (2,0) is not
  EXPECT_THROW(QccpInstance(bidirected_triangle(), q), InstanceError);
  EXPECT_NO_THROW(QccpInstance(bidirected_triangle(), q, SupportMode::general));
}

TEST(EtaRepresentation, MixesWithTranspose) {
  CostMatrix q(2);
  q.set(0, 1, 4);
  const CostMatrix r = eta_representation(q, 0.25);
  EXPECT_DOUBLE_EQ(r.get(0, 1), 1.0);
  EXPECT_DOUBLE_EQ(r.get(1, 0), 3.0);
}

TEST(EtaRepresentation, PreservesCoverObjective) {
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const QccpInstance inst = gen_erdos_renyi(6, 0.6, 0, 100, seed);
    const CostMatrix r = eta_representation(inst.costs(), 0.3);
    const Eigen::MatrixXd qd = inst.costs().to_dense();
    const Eigen::MatrixXd rd = r.to_dense();
    for (const auto& c : testing::brute_force_covers(inst.graph())) {
      EXPECT_NEAR(testing::brute_objective(qd, c), testing::brute_objective(rd, c), 1e-9);
    }
  }
}

TEST(InstanceIo, RoundTripKeepsEverything) {
  const QccpInstance a = gen_angle_distance(9, 0.4, 40.0, 500, 3).instance;
  std::stringstream buf;
  write_instance(a, buf);
  const QccpInstance b = read_instance(buf);
  ASSERT_EQ(b.num_nodes(), a.num_nodes());
  ASSERT_EQ(b.num_arcs(), a.num_arcs());
  for (ArcId e = 0; e < a.num_arcs(); ++e) EXPECT_EQ(b.graph().arc(e), a.graph().arc(e));
  EXPECT_EQ(b.mode(), a.mode());
  EXPECT_TRUE(b.costs().to_dense() == a.costs().to_dense());
}

TEST(InstanceIo, RoundTripsNonIntegerGeneralCosts) {
  Eigen::MatrixXd q(2, 2);
  q << 0.1, 1.0 / 3.0, -2.5e-7, 1e12;
  const QccpInstance a = testing::with_costs(two_cycle(), q, SupportMode::general);
  std::stringstream buf;
  write_instance(a, buf);
  const QccpInstance b = read_instance(buf);
  EXPECT_EQ(b.mode(), SupportMode::general);
  EXPECT_TRUE(b.costs().to_dense() == q);
}

TEST(InstanceIo, RejectsCostOffSuccessorSupport) {
  std::stringstream in("QCCP v1 3 6 successor\n0 1\n1 2\n2 0\n1 0\n2 1\n0 2\nCOSTS 1\n0 2 5\n");
  EXPECT_THROW(read_instance(in), ParseError);
}

TEST(InstanceIo, EmptyCostSectionIsZero) {
  std::stringstream in("QCCP v1 2 2 successor\n0 1\n1 0\nCOSTS 0\n");
  const QccpInstance inst = read_instance(in);
  EXPECT_EQ(inst.costs().nonzeros(), 0u);
}

TEST(InstanceIo, RejectsMalformedInput) {
  std::stringstream bad_header("QCCP v2 2 2 successor\n0 1\n1 0\nCOSTS 0\n");
  EXPECT_THROW(read_instance(bad_header), ParseError);
  std::stringstream dangling("QCCP v1 2 2 successor\n0 1\n1 0\nCOSTS 1\n0 7 1\n");
  EXPECT_THROW(read_instance(dangling), ParseError);
  std::stringstream truncated("QCCP v1 2 2 successor\n0 1\n");
  EXPECT_THROW(read_instance(truncated), ParseError);
  std::stringstream loop("QCCP v1 2 2 successor\n0 0\n1 0\nCOSTS 0\n");
  EXPECT_THROW(read_instance(loop), ParseError);
}

}  // namespace
}  // namespace qccp
