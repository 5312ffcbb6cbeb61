#include <gtest/gtest.h>

#include <json.hpp>

#include "qccp/generators.hpp"
#include "qccp/gl.hpp"
#include "qccp/lbb.hpp"
#include "qccp/oracle.hpp"
#include "qccp/reformulate.hpp"
#include "test_support.hpp"

namespace qccp {
namespace {

constexpr double kTol = 1e-6;

// Trace invariants shared by both schemes.
void expect_valid_trace(const ReformulationResult& res) {
  double sum = 0.0;
  std::vector<double> d;
  for (const IterationTrace& it : res.trace) {
    // r_1 is a full bound and may be negative; later gains never are.
    if (it.k > 1) EXPECT_GE(it.r, -kTol);
    EXPECT_GE(it.residual_min, -1e-8 * (1 + it.residual_norm));
    EXPECT_GE(it.eta, -1e-12);
    EXPECT_LE(it.eta, 1 + 1e-12);
    sum += it.r;
    EXPECT_NEAR(it.value, sum, 1e-9 * (1 + std::abs(sum)));
    if (d.empty()) d.assign(it.p.size(), 0.0);
    for (std::size_t e = 0; e < d.size(); ++e) {
      d[e] += it.p[e];
      EXPECT_NEAR(it.d[e], d[e], 1e-9 * (1 + std::abs(d[e])));
    }
  }
  EXPECT_NEAR(res.report.value, sum, 1e-9 * (1 + std::abs(sum)));
}

TEST(Rbb, ZeroCostsStopAfterOneIteration) {
  const QccpInstance inst(testing::complete_digraph(4), CostMatrix(12));
  const ReformulationResult res = rbb(inst);
  ASSERT_EQ(res.trace.size(), 1u);
  EXPECT_NEAR(res.report.value, 0.0, 1e-9);
  const ReformulationResult g = rgl(inst);
  ASSERT_EQ(g.trace.size(), 1u);
  EXPECT_NEAR(g.report.value, 0.0, 1e-9);
}

TEST(Rbb, WeakSumSolvedInFirstIteration) {
  for (std::uint64_t s = 1; s <= 8; ++s) {
    const QccpInstance inst = testing::weak_sum_instance(5 + s % 4, 0.4, s);
    const double opt = testing::brute_force_opt(inst).value;
    const ReformulationResult res = rbb(inst);
    ASSERT_TRUE(res.report.ok());
    ASSERT_GE(res.trace.size(), 1u);
    EXPECT_LE(res.trace.size(), 2u);
    EXPECT_NEAR(res.trace[0].value, opt, kTol * (1 + std::abs(opt)));
    if (res.trace.size() == 2) EXPECT_NEAR(res.trace[1].r, 0.0, kTol * (1 + std::abs(opt)));
    expect_valid_trace(res);
  }
}

TEST(ReformulateProperty, BoundsAndInvariants) {
  for (std::uint64_t s = 1; s <= 10; ++s) {
    const int n = 5 + s % 3;
    const QccpInstance inst = s % 2 ? gen_erdos_renyi(n, 0.5, 0, 100, s)
                                    : gen_angle_distance(n, 0.5, 40, 500, s).instance;
    const testing::BruteOptimum opt = testing::brute_force_opt(inst);
    if (!opt.feasible) continue;
    ReformulateOptions o;
    o.max_iters = 8;
    const ReformulationResult b = rbb(inst, o);
    const ReformulationResult g = rgl(inst, o);
    ASSERT_TRUE(b.report.ok());
    ASSERT_TRUE(g.report.ok());
    expect_valid_trace(b);
    expect_valid_trace(g);
    const double slack = kTol * (1 + opt.value);
    EXPECT_GE(b.report.value, lbb1(inst).value - slack) << "seed " << s;
    EXPECT_LE(b.report.value, opt.value + slack) << "seed " << s;
    EXPECT_LE(g.report.value, opt.value + slack) << "seed " << s;
    EXPECT_GE(g.trace[0].r, gl_classical(inst).value - slack) << "seed " << s;

    // Every cumulative d_k has one value on all covers.
    for (const IterationTrace& it : g.trace) {
      EXPECT_TRUE(check_cvp(inst.graph(), it.d, {}, 1e-6).holds) << "seed " << s << " k " << it.k;
    }
  }
}

TEST(Rgl, FixedHalfSingleIterationEqualsGl) {
  for (std::uint64_t s = 1; s <= 6; ++s) {
    const QccpInstance inst = gen_erdos_renyi(7, 0.5, 0, 100, s);
    ReformulateOptions o;
    o.max_iters = 1;
    o.fixed_eta = 0.5;
    const ReformulationResult r = rgl(inst, o);
    const BoundReport gl = gl_classical(inst);
    if (gl.status == BoundStatus::infeasible) continue;
    EXPECT_TRUE(testing::near(r.report.value, gl.value)) << r.report.value << " vs " << gl.value;
    EXPECT_NEAR(r.trace[0].eta, 0.5, 1e-12);
  }
}

TEST(Rgl, OptimizedEtaAtLeastFixed) {
  for (std::uint64_t s = 1; s <= 6; ++s) {
    const QccpInstance inst = gen_angle_distance(7, 0.5, 40, 500, s).instance;
    ReformulateOptions one;
    one.max_iters = 1;
    ReformulateOptions half = one;
    half.fixed_eta = 0.5;
    const double free_eta = rgl(inst, one).report.value;
    const double fixed = rgl(inst, half).report.value;
    EXPECT_GE(free_eta, fixed - kTol * (1 + std::abs(fixed)));
  }
}

TEST(Reformulate, RowCapAndTimeBudget) {
  const QccpInstance inst = gen_erdos_renyi(7, 0.5, 0, 100, 3);
  ReformulateOptions cap;
  cap.max_rows = 3;
  EXPECT_EQ(rgl(inst, cap).report.status, BoundStatus::size_limit);
  ReformulateOptions quick;
  quick.time_budget_s = 0.0;
  quick.max_iters = 10;
  quick.min_gain = 0.0;
  const ReformulationResult r = rgl(inst, quick);
  EXPECT_EQ(r.report.status, BoundStatus::partial);
  EXPECT_EQ(r.trace.size(), 1u);
}

TEST(Reformulate, TraceSerializes) {
  const ReformulationResult r = rbb(gen_erdos_renyi(6, 0.5, 0, 100, 1));
  ASSERT_FALSE(r.trace.empty());
  const auto j = nlohmann::json::parse(to_json_line(r.trace[0], true));
  EXPECT_EQ(j.at("k"), 1);
  EXPECT_EQ(j.at("p").size(), r.trace[0].p.size());
  EXPECT_FALSE(nlohmann::json::parse(to_json_line(r.trace[0])).contains("p"));
}

}  // namespace
}  // namespace qccp
