#include <gtest/gtest.h>

#include <random>

#include "qccp/generators.hpp"
#include "qccp/linearization.hpp"
#include "test_support.hpp"

namespace qccp {
namespace {

using testing::bidirected_triangle;
using testing::two_cycle;

void expect_linearizes(const QccpInstance& inst, const std::vector<double>& p) {
  const Eigen::MatrixXd q = inst.costs().to_dense();
  for (const auto& c : testing::brute_force_covers(inst.graph())) {
    EXPECT_NEAR(testing::brute_objective(q, c), testing::brute_linear(p, c), 1e-6);
  }
}

QccpInstance constant_successor_costs(const Digraph& g, double v) {
  CostMatrix q(g.num_arcs());
  for (const SuccessorPair& sp : g.successor_pairs()) q.set(sp.first, sp.second, v);
  return QccpInstance(g, q);
}

TEST(RowColCvp, ConstantCostsAreRowCvp) {
  const auto cert = detect_row_col_cvp(constant_successor_costs(bidirected_triangle(), 5));
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->kind, LinearizationKind::row_cvp);
  EXPECT_EQ(cert->witnesses.at("b"), std::vector<double>(6, 5.0));
  EXPECT_EQ(cert->p, std::vector<double>(6, 5.0));
}

TEST(RowColCvp, ZeroIsRowCvp) {
  const auto cert = detect_row_col_cvp(QccpInstance(bidirected_triangle(), CostMatrix(6)));
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->p, std::vector<double>(6, 0.0));
}

TEST(RowColCvp, PerturbedEntryBreaksIt) {
  QccpInstance base = constant_successor_costs(testing::complete_digraph(4), 1);
  CostMatrix q = base.costs();
  const SuccessorPair sp = base.graph().successor_pairs()[0];
  q.set(sp.first, sp.second, 2.0);
  EXPECT_FALSE(detect_row_col_cvp(QccpInstance(base.graph(), q)));
}

TEST(RowColCvp, ColumnFormDetected) {
  // Q_ef = c_f for every predecessor e of f, varying in f.
  const Digraph g = testing::complete_digraph(4);
  CostMatrix q(g.num_arcs());
  for (const SuccessorPair& sp : g.successor_pairs()) q.set(sp.first, sp.second, sp.second + 1);
  const QccpInstance inst(g, q);
  const auto cert = detect_row_col_cvp(inst);
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->kind, LinearizationKind::col_cvp);
  expect_linearizes(inst, cert->p);
}

TEST(IncidentWeakSum, ConstructedSumDetected) {
  const Digraph g = testing::complete_digraph(4);
  CostMatrix q(g.num_arcs());
  auto ell = [](ArcId e) { return 3.0 * e - 7.0; };
  for (const SuccessorPair& sp : g.successor_pairs()) {
    q.set(sp.first, sp.second, ell(sp.first) + 2 * ell(sp.second));
  }
  const QccpInstance inst(g, q);
  const auto cert = detect_incident_weak_sum(inst);
  ASSERT_TRUE(cert);
  EXPECT_EQ(cert->kind, LinearizationKind::incident_weak_sum);
  // Up to the gauge, p_e = 3 ell(e): the difference is constant on covers.
  std::vector<double> diff(g.num_arcs());
  for (ArcId e = 0; e < g.num_arcs(); ++e) diff[e] = cert->p[e] - 3 * ell(e);
  EXPECT_TRUE(check_cvp(g, diff).holds);
  expect_linearizes(inst, cert->p);
}

TEST(IncidentWeakSum, GaugeFixesBAtSmallestArc) {
  const QccpInstance inst = testing::weak_sum_instance(6, 0.5, 3);
  const auto a = detect_incident_weak_sum(inst);
  ASSERT_TRUE(a);
  EXPECT_EQ(a->witnesses.at("b")[0], 0.0);
  const auto b = detect_incident_weak_sum(inst);
  EXPECT_EQ(a->p, b->p);
}

TEST(IncidentWeakSum, RowCvpIsAlsoWeakSum) {
  const QccpInstance inst = constant_successor_costs(testing::complete_digraph(4), 3);
  const auto cert = detect_incident_weak_sum(inst);
  ASSERT_TRUE(cert);
  expect_linearizes(inst, cert->p);
}

TEST(IncidentWeakSum, RandomCostsAreNotWeakSums) {
  for (std::uint64_t s = 1; s <= 5; ++s) {
    EXPECT_FALSE(detect_incident_weak_sum(gen_erdos_renyi(7, 0.6, 0, 100, s)));
  }
}

TEST(SymmetricProduct, TwoCycle) {
  Eigen::MatrixXd q(2, 2);
  q << 1, 2, 2, 4;
  const auto cert = detect_symmetric_product(q);
  ASSERT_TRUE(cert);
  EXPECT_TRUE(cert->p.empty());
  const std::vector<double>& a = cert->witnesses.at("a");
  const auto opt = solve_symmetric_product(two_cycle(), a);
  ASSERT_TRUE(opt.feasible);
  EXPECT_TRUE(opt.exact);
  EXPECT_NEAR(opt.value, 9.0, 1e-9);
}

TEST(SymmetricProduct, RankTwoRejected) {
  Eigen::MatrixXd q(2, 2);
  q << 1, 0, 0, 1;
  EXPECT_FALSE(detect_symmetric_product(q));
  Eigen::MatrixXd neg(2, 2);
  neg << -1, -2, -2, -4;
  EXPECT_FALSE(detect_symmetric_product(neg));
}

TEST(SymmetricProduct, MixedSignsOnTriangle) {
  const Digraph g = bidirected_triangle();
  Eigen::VectorXd a(6);
  a << 3, -1, 2, -4, 1, 0.5;
  const Eigen::MatrixXd q = a * a.transpose();
  const auto cert = detect_symmetric_product(q);
  ASSERT_TRUE(cert);
  const std::vector<double>& w = cert->witnesses.at("a");
  const auto opt = solve_symmetric_product(g, w);
  double best = 1e300;
  for (const auto& c : testing::brute_force_covers(g)) {
    best = std::min(best, testing::brute_objective(q, c));
  }
  // Clockwise a^T x = 4, counter-clockwise -2.5: both signs occur.
  EXPECT_FALSE(opt.exact);
  EXPECT_NEAR(opt.value, best, 1e-9);
  EXPECT_NEAR(opt.value, 6.25, 1e-9);
}

TEST(DetectCvp, ProposalVectorLinearizes) {
  // Q_ef = mu_tail(f) + gamma_head(f) style: every cover has the same value.
  const Digraph g = testing::complete_digraph(5);
  std::vector<double> w(g.num_arcs());
  for (ArcId e = 0; e < g.num_arcs(); ++e) w[e] = 2.0 * g.tail(e) - g.head(e);
  CostMatrix q(g.num_arcs());
  for (const SuccessorPair& sp : g.successor_pairs()) q.set(sp.first, sp.second, 0.0);
  for (ArcId e = 0; e < g.num_arcs(); ++e) q.set(e, e, w[e]);
  const QccpInstance inst(g, q);
  const auto cert = detect_cvp(inst);
  ASSERT_TRUE(cert);
  const double xi = cert->witnesses.at("xi")[0];
  EXPECT_NEAR(xi, 10.0, 1e-9);  // sum 2i - sum i over all nodes
  EXPECT_EQ(cert->p, std::vector<double>(g.num_arcs(), xi / 5));
  EXPECT_TRUE(verify_linearization(inst, cert->p).holds);
  EXPECT_FALSE(detect_cvp(gen_erdos_renyi(5, 0.8, 0, 100, 1)));
}

TEST(GeneralizedSupports, ZeroGivesZero) {
  const Digraph g = bidirected_triangle();
  GeneralizedSupports s{Eigen::MatrixXd::Zero(6, 3), Eigen::MatrixXd::Zero(6, 3),
                        Eigen::MatrixXd::Zero(3, 6), Eigen::MatrixXd::Zero(3, 6)};
  EXPECT_EQ(lin_vector_generalized(g, s), std::vector<double>(6, 0.0));
  GeneralizedSupports bad = s;
  bad.B.resize(5, 3);
  EXPECT_THROW(lin_vector_generalized(g, bad), std::invalid_argument);
}

TEST(GeneralizedSupports, WeakSumEmbeddingKeepsP) {
  const QccpInstance inst = testing::weak_sum_instance(4, 0.7, 9);
  const auto cert = detect_incident_weak_sum(inst);
  ASSERT_TRUE(cert);
  const Digraph& g = inst.graph();
  const RestrictedSupports rs =
      embed_weak_sum(g, cert->witnesses.at("b"), cert->witnesses.at("c"));
  const std::vector<double> p = lin_vector_restricted(g, rs);
  ASSERT_EQ(p.size(), cert->p.size());
  for (std::size_t e = 0; e < p.size(); ++e) EXPECT_NEAR(p[e], cert->p[e], 1e-9);

  // The embedded supports reproduce Q on successor pairs; off them the
  // matrix differs only where no cover can pair the arcs.
  const Eigen::MatrixXd qe = restricted_matrix(g, rs).to_dense();
  for (const SuccessorPair& sp : g.successor_pairs()) {
    EXPECT_NEAR(qe(sp.first, sp.second), inst.cost(sp.first, sp.second), 1e-9);
  }
}

TEST(GeneralizedSupports, RandomSupportsLinearize) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int trial = 0; trial < 10; ++trial) {
    const Digraph g = trial < 5 ? bidirected_triangle()
                                : testing::random_coverable_graph(6, 0.5, rng);
    const int m = g.num_arcs(), n = g.num_nodes();
    GeneralizedSupports s{Eigen::MatrixXd(m, n), Eigen::MatrixXd(m, n), Eigen::MatrixXd(n, m),
                          Eigen::MatrixXd(n, m)};
    for (Eigen::MatrixXd* mat : {&s.B, &s.C, &s.D, &s.T}) {
      for (Eigen::Index i = 0; i < mat->size(); ++i) mat->data()[i] = u(rng);
    }
    const QccpInstance inst(g, generalized_matrix(g, s), SupportMode::general);
    const std::vector<double> p = lin_vector_generalized(g, s);
    expect_linearizes(inst, p);
    EXPECT_TRUE(verify_linearization(inst, p).holds);

    RestrictedSupports rs{Eigen::VectorXd(m), Eigen::VectorXd(m), Eigen::MatrixXd(m, n),
                          Eigen::MatrixXd(n, m)};
    for (Eigen::Index i = 0; i < m; ++i) {
      rs.b(i) = u(rng);
      rs.t(i) = u(rng);
    }
    rs.C = s.C;
    rs.D = s.D;
    const QccpInstance rinst(g, restricted_matrix(g, rs), SupportMode::general);
    expect_linearizes(rinst, lin_vector_restricted(g, rs));
  }
}

TEST(VerifyLinearization, PerturbedVectorFails) {
  const QccpInstance inst = testing::weak_sum_instance(6, 0.5, 12);
  auto cert = detect_incident_weak_sum(inst);
  ASSERT_TRUE(cert);
  EXPECT_TRUE(verify_linearization(inst, cert->p).holds);
  std::vector<double> p = cert->p;
  // Perturb an arc that lies on some cover but not on all.
  const auto covers = testing::brute_force_covers(inst.graph());
  for (ArcId e = 0; e < inst.num_arcs(); ++e) {
    int uses = 0;
    for (const auto& c : covers) uses += std::count(c.begin(), c.end(), e);
    if (uses > 0) {
      p[e] += 1.0;
      break;
    }
  }
  EXPECT_FALSE(verify_linearization(inst, p).holds);
}

TEST(VerifyLinearization, PartialVerdictLabeled) {
  const QccpInstance inst = gen_erdos_renyi(9, 0.8, 0, 10, 1);
  EnumerationBudget b;
  b.max_covers = 3;
  const CoverCheck c = verify_linearization(inst, std::vector<double>(inst.num_arcs(), 0.0), b);
  EXPECT_EQ(c.status, OracleStatus::budget_exceeded);
}

TEST(LinearizationProperty, CertificatesVerifyOnSmallInstances) {
  for (std::uint64_t s = 1; s <= 30; ++s) {
    const QccpInstance inst = testing::weak_sum_instance(3 + s % 8, 0.4, s);
    const auto cert = detect_incident_weak_sum(inst);
    ASSERT_TRUE(cert) << "seed " << s;
    EXPECT_TRUE(verify_linearization(inst, cert->p).holds) << "seed " << s;
    if (auto rc = detect_row_col_cvp(inst)) {
      EXPECT_TRUE(verify_linearization(inst, rc->p).holds);
    }
  }
}

}  // namespace
}  // namespace qccp
