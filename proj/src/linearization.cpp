#include "qccp/linearization.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>

#include "qccp/ccp.hpp"
#include "qccp/lp.hpp"

namespace qccp {

const char* to_string(LinearizationKind kind) {
  switch (kind) {
    case LinearizationKind::cvp:
      return "cvp";
    case LinearizationKind::row_cvp:
      return "row_cvp";
    case LinearizationKind::col_cvp:
      return "col_cvp";
    case LinearizationKind::incident_weak_sum:
      return "incident_weak_sum";
    case LinearizationKind::generalized_weak_sum:
      return "generalized_weak_sum";
    case LinearizationKind::restricted_generalized:
      return "restricted_generalized";
    case LinearizationKind::symmetric_product:
      return "symmetric_product";
    case LinearizationKind::gl_form:
      return "gl_form";
  }
  return "unknown";
}

namespace {

std::vector<double> diagonal(const QccpInstance& inst) {
  std::vector<double> d(inst.num_arcs());
  for (ArcId e = 0; e < inst.num_arcs(); ++e) d[e] = inst.cost(e, e);
  return d;
}

bool off_successor_support(const QccpInstance& inst) {
  const Digraph& g = inst.graph();
  for (const CostEntry& c : inst.costs().entries()) {
    if (c.row != c.col && !g.is_successor(c.row, c.col)) return true;
  }
  return false;
}

// Q_ef for all f in the "fan" of e agree; returns the shared value per arc.
std::optional<std::vector<double>> constant_fans(const QccpInstance& inst, bool rows,
                                                 double tol) {
  const Digraph& g = inst.graph();
  std::vector<double> v(g.num_arcs(), 0.0);
  for (ArcId e = 0; e < g.num_arcs(); ++e) {
    const auto fan = rows ? g.out_arcs(g.head(e)) : g.in_arcs(g.tail(e));
    bool first = true;
    for (ArcId f : fan) {
      const double q = rows ? inst.cost(e, f) : inst.cost(f, e);
      if (first) {
        v[e] = q;
        first = false;
      } else if (std::abs(q - v[e]) > tol) {
        return std::nullopt;
      }
    }
  }
  return v;
}

}  // namespace

std::optional<LinearizationCertificate> detect_row_col_cvp(const QccpInstance& inst, double tol) {
  if (off_successor_support(inst)) return std::nullopt;
  const std::vector<double> diag = diagonal(inst);
  for (bool rows : {true, false}) {
    if (auto v = constant_fans(inst, rows, tol)) {
      LinearizationCertificate cert;
      cert.kind = rows ? LinearizationKind::row_cvp : LinearizationKind::col_cvp;
      cert.p.resize(v->size());
      for (std::size_t e = 0; e < v->size(); ++e) cert.p[e] = (*v)[e] + diag[e];
      cert.witnesses[rows ? "b" : "c"] = std::move(*v);
      return cert;
    }
  }
  return std::nullopt;
}

std::optional<LinearizationCertificate> detect_incident_weak_sum(const QccpInstance& inst,
                                                                double tol) {
  if (off_successor_support(inst)) return std::nullopt;
  const Digraph& g = inst.graph();
  const int m = g.num_arcs();
  lp::Problem prob;
  for (int k = 0; k < 2 * m; ++k) prob.add_free_variable(0.0);
  for (const SuccessorPair& sp : g.successor_pairs()) {
    prob.add_row({{sp.first, 1.0}, {m + sp.second, 1.0}}, lp::Relation::equal,
                 inst.cost(sp.first, sp.second));
  }
  const lp::Solution sol = lp::solve(prob);
  if (sol.status == lp::Status::infeasible) return std::nullopt;
  if (!sol.optimal()) throw std::runtime_error("weak sum feasibility LP failed");
  std::vector<double> b(sol.primal.begin(), sol.primal.begin() + m);
  std::vector<double> c(sol.primal.begin() + m, sol.primal.end());

  // Gauge: union b_e and c_f for every successor pair, then shift each block
  // so b vanishes at its smallest arc (or c, for blocks with no b).
  std::vector<int> parent(2 * m);
  std::iota(parent.begin(), parent.end(), 0);
  auto find = [&](int x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const SuccessorPair& sp : g.successor_pairs()) {
    parent[find(sp.first)] = find(m + sp.second);
  }
  std::vector<double> shift(2 * m, 0.0);
  std::vector<std::uint8_t> fixed(2 * m, 0);
  for (int v = 0; v < 2 * m; ++v) {
    const int root = find(v);
    if (fixed[root]) continue;
    fixed[root] = 1;
    shift[root] = v < m ? b[v] : -c[v - m];
  }
  for (ArcId e = 0; e < m; ++e) {
    b[e] -= shift[find(e)];
    c[e] += shift[find(m + e)];
  }
  for (const SuccessorPair& sp : g.successor_pairs()) {
    if (std::abs(b[sp.first] + c[sp.second] - inst.cost(sp.first, sp.second)) > tol) {
      return std::nullopt;
    }
  }

  LinearizationCertificate cert;
  cert.kind = LinearizationKind::incident_weak_sum;
  cert.p.resize(m);
  for (ArcId e = 0; e < m; ++e) cert.p[e] = b[e] + c[e] + inst.cost(e, e);
  cert.witnesses["b"] = std::move(b);
  cert.witnesses["c"] = std::move(c);
  return cert;
}

std::optional<LinearizationCertificate> detect_symmetric_product(const Eigen::MatrixXd& q,
                                                                double tol) {
  if (q.rows() != q.cols()) return std::nullopt;
  const Eigen::Index m = q.rows();
  LinearizationCertificate cert;
  cert.kind = LinearizationKind::symmetric_product;
  const double scale = m > 0 ? q.cwiseAbs().maxCoeff() : 0.0;
  Eigen::VectorXd a = Eigen::VectorXd::Zero(m);
  if (scale > 0.0) {
    Eigen::Index k = 0;
    q.diagonal().maxCoeff(&k);
    if (q(k, k) <= 0.0) return std::nullopt;
    a = q.col(k) / std::sqrt(q(k, k));
    if ((q - a * a.transpose()).cwiseAbs().maxCoeff() > tol * scale) return std::nullopt;
  }
  // x^T Q x = (a^T x)^2 is not linear in x, so p stays empty; the useful
  // output is a, see solve_symmetric_product.
  cert.witnesses["a"].assign(a.data(), a.data() + m);
  return cert;
}

SymmetricProductOptimum solve_symmetric_product(const Digraph& g, std::span<const double> a) {
  SymmetricProductOptimum out;
  const CcpResult lo = solve_ccp(g, a);
  if (!lo.feasible) return out;
  CcpOptions opt;
  opt.maximize = true;
  const CcpResult hi = solve_ccp(g, a, opt);
  out.feasible = true;
  const double lo2 = lo.value * lo.value;
  const double hi2 = hi.value * hi.value;
  if (lo2 <= hi2) {
    out.value = lo2;
    out.cover = lo.cover;
  } else {
    out.value = hi2;
    out.cover = hi.cover;
  }
  out.exact = lo.value >= 0.0 || hi.value <= 0.0;
  return out;
}

std::optional<LinearizationCertificate> detect_cvp(const QccpInstance& inst,
                                                  const EnumerationBudget& budget, double tol) {
  const int n = inst.num_nodes();
  if (n == 0) return std::nullopt;
  bool first = true;
  double xi = 0.0;
  double spread = 0.0;
  const EnumerationResult en = enumerate_covers(inst.graph(), budget, [&](const CycleCover& c) {
    const double v = objective(inst, c);
    if (first) {
      xi = v;
      first = false;
    }
    spread = std::max(spread, std::abs(v - xi));
  });
  if (en.status != OracleStatus::complete || first || spread > tol) return std::nullopt;
  LinearizationCertificate cert;
  cert.kind = LinearizationKind::cvp;
  cert.p.assign(inst.num_arcs(), xi / n);
  cert.witnesses["xi"] = {xi};
  return cert;
}

std::vector<double> lin_vector_generalized(const Digraph& g, const GeneralizedSupports& s) {
  const int m = g.num_arcs();
  const int n = g.num_nodes();
  if (s.B.rows() != m || s.B.cols() != n || s.C.rows() != m || s.C.cols() != n ||
      s.D.rows() != n || s.D.cols() != m || s.T.rows() != n || s.T.cols() != m) {
    throw std::invalid_argument("generalized supports have the wrong shape");
  }
  std::vector<double> p(m);
  for (ArcId e = 0; e < m; ++e) {
    p[e] = s.B.row(e).sum() + s.C.row(e).sum() + s.D.col(e).sum() + s.T.col(e).sum();
  }
  return p;
}

GeneralizedSupports embed_restricted(const Digraph& g, const RestrictedSupports& s) {
  const int m = g.num_arcs();
  const int n = g.num_nodes();
  if (s.b.size() != m || s.t.size() != m || s.C.rows() != m || s.C.cols() != n ||
      s.D.rows() != n || s.D.cols() != m) {
    throw std::invalid_argument("restricted supports have the wrong shape");
  }
  GeneralizedSupports out{Eigen::MatrixXd::Zero(m, n), s.C, s.D, Eigen::MatrixXd::Zero(n, m)};
  for (ArcId e = 0; e < m; ++e) {
    out.B(e, g.head(e)) = s.b(e);
    out.T(g.tail(e), e) = s.t(e);
  }
  return out;
}

std::vector<double> lin_vector_restricted(const Digraph& g, const RestrictedSupports& s) {
  return lin_vector_generalized(g, embed_restricted(g, s));
}

RestrictedSupports embed_weak_sum(const Digraph& g, std::span<const double> b,
                                  std::span<const double> c) {
  const int m = g.num_arcs();
  const int n = g.num_nodes();
  if (static_cast<int>(b.size()) != m || static_cast<int>(c.size()) != m) {
    throw std::invalid_argument("weak sum vectors have the wrong length");
  }
  RestrictedSupports s;
  s.b = Eigen::Map<const Eigen::VectorXd>(b.data(), m);
  s.t = Eigen::Map<const Eigen::VectorXd>(c.data(), m);
  s.C = Eigen::MatrixXd::Zero(m, n);
  s.D = Eigen::MatrixXd::Zero(n, m);
  return s;
}

CostMatrix generalized_matrix(const Digraph& g, const GeneralizedSupports& s) {
  const int m = g.num_arcs();
  Eigen::MatrixXd q(m, m);
  for (ArcId e = 0; e < m; ++e) {
    for (ArcId f = 0; f < m; ++f) {
      q(e, f) = s.B(e, g.tail(f)) + s.C(e, g.head(f)) + s.D(g.tail(e), f) + s.T(g.head(e), f);
    }
  }
  return CostMatrix::from_dense(q);
}

CostMatrix restricted_matrix(const Digraph& g, const RestrictedSupports& s) {
  return generalized_matrix(g, embed_restricted(g, s));
}

CoverCheck verify_linearization(const QccpInstance& inst, std::span<const double> p,
                                const EnumerationBudget& budget, double tol) {
  return check_linearization(inst.graph(), inst.costs(), p, budget, tol);
}

}  // namespace qccp
