#include "qccp/lbb.hpp"

#include "cover_dual.hpp"

namespace qccp {
namespace {

using detail::CoverDual;

// Arc rows mu + gamma - p_terms(e) <= Q_ee, solve, and fill the report.
bool finish_lbb(BoundReport& rep, lp::Problem& prob, const QccpInstance& inst,
                const CoverDual& cd, const std::vector<std::vector<lp::Term>>& p_terms,
                const LbbOptions& options, lp::Solution& sol) {
  const Digraph& g = inst.graph();
  for (ArcId e = 0; e < g.num_arcs(); ++e) {
    detail::add_arc_row(prob, g, cd, e, p_terms[e], lp::Relation::less_equal, inst.cost(e, e));
  }
  detail::Stopwatch sw;
  sol = lp::solve(prob, options.lp);
  record_lp(rep, prob, sol, sw.seconds());
  if (!detail::settle_status(rep, sol)) return false;
  rep.p_hat.resize(g.num_arcs());
  for (ArcId e = 0; e < g.num_arcs(); ++e) {
    rep.p_hat[e] = detail::eval_terms(p_terms[e], sol.primal) + inst.cost(e, e);
  }
  detail::extract_cover_dual(rep, sol, cd, g.num_nodes());
  return true;
}

bool over_cap(BoundReport& rep, std::size_t rows, const LbbOptions& options) {
  if (rows <= options.max_rows) return false;
  rep.status = BoundStatus::size_limit;
  rep.message = "LP needs " + std::to_string(rows) + " rows, cap is " +
                std::to_string(options.max_rows);
  return true;
}

BoundReport weak_sum_bound(const QccpInstance& inst, const LbbOptions& options, bool skew) {
  detail::Stopwatch total;
  const Digraph& g = inst.graph();
  const int m = g.num_arcs();
  BoundReport rep;
  rep.name = skew ? "lbb1-skew" : "lbb1";

  lp::Problem prob(lp::Sense::maximize);
  const CoverDual cd = detail::add_cover_dual(prob, g.num_nodes());
  const int b0 = prob.num_cols();
  for (ArcId e = 0; e < m; ++e) prob.add_free_variable(0.0);
  const int c0 = prob.num_cols();
  for (ArcId e = 0; e < m; ++e) prob.add_free_variable(0.0);

  // One skew variable per 2-cycle, owned by the arc with the smaller id.
  std::vector<int> skew_col(m, -1);
  std::vector<ArcId> reverse(m, -1);
  if (skew) {
    for (ArcId e = 0; e < m; ++e) {
      const ArcId f = g.find_arc(g.head(e), g.tail(e));
      reverse[e] = f;
      if (f > e) skew_col[e] = prob.add_free_variable(0.0);
    }
  }

  for (const SuccessorPair& sp : g.successor_pairs()) {
    const ArcId e = sp.first;
    const ArcId f = sp.second;
    std::vector<lp::Term> terms{{b0 + e, 1.0}, {c0 + f, 1.0}};
    if (skew && reverse[e] == f) {
      terms.push_back(e < f ? lp::Term{skew_col[e], 1.0} : lp::Term{skew_col[f], -1.0});
    }
    prob.add_row(std::move(terms), lp::Relation::less_equal, inst.cost(e, f));
  }

  std::vector<std::vector<lp::Term>> p_terms(m);
  for (ArcId e = 0; e < m; ++e) p_terms[e] = {{b0 + e, 1.0}, {c0 + e, 1.0}};
  lp::Solution sol;
  if (finish_lbb(rep, prob, inst, cd, p_terms, options, sol)) {
    rep.witnesses["b"].assign(sol.primal.begin() + b0, sol.primal.begin() + b0 + m);
    rep.witnesses["c"].assign(sol.primal.begin() + c0, sol.primal.begin() + c0 + m);
    if (skew) {
      // Arc-indexed: M[e] = M_{e, reverse(e)}, so M[reverse(e)] = -M[e].
      std::vector<double> mv(m, 0.0);
      for (ArcId e = 0; e < m; ++e) {
        if (skew_col[e] >= 0) {
          mv[e] = sol.primal[skew_col[e]];
          mv[reverse[e]] = -mv[e];
        }
      }
      rep.witnesses["M"] = std::move(mv);
    }
  }
  rep.seconds = total.seconds();
  return rep;
}

}  // namespace

BoundReport lbb1(const QccpInstance& inst, const LbbOptions& options) {
  return weak_sum_bound(inst, options, false);
}

BoundReport lbb1_skew(const QccpInstance& inst, const LbbOptions& options) {
  return weak_sum_bound(inst, options, true);
}

BoundReport lbb2(const QccpInstance& inst, const LbbOptions& options) {
  detail::Stopwatch total;
  const Digraph& g = inst.graph();
  const int m = g.num_arcs();
  const int n = g.num_nodes();
  BoundReport rep;
  rep.name = "lbb2";
  const std::size_t rows = static_cast<std::size_t>(m) * m + m;
  if (over_cap(rep, rows, options)) return rep;

  lp::Problem prob(lp::Sense::maximize);
  const CoverDual cd = detail::add_cover_dual(prob, n);
  auto block = [&](int count) {
    const int first = prob.num_cols();
    for (int k = 0; k < count; ++k) prob.add_free_variable(0.0);
    return first;
  };
  const int b0 = block(m);      // b_e
  const int c0 = block(m * n);  // c_{e,l} at c0 + e n + l
  const int d0 = block(n * m);  // d_{i,f} at d0 + i m + f
  const int t0 = block(m);      // t_f

  for (ArcId e = 0; e < m; ++e) {
    for (ArcId f = 0; f < m; ++f) {
      std::vector<lp::Term> terms{{c0 + e * n + g.head(f), 1.0}, {d0 + g.tail(e) * m + f, 1.0}};
      double rhs = 0.0;
      if (e != f) rhs = inst.cost(e, f);
      if (g.is_successor(e, f)) {
        terms.push_back({b0 + e, 1.0});
        terms.push_back({t0 + f, 1.0});
      }
      prob.add_row(std::move(terms), lp::Relation::less_equal, rhs);
    }
  }

  std::vector<std::vector<lp::Term>> p_terms(m);
  for (ArcId e = 0; e < m; ++e) {
    auto& pt = p_terms[e];
    pt.push_back({b0 + e, 1.0});
    pt.push_back({t0 + e, 1.0});
    for (NodeId k = 0; k < n; ++k) {
      pt.push_back({c0 + e * n + k, 1.0});
      pt.push_back({d0 + k * m + e, 1.0});
    }
  }
  lp::Solution sol;
  if (finish_lbb(rep, prob, inst, cd, p_terms, options, sol)) {
    rep.witnesses["b"].assign(sol.primal.begin() + b0, sol.primal.begin() + b0 + m);
    rep.witnesses["t"].assign(sol.primal.begin() + t0, sol.primal.begin() + t0 + m);
  }
  rep.seconds = total.seconds();
  return rep;
}

BoundReport lbb3(const QccpInstance& inst, const LbbOptions& options) {
  detail::Stopwatch total;
  const Digraph& g = inst.graph();
  const int m = g.num_arcs();
  const int n = g.num_nodes();
  BoundReport rep;
  rep.name = "lbb3";
  const std::size_t rows = static_cast<std::size_t>(m) * m + m;
  if (over_cap(rep, rows, options)) return rep;

  lp::Problem prob(lp::Sense::maximize);
  const CoverDual cd = detail::add_cover_dual(prob, n);
  auto block = [&](int count) {
    const int first = prob.num_cols();
    for (int k = 0; k < count; ++k) prob.add_free_variable(0.0);
    return first;
  };
  const int b0 = block(m * n);  // b_{e,k} at b0 + e n + k
  const int c0 = block(m * n);  // c_{e,l} at c0 + e n + l
  const int d0 = block(n * m);  // d_{i,f} at d0 + i m + f
  const int t0 = block(n * m);  // t_{j,f} at t0 + j m + f

  for (ArcId e = 0; e < m; ++e) {
    for (ArcId f = 0; f < m; ++f) {
      std::vector<lp::Term> terms{{b0 + e * n + g.tail(f), 1.0},
                                  {c0 + e * n + g.head(f), 1.0},
                                  {d0 + g.tail(e) * m + f, 1.0},
                                  {t0 + g.head(e) * m + f, 1.0}};
      prob.add_row(std::move(terms), lp::Relation::less_equal, e == f ? 0.0 : inst.cost(e, f));
    }
  }

  std::vector<std::vector<lp::Term>> p_terms(m);
  for (ArcId e = 0; e < m; ++e) {
    auto& pt = p_terms[e];
    for (NodeId k = 0; k < n; ++k) {
      pt.push_back({b0 + e * n + k, 1.0});
      pt.push_back({c0 + e * n + k, 1.0});
      pt.push_back({d0 + k * m + e, 1.0});
      pt.push_back({t0 + k * m + e, 1.0});
    }
  }
  lp::Solution sol;
  finish_lbb(rep, prob, inst, cd, p_terms, options, sol);
  rep.seconds = total.seconds();
  return rep;
}

}  // namespace qccp
