#include "qccp/gl.hpp"

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <thread>

#include "cover_dual.hpp"
#include "qccp/ccp.hpp"

namespace qccp {

int default_threads() {
  if (const char* env = std::getenv("QCCP_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  return std::max(1u, std::thread::hardware_concurrency());
}

namespace {

template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
  if (threads <= 0) threads = default_threads();
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (int i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int t = 0; t < threads; ++t) {
    pool.emplace_back([&] {
      for (int i = next++; i < count; i = next++) fn(i);
    });
  }
  for (auto& th : pool) th.join();
}

std::vector<std::vector<double>> dense_rows(const CostMatrix& q) {
  std::vector<std::vector<double>> rows(q.num_arcs(), std::vector<double>(q.num_arcs(), 0.0));
  for (const CostEntry& c : q.entries()) rows[c.row][c.col] = c.value;
  return rows;
}

// Node-degree rows sum_{delta+(i)} x = 1 and sum_{delta-(i)} x = 1 over
// columns x0 + e.
void add_cover_rows(lp::Problem& prob, const Digraph& g, int x0) {
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    std::vector<lp::Term> out, in;
    for (ArcId e : g.out_arcs(i)) out.push_back({x0 + e, 1.0});
    for (ArcId e : g.in_arcs(i)) in.push_back({x0 + e, 1.0});
    prob.add_row(std::move(out), lp::Relation::equal, 1.0);
    prob.add_row(std::move(in), lp::Relation::equal, 1.0);
  }
}

bool shares_endpoint(const Digraph& g, ArcId e, ArcId f) {
  return g.tail(e) == g.tail(f) || g.head(e) == g.head(f);
}

bool over_cap(BoundReport& rep, std::size_t rows, std::size_t cap) {
  if (rows <= cap) return false;
  rep.status = BoundStatus::size_limit;
  rep.message = "LP needs " + std::to_string(rows) + " rows, cap is " + std::to_string(cap);
  return true;
}

// Solves a minimization whose columns x0..x0+m-1 are the arc variables.
void finish_min(BoundReport& rep, const lp::Problem& prob, const GlOptions& options, int x0,
                int m) {
  detail::Stopwatch sw;
  const lp::Solution sol = lp::solve(prob, options.lp);
  record_lp(rep, prob, sol, sw.seconds());
  switch (sol.status) {
    case lp::Status::optimal:
      rep.value = sol.objective;
      rep.witnesses["x"].assign(sol.primal.begin() + x0, sol.primal.begin() + x0 + m);
      break;
    case lp::Status::infeasible:
      rep.status = BoundStatus::infeasible;
      rep.message = "graph has no cycle cover";
      break;
    default:
      rep.status = BoundStatus::lp_failure;
      rep.message = std::string("LP ") + lp::to_string(sol.status);
  }
}

}  // namespace

GlVectors gl_vectors(const Digraph& g, const CostMatrix& q, bool with_qmax, int threads) {
  const int m = g.num_arcs();
  const auto rows = dense_rows(q);
  GlVectors out;
  out.z.assign(m, 0.0);
  if (with_qmax) out.qmax.assign(m, 0.0);
  std::vector<std::uint8_t> no_cover(m, 0);
  parallel_for(m, threads, [&](int e) {
    const CcpResult r = solve_ccp_forced(g, rows[e], e, 1);
    if (r.feasible) {
      out.z[e] = r.value;
    } else {
      no_cover[e] = 1;
    }
    if (with_qmax) {
      CcpOptions opt;
      opt.maximize = true;
      opt.forced_arc = e;
      opt.forced_value = 0;
      const CcpResult mx = solve_ccp(g, rows[e], opt);
      if (mx.feasible) out.qmax[e] = mx.value;
    }
  });
  for (ArcId e = 0; e < m; ++e) {
    if (no_cover[e]) out.arcs_without_cover.push_back(e);
  }
  return out;
}

BoundReport gl_classical(const QccpInstance& inst, const GlOptions& options) {
  detail::Stopwatch total;
  const Digraph& g = inst.graph();
  BoundReport rep;
  rep.name = "gl";
  const CostMatrix qe = eta_representation(inst.costs(), options.eta);
  GlVectors v = gl_vectors(g, qe, false, options.threads);
  CcpOptions opt;
  opt.duals = true;
  const CcpResult r = solve_ccp(g, v.z, opt);
  if (!r.feasible) {
    rep.status = BoundStatus::infeasible;
    rep.message = "graph has no cycle cover";
  } else {
    rep.value = r.value;
    rep.mu = r.mu;
    rep.gamma = r.gamma;
    rep.p_hat = v.z;
    if (!v.arcs_without_cover.empty()) {
      rep.message = std::to_string(v.arcs_without_cover.size()) +
                    " arcs lie on no cover, z set to 0 for them";
    }
  }
  rep.witnesses["z"] = std::move(v.z);
  rep.seconds = total.seconds();
  return rep;
}

BoundReport gl_compact(const QccpInstance& inst, const GlOptions& options) {
  detail::Stopwatch total;
  const Digraph& g = inst.graph();
  const int m = g.num_arcs();
  const int n = g.num_nodes();
  BoundReport rep;
  rep.name = "gl-compact";
  if (over_cap(rep, 2 * static_cast<std::size_t>(n) * m + 2 * n, options.max_rows)) return rep;
  const auto q = dense_rows(eta_representation(inst.costs(), options.eta));

  lp::Problem prob(lp::Sense::minimize);
  const int x0 = prob.num_cols();
  for (ArcId e = 0; e < m; ++e) prob.add_variable(0.0, lp::kInf, q[e][e]);
  // y_ef for pairs that can share a cover; the rest are forced to 0.
  std::vector<std::vector<std::pair<ArcId, int>>> ycol(m);
  for (ArcId e = 0; e < m; ++e) {
    for (ArcId f = 0; f < m; ++f) {
      if (e == f || shares_endpoint(g, e, f)) continue;
      ycol[e].push_back({f, prob.add_variable(0.0, lp::kInf, q[e][f])});
    }
  }
  add_cover_rows(prob, g, x0);
  std::vector<std::vector<lp::Term>> out_rows(n), in_rows(n);
  for (ArcId e = 0; e < m; ++e) {
    for (auto& r : out_rows) r.clear();
    for (auto& r : in_rows) r.clear();
    for (const auto& [f, col] : ycol[e]) {
      out_rows[g.tail(f)].push_back({col, 1.0});
      in_rows[g.head(f)].push_back({col, 1.0});
    }
    // The rows at tail(e) and head(e) hold trivially through y_ee = x_e.
    for (NodeId i = 0; i < n; ++i) {
      if (i != g.tail(e)) {
        auto terms = out_rows[i];
        terms.push_back({x0 + e, -1.0});
        prob.add_row(std::move(terms), lp::Relation::equal, 0.0);
      }
      if (i != g.head(e)) {
        auto terms = in_rows[i];
        terms.push_back({x0 + e, -1.0});
        prob.add_row(std::move(terms), lp::Relation::equal, 0.0);
      }
    }
  }
  finish_min(rep, prob, options, x0, m);
  rep.seconds = total.seconds();
  return rep;
}

BoundReport gl_as_lbb(const QccpInstance& inst, const GlOptions& options) {
  detail::Stopwatch total;
  const Digraph& g = inst.graph();
  const int m = g.num_arcs();
  const int n = g.num_nodes();
  BoundReport rep;
  rep.name = "gl-lbb";
  if (over_cap(rep, static_cast<std::size_t>(m) * m + m, options.max_rows)) return rep;
  const auto q = dense_rows(eta_representation(inst.costs(), options.eta));

  lp::Problem prob(lp::Sense::maximize);
  const detail::CoverDual cd = detail::add_cover_dual(prob, n);
  const int b0 = prob.num_cols();  // B_{e,k} at b0 + e n + k
  for (int k = 0; k < m * n; ++k) prob.add_free_variable(0.0);
  const int c0 = prob.num_cols();  // C_{e,l} at c0 + e n + l
  for (int k = 0; k < m * n; ++k) prob.add_free_variable(0.0);
  const int t0 = prob.num_cols();
  for (ArcId e = 0; e < m; ++e) prob.add_free_variable(0.0);

  for (ArcId e = 0; e < m; ++e) {
    for (ArcId f = 0; f < m; ++f) {
      std::vector<lp::Term> terms{{b0 + e * n + g.tail(f), 1.0}, {c0 + e * n + g.head(f), 1.0}};
      if (e == f) terms.push_back({t0 + e, 1.0});
      prob.add_row(std::move(terms), lp::Relation::less_equal, q[e][f]);
    }
  }
  std::vector<std::vector<lp::Term>> p_terms(m);
  for (ArcId e = 0; e < m; ++e) {
    p_terms[e].push_back({t0 + e, 1.0});
    for (NodeId k = 0; k < n; ++k) {
      p_terms[e].push_back({b0 + e * n + k, 1.0});
      p_terms[e].push_back({c0 + e * n + k, 1.0});
    }
    detail::add_arc_row(prob, g, cd, e, p_terms[e], lp::Relation::less_equal, 0.0);
  }
  detail::Stopwatch sw;
  const lp::Solution sol = lp::solve(prob, options.lp);
  record_lp(rep, prob, sol, sw.seconds());
  if (detail::settle_status(rep, sol)) {
    rep.p_hat.resize(m);
    for (ArcId e = 0; e < m; ++e) rep.p_hat[e] = detail::eval_terms(p_terms[e], sol.primal);
    detail::extract_cover_dual(rep, sol, cd, n);
    rep.witnesses["t"].assign(sol.primal.begin() + t0, sol.primal.begin() + t0 + m);
  }
  rep.seconds = total.seconds();
  return rep;
}

BoundReport milp_bound(const QccpInstance& inst, const GlOptions& options) {
  detail::Stopwatch total;
  const Digraph& g = inst.graph();
  const int m = g.num_arcs();
  BoundReport rep;
  rep.name = "milp";
  const CostMatrix qe = eta_representation(inst.costs(), options.eta);
  GlVectors v = gl_vectors(g, qe, true, options.threads);
  const auto q = dense_rows(qe);

  lp::Problem prob(lp::Sense::minimize);
  const int x0 = prob.num_cols();
  for (ArcId e = 0; e < m; ++e) prob.add_variable(0.0, lp::kInf, 0.0);
  const int y0 = prob.num_cols();
  for (ArcId e = 0; e < m; ++e) prob.add_free_variable(1.0);
  add_cover_rows(prob, g, x0);
  for (ArcId e = 0; e < m; ++e) {
    // y_e - z_e x_e >= 0
    prob.add_row({{y0 + e, 1.0}, {x0 + e, -v.z[e]}}, lp::Relation::greater_equal, 0.0);
    // y_e - Q_{e,:} x - qmax_e x_e >= -qmax_e
    std::vector<lp::Term> terms{{y0 + e, 1.0}, {x0 + e, -v.qmax[e]}};
    for (ArcId f = 0; f < m; ++f) {
      if (q[e][f] != 0.0) terms.push_back({x0 + f, -q[e][f]});
    }
    prob.add_row(std::move(terms), lp::Relation::greater_equal, -v.qmax[e]);
  }
  finish_min(rep, prob, options, x0, m);
  rep.witnesses["z"] = std::move(v.z);
  rep.witnesses["qmax"] = std::move(v.qmax);
  rep.seconds = total.seconds();
  return rep;
}

BoundReport rlt1(const QccpInstance& inst, const GlOptions& options) {
  detail::Stopwatch total;
  const Digraph& g = inst.graph();
  const int m = g.num_arcs();
  const int n = g.num_nodes();
  BoundReport rep;
  rep.name = "rlt1";
  if (over_cap(rep, 2 * static_cast<std::size_t>(n) * m + 2 * n, options.max_rows)) return rep;
  const auto q = dense_rows(inst.costs());

  lp::Problem prob(lp::Sense::minimize);
  const int x0 = prob.num_cols();
  for (ArcId e = 0; e < m; ++e) prob.add_variable(0.0, lp::kInf, q[e][e]);
  std::vector<std::vector<std::pair<ArcId, int>>> partner(m);
  for (ArcId e = 0; e < m; ++e) {
    for (ArcId f = e + 1; f < m; ++f) {
      if (shares_endpoint(g, e, f)) continue;
      const int col = prob.add_variable(0.0, lp::kInf, q[e][f] + q[f][e]);
      partner[e].push_back({f, col});
      partner[f].push_back({e, col});
    }
  }
  add_cover_rows(prob, g, x0);
  std::vector<std::vector<lp::Term>> out_rows(n), in_rows(n);
  for (ArcId e = 0; e < m; ++e) {
    for (auto& r : out_rows) r.clear();
    for (auto& r : in_rows) r.clear();
    for (const auto& [f, col] : partner[e]) {
      out_rows[g.tail(f)].push_back({col, 1.0});
      in_rows[g.head(f)].push_back({col, 1.0});
    }
    for (NodeId i = 0; i < n; ++i) {
      if (i != g.tail(e)) {
        auto terms = out_rows[i];
        terms.push_back({x0 + e, -1.0});
        prob.add_row(std::move(terms), lp::Relation::equal, 0.0);
      }
      if (i != g.head(e)) {
        auto terms = in_rows[i];
        terms.push_back({x0 + e, -1.0});
        prob.add_row(std::move(terms), lp::Relation::equal, 0.0);
      }
    }
  }
  finish_min(rep, prob, options, x0, m);
  rep.seconds = total.seconds();
  return rep;
}

}  // namespace qccp
