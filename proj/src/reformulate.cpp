#include "qccp/reformulate.hpp"

#include <cmath>

#include <json.hpp>

#include "cover_dual.hpp"

namespace qccp {
namespace {

// One iteration's LP and how to read Q_hat and p back from its solution.
struct IterationModel {
  lp::Problem prob{lp::Sense::maximize};
  detail::CoverDual cd;
  int eta_col = 0;
  std::vector<std::vector<lp::Term>> p_terms;
};

int add_eta(lp::Problem& prob, const ReformulateOptions& options) {
  if (options.fixed_eta) return prob.add_variable(*options.fixed_eta, *options.fixed_eta, 0.0);
  return prob.add_variable(0.0, 1.0, 0.0);
}

// lhs - eta (R_ef - R_fe) <= R_fe
void add_pair_row(lp::Problem& prob, std::vector<lp::Term> terms, int eta_col,
                  const Eigen::MatrixXd& r, ArcId e, ArcId f) {
  const double diff = r(e, f) - r(f, e);
  if (diff != 0.0) terms.push_back({eta_col, -diff});
  prob.add_row(std::move(terms), lp::Relation::less_equal, r(f, e));
}

class WeakSumStep {
 public:
  explicit WeakSumStep(const Digraph& g) : g_(g) {}

  IterationModel build(const Eigen::MatrixXd& r, const ReformulateOptions& options) {
    const int m = g_.num_arcs();
    IterationModel md;
    md.cd = detail::add_cover_dual(md.prob, g_.num_nodes());
    b0_ = md.prob.num_cols();
    for (ArcId e = 0; e < m; ++e) md.prob.add_free_variable(0.0);
    c0_ = md.prob.num_cols();
    for (ArcId e = 0; e < m; ++e) md.prob.add_free_variable(0.0);
    md.eta_col = add_eta(md.prob, options);
    for (const SuccessorPair& sp : g_.successor_pairs()) {
      add_pair_row(md.prob, {{b0_ + sp.first, 1.0}, {c0_ + sp.second, 1.0}}, md.eta_col, r,
                   sp.first, sp.second);
      // Q_hat is 0 on the transposed entry, so the mixed residual must stay
      // nonnegative there too. Only binds once negative costs are around.
      const ArcId e = sp.first, f = sp.second;
      if (!g_.is_successor(f, e) && (r(e, f) < 0.0 || r(f, e) < 0.0)) {
        add_pair_row(md.prob, {}, md.eta_col, r, f, e);
      }
    }
    md.p_terms.resize(m);
    for (ArcId e = 0; e < m; ++e) {
      md.p_terms[e] = {{b0_ + e, 1.0}, {c0_ + e, 1.0}};
      detail::add_arc_row(md.prob, g_, md.cd, e, md.p_terms[e], lp::Relation::less_equal, r(e, e));
    }
    return md;
  }

  // Q_hat from the solution; diagonal costs move into p directly.
  Eigen::MatrixXd estimator(const Eigen::MatrixXd& r, const std::vector<double>& x) const {
    const int m = g_.num_arcs();
    Eigen::MatrixXd qh = Eigen::MatrixXd::Zero(m, m);
    for (const SuccessorPair& sp : g_.successor_pairs()) {
      qh(sp.first, sp.second) = x[b0_ + sp.first] + x[c0_ + sp.second];
    }
    for (ArcId e = 0; e < m; ++e) qh(e, e) = r(e, e);
    return qh;
  }

  double p_offset(const Eigen::MatrixXd& r, ArcId e) const { return r(e, e); }
  std::size_t rows() const { return 2 * g_.successor_pairs().size() + g_.num_arcs(); }

 private:
  const Digraph& g_;
  int b0_ = 0;
  int c0_ = 0;
};

class GilmoreLawlerStep {
 public:
  explicit GilmoreLawlerStep(const Digraph& g) : g_(g) {}

  IterationModel build(const Eigen::MatrixXd& r, const ReformulateOptions& options) {
    const int m = g_.num_arcs();
    const int n = g_.num_nodes();
    IterationModel md;
    md.cd = detail::add_cover_dual(md.prob, n);
    b0_ = md.prob.num_cols();
    for (int k = 0; k < m * n; ++k) md.prob.add_free_variable(0.0);
    c0_ = md.prob.num_cols();
    for (int k = 0; k < m * n; ++k) md.prob.add_free_variable(0.0);
    t0_ = md.prob.num_cols();
    for (ArcId e = 0; e < m; ++e) md.prob.add_free_variable(0.0);
    md.eta_col = add_eta(md.prob, options);
    for (ArcId e = 0; e < m; ++e) {
      for (ArcId f = 0; f < m; ++f) {
        std::vector<lp::Term> terms{{b(e, g_.tail(f)), 1.0}, {c(e, g_.head(f)), 1.0}};
        if (e == f) {
          terms.push_back({t0_ + e, 1.0});
          md.prob.add_row(std::move(terms), lp::Relation::less_equal, r(e, e));
        } else {
          add_pair_row(md.prob, std::move(terms), md.eta_col, r, e, f);
        }
      }
    }
    md.p_terms.resize(m);
    for (ArcId e = 0; e < m; ++e) {
      auto& pt = md.p_terms[e];
      pt.push_back({t0_ + e, 1.0});
      for (NodeId k = 0; k < n; ++k) {
        pt.push_back({b(e, k), 1.0});
        pt.push_back({c(e, k), 1.0});
      }
      detail::add_arc_row(md.prob, g_, md.cd, e, pt, lp::Relation::equal, 0.0);
    }
    return md;
  }

  Eigen::MatrixXd estimator(const Eigen::MatrixXd&, const std::vector<double>& x) const {
    const int m = g_.num_arcs();
    Eigen::MatrixXd qh(m, m);
    for (ArcId e = 0; e < m; ++e) {
      for (ArcId f = 0; f < m; ++f) qh(e, f) = x[b(e, g_.tail(f))] + x[c(e, g_.head(f))];
      qh(e, e) += x[t0_ + e];
    }
    return qh;
  }

  double p_offset(const Eigen::MatrixXd&, ArcId) const { return 0.0; }
  std::size_t rows() const {
    return static_cast<std::size_t>(g_.num_arcs()) * g_.num_arcs() + g_.num_arcs();
  }

 private:
  int b(ArcId e, NodeId k) const { return b0_ + e * g_.num_nodes() + k; }
  int c(ArcId e, NodeId l) const { return c0_ + e * g_.num_nodes() + l; }

  const Digraph& g_;
  int b0_ = 0;
  int c0_ = 0;
  int t0_ = 0;
};

template <typename Step>
ReformulationResult reformulate(const QccpInstance& inst, const ReformulateOptions& options,
                                const char* name) {
  detail::Stopwatch total;
  const Digraph& g = inst.graph();
  const int m = g.num_arcs();
  const int n = g.num_nodes();
  ReformulationResult res;
  BoundReport& rep = res.report;
  rep.name = name;
  Step step(g);
  if (step.rows() > options.max_rows) {
    rep.status = BoundStatus::size_limit;
    rep.message = "LP needs " + std::to_string(step.rows()) + " rows, cap is " +
                  std::to_string(options.max_rows);
    return res;
  }

  Eigen::MatrixXd r = inst.costs().to_dense();
  std::vector<double> d(m, 0.0);
  rep.mu.assign(n, 0.0);
  rep.gamma.assign(n, 0.0);
  double value = 0.0;

  for (int k = 1; k <= options.max_iters; ++k) {
    if (k > 1 && total.seconds() > options.time_budget_s) {
      rep.status = BoundStatus::partial;
      rep.message = "time budget exhausted after " + std::to_string(k - 1) + " iterations";
      break;
    }
    detail::Stopwatch sw;
    IterationModel md = step.build(r, options);
    const lp::Solution sol = lp::solve(md.prob, options.lp);
    record_lp(rep, md.prob, sol, sw.seconds());
    if (!sol.optimal()) {
      if (k == 1) {
        BoundReport tmp;
        detail::settle_status(tmp, sol);
        rep.status = tmp.status;
        rep.message = tmp.message;
      } else {
        rep.status = BoundStatus::partial;
        rep.message = std::string("LP ") + lp::to_string(sol.status) + " in iteration " +
                      std::to_string(k) + ", keeping earlier iterations";
      }
      break;
    }

    IterationTrace it;
    it.k = k;
    it.r = sol.objective;
    it.eta = sol.primal[md.eta_col];
    value += it.r;
    it.value = value;
    it.p.resize(m);
    for (ArcId e = 0; e < m; ++e) {
      it.p[e] = detail::eval_terms(md.p_terms[e], sol.primal) + step.p_offset(r, e);
      d[e] += it.p[e];
    }
    it.d = d;
    for (NodeId i = 0; i < n; ++i) {
      rep.mu[i] += sol.primal[md.cd.mu0 + i];
      rep.gamma[i] += sol.primal[md.cd.gamma0 + i];
    }

    const Eigen::MatrixXd qh = step.estimator(r, sol.primal);
    const Eigen::MatrixXd rt = r.transpose();
    r = it.eta * r + (1.0 - it.eta) * rt - qh;
    it.residual_norm = r.cwiseAbs().sum();
    it.residual_min = m > 0 ? r.minCoeff() : 0.0;
    it.lp_iterations = sol.iterations;
    it.seconds = sw.seconds();
    res.trace.push_back(std::move(it));

    const double gain = options.min_gain >= 0.0 ? options.min_gain : 1e-6 * (1.0 + std::abs(value));
    if (res.trace.back().r <= gain) break;
  }

  rep.value = value;
  rep.p_hat = d;
  res.residual = std::move(r);
  rep.seconds = total.seconds();
  return res;
}

}  // namespace

ReformulationResult rbb(const QccpInstance& inst, const ReformulateOptions& options) {
  return reformulate<WeakSumStep>(inst, options, "rbb");
}

ReformulationResult rgl(const QccpInstance& inst, const ReformulateOptions& options) {
  return reformulate<GilmoreLawlerStep>(inst, options, "rgl");
}

std::string to_json_line(const IterationTrace& it, bool with_vectors) {
  nlohmann::json j{{"k", it.k},
                   {"r", it.r},
                   {"eta", it.eta},
                   {"value", it.value},
                   {"residual_norm", it.residual_norm},
                   {"residual_min", it.residual_min},
                   {"lp_iterations", it.lp_iterations},
                   {"seconds", it.seconds}};
  if (with_vectors) {
    j["p"] = it.p;
    j["d"] = it.d;
  }
  return j.dump();
}

}  // namespace qccp
