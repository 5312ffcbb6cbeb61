#pragma once

// Shared scaffolding for the bounds that maximize 1^T y over the cover dual
// [U^T, V^T] y <= p_hat, with p_hat linear in extra LP variables.

#include <chrono>
#include <vector>

#include "qccp/bound_report.hpp"
#include "qccp/digraph.hpp"
#include "qccp/lp.hpp"

namespace qccp::detail {

class Stopwatch {
 public:
  Stopwatch() : start_(std::chrono::steady_clock::now()) {}
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  std::chrono::steady_clock::time_point start_;
};

struct CoverDual {
  int mu0 = 0;     // column of mu_0; mu_i is mu0 + i
  int gamma0 = 0;  // column of gamma_0
};

// Adds the free node potentials, each with objective coefficient 1.
inline CoverDual add_cover_dual(lp::Problem& prob, int num_nodes) {
  CoverDual cd;
  cd.mu0 = prob.num_cols();
  for (int i = 0; i < num_nodes; ++i) prob.add_free_variable(1.0);
  cd.gamma0 = prob.num_cols();
  for (int i = 0; i < num_nodes; ++i) prob.add_free_variable(1.0);
  return cd;
}

// mu_{tail(e)} + gamma_{head(e)} - sum(p_terms) (relation) rhs.
inline void add_arc_row(lp::Problem& prob, const Digraph& g, const CoverDual& cd, ArcId e,
                        const std::vector<lp::Term>& p_terms, lp::Relation rel, double rhs) {
  std::vector<lp::Term> terms;
  terms.reserve(p_terms.size() + 2);
  terms.push_back({cd.mu0 + g.tail(e), 1.0});
  terms.push_back({cd.gamma0 + g.head(e), 1.0});
  for (const lp::Term& t : p_terms) terms.push_back({t.col, -t.coef});
  prob.add_row(std::move(terms), rel, rhs);
}

inline void extract_cover_dual(BoundReport& rep, const lp::Solution& sol, const CoverDual& cd,
                               int num_nodes) {
  rep.mu.assign(sol.primal.begin() + cd.mu0, sol.primal.begin() + cd.mu0 + num_nodes);
  rep.gamma.assign(sol.primal.begin() + cd.gamma0, sol.primal.begin() + cd.gamma0 + num_nodes);
}

// Maps a finished LP to the report status. An unbounded cover dual means
// the graph has no cycle cover.
inline bool settle_status(BoundReport& rep, const lp::Solution& sol) {
  switch (sol.status) {
    case lp::Status::optimal:
      rep.status = BoundStatus::ok;
      rep.value = sol.objective;
      return true;
    case lp::Status::unbounded:
      rep.status = BoundStatus::infeasible;
      rep.message = "graph has no cycle cover";
      return false;
    default:
      rep.status = BoundStatus::lp_failure;
      rep.message = std::string("LP ") + lp::to_string(sol.status);
      return false;
  }
}

inline double eval_terms(const std::vector<lp::Term>& terms, const std::vector<double>& x) {
  double s = 0.0;
  for (const lp::Term& t : terms) s += t.coef * x[t.col];
  return s;
}

}  // namespace qccp::detail
