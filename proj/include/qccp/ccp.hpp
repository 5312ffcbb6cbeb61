#pragma once

#include <span>
#include <vector>

#include "qccp/digraph.hpp"
#include "qccp/instance.hpp"
#include "qccp/lp.hpp"

namespace qccp {

// Linear cycle cover problem min { p^T x : x a disjoint cycle cover }.
struct CcpResult {
  bool feasible = false;
  double value = 0.0;
  CycleCover cover;
  // Node potentials, filled when duals are requested: mu for the out-degree
  // rows, gamma for the in-degree rows. For a minimization
  // mu[tail(e)] + gamma[head(e)] <= p[e], with equality on cover arcs.
  std::vector<double> mu;
  std::vector<double> gamma;
  // Raw LP primal, only from the LP path.
  std::vector<double> lp_primal;
};

struct CcpOptions {
  bool maximize = false;
  bool duals = false;
  // Fix x[forced_arc] = forced_value (0 or 1); -1 leaves every arc free.
  ArcId forced_arc = -1;
  int forced_value = 1;
};

// Assignment reduction (tails on the left, heads on the right) solved by
// successive shortest paths with node potentials.
CcpResult solve_ccp(const Digraph& g, std::span<const double> p, const CcpOptions& options = {});

CcpResult solve_ccp_forced(const Digraph& g, std::span<const double> p, ArcId e,
                           int forced_value);

// The same problem as an LP over the degree constraints [U; V] x = 1,
// x >= 0. The constraint matrix is totally unimodular, so the vertex the
// simplex returns is a cover.
CcpResult solve_ccp_lp(const Digraph& g, std::span<const double> p,
                       const CcpOptions& options = {}, const lp::Options& lp_options = {});

}  // namespace qccp
