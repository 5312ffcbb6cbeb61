#pragma once

#include <cstddef>
#include <vector>

#include "qccp/bound_report.hpp"
#include "qccp/instance.hpp"
#include "qccp/lp.hpp"

namespace qccp {

struct GlOptions {
  // Every bound here works on eta Q + (1 - eta) Q^T. 0.5 symmetrizes.
  double eta = 0.5;
  std::size_t max_rows = 2'000'000;
  // Worker threads for the per-arc subproblems; 0 reads QCCP_THREADS,
  // falling back to the hardware concurrency.
  int threads = 0;
  lp::Options lp;
};

struct GlVectors {
  // z_e: cheapest Q_{e,:} x over covers with x_e = 1, or 0 when no cover
  // uses e (such an arc cannot contribute).
  std::vector<double> z;
  // qmax_e: largest Q_{e,:} x over covers with x_e = 0, or 0 when every
  // cover uses e. Empty unless requested.
  std::vector<double> qmax;
  std::vector<ArcId> arcs_without_cover;
};

// Row-wise subproblems on the given matrix (already in the representation
// the caller wants).
GlVectors gl_vectors(const Digraph& g, const CostMatrix& q, bool with_qmax, int threads = 0);

// OPT(z) with z from the m forced-arc subproblems.
BoundReport gl_classical(const QccpInstance& inst, const GlOptions& options = {});

// Continuous relaxation of the compact model: x in the cover polytope,
// y_ee = x_e, sum_{f in delta+(i)} y_ef = sum_{f in delta-(i)} y_ef = x_e
// for every node i and arc e, y >= 0, minimizing sum Q_ef y_ef.
// Witness "x" holds the arc part of the solution.
BoundReport gl_compact(const QccpInstance& inst, const GlOptions& options = {});

// The same value as a linearization-based bound: for every pair e != f,
// B_{e,tail f} + C_{e,head f} <= Q_ef, and B_{e,tail e} + C_{e,head e} + t_e
// <= Q_ee, with p_hat_e = t_e + sum_k B_{e,k} + sum_l C_{e,l}.
BoundReport gl_as_lbb(const QccpInstance& inst, const GlOptions& options = {});

// LP relaxation of min sum y_e with y_e >= z_e x_e and
// y_e >= Q_{e,:} x - qmax_e (1 - x_e) over the cover polytope.
BoundReport milp_bound(const QccpInstance& inst, const GlOptions& options = {});

// First-level RLT: x in the cover polytope, one symmetric product variable
// w_ef per unordered arc pair that can share a cover, y_ee = x_e, and every
// degree equality multiplied by every x_e. Objective
// sum_e Q_ee x_e + sum_{e<f} (Q_ef + Q_fe) w_ef, so eta plays no role.
BoundReport rlt1(const QccpInstance& inst, const GlOptions& options = {});

// Thread count from QCCP_THREADS, else hardware concurrency, at least 1.
int default_threads();

}  // namespace qccp
