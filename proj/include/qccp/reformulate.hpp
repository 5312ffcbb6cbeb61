#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qccp/bound_report.hpp"
#include "qccp/instance.hpp"
#include "qccp/lp.hpp"

namespace qccp {

struct IterationTrace {
  int k = 0;                  // 1-based
  double r = 0.0;             // amount linearized in this iteration
  double eta = 1.0;           // representation chosen for the residual
  double value = 0.0;         // sum of r over iterations 1..k
  std::vector<double> p;      // this iteration's linearization vector
  std::vector<double> d;      // running sum of p
  double residual_norm = 0.0; // sum of |entries| of the new residual
  double residual_min = 0.0;  // smallest entry of the new residual
  int lp_iterations = 0;
  double seconds = 0.0;
};

struct ReformulateOptions {
  int max_iters = 50;
  // Stop once r_k <= min_gain. Negative selects 1e-6 (1 + |value so far|).
  double min_gain = -1.0;
  // Fix eta instead of optimizing it in each iteration.
  std::optional<double> fixed_eta;
  double time_budget_s = std::numeric_limits<double>::infinity();
  std::size_t max_rows = 2'000'000;
  lp::Options lp;
};

struct ReformulationResult {
  BoundReport report;  // value = sum r_k, p_hat = final d
  std::vector<IterationTrace> trace;
  Eigen::MatrixXd residual;  // residual cost matrix after the last iteration
};

// Iterated incident weak sum bound. Each iteration solves
//   max 1^T y  s.t.  b_e + c_f <= eta R_ef + (1 - eta) R_fe on successor
//   pairs, [U^T, V^T] y <= b + c + diag(R), eta in [0, 1],
// then moves to the residual eta R + (1 - eta) R^T - Q_hat.
ReformulationResult rbb(const QccpInstance& inst, const ReformulateOptions& options = {});

// The same scheme over the Gilmore-Lawler class with [U^T, V^T] y = p_hat,
// so every p_k, and hence every d_k, has the same value on all covers.
ReformulationResult rgl(const QccpInstance& inst, const ReformulateOptions& options = {});

std::string to_json_line(const IterationTrace& it, bool with_vectors = false);

}  // namespace qccp
