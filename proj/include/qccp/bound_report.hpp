#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <vector>

#include "qccp/lp.hpp"

namespace qccp {

enum class BoundStatus {
  ok,
  infeasible,   // the graph has no cycle cover, the bound is undefined
  size_limit,   // the LP would exceed the configured row cap
  lp_failure,   // iteration limit or numerical trouble in the LP engine
  partial,      // iterative bound stopped early; value is still a valid bound
};

const char* to_string(BoundStatus status);

struct LpStats {
  int rows = 0;
  int cols = 0;
  std::size_t nonzeros = 0;
  int iterations = 0;
  double seconds = 0.0;
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
};

struct BoundReport {
  std::string name;
  BoundStatus status = BoundStatus::ok;
  double value = 0.0;
  // Linearization vector of the chosen under-estimator, and the cover dual
  // y = (mu, gamma) certifying value = 1^T y <= OPT(p_hat).
  std::vector<double> p_hat;
  std::vector<double> mu;
  std::vector<double> gamma;
  // Named supporting vectors (b, c, t, z, qmax, ...), arc-indexed unless
  // noted by the producer.
  std::map<std::string, std::vector<double>> witnesses;
  LpStats lp;
  double seconds = 0.0;
  std::string message;

  bool ok() const { return status == BoundStatus::ok; }
};

// Compact single-line JSON: name, status, value, time and LP statistics.
// Witness vectors are included only when `with_certificate` is set.
std::string to_json_line(const BoundReport& report, bool with_certificate = false);

// Fills the LP statistics of `report` from a solved problem.
void record_lp(BoundReport& report, const lp::Problem& problem, const lp::Solution& sol,
               double seconds);

}  // namespace qccp
