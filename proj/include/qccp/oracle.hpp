#pragma once

#include <cstdint>
#include <functional>
#include <limits>
#include <span>
#include <string>

#include "qccp/instance.hpp"

namespace qccp {

// Limits for exhaustive work. Hitting one never produces a silent answer:
// results carry status budget_exceeded and say which limit was hit.
struct EnumerationBudget {
  std::int64_t max_covers = 50'000'000;
  int max_nodes_exhaustive = 12;
  double time_budget_s = 120.0;
};

enum class OracleStatus { complete, budget_exceeded };

const char* to_string(OracleStatus status);

struct EnumerationResult {
  OracleStatus status = OracleStatus::complete;
  std::int64_t covers = 0;
  std::string reason;  // set when the budget ran out
};

// Visits every disjoint cycle cover exactly once. Nodes pick their out-arc
// in node order, out-arcs tried by ascending head, so the visiting order is
// lexicographic in the successor choice. Branches whose remaining
// tail/head bipartite graph has no perfect matching are cut immediately.
EnumerationResult enumerate_covers(const Digraph& g, const EnumerationBudget& budget,
                                   const std::function<void(const CycleCover&)>& visit);

struct ExactResult {
  OracleStatus status = OracleStatus::complete;
  bool feasible = false;
  double value = 0.0;
  CycleCover cover;
  std::int64_t search_nodes = 0;
  std::string reason;
};

struct ExactOptions {
  // Stop as soon as the incumbent reaches this proven lower bound.
  double lower_bound = -std::numeric_limits<double>::infinity();
  // Compute lbb1 first and use it as lower_bound.
  bool use_lbb1 = true;
};

// Branch and bound over successor assignments with incremental quadratic
// cost and a per-node lower bound on the unassigned part.
ExactResult solve_exact(const QccpInstance& inst, const EnumerationBudget& budget = {},
                        const ExactOptions& options = {});

// Plain minimum of the objective over enumerate_covers, no pruning.
ExactResult solve_naive(const QccpInstance& inst, const EnumerationBudget& budget = {});

struct CoverCheck {
  OracleStatus status = OracleStatus::complete;
  bool holds = false;  // only meaningful together with the status
  std::int64_t covers = 0;
  double max_deviation = 0.0;
  std::string reason;
};

// Whether v^T x takes the same value on every cover (within tol).
CoverCheck check_cvp(const Digraph& g, std::span<const double> v,
                     const EnumerationBudget& budget = {}, double tol = 1e-6);

// Whether x^T Q x == p^T x on every cover (within tol).
CoverCheck check_linearization(const Digraph& g, const CostMatrix& q, std::span<const double> p,
                               const EnumerationBudget& budget = {}, double tol = 1e-6);

}  // namespace qccp
