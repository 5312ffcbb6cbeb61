#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "qccp/instance.hpp"
#include "qccp/oracle.hpp"

namespace qccp {

// Sufficient conditions for x^T Q x = p^T x on every cycle cover x.
enum class LinearizationKind {
  cvp,
  row_cvp,
  col_cvp,
  incident_weak_sum,
  generalized_weak_sum,
  restricted_generalized,
  symmetric_product,
  gl_form,
};

const char* to_string(LinearizationKind kind);

struct LinearizationCertificate {
  LinearizationKind kind = LinearizationKind::cvp;
  std::vector<double> p;  // empty for symmetric products
  // Supporting vectors by name: "b", "c", "t", "a", "xi".
  std::map<std::string, std::vector<double>> witnesses;
};

// Row CVP: for every arc e, Q_ef = b_e for all f leaving head(e); then
// p = b + diag(Q). Column CVP is the transposed condition with c.
// The row form is tried first.
std::optional<LinearizationCertificate> detect_row_col_cvp(const QccpInstance& inst,
                                                          double tol = 1e-9);

// Q_ef = b_e + c_f on all successor pairs, found by an LP feasibility
// solve. b and c are only determined up to b + k, c - k on each connected
// block of the successor relation; each block is normalized so that b is 0
// at its smallest arc.
std::optional<LinearizationCertificate> detect_incident_weak_sum(const QccpInstance& inst,
                                                                double tol = 1e-7);

// Q = a a^T (symmetric, rank one, positive semidefinite), tested by
// reconstructing from the largest diagonal entry. Relative tolerance.
std::optional<LinearizationCertificate> detect_symmetric_product(const Eigen::MatrixXd& q,
                                                                double tol = 1e-8);

struct SymmetricProductOptimum {
  bool feasible = false;
  double value = 0.0;
  CycleCover cover;
  // min (a^T x)^2 equals the smaller of (min a^T x)^2 and (max a^T x)^2
  // only when a^T x has one sign over all covers. Otherwise value is the
  // cost of a real cover, an upper bound, and exact is false.
  bool exact = false;
};

SymmetricProductOptimum solve_symmetric_product(const Digraph& g, std::span<const double> a);

// Q has the constant value property: x^T Q x = xi on every cover, so
// p = xi / n linearizes it. Needs exhaustive enumeration.
std::optional<LinearizationCertificate> detect_cvp(const QccpInstance& inst,
                                                  const EnumerationBudget& budget = {},
                                                  double tol = 1e-6);

// Node-indexed supports of a generalized weak sum:
//   Q_{ij,kl} = B_{ij,k} + C_{ij,l} + D_{i,kl} + T_{j,kl}
// B and C are m x n (arc, node), D and T are n x m (node, arc).
struct GeneralizedSupports {
  Eigen::MatrixXd B, C, D, T;
};

// Restricted form:
//   Q_{ij,kl} = [j == k] (b_ij + t_kl) + C_{ij,l} + D_{i,kl}.
struct RestrictedSupports {
  Eigen::VectorXd b, t;
  Eigen::MatrixXd C, D;
};

// p_e = sum_k B_{e,k} + sum_l C_{e,l} + sum_i D_{i,e} + sum_j T_{j,e}.
std::vector<double> lin_vector_generalized(const Digraph& g, const GeneralizedSupports& s);
// Via the embedding B_{ij,k} = [k == j] b_ij and T_{j,kl} = [j == k] t_kl.
std::vector<double> lin_vector_restricted(const Digraph& g, const RestrictedSupports& s);
GeneralizedSupports embed_restricted(const Digraph& g, const RestrictedSupports& s);
// An incident weak sum b_e + c_f is the restricted form with t = c, C = D = 0.
RestrictedSupports embed_weak_sum(const Digraph& g, std::span<const double> b,
                                  std::span<const double> c);

// The full matrices the supports describe (general support, diagonal
// included).
CostMatrix generalized_matrix(const Digraph& g, const GeneralizedSupports& s);
CostMatrix restricted_matrix(const Digraph& g, const RestrictedSupports& s);

// Exhaustive check of x^T Q x == p^T x. A partial verdict is labeled by
// status budget_exceeded.
CoverCheck verify_linearization(const QccpInstance& inst, std::span<const double> p,
                                const EnumerationBudget& budget = {}, double tol = 1e-6);

}  // namespace qccp
