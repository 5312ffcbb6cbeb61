#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>

#include "qccp/digraph.hpp"

namespace qccp {

enum class SupportMode {
  // Nonzero costs only on successor pairs and on the diagonal.
  successor_only,
  // Any arc pair may carry a cost (residual and reformulated matrices).
  general,
};

class InstanceError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct CostEntry {
  ArcId row = 0;
  ArcId col = 0;
  double value = 0.0;
};

// Sparse m x m matrix over arc pairs. Zero entries are not stored.
class CostMatrix {
 public:
  CostMatrix() = default;
  explicit CostMatrix(int num_arcs) : num_arcs_(num_arcs) {}

  int num_arcs() const { return num_arcs_; }
  double get(ArcId e, ArcId f) const;
  void set(ArcId e, ArcId f, double value);
  void add(ArcId e, ArcId f, double value) { set(e, f, get(e, f) + value); }
  std::size_t nonzeros() const { return values_.size(); }

  // Entries sorted by (row, col).
  std::vector<CostEntry> entries() const;

  Eigen::MatrixXd to_dense() const;
  static CostMatrix from_dense(const Eigen::MatrixXd& dense, double drop_tol = 0.0);

 private:
  std::uint64_t key(ArcId e, ArcId f) const {
    return static_cast<std::uint64_t>(e) * static_cast<std::uint64_t>(num_arcs_) +
           static_cast<std::uint64_t>(f);
  }
  int num_arcs_ = 0;
  std::unordered_map<std::uint64_t, double> values_;
};

// A QCCP instance (G, Q). Linear arc costs live on the diagonal of Q.
class QccpInstance {
 public:
  QccpInstance() = default;
  QccpInstance(Digraph graph, CostMatrix costs,
               SupportMode mode = SupportMode::successor_only);

  const Digraph& graph() const { return graph_; }
  const CostMatrix& costs() const { return costs_; }
  SupportMode mode() const { return mode_; }
  int num_nodes() const { return graph_.num_nodes(); }
  int num_arcs() const { return graph_.num_arcs(); }
  double cost(ArcId e, ArcId f) const { return costs_.get(e, f); }

 private:
  Digraph graph_;
  CostMatrix costs_;
  SupportMode mode_ = SupportMode::successor_only;
};

// eta * Q + (1 - eta) * Q^T. The result has general support.
CostMatrix eta_representation(const CostMatrix& q, double eta);

// A disjoint cycle cover, stored as the 0/1 incidence vector over arcs.
class CycleCover {
 public:
  CycleCover() = default;
  // Throws InstanceError unless `x` selects exactly one out- and one in-arc
  // per node.
  CycleCover(const Digraph& g, std::vector<std::uint8_t> x);
  static CycleCover from_arcs(const Digraph& g, std::span<const ArcId> arcs);

  std::span<const std::uint8_t> incidence() const { return x_; }
  bool contains(ArcId e) const { return x_[e] != 0; }
  // Selected arc ids, ascending.
  std::vector<ArcId> arcs() const;
  // Node sequences of the cycles, each starting at its smallest node.
  std::vector<std::vector<NodeId>> cycles(const Digraph& g) const;

 private:
  std::vector<std::uint8_t> x_;
};

bool is_cycle_cover(const Digraph& g, std::span<const std::uint8_t> x);

// x^T Q x over the stored entries; a diagonal entry counts once.
double objective(const QccpInstance& inst, const CycleCover& cover);
double objective(const Digraph& g, const CostMatrix& q, const CycleCover& cover);

// Linear cost p^T x.
double linear_cost(std::span<const double> p, const CycleCover& cover);

}  // namespace qccp
