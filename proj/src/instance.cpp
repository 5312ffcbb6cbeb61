#include "qccp/instance.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace qccp {

double CostMatrix::get(ArcId e, ArcId f) const {
  auto it = values_.find(key(e, f));
  return it == values_.end() ? 0.0 : it->second;
}

void CostMatrix::set(ArcId e, ArcId f, double value) {
  if (e < 0 || f < 0 || e >= num_arcs_ || f >= num_arcs_) {
    throw InstanceError("cost entry (" + std::to_string(e) + "," + std::to_string(f) +
                        ") out of range");
  }
  if (value == 0.0) {
    values_.erase(key(e, f));
  } else {
    values_[key(e, f)] = value;
  }
}

std::vector<CostEntry> CostMatrix::entries() const {
  std::vector<CostEntry> out;
  out.reserve(values_.size());
  const auto m = static_cast<std::uint64_t>(num_arcs_);
  for (const auto& [k, v] : values_) {
    out.push_back({static_cast<ArcId>(k / m), static_cast<ArcId>(k % m), v});
  }
  std::sort(out.begin(), out.end(), [](const CostEntry& a, const CostEntry& b) {
    return a.row != b.row ? a.row < b.row : a.col < b.col;
  });
  return out;
}

Eigen::MatrixXd CostMatrix::to_dense() const {
  Eigen::MatrixXd dense = Eigen::MatrixXd::Zero(num_arcs_, num_arcs_);
  const auto m = static_cast<std::uint64_t>(num_arcs_);
  for (const auto& [k, v] : values_) {
    dense(static_cast<Eigen::Index>(k / m), static_cast<Eigen::Index>(k % m)) = v;
  }
  return dense;
}

CostMatrix CostMatrix::from_dense(const Eigen::MatrixXd& dense, double drop_tol) {
  CostMatrix q(static_cast<int>(dense.rows()));
  for (Eigen::Index e = 0; e < dense.rows(); ++e) {
    for (Eigen::Index f = 0; f < dense.cols(); ++f) {
      if (std::abs(dense(e, f)) > drop_tol) {
        q.set(static_cast<ArcId>(e), static_cast<ArcId>(f), dense(e, f));
      }
    }
  }
  return q;
}

QccpInstance::QccpInstance(Digraph graph, CostMatrix costs, SupportMode mode)
    : graph_(std::move(graph)), costs_(std::move(costs)), mode_(mode) {
  if (costs_.num_arcs() != graph_.num_arcs()) {
    throw InstanceError("cost matrix dimension does not match the arc count");
  }
  for (const CostEntry& c : costs_.entries()) {
    if (!std::isfinite(c.value)) {
      throw InstanceError("non-finite cost at (" + std::to_string(c.row) + "," +
                          std::to_string(c.col) + ")");
    }
    if (mode_ == SupportMode::successor_only && c.row != c.col &&
        !graph_.is_successor(c.row, c.col)) {
      throw InstanceError("cost on non-successor pair (" + std::to_string(c.row) + "," +
                          std::to_string(c.col) + ") in successor-only mode");
    }
  }
}

CostMatrix eta_representation(const CostMatrix& q, double eta) {
  CostMatrix out(q.num_arcs());
  for (const CostEntry& c : q.entries()) {
    if (c.row == c.col) {
      out.add(c.row, c.col, c.value);
    } else {
      out.add(c.row, c.col, eta * c.value);
      out.add(c.col, c.row, (1.0 - eta) * c.value);
    }
  }
  return out;
}

bool is_cycle_cover(const Digraph& g, std::span<const std::uint8_t> x) {
  if (static_cast<int>(x.size()) != g.num_arcs()) return false;
  for (NodeId i = 0; i < g.num_nodes(); ++i) {
    int out = 0;
    int in = 0;
    for (ArcId e : g.out_arcs(i)) out += x[e] ? 1 : 0;
    for (ArcId e : g.in_arcs(i)) in += x[e] ? 1 : 0;
    if (out != 1 || in != 1) return false;
  }
  return true;
}

CycleCover::CycleCover(const Digraph& g, std::vector<std::uint8_t> x) : x_(std::move(x)) {
  if (!is_cycle_cover(g, x_)) throw InstanceError("arc set is not a disjoint cycle cover");
}

CycleCover CycleCover::from_arcs(const Digraph& g, std::span<const ArcId> arcs) {
  std::vector<std::uint8_t> x(g.num_arcs(), 0);
  for (ArcId e : arcs) {
    if (e < 0 || e >= g.num_arcs()) throw InstanceError("arc id out of range");
    x[e] = 1;
  }
  return CycleCover(g, std::move(x));
}

std::vector<ArcId> CycleCover::arcs() const {
  std::vector<ArcId> out;
  for (ArcId e = 0; e < static_cast<ArcId>(x_.size()); ++e) {
    if (x_[e]) out.push_back(e);
  }
  return out;
}

std::vector<std::vector<NodeId>> CycleCover::cycles(const Digraph& g) const {
  std::vector<NodeId> next(g.num_nodes(), -1);
  for (ArcId e : arcs()) next[g.tail(e)] = g.head(e);
  std::vector<bool> seen(g.num_nodes(), false);
  std::vector<std::vector<NodeId>> out;
  for (NodeId s = 0; s < g.num_nodes(); ++s) {
    if (seen[s]) continue;
    std::vector<NodeId> cyc;
    for (NodeId v = s; !seen[v]; v = next[v]) {
      seen[v] = true;
      cyc.push_back(v);
    }
    out.push_back(std::move(cyc));
  }
  return out;
}

double objective(const Digraph& g, const CostMatrix& q, const CycleCover& cover) {
  if (!is_cycle_cover(g, cover.incidence())) {
    throw InstanceError("objective requested for an infeasible cover");
  }
  double total = 0.0;
  for (const CostEntry& c : q.entries()) {
    if (cover.contains(c.row) && cover.contains(c.col)) total += c.value;
  }
  return total;
}

double objective(const QccpInstance& inst, const CycleCover& cover) {
  return objective(inst.graph(), inst.costs(), cover);
}

double linear_cost(std::span<const double> p, const CycleCover& cover) {
  double total = 0.0;
  for (std::size_t e = 0; e < p.size(); ++e) {
    if (cover.contains(static_cast<ArcId>(e))) total += p[e];
  }
  return total;
}

}  // namespace qccp
