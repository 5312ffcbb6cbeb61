#include "qccp/generators.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>
#include <string>

#include "qccp/rng.hpp"

namespace qccp {
namespace {

CostMatrix random_successor_costs(const Digraph& g, int cost_lo, int cost_hi, Rng& rng) {
  CostMatrix q(g.num_arcs());
  for (const SuccessorPair& sp : g.successor_pairs()) {
    q.set(sp.first, sp.second, static_cast<double>(rng.uniform_int(cost_lo, cost_hi)));
  }
  return q;
}

void check_cost_range(int cost_lo, int cost_hi) {
  if (cost_lo > cost_hi) throw InstanceError("cost_lo exceeds cost_hi");
}

}  // namespace

QccpInstance gen_erdos_renyi(int n, double p, int cost_lo, int cost_hi, std::uint64_t seed) {
  if (n < 2) throw InstanceError("Erdos-Renyi generator needs n >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw InstanceError("arc probability must lie in (0, 1]");
  check_cost_range(cost_lo, cost_hi);
  Rng rng(seed);
  std::vector<Arc> arcs;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i != j && rng.bernoulli(p)) arcs.push_back({i, j});
    }
  }
  Digraph g(n, std::move(arcs));
  CostMatrix q = random_successor_costs(g, cost_lo, cost_hi, rng);
  return QccpInstance(std::move(g), std::move(q));
}

QccpInstance gen_manhattan(const std::vector<int>& dims, int cost_lo, int cost_hi,
                           std::uint64_t seed) {
  if (dims.empty()) throw InstanceError("Manhattan generator needs at least one dimension");
  for (int d : dims) {
    if (d < 2) throw InstanceError("every Manhattan dimension must be >= 2");
  }
  check_cost_range(cost_lo, cost_hi);
  const int k = static_cast<int>(dims.size());
  std::vector<int> stride(k, 1);
  for (int j = 1; j < k; ++j) stride[j] = stride[j - 1] * dims[j - 1];
  const int n = stride[k - 1] * dims[k - 1];

  std::vector<Arc> arcs;
  arcs.reserve(static_cast<std::size_t>(n) * k);
  std::vector<int> coord(k, 0);
  for (NodeId v = 0; v < n; ++v) {
    int rest = v;
    int total = 0;
    for (int j = 0; j < k; ++j) {
      coord[j] = rest % dims[j];
      rest /= dims[j];
      total += coord[j];
    }
    for (int j = 0; j < k; ++j) {
      const bool forward = ((total - coord[j]) % 2) == 0;
      const int next = forward ? (coord[j] + 1) % dims[j] : (coord[j] + dims[j] - 1) % dims[j];
      arcs.push_back({v, v + (next - coord[j]) * stride[j]});
    }
  }
  Digraph g(n, std::move(arcs));
  Rng rng(seed);
  CostMatrix q = random_successor_costs(g, cost_lo, cost_hi, rng);
  return QccpInstance(std::move(g), std::move(q));
}

double turning_angle(double ux, double uy, double vx, double vy) {
  const double cross = ux * vy - uy * vx;
  const double dot = ux * vx + uy * vy;
  return std::atan2(std::abs(cross), dot);
}

double angle_distance_cost(double angle, double d_e, double d_f, double rho) {
  return std::ceil((rho * angle + (d_e + d_f) / 2.0) / 10.0);
}

AngleDistanceInstance gen_angle_distance(int n, double p, double rho, int coord_hi,
                                         std::uint64_t seed) {
  if (n < 2) throw InstanceError("angle-distance generator needs n >= 2");
  if (!(p > 0.0 && p <= 1.0)) throw InstanceError("arc density must lie in (0, 1]");
  if (coord_hi < 1 ||
      static_cast<std::int64_t>(coord_hi + 1) * (coord_hi + 1) < static_cast<std::int64_t>(n)) {
    throw InstanceError("coordinate grid too small for distinct points");
  }
  Rng rng(seed);
  std::vector<Point> coords;
  std::set<std::pair<std::int64_t, std::int64_t>> taken;
  while (static_cast<int>(coords.size()) < n) {
    Point pt{rng.uniform_int(0, coord_hi), rng.uniform_int(0, coord_hi)};
    if (taken.insert({pt.x, pt.y}).second) coords.push_back(pt);
  }

  std::vector<Arc> pairs;
  for (NodeId i = 0; i < n; ++i) {
    for (NodeId j = 0; j < n; ++j) {
      if (i != j) pairs.push_back({i, j});
    }
  }
  const auto total = static_cast<double>(pairs.size());
  const auto count = static_cast<std::size_t>(std::ceil(p * total - 1e-9));
  for (std::size_t s = 0; s < count; ++s) {
    const auto pick = static_cast<std::size_t>(
        rng.uniform_int(static_cast<std::int64_t>(s), static_cast<std::int64_t>(pairs.size()) - 1));
    std::swap(pairs[s], pairs[pick]);
  }
  pairs.resize(count);
  std::sort(pairs.begin(), pairs.end(), [](const Arc& a, const Arc& b) {
    return a.tail != b.tail ? a.tail < b.tail : a.head < b.head;
  });
  Digraph g(n, std::move(pairs));

  auto dir = [&](ArcId e) {
    const Point& a = coords[g.tail(e)];
    const Point& b = coords[g.head(e)];
    return std::pair<double, double>{static_cast<double>(b.x - a.x), static_cast<double>(b.y - a.y)};
  };
  CostMatrix q(g.num_arcs());
  for (const SuccessorPair& sp : g.successor_pairs()) {
    const auto [ux, uy] = dir(sp.first);
    const auto [vx, vy] = dir(sp.second);
    const double value = angle_distance_cost(turning_angle(ux, uy, vx, vy), std::hypot(ux, uy),
                                             std::hypot(vx, vy), rho);
    q.set(sp.first, sp.second, value);
  }
  return {QccpInstance(std::move(g), std::move(q)), std::move(coords)};
}

QapData random_qap(int n, int value_hi, std::uint64_t seed) {
  Rng rng(seed);
  QapData qap{Eigen::MatrixXd::Zero(n, n), Eigen::MatrixXd::Zero(n, n)};
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i != j) qap.weights(i, j) = static_cast<double>(rng.uniform_int(0, value_hi));
    }
  }
  for (int k = 0; k < n; ++k) {
    for (int l = 0; l < n; ++l) {
      if (k != l) qap.distances(k, l) = static_cast<double>(rng.uniform_int(0, value_hi));
    }
  }
  return qap;
}

double qap_objective(const QapData& qap, const std::vector<int>& assignment) {
  const auto n = static_cast<int>(assignment.size());
  double total = 0.0;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      total += qap.distances(assignment[i], assignment[j]) * qap.weights(i, j);
    }
  }
  return total;
}

GadgetSize qap_gadget_formula_size(int n) {
  const std::int64_t nn = n;
  const std::int64_t pairs = nn * (nn - 1) / 2;
  return {nn * nn * (nn - 1) + 2 * pairs, nn * nn * (nn - 1) + 4 * pairs};
}

GadgetSize qap_gadget_built_size(int n) {
  const std::int64_t nn = n;
  const std::int64_t pairs = nn * (nn - 1) / 2;
  return {nn * nn * (nn - 1) + 2 * pairs, nn * nn * (nn - 1) + 4 * nn * pairs};
}

QapGadget gen_qap_reduction(const QapData& qap, double big_m) {
  const auto n = static_cast<int>(qap.weights.rows());
  if (n < 2) throw InstanceError("QAP reduction needs n >= 2");
  if (n == 2) {
    throw InstanceError(
        "QAP reduction needs n >= 3: with a single cell per group the inner cycles are self-loops");
  }
  if (qap.weights.cols() != n || qap.distances.rows() != n || qap.distances.cols() != n) {
    throw InstanceError("QAP weight and distance matrices must both be n x n");
  }
  for (int i = 0; i < n; ++i) {
    if (qap.weights(i, i) != 0.0 || qap.distances(i, i) != 0.0) {
      throw InstanceError("QAP data must have zero diagonals");
    }
  }
  if (qap.weights.minCoeff() < 0.0 || qap.distances.minCoeff() < 0.0) {
    throw InstanceError("QAP data must be nonnegative");
  }

  auto pair_cost = [&](int i, int j, int k, int l) {
    return qap.distances(k, l) * qap.weights(i, j) + qap.distances(l, k) * qap.weights(j, i);
  };
  if (big_m <= 0.0) {
    double worst = 0.0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k)
          for (int l = 0; l < n; ++l) worst = std::max(worst, pair_cost(i, j, k, l));
    big_m = 1.0 + static_cast<double>(n) * n * worst;
  }

  QapGadget gadget;
  gadget.big_m = big_m;
  const int cells = n - 1;
  NodeId next_node = 0;
  gadget.cell_node.assign(n, std::vector<std::vector<NodeId>>(cells, std::vector<NodeId>(n)));
  for (int i = 0; i < n; ++i)
    for (int c = 0; c < cells; ++c)
      for (int k = 0; k < n; ++k) gadget.cell_node[i][c][k] = next_node++;

  std::vector<Arc> arcs;
  std::vector<bool> inner;
  for (int i = 0; i < n; ++i) {
    for (int c = 0; c < cells; ++c) {
      for (int k = 0; k < n; ++k) {
        arcs.push_back({gadget.cell_node[i][c][k], gadget.cell_node[i][(c + 1) % cells][k]});
        inner.push_back(true);
      }
    }
  }

  // Arcs entering a connection node, keyed by arc id: (group, location).
  struct ConnectionEnd {
    int group = -1;
    int location = -1;
  };
  std::vector<ConnectionEnd> end_info;
  end_info.resize(arcs.size());
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      const int cell_i = j - 1;  // rank of j among the partners of i
      const int cell_j = i;      // rank of i among the partners of j
      const NodeId conn = next_node++;
      const NodeId relink = next_node++;
      gadget.group_pairs.push_back({i, j});
      gadget.connection_node.push_back(conn);
      gadget.relink_node.push_back(relink);
      for (int k = 0; k < n; ++k) {
        arcs.push_back({gadget.cell_node[i][cell_i][k], conn});
        end_info.push_back({i, k});
      }
      for (int l = 0; l < n; ++l) {
        arcs.push_back({conn, gadget.cell_node[j][cell_j][l]});
        end_info.push_back({j, l});
      }
      for (int l = 0; l < n; ++l) {
        arcs.push_back({gadget.cell_node[j][cell_j][l], relink});
        end_info.push_back({});
      }
      for (int k = 0; k < n; ++k) {
        arcs.push_back({relink, gadget.cell_node[i][cell_i][k]});
        end_info.push_back({});
      }
      inner.resize(arcs.size(), false);
    }
  }

  std::vector<bool> is_connection(next_node, false);
  for (NodeId c : gadget.connection_node) is_connection[c] = true;

  Digraph g(next_node, std::move(arcs));
  CostMatrix q(g.num_arcs());
  for (const SuccessorPair& sp : g.successor_pairs()) {
    const ArcId e = sp.first;
    const ArcId f = sp.second;
    if (inner[e] != inner[f]) {
      q.set(e, f, big_m);
    } else if (!inner[e] && is_connection[g.head(e)]) {
      const ConnectionEnd& from = end_info[e];
      const ConnectionEnd& to = end_info[f];
      const double value = from.location == to.location
                               ? big_m
                               : pair_cost(from.group, to.group, from.location, to.location);
      q.set(e, f, value);
    }
  }
  gadget.instance = QccpInstance(std::move(g), std::move(q));
  return gadget;
}

std::vector<int> decode_qap_cover(const QapGadget& gadget, const CycleCover& cover) {
  if (objective(gadget.instance, cover) >= gadget.big_m) return {};
  const Digraph& g = gadget.instance.graph();
  const auto n = static_cast<int>(gadget.cell_node.size());
  std::vector<int> assignment(n, -1);
  for (int i = 0; i < n; ++i) {
    for (int k = 0; k < n; ++k) {
      const NodeId v = gadget.cell_node[i][0][k];
      for (ArcId e : g.out_arcs(v)) {
        if (cover.contains(e) && g.head(e) != gadget.cell_node[i][1 % (n - 1)][k]) {
          assignment[i] = k;
        }
      }
    }
    if (assignment[i] < 0) return {};
  }
  return assignment;
}

}  // namespace qccp
