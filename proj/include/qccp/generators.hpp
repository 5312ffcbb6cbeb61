#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "qccp/instance.hpp"

namespace qccp {

// G(n, p): every ordered non-loop pair is an arc independently with
// probability p. Every successor pair gets an integer cost uniform on
// [cost_lo, cost_hi].
QccpInstance gen_erdos_renyi(int n, double p, int cost_lo, int cost_hi, std::uint64_t seed);

// Toroidal k-dimensional grid. Every node has exactly one out-arc per
// dimension j. It points towards coordinate i_j + 1 (mod dims[j]) when the
// sum of the node's other coordinates is even and towards i_j - 1 otherwise,
// so neighbouring lines along a dimension run in opposite directions.
// n = prod(dims), m = k * n.
QccpInstance gen_manhattan(const std::vector<int>& dims, int cost_lo, int cost_hi,
                           std::uint64_t seed);

struct Point {
  std::int64_t x = 0;
  std::int64_t y = 0;
};

struct AngleDistanceInstance {
  QccpInstance instance;
  std::vector<Point> coords;
};

// Distinct integer points on {0..coord_hi}^2, ceil(p n (n-1)) arcs sampled
// without replacement, and Q_ef = ceil(0.1 (rho * angle(e,f) + (d_e + d_f)/2))
// on successor pairs, with angle the turning angle in radians in [0, pi].
AngleDistanceInstance gen_angle_distance(int n, double p, double rho, int coord_hi,
                                         std::uint64_t seed);

// Turning angle between the direction vectors u and v, in [0, pi].
double turning_angle(double ux, double uy, double vx, double vy);
// ceil((rho * angle + (d_e + d_f) / 2) / 10)
double angle_distance_cost(double angle, double d_e, double d_f, double rho);

struct QapData {
  Eigen::MatrixXd weights;    // w, facilities x facilities
  Eigen::MatrixXd distances;  // d, locations x locations
};

QapData random_qap(int n, int value_hi, std::uint64_t seed);

// sum_ij d(pi(i), pi(j)) w(i, j)
double qap_objective(const QapData& qap, const std::vector<int>& assignment);

struct QapGadget {
  QccpInstance instance;
  double big_m = 0.0;
  // Node (group i, cell c, location k) is cell_node[i][c][k].
  std::vector<std::vector<std::vector<NodeId>>> cell_node;
  // Connection and relink node for the unordered group pair {i, j}, i < j.
  std::vector<std::pair<int, int>> group_pairs;
  std::vector<NodeId> connection_node;
  std::vector<NodeId> relink_node;
};

struct GadgetSize {
  std::int64_t nodes = 0;
  std::int64_t arcs = 0;
};

// Sizes from the closed-form counts n^2 (n-1) + 2 C(n,2) and
// n^2 (n-1) + 4 C(n,2) quoted with the hardness reduction.
GadgetSize qap_gadget_formula_size(int n);
// Sizes of the graph gen_qap_reduction actually builds. Node counts agree
// with the formula; every connection needs 4 n arcs, not 4.
GadgetSize qap_gadget_built_size(int n);

// The reduction from a Koopmans-Beckmann QAP: one group of n-1 cells per
// facility, inner cycles per location, and a connection/relink node pair per
// group pair. big_m <= 0 selects the default 1 + n^2 max(d_kl w_ij + d_lk w_ji).
// Requires n >= 3 (for n = 2 the single-cell inner cycles would be loops),
// zero diagonals and nonnegative data.
QapGadget gen_qap_reduction(const QapData& qap, double big_m = 0.0);

// Assignment encoded by a finite-cost cover of the gadget, or empty if the
// cover uses a big-M transition.
std::vector<int> decode_qap_cover(const QapGadget& gadget, const CycleCover& cover);

}  // namespace qccp
