#include "qccp/ccp.hpp"

#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace qccp {
namespace {

constexpr double kUnreached = std::numeric_limits<double>::infinity();

std::vector<std::uint8_t> allowed_arcs(const Digraph& g, const CcpOptions& options) {
  std::vector<std::uint8_t> allowed(g.num_arcs(), 1);
  const ArcId e = options.forced_arc;
  if (e < 0) return allowed;
  if (e >= g.num_arcs()) throw std::invalid_argument("forced arc out of range");
  if (options.forced_value == 0) {
    allowed[e] = 0;
  } else if (options.forced_value == 1) {
    for (ArcId f : g.out_arcs(g.tail(e))) allowed[f] = f == e;
    for (ArcId f : g.in_arcs(g.head(e))) allowed[f] = f == e;
  } else {
    throw std::invalid_argument("forced value must be 0 or 1");
  }
  return allowed;
}

}  // namespace

CcpResult solve_ccp(const Digraph& g, std::span<const double> p, const CcpOptions& options) {
  const int n = g.num_nodes();
  const int m = g.num_arcs();
  if (static_cast<int>(p.size()) != m) throw std::invalid_argument("cost vector length != arc count");
  const std::vector<std::uint8_t> allowed = allowed_arcs(g, options);
  const double sign = options.maximize ? -1.0 : 1.0;
  auto cost = [&](ArcId e) { return sign * p[e]; };

  CcpResult result;
  // u: left (tail) potentials, v: right (head) potentials, u_i + v_j <= c_ij.
  std::vector<double> u(n, 0.0), v(n, kUnreached);
  for (ArcId e = 0; e < m; ++e) {
    if (allowed[e]) v[g.head(e)] = std::min(v[g.head(e)], cost(e));
  }
  for (NodeId j = 0; j < n; ++j) {
    if (v[j] == kUnreached) return result;
  }

  std::vector<ArcId> match_left(n, -1);   // arc used by left node i
  std::vector<ArcId> match_right(n, -1);  // arc used by right node j
  std::vector<double> dist(n);
  std::vector<ArcId> via(n);  // arc that reached right node j
  std::vector<NodeId> popped;
  std::vector<std::uint8_t> done(n);
  using Item = std::pair<double, NodeId>;

  for (NodeId s = 0; s < n; ++s) {
    std::fill(dist.begin(), dist.end(), kUnreached);
    std::fill(done.begin(), done.end(), 0);
    std::fill(via.begin(), via.end(), -1);
    popped.clear();
    std::priority_queue<Item, std::vector<Item>, std::greater<Item>> heap;

    auto relax_from = [&](NodeId i, double di) {
      for (ArcId e : g.out_arcs(i)) {
        if (!allowed[e]) continue;
        const NodeId j = g.head(e);
        if (done[j]) continue;
        const double nd = di + std::max(0.0, cost(e) - u[i] - v[j]);
        if (nd < dist[j]) {
          dist[j] = nd;
          via[j] = e;
          heap.emplace(nd, j);
        }
      }
    };
    relax_from(s, 0.0);

    NodeId sink = -1;
    while (!heap.empty()) {
      auto [d, j] = heap.top();
      heap.pop();
      if (done[j] || d > dist[j]) continue;
      done[j] = 1;
      if (match_right[j] < 0) {
        sink = j;
        break;
      }
      popped.push_back(j);
      relax_from(g.tail(match_right[j]), d);
    }
    if (sink < 0) return result;

    const double dt = dist[sink];
    u[s] += dt;
    for (NodeId j : popped) {
      const double shift = dt - dist[j];
      v[j] -= shift;
      u[g.tail(match_right[j])] += shift;
    }
    // Augment back to s.
    for (NodeId j = sink; j >= 0;) {
      const ArcId e = via[j];
      const NodeId i = g.tail(e);
      const ArcId prev = match_left[i];
      match_left[i] = e;
      match_right[j] = e;
      j = prev < 0 ? -1 : g.head(prev);
    }
  }

  std::vector<std::uint8_t> x(m, 0);
  double value = 0.0;
  for (NodeId i = 0; i < n; ++i) {
    x[match_left[i]] = 1;
    value += p[match_left[i]];
  }
  result.feasible = true;
  result.value = value;
  result.cover = CycleCover(g, std::move(x));
  if (options.duals) {
    result.mu.resize(n);
    result.gamma.resize(n);
    for (NodeId i = 0; i < n; ++i) {
      result.mu[i] = sign * u[i];
      result.gamma[i] = sign * v[i];
    }
  }
  return result;
}

CcpResult solve_ccp_forced(const Digraph& g, std::span<const double> p, ArcId e,
                           int forced_value) {
  CcpOptions options;
  options.forced_arc = e;
  options.forced_value = forced_value;
  return solve_ccp(g, p, options);
}

CcpResult solve_ccp_lp(const Digraph& g, std::span<const double> p, const CcpOptions& options,
                       const lp::Options& lp_options) {
  const int n = g.num_nodes();
  const int m = g.num_arcs();
  if (static_cast<int>(p.size()) != m) throw std::invalid_argument("cost vector length != arc count");
  const std::vector<std::uint8_t> allowed = allowed_arcs(g, options);

  lp::Problem prob(options.maximize ? lp::Sense::maximize : lp::Sense::minimize);
  for (ArcId e = 0; e < m; ++e) prob.add_variable(0.0, allowed[e] ? lp::kInf : 0.0, p[e]);
  for (NodeId i = 0; i < n; ++i) {
    std::vector<lp::Term> terms;
    for (ArcId e : g.out_arcs(i)) terms.push_back({e, 1.0});
    prob.add_row(std::move(terms), lp::Relation::equal, 1.0);
  }
  for (NodeId j = 0; j < n; ++j) {
    std::vector<lp::Term> terms;
    for (ArcId e : g.in_arcs(j)) terms.push_back({e, 1.0});
    prob.add_row(std::move(terms), lp::Relation::equal, 1.0);
  }
  const lp::Solution sol = lp::solve(prob, lp_options);

  CcpResult result;
  if (sol.status == lp::Status::infeasible) return result;
  if (!sol.optimal()) {
    throw std::runtime_error(std::string("cycle cover LP failed: ") + lp::to_string(sol.status));
  }
  result.lp_primal = sol.primal;
  std::vector<std::uint8_t> x(m, 0);
  double value = 0.0;
  for (ArcId e = 0; e < m; ++e) {
    if (sol.primal[e] > 0.5) {
      x[e] = 1;
      value += p[e];
    }
  }
  result.feasible = true;
  result.value = value;
  result.cover = CycleCover(g, std::move(x));
  if (options.duals) {
    result.mu.assign(sol.dual.begin(), sol.dual.begin() + n);
    result.gamma.assign(sol.dual.begin() + n, sol.dual.end());
  }
  return result;
}

}  // namespace qccp
