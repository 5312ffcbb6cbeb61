#include "qccp/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "qccp/ccp.hpp"
#include "qccp/lbb.hpp"

namespace qccp {

const char* to_string(OracleStatus status) {
  return status == OracleStatus::complete ? "complete" : "budget_exceeded";
}

namespace {

using Clock = std::chrono::steady_clock;

// Partial successor assignment: chosen out-arc per tail, used flag per head.
class Assignment {
 public:
  explicit Assignment(const Digraph& g)
      : g_(g), n_(g.num_nodes()), out_(n_), head_used_(n_, 0), match_(n_), seen_(n_) {
    for (NodeId i = 0; i < n_; ++i) {
      out_[i].assign(g.out_arcs(i).begin(), g.out_arcs(i).end());
      std::sort(out_[i].begin(), out_[i].end(),
                [&](ArcId a, ArcId b) { return g.head(a) < g.head(b); });
    }
    chosen_.assign(n_, -1);
  }

  const std::vector<ArcId>& out_sorted(NodeId i) const { return out_[i]; }
  bool head_free(ArcId e) const { return !head_used_[g_.head(e)]; }
  bool assigned(NodeId i) const { return chosen_[i] >= 0; }
  ArcId chosen(NodeId i) const { return chosen_[i]; }

  void select(ArcId e) {
    chosen_[g_.tail(e)] = e;
    head_used_[g_.head(e)] = 1;
  }
  void unselect(ArcId e) {
    chosen_[g_.tail(e)] = -1;
    head_used_[g_.head(e)] = 0;
  }

  // Perfect matching between unassigned tails and unused heads (Kuhn).
  bool completable() {
    std::fill(match_.begin(), match_.end(), -1);
    for (NodeId i = 0; i < n_; ++i) {
      if (chosen_[i] >= 0) continue;
      std::fill(seen_.begin(), seen_.end(), 0);
      if (!augment(i)) return false;
    }
    return true;
  }

  CycleCover cover() const {
    std::vector<std::uint8_t> x(g_.num_arcs(), 0);
    for (ArcId e : chosen_) x[e] = 1;
    return CycleCover(g_, std::move(x));
  }

 private:
  bool augment(NodeId i) {
    for (ArcId e : out_[i]) {
      const NodeId j = g_.head(e);
      if (head_used_[j] || seen_[j]) continue;
      seen_[j] = 1;
      if (match_[j] < 0 || augment(match_[j])) {
        match_[j] = i;
        return true;
      }
    }
    return false;
  }

  const Digraph& g_;
  int n_;
  std::vector<std::vector<ArcId>> out_;
  std::vector<ArcId> chosen_;
  std::vector<std::uint8_t> head_used_;
  std::vector<NodeId> match_;
  std::vector<std::uint8_t> seen_;
};

class BudgetClock {
 public:
  explicit BudgetClock(const EnumerationBudget& budget)
      : budget_(budget), start_(Clock::now()) {}

  // Polled from inner loops; reads the clock every 1024 calls.
  bool expired() {
    if ((++ticks_ & 1023) != 0) return false;
    const double s = std::chrono::duration<double>(Clock::now() - start_).count();
    return s > budget_.time_budget_s;
  }

 private:
  const EnumerationBudget& budget_;
  Clock::time_point start_;
  std::uint64_t ticks_ = 0;
};

std::string too_many_nodes(int n, const EnumerationBudget& budget) {
  return "graph has " + std::to_string(n) + " nodes, exhaustive limit is " +
         std::to_string(budget.max_nodes_exhaustive);
}

class Enumerator {
 public:
  Enumerator(const Digraph& g, const EnumerationBudget& budget,
             const std::function<void(const CycleCover&)>& visit)
      : g_(g), budget_(budget), visit_(visit), assign_(g), clock_(budget) {}

  EnumerationResult run() {
    if (g_.num_nodes() > budget_.max_nodes_exhaustive) {
      result_.status = OracleStatus::budget_exceeded;
      result_.reason = too_many_nodes(g_.num_nodes(), budget_);
      return result_;
    }
    if (assign_.completable()) dfs(0);
    return result_;
  }

 private:
  void dfs(NodeId i) {
    if (stopped_) return;
    if (i == g_.num_nodes()) {
      if (result_.covers >= budget_.max_covers) {
        stop("cover limit " + std::to_string(budget_.max_covers) + " reached");
        return;
      }
      ++result_.covers;
      visit_(assign_.cover());
      return;
    }
    if (clock_.expired()) {
      stop("time budget exhausted");
      return;
    }
    for (ArcId e : assign_.out_sorted(i)) {
      if (!assign_.head_free(e)) continue;
      assign_.select(e);
      if (assign_.completable()) dfs(i + 1);
      assign_.unselect(e);
      if (stopped_) return;
    }
  }

  void stop(std::string why) {
    stopped_ = true;
    result_.status = OracleStatus::budget_exceeded;
    result_.reason = std::move(why);
  }

  const Digraph& g_;
  const EnumerationBudget& budget_;
  const std::function<void(const CycleCover&)>& visit_;
  Assignment assign_;
  BudgetClock clock_;
  EnumerationResult result_;
  bool stopped_ = false;
};

class BranchAndBound {
 public:
  BranchAndBound(const QccpInstance& inst, const EnumerationBudget& budget, double lower_bound)
      : g_(inst.graph()),
        budget_(budget),
        lower_bound_(lower_bound),
        assign_(g_),
        clock_(budget),
        m_(g_.num_arcs()),
        diag_(m_, 0.0),
        rows_(m_),
        cols_(m_),
        inter_(m_, 0.0),
        static_lb_(m_, 0.0),
        succ_min_(m_, 0.0) {
    for (const CostEntry& c : inst.costs().entries()) {
      if (c.row == c.col) {
        diag_[c.row] = c.value;
      } else {
        rows_[c.row].push_back({c.col, c.value});
        cols_[c.col].push_back({c.row, c.value});
      }
    }
    // Lower bound on the row-e share of the objective, Q_ee + sum_f Q_ef x_f,
    // given x_e = 1: exactly one arc out of head(e) is selected, every other
    // term is at least min(0, Q_ef).
    for (ArcId e = 0; e < m_; ++e) {
      const NodeId h = g_.head(e);
      double best = std::numeric_limits<double>::infinity();
      for (ArcId f : g_.out_arcs(h)) best = std::min(best, inst.cost(e, f));
      succ_min_[e] = best;
      double neg = 0.0;
      for (const auto& [f, q] : rows_[e]) {
        if (g_.tail(f) != h) neg += std::min(0.0, q);
      }
      static_lb_[e] = diag_[e] + neg;
    }
  }

  void seed_incumbent(const CycleCover& cover, double value) {
    best_value_ = value;
    best_cover_ = cover;
    have_best_ = true;
  }

  ExactResult run() {
    ExactResult res;
    if (g_.num_nodes() > budget_.max_nodes_exhaustive) {
      res.status = OracleStatus::budget_exceeded;
      res.reason = too_many_nodes(g_.num_nodes(), budget_);
      return res;
    }
    if (!(have_best_ && proven())) {
      if (assign_.completable()) dfs(g_.num_nodes(), 0.0);
    }
    res.search_nodes = nodes_;
    if (stopped_) {
      res.status = OracleStatus::budget_exceeded;
      res.reason = reason_;
    }
    res.feasible = have_best_;
    if (have_best_) {
      res.value = best_value_;
      res.cover = best_cover_;
    }
    return res;
  }

 private:
  struct Entry {
    ArcId arc;
    double value;
  };

  bool proven() const { return best_value_ <= lower_bound_ + 1e-9 * (1.0 + std::abs(lower_bound_)); }

  double candidate_bound(ArcId f) const {
    const double succ = assign_.assigned(g_.head(f)) ? 0.0 : succ_min_[f];
    return static_lb_[f] + inter_[f] + succ;
  }

  void select(ArcId f) {
    assign_.select(f);
    for (const auto& [h, q] : rows_[f]) inter_[h] += q;
    for (const auto& [h, q] : cols_[f]) inter_[h] += q;
  }
  void unselect(ArcId f) {
    assign_.unselect(f);
    for (const auto& [h, q] : rows_[f]) inter_[h] -= q;
    for (const auto& [h, q] : cols_[f]) inter_[h] -= q;
  }

  void dfs(int remaining, double partial) {
    if (stopped_) return;
    ++nodes_;
    if (remaining == 0) {
      if (++leaves_ > budget_.max_covers) {
        stop("cover limit " + std::to_string(budget_.max_covers) + " reached");
        return;
      }
      if (!have_best_ || partial < best_value_) {
        best_value_ = partial;
        best_cover_ = assign_.cover();
        have_best_ = true;
        if (proven()) done_ = true;
      }
      return;
    }
    if (clock_.expired()) {
      stop("time budget exhausted");
      return;
    }

    // Bound, and pick the unassigned node with the fewest options.
    double bound = partial;
    NodeId pick = -1;
    int pick_options = 0;
    for (NodeId i = 0; i < g_.num_nodes(); ++i) {
      if (assign_.assigned(i)) continue;
      double best = std::numeric_limits<double>::infinity();
      int options = 0;
      for (ArcId f : g_.out_arcs(i)) {
        if (!assign_.head_free(f)) continue;
        ++options;
        best = std::min(best, candidate_bound(f));
      }
      bound += best;
      if (pick < 0 || options < pick_options) {
        pick = i;
        pick_options = options;
      }
    }
    if (have_best_ && bound >= best_value_ - 1e-9 * (1.0 + std::abs(best_value_))) return;

    std::vector<Entry> cands;
    for (ArcId f : g_.out_arcs(pick)) {
      if (assign_.head_free(f)) cands.push_back({f, diag_[f] + inter_[f]});
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const Entry& a, const Entry& b) { return a.value < b.value; });
    for (const Entry& c : cands) {
      select(c.arc);
      if (assign_.completable()) dfs(remaining - 1, partial + c.value);
      unselect(c.arc);
      if (stopped_ || done_) return;
    }
  }

  void stop(std::string why) {
    stopped_ = true;
    reason_ = std::move(why);
  }

  const Digraph& g_;
  const EnumerationBudget& budget_;
  double lower_bound_;
  Assignment assign_;
  BudgetClock clock_;
  int m_;
  std::vector<double> diag_;
  std::vector<std::vector<std::pair<ArcId, double>>> rows_;
  std::vector<std::vector<std::pair<ArcId, double>>> cols_;
  std::vector<double> inter_;  // sum over selected g of Q_fg + Q_gf
  std::vector<double> static_lb_;
  std::vector<double> succ_min_;

  bool have_best_ = false;
  double best_value_ = 0.0;
  CycleCover best_cover_;
  std::int64_t nodes_ = 0;
  std::int64_t leaves_ = 0;
  bool stopped_ = false;
  bool done_ = false;
  std::string reason_;
};

}  // namespace

EnumerationResult enumerate_covers(const Digraph& g, const EnumerationBudget& budget,
                                   const std::function<void(const CycleCover&)>& visit) {
  Enumerator e(g, budget, visit);
  return e.run();
}

ExactResult solve_exact(const QccpInstance& inst, const EnumerationBudget& budget,
                        const ExactOptions& options) {
  const Digraph& g = inst.graph();
  double lower = options.lower_bound;
  std::vector<double> start_costs;
  if (options.use_lbb1 && g.num_nodes() <= budget.max_nodes_exhaustive) {
    const BoundReport lb = lbb1(inst);
    if (lb.status == BoundStatus::ok) {
      lower = std::max(lower, lb.value);
      start_costs = lb.p_hat;
    } else if (lb.status == BoundStatus::infeasible) {
      return {};
    }
  }
  BranchAndBound bb(inst, budget, lower);
  if (!start_costs.empty()) {
    const CcpResult start = solve_ccp(g, start_costs);
    if (start.feasible) bb.seed_incumbent(start.cover, objective(inst, start.cover));
  }
  return bb.run();
}

ExactResult solve_naive(const QccpInstance& inst, const EnumerationBudget& budget) {
  ExactResult res;
  const EnumerationResult en = enumerate_covers(inst.graph(), budget, [&](const CycleCover& c) {
    const double v = objective(inst, c);
    if (!res.feasible || v < res.value) {
      res.feasible = true;
      res.value = v;
      res.cover = c;
    }
  });
  res.status = en.status;
  res.reason = en.reason;
  res.search_nodes = en.covers;
  return res;
}

CoverCheck check_cvp(const Digraph& g, std::span<const double> v, const EnumerationBudget& budget,
                     double tol) {
  CoverCheck out;
  bool first = true;
  double ref = 0.0;
  const EnumerationResult en = enumerate_covers(g, budget, [&](const CycleCover& c) {
    const double val = linear_cost(v, c);
    if (first) {
      ref = val;
      first = false;
    }
    out.max_deviation = std::max(out.max_deviation, std::abs(val - ref));
  });
  out.status = en.status;
  out.reason = en.reason;
  out.covers = en.covers;
  out.holds = out.max_deviation <= tol;
  return out;
}

CoverCheck check_linearization(const Digraph& g, const CostMatrix& q, std::span<const double> p,
                               const EnumerationBudget& budget, double tol) {
  CoverCheck out;
  const EnumerationResult en = enumerate_covers(g, budget, [&](const CycleCover& c) {
    out.max_deviation = std::max(out.max_deviation, std::abs(objective(g, q, c) - linear_cost(p, c)));
  });
  out.status = en.status;
  out.reason = en.reason;
  out.covers = en.covers;
  out.holds = out.max_deviation <= tol;
  return out;
}

}  // namespace qccp
