#include "qccp/lp.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <stdexcept>

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

namespace qccp::lp {

const char* to_string(Status status) {
  switch (status) {
    case Status::optimal:
      return "optimal";
    case Status::infeasible:
      return "infeasible";
    case Status::unbounded:
      return "unbounded";
    case Status::iteration_limit:
      return "iteration_limit";
    case Status::numerical_failure:
      return "numerical_failure";
  }
  return "unknown";
}

int Problem::add_variable(double lo, double hi, double cost, std::string name) {
  if (std::isnan(lo) || std::isnan(hi) || lo > hi || lo == kInf || hi == -kInf) {
    throw std::invalid_argument("invalid variable bounds");
  }
  if (!std::isfinite(cost)) throw std::invalid_argument("non-finite variable cost");
  vars_.push_back({lo, hi, cost, std::move(name)});
  return num_cols() - 1;
}

int Problem::add_row(std::vector<Term> terms, Relation relation, double rhs, std::string name) {
  if (!std::isfinite(rhs)) throw std::invalid_argument("non-finite row rhs");
  for (const Term& t : terms) {
    if (t.col < 0 || t.col >= num_cols()) throw std::invalid_argument("row refers to unknown column");
    if (!std::isfinite(t.coef)) throw std::invalid_argument("non-finite coefficient");
  }
  nonzeros_ += terms.size();
  rows_.push_back({std::move(terms), relation, rhs, std::move(name)});
  return num_rows() - 1;
}

namespace {

// Objective change below which a pivot counts as degenerate.
constexpr double kProgress = 1e-11;

enum class State : std::uint8_t { basic, at_lower, at_upper, free_zero };

using SpMat = Eigen::SparseMatrix<double>;

// Internal form: A x - r = 0 with one logical r_i per row carrying the row's
// bounds, always minimizing. Artificial columns are appended for phase one.
class Simplex {
 public:
  Simplex(const Problem& problem, const Options& options)
      : prob_(problem), opt_(options), m_(problem.num_rows()), n_(problem.num_cols()) {
    build_columns();
  }

  Solution run();

 private:
  void build_columns();
  int add_column(const std::vector<std::pair<int, double>>& entries, double lo, double hi);
  double bound_value(int j) const;
  bool refactor();
  void recompute_basic_values();
  void ftran(Eigen::VectorXd& v) const;
  void btran(Eigen::VectorXd& v) const;
  double column_dot(int j, const Eigen::VectorXd& v) const;
  // Stops early once the objective drops to `target` (phase 1 uses 0).
  Status iterate(const std::vector<double>& cost, double target = -kInf);
  Solution finish(Status status);

  const Problem& prob_;
  Options opt_;
  int m_;
  int n_;
  int num_total_ = 0;
  int iterations_ = 0;
  int factorizations_ = 0;

  std::vector<int> col_start_{0};
  std::vector<int> col_row_;
  std::vector<double> col_val_;
  std::vector<double> lo_, hi_, x_;
  std::vector<State> state_;
  std::vector<int> head_;  // basis position -> column
  std::vector<int> pos_;   // column -> basis position or -1

  mutable Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  struct Eta {
    int row = 0;
    double pivot = 1.0;
    std::vector<int> idx;
    std::vector<double> val;
  };
  std::vector<Eta> etas_;
  std::vector<double> phase2_cost_;
};

int Simplex::add_column(const std::vector<std::pair<int, double>>& entries, double lo,
                        double hi) {
  for (const auto& [r, v] : entries) {
    if (v == 0.0) continue;
    col_row_.push_back(r);
    col_val_.push_back(v);
  }
  col_start_.push_back(static_cast<int>(col_row_.size()));
  lo_.push_back(lo);
  hi_.push_back(hi);
  return num_total_++;
}

void Simplex::build_columns() {
  std::vector<std::vector<std::pair<int, double>>> cols(n_);
  for (int i = 0; i < m_; ++i) {
    for (const Term& t : prob_.row(i).terms) cols[t.col].emplace_back(i, t.coef);
  }
  for (int j = 0; j < n_; ++j) {
    auto& c = cols[j];
    std::sort(c.begin(), c.end());
    std::vector<std::pair<int, double>> merged;
    for (const auto& e : c) {
      if (!merged.empty() && merged.back().first == e.first) {
        merged.back().second += e.second;
      } else {
        merged.push_back(e);
      }
    }
    const Variable& v = prob_.variable(j);
    add_column(merged, v.lo, v.hi);
  }
  for (int i = 0; i < m_; ++i) {
    const Row& row = prob_.row(i);
    double lo = -kInf, hi = kInf;
    if (row.relation != Relation::less_equal) lo = row.rhs;
    if (row.relation != Relation::greater_equal) hi = row.rhs;
    add_column({{i, -1.0}}, lo, hi);
  }
  const double sign = prob_.sense() == Sense::maximize ? -1.0 : 1.0;
  phase2_cost_.assign(num_total_, 0.0);
  for (int j = 0; j < n_; ++j) phase2_cost_[j] = sign * prob_.variable(j).cost;
}

double Simplex::bound_value(int j) const {
  if (std::isfinite(lo_[j])) return lo_[j];
  if (std::isfinite(hi_[j])) return hi_[j];
  return 0.0;
}

double Simplex::column_dot(int j, const Eigen::VectorXd& v) const {
  double s = 0.0;
  for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) s += col_val_[k] * v[col_row_[k]];
  return s;
}

bool Simplex::refactor() {
  etas_.clear();
  ++factorizations_;
  if (m_ == 0) return true;
  std::vector<Eigen::Triplet<double>> trip;
  for (int p = 0; p < m_; ++p) {
    const int j = head_[p];
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) {
      trip.emplace_back(col_row_[k], p, col_val_[k]);
    }
  }
  SpMat b(m_, m_);
  b.setFromTriplets(trip.begin(), trip.end());
  b.makeCompressed();
  lu_.analyzePattern(b);
  lu_.factorize(b);
  return lu_.info() == Eigen::Success;
}

void Simplex::ftran(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  v = lu_.solve(v).eval();
  for (const Eta& e : etas_) {
    const double vr = v[e.row] / e.pivot;
    v[e.row] = vr;
    if (vr == 0.0) continue;
    for (std::size_t k = 0; k < e.idx.size(); ++k) v[e.idx[k]] -= e.val[k] * vr;
  }
}

void Simplex::btran(Eigen::VectorXd& v) const {
  if (m_ == 0) return;
  for (auto it = etas_.rbegin(); it != etas_.rend(); ++it) {
    double s = v[it->row];
    for (std::size_t k = 0; k < it->idx.size(); ++k) s -= it->val[k] * v[it->idx[k]];
    v[it->row] = s / it->pivot;
  }
  v = lu_.transpose().solve(v).eval();
}

void Simplex::recompute_basic_values() {
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m_);
  for (int j = 0; j < num_total_; ++j) {
    if (state_[j] == State::basic || x_[j] == 0.0) continue;
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) rhs[col_row_[k]] -= col_val_[k] * x_[j];
  }
  ftran(rhs);
  for (int p = 0; p < m_; ++p) x_[head_[p]] = rhs[p];
}

// Runs primal simplex iterations for `cost` from the current basis.
Status Simplex::iterate(const std::vector<double>& cost, double target) {
  Eigen::VectorXd pi(m_), alpha(m_), rho(m_);
  // Reduced costs are updated along with the basis and recomputed after
  // every refactorization. Devex reference weights scale the pricing.
  std::vector<double> d(num_total_, 0.0);
  std::vector<double> weight(num_total_, 1.0);
  int priced_at = -1;
  int degenerate = 0;
  bool bland = false;
  bool verified = false;  // optimality confirmed on a fresh factorization
  bool unbounded_checked = false;
  while (true) {
    if (priced_at != factorizations_) {
      for (int p = 0; p < m_; ++p) pi[p] = cost[head_[p]];
      btran(pi);
      for (int j = 0; j < num_total_; ++j) {
        d[j] = state_[j] == State::basic ? 0.0 : cost[j] - column_dot(j, pi);
      }
      priced_at = factorizations_;
    }
    if (iterations_ >= opt_.max_iters) return Status::iteration_limit;
    if (target > -kInf) {
      double obj = 0.0;
      for (int p = 0; p < m_; ++p) obj += cost[head_[p]] * x_[head_[p]];
      for (int j = 0; j < num_total_; ++j) {
        if (state_[j] != State::basic) obj += cost[j] * x_[j];
      }
      if (obj <= target) return Status::optimal;
    }

    int enter = -1;
    double best = 0.0, best_merit = 0.0;
    for (int j = 0; j < num_total_; ++j) {
      const State s = state_[j];
      if (s == State::basic || lo_[j] == hi_[j]) continue;
      double score = 0.0;
      if (s == State::at_lower) {
        score = -d[j];
      } else if (s == State::at_upper) {
        score = d[j];
      } else {
        score = std::abs(d[j]);
      }
      if (score <= opt_.tol_opt) continue;
      if (bland) {
        enter = j;
        best = d[j];
        break;
      }
      const double merit = score * score / weight[j];
      if (merit > best_merit) {
        enter = j;
        best = d[j];
        best_merit = merit;
      }
    }
    if (enter < 0) {
      if (verified || etas_.empty()) return Status::optimal;
      if (!refactor()) return Status::numerical_failure;
      recompute_basic_values();
      verified = true;
      continue;
    }
    verified = false;

    const double dir = best < 0.0 ? 1.0 : -1.0;
    alpha.setZero();
    for (int k = col_start_[enter]; k < col_start_[enter + 1]; ++k) alpha[col_row_[k]] = col_val_[k];
    ftran(alpha);

    // Harris two-pass ratio test. Basic value p moves by -dir * theta * alpha_p.
    // Entries tiny against the column's largest never become pivots.
    const double pivot_tol =
        m_ > 0 ? std::max(opt_.tol_pivot, 1e-7 * alpha.cwiseAbs().maxCoeff()) : opt_.tol_pivot;
    double theta_max = kInf;
    for (int p = 0; p < m_; ++p) {
      const double a = alpha[p];
      if (std::abs(a) <= pivot_tol) continue;
      const int j = head_[p];
      const double delta = -dir * a;
      double limit = kInf;
      if (delta < 0.0 && std::isfinite(lo_[j])) {
        limit = (x_[j] - lo_[j] + opt_.tol_feas) / -delta;
      } else if (delta > 0.0 && std::isfinite(hi_[j])) {
        limit = (hi_[j] - x_[j] + opt_.tol_feas) / delta;
      }
      theta_max = std::min(theta_max, std::max(limit, 0.0));
    }
    const double range = hi_[enter] - lo_[enter];

    int leave_pos = -1;
    double theta = kInf;
    if (bland) {
      // Smallest column index among the (near) minimum ratios, skipping
      // pivots far smaller than the best tied one.
      std::vector<std::pair<double, int>> cand;
      double min_ratio = kInf;
      for (int p = 0; p < m_; ++p) {
        const double a = alpha[p];
        if (std::abs(a) <= pivot_tol) continue;
        const int j = head_[p];
        const double delta = -dir * a;
        double ratio = kInf;
        if (delta < 0.0 && std::isfinite(lo_[j])) {
          ratio = (x_[j] - lo_[j]) / -delta;
        } else if (delta > 0.0 && std::isfinite(hi_[j])) {
          ratio = (hi_[j] - x_[j]) / delta;
        }
        if (!std::isfinite(ratio)) continue;
        ratio = std::max(ratio, 0.0);
        cand.emplace_back(ratio, p);
        min_ratio = std::min(min_ratio, ratio);
      }
      const double cutoff = min_ratio + opt_.tol_feas * 1e-3;
      double max_pivot = 0.0;
      for (const auto& [ratio, p] : cand) {
        if (ratio <= cutoff) max_pivot = std::max(max_pivot, std::abs(alpha[p]));
      }
      for (const auto& [ratio, p] : cand) {
        if (ratio > cutoff || std::abs(alpha[p]) < 1e-2 * max_pivot) continue;
        if (leave_pos < 0 || head_[p] < head_[leave_pos]) {
          leave_pos = p;
          theta = ratio;
        }
      }
    } else if (std::isfinite(theta_max)) {
      double best_pivot = 0.0;
      for (int p = 0; p < m_; ++p) {
        const double a = alpha[p];
        if (std::abs(a) <= pivot_tol) continue;
        const int j = head_[p];
        const double delta = -dir * a;
        double ratio = kInf;
        if (delta < 0.0 && std::isfinite(lo_[j])) {
          ratio = (x_[j] - lo_[j]) / -delta;
        } else if (delta > 0.0 && std::isfinite(hi_[j])) {
          ratio = (hi_[j] - x_[j]) / delta;
        }
        if (ratio <= theta_max && std::abs(a) > best_pivot) {
          best_pivot = std::abs(a);
          leave_pos = p;
          theta = std::max(ratio, 0.0);
        }
      }
    }

    ++iterations_;
    if (std::isfinite(range) && range <= theta) {
      // Bound flip, the basis does not change.
      for (int p = 0; p < m_; ++p) x_[head_[p]] -= dir * range * alpha[p];
      if (state_[enter] == State::at_lower) {
        state_[enter] = State::at_upper;
        x_[enter] = hi_[enter];
      } else {
        state_[enter] = State::at_lower;
        x_[enter] = lo_[enter];
      }
      if (std::abs(best) * range > kProgress) {
        degenerate = 0;
        bland = false;
      }
      continue;
    }
    if (leave_pos < 0) {
      // Confirm the ray on fresh reduced costs before believing it.
      if (unbounded_checked) return Status::unbounded;
      if (!refactor()) return Status::numerical_failure;
      recompute_basic_values();
      unbounded_checked = true;
      continue;
    }
    unbounded_checked = false;

    for (int p = 0; p < m_; ++p) x_[head_[p]] -= dir * theta * alpha[p];
    x_[enter] += dir * theta;
    const int leave = head_[leave_pos];

    // Pivot row for the reduced cost and weight updates.
    const double pivot = alpha[leave_pos];
    rho.setZero();
    rho[leave_pos] = 1.0;
    btran(rho);
    const double theta_d = d[enter] / pivot;
    for (int j = 0; j < num_total_; ++j) {
      if (state_[j] == State::basic || j == enter) continue;
      const double a = column_dot(j, rho);
      if (a == 0.0) continue;
      d[j] -= theta_d * a;
      const double ratio = a / pivot;
      weight[j] = std::max(weight[j], ratio * ratio * weight[enter]);
    }
    d[leave] = -theta_d;
    weight[leave] = std::max(weight[enter] / (pivot * pivot), 1.0);
    d[enter] = 0.0;
    if (-dir * alpha[leave_pos] < 0.0) {
      state_[leave] = State::at_lower;
      x_[leave] = lo_[leave];
    } else {
      state_[leave] = State::at_upper;
      x_[leave] = hi_[leave];
    }
    pos_[leave] = -1;
    state_[enter] = State::basic;
    head_[leave_pos] = enter;
    pos_[enter] = leave_pos;

    // Tiny steps count as degenerate: they are how numerical cycling looks.
    if (std::abs(best) * theta <= kProgress) {
      if (++degenerate >= opt_.degenerate_streak) bland = true;
      // A long Bland stretch is slow; give Dantzig pricing another turn.
      if (degenerate >= opt_.degenerate_streak + std::max(1000, m_)) {
        bland = false;
        degenerate = 0;
      }
    } else {
      degenerate = 0;
      bland = false;
    }

    if (static_cast<int>(etas_.size()) + 1 >= opt_.refactor_interval) {
      if (!refactor()) return Status::numerical_failure;
      recompute_basic_values();
    } else {
      Eta eta;
      eta.row = leave_pos;
      eta.pivot = alpha[leave_pos];
      for (int p = 0; p < m_; ++p) {
        if (p != leave_pos && alpha[p] != 0.0) {
          eta.idx.push_back(p);
          eta.val.push_back(alpha[p]);
        }
      }
      etas_.push_back(std::move(eta));
    }
  }
}

Solution Simplex::run() {
  // Nonbasic start for structurals, logicals basic.
  state_.assign(num_total_, State::at_lower);
  x_.assign(num_total_, 0.0);
  for (int j = 0; j < n_; ++j) {
    x_[j] = bound_value(j);
    if (std::isfinite(lo_[j])) {
      state_[j] = State::at_lower;
    } else if (std::isfinite(hi_[j])) {
      state_[j] = State::at_upper;
    } else {
      state_[j] = State::free_zero;
    }
  }
  std::vector<double> activity(m_, 0.0);
  for (int j = 0; j < n_; ++j) {
    if (x_[j] == 0.0) continue;
    for (int k = col_start_[j]; k < col_start_[j + 1]; ++k) activity[col_row_[k]] += col_val_[k] * x_[j];
  }

  head_.assign(m_, -1);
  std::vector<int> artificials;
  for (int i = 0; i < m_; ++i) {
    const int logical = n_ + i;
    const double a = activity[i];
    if (a >= lo_[logical] - opt_.tol_feas && a <= hi_[logical] + opt_.tol_feas) {
      head_[i] = logical;
      state_[logical] = State::basic;
      x_[logical] = a;
      continue;
    }
    // Pin the logical at the violated bound and let an artificial absorb
    // the residual: a x - r + s t = 0 with t >= 0.
    const double bound = a < lo_[logical] ? lo_[logical] : hi_[logical];
    state_[logical] = a < lo_[logical] ? State::at_lower : State::at_upper;
    x_[logical] = bound;
    const double s = bound - a > 0.0 ? 1.0 : -1.0;
    const int art = add_column({{i, s}}, 0.0, kInf);
    state_.push_back(State::basic);
    x_.push_back(std::abs(bound - a));
    head_[i] = art;
    artificials.push_back(art);
  }
  phase2_cost_.resize(num_total_, 0.0);
  pos_.assign(num_total_, -1);
  for (int p = 0; p < m_; ++p) pos_[head_[p]] = p;

  if (m_ > 0 && !refactor()) return finish(Status::numerical_failure);

  if (!artificials.empty()) {
    std::vector<double> cost1(num_total_, 0.0);
    for (int j : artificials) cost1[j] = 1.0;
    const Status s = iterate(cost1, opt_.tol_feas * static_cast<double>(artificials.size()));
    if (s != Status::optimal) return finish(s == Status::unbounded ? Status::numerical_failure : s);
    double infeas = 0.0;
    for (int j : artificials) infeas += std::max(0.0, x_[j]);
    if (infeas > opt_.tol_feas * std::max<std::size_t>(1, artificials.size())) {
      return finish(Status::infeasible);
    }
    for (int j : artificials) {
      hi_[j] = 0.0;
      if (state_[j] != State::basic) {
        state_[j] = State::at_lower;
        x_[j] = 0.0;
      }
    }
  }
  return finish(iterate(phase2_cost_));
}

Solution Simplex::finish(Status status) {
  Solution sol;
  sol.status = status;
  sol.iterations = iterations_;
  sol.primal.assign(x_.begin(), x_.begin() + n_);
  if (status != Status::optimal) return sol;

  const bool maximize = prob_.sense() == Sense::maximize;
  const double sign = maximize ? -1.0 : 1.0;
  Eigen::VectorXd pi(m_);
  for (int p = 0; p < m_; ++p) pi[p] = phase2_cost_[head_[p]];
  btran(pi);

  sol.dual.resize(m_);
  for (int i = 0; i < m_; ++i) sol.dual[i] = sign * pi[i];
  sol.reduced_cost.resize(n_);
  for (int j = 0; j < n_; ++j) sol.reduced_cost[j] = sign * (phase2_cost_[j] - column_dot(j, pi));

  double obj = 0.0;
  for (int j = 0; j < n_; ++j) obj += prob_.variable(j).cost * sol.primal[j];
  sol.objective = obj;

  // Primal residuals against the original data.
  double pinf = 0.0;
  for (int j = 0; j < n_; ++j) {
    const Variable& v = prob_.variable(j);
    pinf = std::max({pinf, v.lo - sol.primal[j], sol.primal[j] - v.hi});
  }
  for (int i = 0; i < m_; ++i) {
    const Row& row = prob_.row(i);
    double a = 0.0;
    for (const Term& t : row.terms) a += t.coef * sol.primal[t.col];
    if (row.relation != Relation::less_equal) pinf = std::max(pinf, row.rhs - a);
    if (row.relation != Relation::greater_equal) pinf = std::max(pinf, a - row.rhs);
  }
  sol.primal_infeasibility = pinf;

  // Dual objective in the internal minimization: every structural and
  // logical contributes its reduced cost times the bound it prices against.
  double dinf = 0.0;
  double dual_obj = 0.0;
  auto account = [&](double d, double lo, double hi) {
    if (d > 0.0) {
      if (std::isfinite(lo)) {
        dual_obj += d * lo;
      } else {
        dinf = std::max(dinf, d);
      }
    } else if (d < 0.0) {
      if (std::isfinite(hi)) {
        dual_obj += d * hi;
      } else {
        dinf = std::max(dinf, -d);
      }
    }
  };
  for (int j = 0; j < n_; ++j) account(phase2_cost_[j] - column_dot(j, pi), lo_[j], hi_[j]);
  for (int i = 0; i < m_; ++i) account(pi[i], lo_[n_ + i], hi_[n_ + i]);
  sol.dual_infeasibility = dinf;
  sol.duality_gap = std::abs(sign * obj - dual_obj);
  return sol;
}

}  // namespace

Solution solve(const Problem& problem, const Options& options) {
  Simplex simplex(problem, options);
  return simplex.run();
}

}  // namespace qccp::lp
