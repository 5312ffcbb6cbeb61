#pragma once

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace qccp::lp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

enum class Sense { minimize, maximize };
enum class Relation { less_equal, equal, greater_equal };
enum class Status { optimal, infeasible, unbounded, iteration_limit, numerical_failure };

const char* to_string(Status status);

struct Term {
  int col = 0;
  double coef = 0.0;
};

struct Variable {
  double lo = 0.0;
  double hi = kInf;
  double cost = 0.0;
  std::string name;
};

struct Row {
  std::vector<Term> terms;
  Relation relation = Relation::equal;
  double rhs = 0.0;
  std::string name;
};

// A linear program in row form. Duplicate column indices inside a row are
// summed.
class Problem {
 public:
  explicit Problem(Sense sense = Sense::minimize) : sense_(sense) {}

  int add_variable(double lo, double hi, double cost, std::string name = {});
  int add_free_variable(double cost, std::string name = {}) {
    return add_variable(-kInf, kInf, cost, std::move(name));
  }
  int add_row(std::vector<Term> terms, Relation relation, double rhs, std::string name = {});

  void set_cost(int col, double cost) { vars_[col].cost = cost; }
  void set_bounds(int col, double lo, double hi) {
    vars_[col].lo = lo;
    vars_[col].hi = hi;
  }

  Sense sense() const { return sense_; }
  int num_cols() const { return static_cast<int>(vars_.size()); }
  int num_rows() const { return static_cast<int>(rows_.size()); }
  const Variable& variable(int col) const { return vars_[col]; }
  const Row& row(int r) const { return rows_[r]; }
  std::size_t num_nonzeros() const { return nonzeros_; }

 private:
  Sense sense_;
  std::vector<Variable> vars_;
  std::vector<Row> rows_;
  std::size_t nonzeros_ = 0;
};

struct Options {
  double tol_feas = 1e-7;
  double tol_gap = 1e-6;
  double tol_opt = 1e-9;    // reduced-cost threshold for pricing
  double tol_pivot = 1e-9;  // smallest usable pivot element
  int max_iters = 1'000'000;
  int refactor_interval = 100;
  // Switch to Bland's rule after this many consecutive degenerate pivots.
  int degenerate_streak = 1000;
};

struct Solution {
  Status status = Status::numerical_failure;
  double objective = 0.0;
  std::vector<double> primal;
  // One multiplier per row: the rate of change of the optimal objective in
  // the row's rhs. For a minimization a >= row has dual >= 0 and a <= row
  // dual <= 0; for a maximization the signs flip.
  std::vector<double> dual;
  std::vector<double> reduced_cost;
  int iterations = 0;
  // Quality measures of an optimal answer.
  double primal_infeasibility = 0.0;
  double dual_infeasibility = 0.0;
  double duality_gap = 0.0;

  bool optimal() const { return status == Status::optimal; }
};

// Bounded-variable revised simplex, two phases. Basis factorized with a
// sparse LU, updated in product form between refactorizations.
Solution solve(const Problem& problem, const Options& options = {});

// CPLEX LP text layout, for cross-checking with external solvers.
void write_lp_format(const Problem& problem, std::ostream& out);

}  // namespace qccp::lp
