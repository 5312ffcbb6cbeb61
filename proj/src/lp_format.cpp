#include <cmath>
#include <ostream>
#include <string>

#include "qccp/instance_io.hpp"
#include "qccp/lp.hpp"

namespace qccp::lp {
namespace {

std::string col_name(const Problem& p, int j) {
  const std::string& n = p.variable(j).name;
  return n.empty() ? "x" + std::to_string(j) : n;
}

std::string row_name(const Problem& p, int i) {
  const std::string& n = p.row(i).name;
  return n.empty() ? "r" + std::to_string(i) : n;
}

void write_term(std::ostream& out, double coef, const std::string& name, bool first) {
  if (coef < 0) {
    out << (first ? "-" : " - ");
  } else if (!first) {
    out << " + ";
  }
  out << format_double(std::abs(coef)) << ' ' << name;
}

}  // namespace

void write_lp_format(const Problem& problem, std::ostream& out) {
  out << (problem.sense() == Sense::minimize ? "Minimize" : "Maximize") << "\n obj: ";
  bool first = true;
  for (int j = 0; j < problem.num_cols(); ++j) {
    const double c = problem.variable(j).cost;
    if (c == 0.0) continue;
    write_term(out, c, col_name(problem, j), first);
    first = false;
  }
  if (first) out << "0";
  out << "\nSubject To\n";
  for (int i = 0; i < problem.num_rows(); ++i) {
    const Row& row = problem.row(i);
    out << ' ' << row_name(problem, i) << ": ";
    first = true;
    for (const Term& t : row.terms) {
      write_term(out, t.coef, col_name(problem, t.col), first);
      first = false;
    }
    if (first) out << "0 " << col_name(problem, 0);
    switch (row.relation) {
      case Relation::less_equal:
        out << " <= ";
        break;
      case Relation::equal:
        out << " = ";
        break;
      case Relation::greater_equal:
        out << " >= ";
        break;
    }
    out << format_double(row.rhs) << '\n';
  }
  out << "Bounds\n";
  for (int j = 0; j < problem.num_cols(); ++j) {
    const Variable& v = problem.variable(j);
    const std::string name = col_name(problem, j);
    if (std::isinf(v.lo) && std::isinf(v.hi)) {
      out << ' ' << name << " free\n";
    } else if (v.lo == v.hi) {
      out << ' ' << name << " = " << format_double(v.lo) << '\n';
    } else {
      out << ' ' << (std::isinf(v.lo) ? "-inf" : format_double(v.lo)) << " <= " << name
          << " <= " << (std::isinf(v.hi) ? "+inf" : format_double(v.hi)) << '\n';
    }
  }
  out << "End\n";
}

}  // namespace qccp::lp
