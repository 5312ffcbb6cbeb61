#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "qccp/bound_report.hpp"
#include "qccp/instance.hpp"
#include "qccp/oracle.hpp"

namespace qccp::bench {

inline constexpr const char* kSchema = "qccp-bench/1";

// Names accepted by run_bound.
const std::vector<std::string>& bound_names();

struct BoundParams {
  double eta = 0.5;
  // For rgl: fix eta to `eta` instead of optimizing it.
  bool fix_eta = false;
  int max_iters = 50;
  double min_gain = -1.0;  // negative: relative default
  int threads = 0;
};

class UnknownBound : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Dispatches one bound by name. Budget and size problems come back in the
// report status; only unknown names throw.
BoundReport run_bound(const QccpInstance& inst, const std::string& name,
                      const BoundParams& params = {});

// Reported value: bounds are rounded up, with a small slack so that
// 3.0000000001 still reports 3.
double rounded_value(double raw);

struct InstanceSpec {
  std::string family;  // er, manhattan, angle, qap
  int n = 8;
  double p = 0.5;
  std::vector<int> dims{5, 5};
  int cost_lo = 0;
  int cost_hi = 100;
  double rho = 40.0;
  int coord_hi = 500;
  int qap_value_hi = 9;
  std::uint64_t seed = 1;

  std::string descriptor() const;
};

QccpInstance make_instance(const InstanceSpec& spec);

struct BenchRow {
  std::string instance;
  std::string family;
  std::uint64_t seed = 0;
  int n = 0;
  int m = 0;
  std::string bound;
  double value = 0.0;
  double rounded = 0.0;
  double time_s = 0.0;
  std::string status;
  std::optional<double> opt;  // oracle value when the oracle ran

  std::string to_json() const;
};

// One [suite] section: an instance family, a seed list, the bounds to run.
struct Suite {
  std::string name;
  InstanceSpec spec;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> bounds;
  BoundParams params;
  bool oracle = false;
  EnumerationBudget budget;
};

struct BenchConfig {
  std::vector<Suite> suites;
  std::string format = "csv";  // csv or json
};

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Key-value format:
//
//   format = csv            # optional, before the first section
//   [suite er8]
//   family = er
//   n = 8
//   p = 0.5
//   seeds = 1-20            # ranges and comma lists
//   bounds = lbb1, lbb2, gl, milp
//   oracle = true
//
// Other keys: dims, cost_lo, cost_hi, rho, coord_hi, value_hi, eta,
// max_iters, min_gain, max_nodes, time_budget.
BenchConfig parse_config(std::istream& in);
BenchConfig parse_config_file(const std::string& path);

struct AuditViolation {
  std::string instance;
  std::string relation;
  std::string detail;
};

// Checks the ordering relations between bounds of one instance:
// lbb1 <= lbb2 <= lbb3, lbb1 <= lbb1-skew, gl <= milp, gl = gl-compact =
// gl-lbb, lbb1 <= rbb, gl <= rgl, lbb1, gl-compact and rbb <= rlt1, and
// everything <= the oracle optimum.
std::vector<AuditViolation> audit(const std::vector<BenchRow>& rows, double tol = 1e-6);

struct BenchResult {
  std::vector<BenchRow> rows;
  std::vector<AuditViolation> violations;
};

// Rows are computed on `threads` workers (0: QCCP_THREADS or hardware) and
// returned in config order.
BenchResult run_bench(const BenchConfig& config, int threads = 0);

void write_csv(const std::vector<BenchRow>& rows, std::ostream& out);
void write_json_lines(const std::vector<BenchRow>& rows, std::ostream& out);

}  // namespace qccp::bench
