#include "qccp/bound_report.hpp"

#include <json.hpp>

namespace qccp {

const char* to_string(BoundStatus status) {
  switch (status) {
    case BoundStatus::ok:
      return "ok";
    case BoundStatus::infeasible:
      return "infeasible";
    case BoundStatus::size_limit:
      return "size_limit";
    case BoundStatus::lp_failure:
      return "lp_failure";
    case BoundStatus::partial:
      return "partial";
  }
  return "unknown";
}

std::string to_json_line(const BoundReport& report, bool with_certificate) {
  nlohmann::json j;
  j["name"] = report.name;
  j["status"] = to_string(report.status);
  j["value"] = report.value;
  j["time_s"] = report.seconds;
  j["lp"] = {{"rows", report.lp.rows},
             {"cols", report.lp.cols},
             {"nonzeros", report.lp.nonzeros},
             {"iterations", report.lp.iterations},
             {"seconds", report.lp.seconds}};
  if (!report.message.empty()) j["message"] = report.message;
  if (with_certificate) {
    j["p_hat"] = report.p_hat;
    j["mu"] = report.mu;
    j["gamma"] = report.gamma;
    for (const auto& [key, vec] : report.witnesses) j["witnesses"][key] = vec;
  }
  return j.dump();
}

void record_lp(BoundReport& report, const lp::Problem& problem, const lp::Solution& sol,
               double seconds) {
  report.lp.rows += problem.num_rows();
  report.lp.cols += problem.num_cols();
  report.lp.nonzeros += problem.num_nonzeros();
  report.lp.iterations += sol.iterations;
  report.lp.seconds += seconds;
  report.lp.primal_infeasibility = std::max(report.lp.primal_infeasibility, sol.primal_infeasibility);
  report.lp.dual_infeasibility = std::max(report.lp.dual_infeasibility, sol.dual_infeasibility);
}

}  // namespace qccp
