// qccp: instance generation, single bounds and benchmark suites.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qccp/bench.hpp"
#include "qccp/instance_io.hpp"

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitAudit = 2;
constexpr int kExitInternal = 3;

std::vector<int> parse_dims(const std::string& s) {
  std::vector<int> dims;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, ',')) {
    std::size_t used = 0;
    const int d = std::stoi(item, &used);
    if (used != item.size() || d < 1) throw std::invalid_argument("bad --dims entry '" + item + "'");
    dims.push_back(d);
  }
  if (dims.empty()) throw std::invalid_argument("--dims is empty");
  return dims;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quadratic cycle cover bounds"};
  app.require_subcommand(1);

  qccp::bench::InstanceSpec spec;
  std::string dims_arg = "5,5";
  std::string out_path;
  auto* gen = app.add_subcommand("generate", "Write a random instance");
  gen->add_option("family", spec.family, "er, manhattan, angle or qap")
      ->required()
      ->check(CLI::IsMember({"er", "manhattan", "angle", "qap"}));
  gen->add_option("--n", spec.n, "Nodes (er, angle) or QAP size (qap)");
  gen->add_option("--p", spec.p, "Arc density");
  gen->add_option("--dims", dims_arg, "Grid dimensions, comma separated (manhattan)");
  gen->add_option("--seed", spec.seed, "Random seed");
  gen->add_option("--cost-lo", spec.cost_lo, "Smallest cost (er, manhattan)");
  gen->add_option("--cost-hi", spec.cost_hi, "Largest cost (er, manhattan)");
  gen->add_option("--rho", spec.rho, "Angle weight (angle)");
  gen->add_option("--coord-hi", spec.coord_hi, "Coordinate range (angle)");
  gen->add_option("--value-hi", spec.qap_value_hi, "Largest flow/distance value (qap)");
  gen->add_option("--out", out_path, "Output file; stdout when omitted");

  std::string inst_path;
  std::string bound_name;
  qccp::bench::BoundParams params;
  auto* bound = app.add_subcommand("bound", "Compute one bound, print a JSON row");
  bound->add_option("instance", inst_path, "Instance file")->required()->check(CLI::ExistingFile);
  bound->add_option("bound", bound_name, "Bound name")
      ->required()
      ->check(CLI::IsMember(qccp::bench::bound_names()));
  auto* eta_opt = bound->add_option("--eta", params.eta, "Representation parameter in [0,1]")
                      ->check(CLI::Range(0.0, 1.0));
  bound->add_option("--max-iters", params.max_iters, "Iteration cap (rbb, rgl)");
  bound->add_option("--min-gain", params.min_gain, "Stop when an iteration gains less");
  bound->add_option("--threads", params.threads, "Worker threads (0: QCCP_THREADS or all cores)");

  std::string config_path;
  std::string format_override;
  int bench_threads = 0;
  auto* bench = app.add_subcommand("bench", "Run a benchmark config and audit bound orderings");
  bench->add_option("config", config_path, "Config file")->required()->check(CLI::ExistingFile);
  bench->add_option("--format", format_override, "csv or json")
      ->check(CLI::IsMember({"csv", "json"}));
  bench->add_option("--threads", bench_threads, "Worker threads");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (*gen) {
      if (spec.family == "manhattan") spec.dims = parse_dims(dims_arg);
      const qccp::QccpInstance inst = qccp::bench::make_instance(spec);
      if (out_path.empty()) {
        qccp::write_instance(inst, std::cout);
        std::cerr << "n=" << inst.num_nodes() << " m=" << inst.num_arcs() << "\n";
      } else {
        qccp::write_instance(inst, out_path);
        std::cout << "n=" << inst.num_nodes() << " m=" << inst.num_arcs() << "\n";
      }
      return 0;
    }

    if (*bound) {
      // For rgl an explicit --eta pins eta instead of optimizing it.
      params.fix_eta = eta_opt->count() > 0;
      const qccp::QccpInstance inst = qccp::read_instance(inst_path);
      const qccp::BoundReport rep = qccp::bench::run_bound(inst, bound_name, params);
      qccp::bench::BenchRow row;
      row.instance = inst_path;
      row.family = "file";
      row.n = inst.num_nodes();
      row.m = inst.num_arcs();
      row.bound = bound_name;
      row.value = rep.value;
      row.rounded = qccp::bench::rounded_value(rep.value);
      row.time_s = rep.seconds;
      row.status = qccp::to_string(rep.status);
      std::cout << row.to_json() << "\n";
      if (!rep.message.empty()) std::cerr << bound_name << ": " << rep.message << "\n";
      return rep.status == qccp::BoundStatus::lp_failure ? kExitInternal : 0;
    }

    if (*bench) {
      qccp::bench::BenchConfig cfg = qccp::bench::parse_config_file(config_path);
      if (!format_override.empty()) cfg.format = format_override;
      const qccp::bench::BenchResult res = qccp::bench::run_bench(cfg, bench_threads);
      if (cfg.format == "json") {
        qccp::bench::write_json_lines(res.rows, std::cout);
      } else {
        qccp::bench::write_csv(res.rows, std::cout);
      }
      std::cerr << "audit: " << res.violations.size() << " violation(s)\n";
      for (const auto& v : res.violations) {
        std::cerr << "  " << v.instance << ": " << v.relation << " (" << v.detail << ")\n";
      }
      return res.violations.empty() ? 0 : kExitAudit;
    }
  } catch (const qccp::bench::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const qccp::bench::UnknownBound& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const qccp::ParseError& e) {
    std::cerr << "instance error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "bad parameters: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return 0;
}
