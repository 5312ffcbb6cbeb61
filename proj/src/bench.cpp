#include "qccp/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "qccp/generators.hpp"
#include "qccp/gl.hpp"
#include "qccp/instance_io.hpp"
#include "qccp/lbb.hpp"
#include "qccp/reformulate.hpp"

namespace qccp::bench {

const std::vector<std::string>& bound_names() {
  static const std::vector<std::string> names{"lbb1", "lbb1-skew", "lbb2",  "lbb3",
                                              "gl",   "gl-compact", "gl-lbb", "milp",
                                              "rlt1", "rbb",        "rgl",   "rgl-sym"};
  return names;
}

BoundReport run_bound(const QccpInstance& inst, const std::string& name,
                      const BoundParams& params) {
  GlOptions gl;
  gl.eta = params.eta;
  gl.threads = params.threads;
  ReformulateOptions ref;
  ref.max_iters = params.max_iters;
  ref.min_gain = params.min_gain;

  BoundReport rep;
  if (name == "lbb1") {
    rep = lbb1(inst);
  } else if (name == "lbb1-skew") {
    rep = lbb1_skew(inst);
  } else if (name == "lbb2") {
    rep = lbb2(inst);
  } else if (name == "lbb3") {
    rep = lbb3(inst);
  } else if (name == "gl") {
    rep = gl_classical(inst, gl);
  } else if (name == "gl-compact") {
    rep = gl_compact(inst, gl);
  } else if (name == "gl-lbb") {
    rep = gl_as_lbb(inst, gl);
  } else if (name == "milp") {
    rep = milp_bound(inst, gl);
  } else if (name == "rlt1") {
    rep = rlt1(inst, gl);
  } else if (name == "rbb") {
    if (params.fix_eta) ref.fixed_eta = params.eta;
    rep = rbb(inst, ref).report;
  } else if (name == "rgl") {
    if (params.fix_eta) ref.fixed_eta = params.eta;
    rep = rgl(inst, ref).report;
  } else if (name == "rgl-sym") {
    ref.fixed_eta = 0.5;
    rep = rgl(inst, ref).report;
  } else {
    throw UnknownBound("unknown bound '" + name + "'");
  }
  rep.name = name;
  return rep;
}

double rounded_value(double raw) { return std::ceil(raw - 1e-9); }

std::string InstanceSpec::descriptor() const {
  std::ostringstream s;
  s << family << '(';
  if (family == "manhattan") {
    s << "dims=";
    for (std::size_t k = 0; k < dims.size(); ++k) s << (k ? "x" : "") << dims[k];
    s << ",cost=" << cost_lo << ".." << cost_hi;
  } else if (family == "angle") {
    s << "n=" << n << ",p=" << p << ",rho=" << rho;
  } else if (family == "qap") {
    s << "n=" << n << ",hi=" << qap_value_hi;
  } else {
    s << "n=" << n << ",p=" << p << ",cost=" << cost_lo << ".." << cost_hi;
  }
  s << ")#" << seed;
  return s.str();
}

QccpInstance make_instance(const InstanceSpec& spec) {
  if (spec.family == "er") return gen_erdos_renyi(spec.n, spec.p, spec.cost_lo, spec.cost_hi, spec.seed);
  if (spec.family == "manhattan") return gen_manhattan(spec.dims, spec.cost_lo, spec.cost_hi, spec.seed);
  if (spec.family == "angle") {
    return gen_angle_distance(spec.n, spec.p, spec.rho, spec.coord_hi, spec.seed).instance;
  }
  if (spec.family == "qap") {
    return gen_qap_reduction(random_qap(spec.n, spec.qap_value_hi, spec.seed)).instance;
  }
  throw std::invalid_argument("unknown instance family '" + spec.family + "'");
}

std::string BenchRow::to_json() const {
  nlohmann::json j{{"schema", kSchema}, {"instance", instance}, {"family", family},
                   {"seed", seed},      {"n", n},               {"m", m},
                   {"bound", bound},    {"value", value},       {"rounded", rounded},
                   {"time_s", time_s},  {"status", status}};
  if (opt) {
    j["opt"] = *opt;
    if (*opt != 0.0) j["gap"] = value / *opt;
  }
  return j.dump();
}

namespace {

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string item;
  std::istringstream in(s);
  while (std::getline(in, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_number(const std::string& key, const std::string& v, int line) {
  std::istringstream in(v);
  T out{};
  if (!(in >> out) || !(in >> std::ws).eof()) {
    throw ConfigError("line " + std::to_string(line) + ": bad value '" + v + "' for " + key);
  }
  return out;
}

std::vector<std::uint64_t> parse_seeds(const std::string& v, int line) {
  std::vector<std::uint64_t> seeds;
  for (const std::string& item : split(v, ',')) {
    const auto dash = item.find('-');
    if (dash == std::string::npos) {
      seeds.push_back(parse_number<std::uint64_t>("seeds", item, line));
    } else {
      const auto lo = parse_number<std::uint64_t>("seeds", trim(item.substr(0, dash)), line);
      const auto hi = parse_number<std::uint64_t>("seeds", trim(item.substr(dash + 1)), line);
      if (hi < lo) throw ConfigError("line " + std::to_string(line) + ": empty seed range");
      for (auto s = lo; s <= hi; ++s) seeds.push_back(s);
    }
  }
  return seeds;
}

bool parse_bool(const std::string& v, int line) {
  if (v == "true" || v == "yes" || v == "1") return true;
  if (v == "false" || v == "no" || v == "0") return false;
  throw ConfigError("line " + std::to_string(line) + ": expected a boolean, got '" + v + "'");
}

void apply_key(Suite& s, const std::string& key, const std::string& v, int line) {
  if (key == "family") {
    s.spec.family = v;
  } else if (key == "n") {
    s.spec.n = parse_number<int>(key, v, line);
  } else if (key == "p") {
    s.spec.p = parse_number<double>(key, v, line);
  } else if (key == "dims") {
    s.spec.dims.clear();
    for (const auto& d : split(v, ',')) s.spec.dims.push_back(parse_number<int>(key, d, line));
  } else if (key == "cost_lo") {
    s.spec.cost_lo = parse_number<int>(key, v, line);
  } else if (key == "cost_hi") {
    s.spec.cost_hi = parse_number<int>(key, v, line);
  } else if (key == "rho") {
    s.spec.rho = parse_number<double>(key, v, line);
  } else if (key == "coord_hi") {
    s.spec.coord_hi = parse_number<int>(key, v, line);
  } else if (key == "value_hi") {
    s.spec.qap_value_hi = parse_number<int>(key, v, line);
  } else if (key == "seeds") {
    s.seeds = parse_seeds(v, line);
  } else if (key == "bounds") {
    s.bounds = split(v, ',');
    for (const auto& b : s.bounds) {
      const auto& names = bound_names();
      if (std::find(names.begin(), names.end(), b) == names.end()) {
        throw ConfigError("line " + std::to_string(line) + ": unknown bound '" + b + "'");
      }
    }
  } else if (key == "oracle") {
    s.oracle = parse_bool(v, line);
  } else if (key == "eta") {
    s.params.eta = parse_number<double>(key, v, line);
  } else if (key == "max_iters") {
    s.params.max_iters = parse_number<int>(key, v, line);
  } else if (key == "min_gain") {
    s.params.min_gain = parse_number<double>(key, v, line);
  } else if (key == "max_nodes") {
    s.budget.max_nodes_exhaustive = parse_number<int>(key, v, line);
  } else if (key == "time_budget") {
    s.budget.time_budget_s = parse_number<double>(key, v, line);
  } else {
    throw ConfigError("line " + std::to_string(line) + ": unknown key '" + key + "'");
  }
}

}  // namespace

BenchConfig parse_config(std::istream& in) {
  BenchConfig cfg;
  std::string raw;
  int line = 0;
  Suite* current = nullptr;
  while (std::getline(in, raw)) {
    ++line;
    const auto hash = raw.find('#');
    const std::string text = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (text.empty()) continue;
    if (text.front() == '[') {
      if (text.back() != ']') throw ConfigError("line " + std::to_string(line) + ": unclosed section");
      const auto words = split(text.substr(1, text.size() - 2), ' ');
      if (words.empty() || words[0] != "suite") {
        throw ConfigError("line " + std::to_string(line) + ": expected [suite <name>]");
      }
      cfg.suites.emplace_back();
      current = &cfg.suites.back();
      current->name = words.size() > 1 ? words[1] : "suite" + std::to_string(cfg.suites.size());
      continue;
    }
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ConfigError("line " + std::to_string(line) + ": expected key = value");
    const std::string key = trim(text.substr(0, eq));
    const std::string value = trim(text.substr(eq + 1));
    if (!current) {
      if (key != "format") throw ConfigError("line " + std::to_string(line) + ": key outside a suite");
      if (value != "csv" && value != "json") {
        throw ConfigError("line " + std::to_string(line) + ": format must be csv or json");
      }
      cfg.format = value;
      continue;
    }
    apply_key(*current, key, value, line);
  }
  for (const Suite& s : cfg.suites) {
    if (s.spec.family.empty()) throw ConfigError("suite '" + s.name + "' has no family");
  }
  return cfg;
}

BenchConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open '" + path + "'");
  return parse_config(in);
}

std::vector<AuditViolation> audit(const std::vector<BenchRow>& rows, double tol) {
  std::vector<AuditViolation> out;
  std::map<std::string, std::map<std::string, double>> by_instance;
  std::map<std::string, double> opt;
  std::vector<std::string> order;
  for (const BenchRow& r : rows) {
    if (!by_instance.count(r.instance)) order.push_back(r.instance);
    auto& vals = by_instance[r.instance];
    if (r.status == "ok") vals[r.bound] = r.value;
    if (r.opt) opt[r.instance] = *r.opt;
  }
  auto slack = [&](double a, double b) { return tol * (1.0 + std::max(std::abs(a), std::abs(b))); };
  for (const std::string& inst : order) {
    const auto& v = by_instance[inst];
    auto le = [&](const std::string& a, const std::string& b) {
      auto ia = v.find(a), ib = v.find(b);
      if (ia == v.end() || ib == v.end()) return;
      if (ia->second > ib->second + slack(ia->second, ib->second)) {
        std::ostringstream d;
        d.precision(12);
        d << a << " = " << ia->second << " exceeds " << b << " = " << ib->second;
        out.push_back({inst, a + " <= " + b, d.str()});
      }
    };
    auto eq = [&](const std::string& a, const std::string& b) {
      le(a, b);
      le(b, a);
    };
    le("lbb1", "lbb2");
    le("lbb2", "lbb3");
    le("lbb1", "lbb3");
    le("lbb1", "lbb1-skew");
    le("gl", "milp");
    eq("gl", "gl-compact");
    eq("gl-compact", "gl-lbb");
    le("lbb1", "rbb");
    le("gl", "rgl");
    le("lbb1", "rlt1");
    le("gl-compact", "rlt1");
    le("rbb", "rlt1");
    if (auto it = opt.find(inst); it != opt.end()) {
      for (const auto& [name, value] : v) {
        if (value > it->second + slack(value, it->second)) {
          std::ostringstream d;
          d.precision(12);
          d << name << " = " << value << " exceeds the optimum " << it->second;
          out.push_back({inst, name + " <= OPT", d.str()});
        }
      }
    }
  }
  return out;
}

BenchResult run_bench(const BenchConfig& config, int threads) {
  struct Job {
    const Suite* suite;
    std::uint64_t seed;
  };
  std::vector<Job> jobs;
  for (const Suite& s : config.suites) {
    for (std::uint64_t seed : s.seeds) jobs.push_back({&s, seed});
  }
  std::vector<std::vector<BenchRow>> results(jobs.size());
  std::vector<std::string> errors(jobs.size());

  auto run_job = [&](std::size_t j) {
    const Suite& s = *jobs[j].suite;
    InstanceSpec spec = s.spec;
    spec.seed = jobs[j].seed;
    try {
      const QccpInstance inst = make_instance(spec);
      BenchRow base;
      base.instance = spec.descriptor();
      base.family = spec.family;
      base.seed = spec.seed;
      base.n = inst.num_nodes();
      base.m = inst.num_arcs();
      std::optional<double> opt;
      if (s.oracle) {
        const auto t0 = std::chrono::steady_clock::now();
        const ExactResult ex = solve_exact(inst, s.budget);
        BenchRow row = base;
        row.bound = "opt";
        row.time_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        if (ex.status != OracleStatus::complete) {
          row.status = "budget_exceeded";
        } else if (!ex.feasible) {
          row.status = "infeasible";
        } else {
          row.status = "ok";
          row.value = ex.value;
          row.rounded = rounded_value(ex.value);
          opt = ex.value;
        }
        results[j].push_back(row);
      }
      BoundParams params = s.params;
      params.threads = 1;
      for (const std::string& b : s.bounds) {
        const BoundReport rep = run_bound(inst, b, params);
        BenchRow row = base;
        row.bound = b;
        row.value = rep.value;
        row.rounded = rounded_value(rep.value);
        row.time_s = rep.seconds;
        row.status = to_string(rep.status);
        row.opt = opt;
        results[j].push_back(row);
      }
      if (opt) results[j].front().opt = opt;
    } catch (const std::exception& e) {
      errors[j] = spec.descriptor() + ": " + e.what();
    }
  };

  if (threads <= 0) threads = default_threads();
  threads = std::max(1, std::min<int>(threads, static_cast<int>(jobs.size())));
  if (threads == 1) {
    for (std::size_t j = 0; j < jobs.size(); ++j) run_job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) {
      pool.emplace_back([&] {
        for (std::size_t j = next++; j < jobs.size(); j = next++) run_job(j);
      });
    }
    for (auto& th : pool) th.join();
  }
  for (const std::string& e : errors) {
    if (!e.empty()) throw std::runtime_error(e);
  }

  BenchResult res;
  for (auto& r : results) {
    for (auto& row : r) res.rows.push_back(std::move(row));
  }
  res.violations = audit(res.rows);
  return res;
}

void write_csv(const std::vector<BenchRow>& rows, std::ostream& out) {
  out << "instance,family,seed,n,m,bound,value,rounded,time_s,status,opt,gap\n";
  for (const BenchRow& r : rows) {
    out << '"' << r.instance << "\"," << r.family << ',' << r.seed << ',' << r.n << ',' << r.m
        << ',' << r.bound << ',' << format_double(r.value) << ',' << format_double(r.rounded) << ','
        << format_double(r.time_s) << ',' << r.status << ',';
    if (r.opt) {
      out << format_double(*r.opt) << ',';
      if (*r.opt != 0.0) out << format_double(r.value / *r.opt);
    } else {
      out << ',';
    }
    out << '\n';
  }
}

void write_json_lines(const std::vector<BenchRow>& rows, std::ostream& out) {
  for (const BenchRow& r : rows) out << r.to_json() << '\n';
}

}  // namespace qccp::bench
