#include "qccp/instance_io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace qccp {
namespace {

const char* mode_token(SupportMode mode) {
  return mode == SupportMode::successor_only ? "successor" : "general";
}

class LineReader {
 public:
  explicit LineReader(std::istream& in) : in_(in) {}

  // Next non-empty, non-comment line split into whitespace tokens.
  std::vector<std::string> next(const char* what) {
    std::string line;
    while (std::getline(in_, line)) {
      ++line_no_;
      std::istringstream ss(line);
      std::vector<std::string> tokens;
      for (std::string tok; ss >> tok;) tokens.push_back(tok);
      if (tokens.empty() || tokens[0][0] == '#') continue;
      return tokens;
    }
    throw ParseError(std::string("unexpected end of file, expected ") + what);
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("line " + std::to_string(line_no_) + ": " + msg);
  }

  template <typename T>
  T number(const std::string& tok, const char* what) const {
    T value{};
    const auto* end = tok.data() + tok.size();
    auto [ptr, ec] = std::from_chars(tok.data(), end, value);
    if (ec != std::errc() || ptr != end) fail(std::string("malformed ") + what + " '" + tok + "'");
    return value;
  }

 private:
  std::istream& in_;
  int line_no_ = 0;
};

}  // namespace

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

void write_instance(const QccpInstance& inst, std::ostream& out) {
  const Digraph& g = inst.graph();
  out << "QCCP v1 " << g.num_nodes() << ' ' << g.num_arcs() << ' ' << mode_token(inst.mode())
      << '\n';
  for (const Arc& a : g.arcs()) out << a.tail << ' ' << a.head << '\n';
  const auto entries = inst.costs().entries();
  out << "COSTS " << entries.size() << '\n';
  for (const CostEntry& c : entries) {
    out << c.row << ' ' << c.col << ' ' << format_double(c.value) << '\n';
  }
}

void write_instance(const QccpInstance& inst, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_instance(inst, out);
}

QccpInstance read_instance(std::istream& in) {
  LineReader reader(in);
  auto header = reader.next("header");
  if (header.size() != 5 || header[0] != "QCCP" || header[1] != "v1") {
    reader.fail("expected header 'QCCP v1 <n> <m> <mode>'");
  }
  const int n = reader.number<int>(header[2], "node count");
  const int m = reader.number<int>(header[3], "arc count");
  if (n < 0 || m < 0) reader.fail("negative size in header");
  SupportMode mode;
  if (header[4] == "successor") {
    mode = SupportMode::successor_only;
  } else if (header[4] == "general") {
    mode = SupportMode::general;
  } else {
    reader.fail("unknown support mode '" + header[4] + "'");
  }

  std::vector<Arc> arcs;
  arcs.reserve(m);
  for (int e = 0; e < m; ++e) {
    auto tok = reader.next("arc line");
    if (tok.size() != 2) reader.fail("arc line needs '<tail> <head>'");
    arcs.push_back({reader.number<int>(tok[0], "tail"), reader.number<int>(tok[1], "head")});
  }
  Digraph g;
  try {
    g = Digraph(n, std::move(arcs));
  } catch (const GraphError& err) {
    throw ParseError(err.what());
  }

  auto costs_header = reader.next("COSTS line");
  if (costs_header.size() != 2 || costs_header[0] != "COSTS") {
    reader.fail("expected 'COSTS <k>'");
  }
  const long k = reader.number<long>(costs_header[1], "cost count");
  if (k < 0) reader.fail("negative cost count");
  CostMatrix q(m);
  for (long c = 0; c < k; ++c) {
    auto tok = reader.next("cost line");
    if (tok.size() != 3) reader.fail("cost line needs '<e> <f> <cost>'");
    const int e = reader.number<int>(tok[0], "arc id");
    const int f = reader.number<int>(tok[1], "arc id");
    const double v = reader.number<double>(tok[2], "cost");
    if (e < 0 || e >= m || f < 0 || f >= m) reader.fail("dangling arc id in cost entry");
    if (mode == SupportMode::successor_only && e != f && !g.is_successor(e, f)) {
      reader.fail("cost on non-successor pair (" + tok[0] + "," + tok[1] +
                  ") in successor-only mode");
    }
    q.set(e, f, v);
  }
  try {
    return QccpInstance(std::move(g), std::move(q), mode);
  } catch (const InstanceError& err) {
    throw ParseError(err.what());
  }
}

QccpInstance read_instance(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  return read_instance(in);
}

}  // namespace qccp
