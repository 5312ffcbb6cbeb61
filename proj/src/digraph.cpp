#include "qccp/digraph.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

namespace qccp {

Digraph::Digraph(int num_nodes, std::vector<Arc> arcs)
    : num_nodes_(num_nodes), arcs_(std::move(arcs)) {
  if (num_nodes_ < 0) throw GraphError("negative node count");
  out_.assign(num_nodes_, {});
  in_.assign(num_nodes_, {});
  std::unordered_set<std::uint64_t> seen;
  seen.reserve(arcs_.size() * 2);
  for (ArcId e = 0; e < num_arcs(); ++e) {
    const Arc& a = arcs_[e];
    if (a.tail < 0 || a.tail >= num_nodes_ || a.head < 0 ||
        a.head >= num_nodes_) {
      throw GraphError("arc " + std::to_string(e) + " has a node id out of range");
    }
    if (a.tail == a.head) {
      throw GraphError("arc " + std::to_string(e) + " is a self-loop");
    }
    const auto key = static_cast<std::uint64_t>(a.tail) * static_cast<std::uint64_t>(num_nodes_) +
                     static_cast<std::uint64_t>(a.head);
    if (!seen.insert(key).second) {
      throw GraphError("arc " + std::to_string(e) + " duplicates an earlier arc (" +
                       std::to_string(a.tail) + "," + std::to_string(a.head) + ")");
    }
    out_[a.tail].push_back(e);
    in_[a.head].push_back(e);
  }
  for (ArcId e = 0; e < num_arcs(); ++e) {
    for (ArcId f : out_[head(e)]) {
      if (f != e) succ_pairs_.push_back({e, f});
    }
  }
}

ArcId Digraph::find_arc(NodeId t, NodeId h) const {
  if (t < 0 || t >= num_nodes_) return -1;
  for (ArcId e : out_[t]) {
    if (head(e) == h) return e;
  }
  return -1;
}

Digraph build_digraph(int num_nodes, std::span<const Arc> arcs) {
  return Digraph(num_nodes, std::vector<Arc>(arcs.begin(), arcs.end()));
}

IncidenceMatrices incidence(const Digraph& g) {
  IncidenceMatrices mats;
  const int n = g.num_nodes();
  const int m = g.num_arcs();
  mats.starts.assign(n, std::vector<std::uint8_t>(m, 0));
  mats.ends.assign(n, std::vector<std::uint8_t>(m, 0));
  for (ArcId e = 0; e < m; ++e) {
    mats.starts[g.tail(e)][e] = 1;
    mats.ends[g.head(e)][e] = 1;
  }
  return mats;
}

}  // namespace qccp
