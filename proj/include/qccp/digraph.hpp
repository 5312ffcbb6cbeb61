#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace qccp {

using NodeId = int;
using ArcId = int;

// Arc orientation follows the convention used throughout the library:
// `tail` is the starting node (written e+ in the literature this code
// follows) and `head` is the ending node (e-). Careful: the superscripts are
// the reverse of what many graph texts use.
struct Arc {
  NodeId tail = 0;
  NodeId head = 0;

  friend bool operator==(const Arc&, const Arc&) = default;
};

// Ordered pair (e, f) of arcs with head(e) == tail(f), i.e. f may directly
// follow e on a cycle.
struct SuccessorPair {
  ArcId first = 0;
  ArcId second = 0;

  friend bool operator==(const SuccessorPair&, const SuccessorPair&) = default;
};

class GraphError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

// Immutable arc-indexed digraph. Arc ids are dense and follow input order.
// Self-loops and parallel arcs are rejected at construction.
class Digraph {
 public:
  Digraph() = default;
  Digraph(int num_nodes, std::vector<Arc> arcs);

  int num_nodes() const { return num_nodes_; }
  int num_arcs() const { return static_cast<int>(arcs_.size()); }

  const Arc& arc(ArcId e) const { return arcs_[e]; }
  NodeId tail(ArcId e) const { return arcs_[e].tail; }
  NodeId head(ArcId e) const { return arcs_[e].head; }
  std::span<const Arc> arcs() const { return arcs_; }

  // delta+(i): arcs leaving i, ascending arc id.
  std::span<const ArcId> out_arcs(NodeId i) const { return out_[i]; }
  // delta-(i): arcs entering i, ascending arc id.
  std::span<const ArcId> in_arcs(NodeId i) const { return in_[i]; }

  // All successor pairs, ordered by (first, second).
  std::span<const SuccessorPair> successor_pairs() const { return succ_pairs_; }
  bool is_successor(ArcId e, ArcId f) const {
    return e != f && head(e) == tail(f);
  }

  // Arc id for (tail, head), or -1.
  ArcId find_arc(NodeId tail, NodeId head) const;

 private:
  int num_nodes_ = 0;
  std::vector<Arc> arcs_;
  std::vector<std::vector<ArcId>> out_;
  std::vector<std::vector<ArcId>> in_;
  std::vector<SuccessorPair> succ_pairs_;
};

// Throws GraphError on self-loops, duplicate arcs or node ids out of range.
Digraph build_digraph(int num_nodes, std::span<const Arc> arcs);

// Dense node-arc incidence matrices: starts[i][e] == 1 iff i == tail(e),
// ends[i][e] == 1 iff i == head(e).
struct IncidenceMatrices {
  std::vector<std::vector<std::uint8_t>> starts;  // U, n x m
  std::vector<std::vector<std::uint8_t>> ends;    // V, n x m
};

IncidenceMatrices incidence(const Digraph& g);

}  // namespace qccp
