#pragma once

#include <cstddef>
#include <map>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mcc/leafset.hpp"
#include "mcc/network.hpp"

namespace mcc {

struct ReticulationCycle {
  NodeId root;
  NodeId reticulation;
  // Internal nodes of each side, listed from the root towards the reticulation.
  std::vector<NodeId> side_a;
  std::vector<NodeId> side_b;

  // r, side_a..., t, side_b reversed: the cyclic order starting at the root.
  std::vector<NodeId> order() const;
  std::size_t edge_count() const { return side_a.size() + side_b.size() + 2; }
};

bool is_weakly_galled(const Network& n);

// Cycles sorted by reticulation id; throws NotWeaklyGalled.
std::vector<ReticulationCycle> cycles(const Network& n);

// Per-node cycle membership derived from cycles(n).
struct CycleMap {
  std::vector<ReticulationCycle> cycles;
  // Cycle in which the node is internal (on a side), or -1.
  std::vector<int> internal_of;
  // Cycles rooted at the node.
  std::vector<std::vector<int>> rooted_at;

  bool is_cycle_internal(NodeId u) const { return internal_of[u.value] >= 0; }
  // Cycle the edge belongs to, or -1.
  int cycle_of_edge(NodeId u, NodeId v) const;

  std::map<std::pair<std::uint32_t, std::uint32_t>, int> edge_cycle;
};

CycleMap cycle_map(const Network& n);

// Sigma_1 and Sigma_2 over internal nodes.
struct CladeIndex {
  std::unordered_map<LeafSet, std::vector<NodeId>, LeafSetHash> one;
  std::unordered_map<LeafSet, std::vector<std::pair<NodeId, NodeId>>, LeafSetHash> two;

  bool contains(const LeafSet& s) const { return one.count(s) != 0 || two.count(s) != 0; }
  // At most two 1-clade nodes and one 2-clade pair per leaf set.
  bool unicity_holds() const;
};

CladeIndex clade_index(const Network& n, const LeafUniverse& universe);

struct CladeEntry {
  LeafSet leaves;
  std::vector<NodeId> nodes;
  std::vector<std::pair<NodeId, NodeId>> pairs;
};

// Sorted by leaf set.
std::vector<CladeEntry> one_clades(const Network& n, const LeafUniverse& universe);
std::vector<CladeEntry> two_clades(const Network& n, const LeafUniverse& universe);

struct RuleStep {
  int network = 0;  // 1 or 2
  int rule = 0;     // 1 or 2
  NodeId child;     // contracted root child, in the network before the step
};

struct RuleResult {
  Network n1;
  Network n2;
  std::size_t count = 0;
  std::vector<RuleStep> steps;
};

RuleResult apply_rules(const Network& n1, const Network& n2);

// Complete isomorphism invariant for weakly galled trees.
std::string canonical_form(const Network& n);

}  // namespace mcc
