#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mcc/error.hpp"
#include "mcc/leafset.hpp"

namespace mcc {

struct NodeId {
  std::uint32_t value = 0;
  friend auto operator<=>(NodeId, NodeId) = default;
};

struct NodeIdHash {
  std::size_t operator()(NodeId id) const { return std::hash<std::uint32_t>{}(id.value); }
};

using NodeMapping = std::unordered_map<NodeId, NodeId, NodeIdHash>;

// Leaf-labeled digraph. Valid networks are produced by validate(); the
// mutating interface is used by builders and raw edit operations, whose
// results may violate the network invariants until checked.
class Network {
 public:
  NodeId add_node(std::string name = {});
  // Adds a node with an explicit id, which must be unused and not below any
  // id that was ever allocated.
  NodeId add_node_with_id(NodeId id, std::string name = {});
  void add_edge(NodeId u, NodeId v);
  bool remove_edge(NodeId u, NodeId v);
  void remove_node(NodeId u);
  void set_label(NodeId u, std::string label);
  void clear_label(NodeId u);
  void set_name(NodeId u, std::string name);

  bool contains(NodeId u) const;
  bool has_edge(NodeId u, NodeId v) const;
  std::size_t node_count() const { return alive_; }
  std::size_t edge_count() const { return edges_; }
  NodeId next_id() const { return NodeId{static_cast<std::uint32_t>(slots_.size())}; }

  std::vector<NodeId> nodes() const;
  const std::vector<NodeId>& children(NodeId u) const;
  const std::vector<NodeId>& parents(NodeId u) const;
  std::size_t in_degree(NodeId u) const { return parents(u).size(); }
  std::size_t out_degree(NodeId u) const { return children(u).size(); }
  bool is_leaf(NodeId u) const { return children(u).empty(); }
  bool is_reticulation(NodeId u) const { return parents(u).size() >= 2; }

  bool has_label(NodeId u) const;
  const std::string& label(NodeId u) const;
  const std::string& name(NodeId u) const;
  // Label for leaves, stored name for internal nodes, "n<id>" otherwise.
  std::string display_name(NodeId u) const;

  // The unique in-degree-0 node; throws NoRoot/MultipleRoots otherwise.
  NodeId root() const;
  std::vector<NodeId> leaves() const;
  std::vector<NodeId> internal_nodes() const;
  std::size_t internal_count() const;
  std::size_t reticulation_count() const;
  std::vector<std::string> leaf_labels() const;
  std::optional<NodeId> find_leaf(std::string_view label) const;
  std::optional<NodeId> find_by_name(std::string_view name) const;
  std::vector<std::pair<NodeId, NodeId>> edges() const;

 private:
  struct Slot {
    bool alive = false;
    bool labeled = false;
    std::string label;
    std::string name;
    std::vector<NodeId> out;
    std::vector<NodeId> in;
  };
  const Slot& slot(NodeId u) const;
  Slot& slot(NodeId u);

  std::vector<Slot> slots_;
  std::size_t alive_ = 0;
  std::size_t edges_ = 0;
};

// Raw candidate data: node names, edges between names, leaf labels by name.
struct RawNetwork {
  std::vector<std::string> nodes;
  std::vector<std::pair<std::string, std::string>> edges;
  std::map<std::string, std::string> labels;
};

// First violated invariant, if any.
std::optional<Error> find_violation(const Network& n);
void check_valid(const Network& n);
bool is_valid(const Network& n);
Network validate(const RawNetwork& raw);

std::vector<NodeId> topological_order(const Network& n);
bool is_acyclic(const Network& n);
// Longest-path distance from the root for every node (indexed by id value).
std::vector<std::size_t> depths(const Network& n);

LeafUniverse universe_of(const Network& n);
LeafUniverse universe_of(const Network& a, const Network& b);
LeafSet reachable_leaves(const Network& n, NodeId u, const LeafUniverse& universe);
// D(u) for every node, indexed by id value (entries of dead ids are empty).
std::vector<LeafSet> all_reachable_leaves(const Network& n, const LeafUniverse& universe);
bool reaches(const Network& n, NodeId from, NodeId to);
// A directed path from `from` to `to` avoiding the edge (skip_u, skip_v).
std::optional<std::vector<NodeId>> find_path(const Network& n, NodeId from, NodeId to,
                                             std::optional<std::pair<NodeId, NodeId>> skip = {});

// Non-root node with in-degree 1 and out-degree 1.
bool is_degree2(const Network& n, NodeId u);
std::optional<NodeId> find_degree2_node(const Network& n);
bool is_tree(const Network& n);

bool same_leaf_labels(const Network& a, const Network& b);

std::optional<NodeMapping> find_isomorphism(const Network& a, const Network& b);
bool is_isomorphic(const Network& a, const Network& b);

// Contracted network whose internal nodes are the given parts (which must
// partition the internal nodes); part k becomes node id k. Leaves keep their
// labels and get ids after the parts. The result may be cyclic.
Network quotient(const Network& n, const std::vector<std::vector<NodeId>>& parts);

}  // namespace mcc
