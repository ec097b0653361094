#include "mcc/network.hpp"

#include <algorithm>
#include <queue>
#include <set>

namespace mcc {

namespace {

void sorted_insert(std::vector<NodeId>& v, NodeId x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) v.insert(it, x);
}

bool sorted_erase(std::vector<NodeId>& v, NodeId x) {
  auto it = std::lower_bound(v.begin(), v.end(), x);
  if (it == v.end() || *it != x) return false;
  v.erase(it);
  return true;
}

std::string id_text(NodeId u) { return "n" + std::to_string(u.value); }

}  // namespace

const Network::Slot& Network::slot(NodeId u) const {
  if (u.value >= slots_.size() || !slots_[u.value].alive) {
    throw Error(ErrorCode::UnknownNode, "unknown node " + id_text(u));
  }
  return slots_[u.value];
}

Network::Slot& Network::slot(NodeId u) {
  if (u.value >= slots_.size() || !slots_[u.value].alive) {
    throw Error(ErrorCode::UnknownNode, "unknown node " + id_text(u));
  }
  return slots_[u.value];
}

NodeId Network::add_node(std::string name) {
  NodeId id{static_cast<std::uint32_t>(slots_.size())};
  slots_.emplace_back();
  slots_.back().alive = true;
  slots_.back().name = std::move(name);
  ++alive_;
  return id;
}

NodeId Network::add_node_with_id(NodeId id, std::string name) {
  if (id.value < slots_.size()) {
    throw Error(ErrorCode::InvalidParameters, "node id " + id_text(id) + " is not fresh");
  }
  slots_.resize(id.value + 1);
  slots_[id.value].alive = true;
  slots_[id.value].name = std::move(name);
  ++alive_;
  return id;
}

void Network::add_edge(NodeId u, NodeId v) {
  auto& su = slot(u);
  auto& sv = slot(v);
  auto before = su.out.size();
  sorted_insert(su.out, v);
  if (su.out.size() != before) {
    sorted_insert(sv.in, u);
    ++edges_;
  }
}

bool Network::remove_edge(NodeId u, NodeId v) {
  if (!sorted_erase(slot(u).out, v)) return false;
  sorted_erase(slot(v).in, u);
  --edges_;
  return true;
}

void Network::remove_node(NodeId u) {
  auto& s = slot(u);
  for (auto v : std::vector<NodeId>(s.out)) remove_edge(u, v);
  for (auto p : std::vector<NodeId>(s.in)) remove_edge(p, u);
  s = Slot{};
  --alive_;
}

void Network::set_label(NodeId u, std::string label) {
  auto& s = slot(u);
  s.labeled = true;
  s.label = std::move(label);
}

void Network::clear_label(NodeId u) {
  auto& s = slot(u);
  s.labeled = false;
  s.label.clear();
}

void Network::set_name(NodeId u, std::string name) { slot(u).name = std::move(name); }

bool Network::contains(NodeId u) const { return u.value < slots_.size() && slots_[u.value].alive; }

bool Network::has_edge(NodeId u, NodeId v) const {
  if (!contains(u) || !contains(v)) return false;
  const auto& out = slots_[u.value].out;
  return std::binary_search(out.begin(), out.end(), v);
}

std::vector<NodeId> Network::nodes() const {
  std::vector<NodeId> out;
  out.reserve(alive_);
  for (std::uint32_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].alive) out.push_back(NodeId{i});
  }
  return out;
}

const std::vector<NodeId>& Network::children(NodeId u) const { return slot(u).out; }
const std::vector<NodeId>& Network::parents(NodeId u) const { return slot(u).in; }
bool Network::has_label(NodeId u) const { return slot(u).labeled; }
const std::string& Network::label(NodeId u) const { return slot(u).label; }
const std::string& Network::name(NodeId u) const { return slot(u).name; }

std::string Network::display_name(NodeId u) const {
  const auto& s = slot(u);
  if (s.out.empty() && s.labeled) return s.label;
  if (!s.name.empty()) return s.name;
  return id_text(u);
}

NodeId Network::root() const {
  std::optional<NodeId> found;
  for (std::uint32_t i = 0; i < slots_.size(); ++i) {
    if (!slots_[i].alive || !slots_[i].in.empty()) continue;
    if (found) throw Error(ErrorCode::MultipleRoots, "more than one node has in-degree 0");
    found = NodeId{i};
  }
  if (!found) throw Error(ErrorCode::NoRoot, "no node has in-degree 0");
  return *found;
}

std::vector<NodeId> Network::leaves() const {
  std::vector<NodeId> out;
  for (auto u : nodes()) {
    if (is_leaf(u)) out.push_back(u);
  }
  return out;
}

std::vector<NodeId> Network::internal_nodes() const {
  std::vector<NodeId> out;
  for (auto u : nodes()) {
    if (!is_leaf(u)) out.push_back(u);
  }
  return out;
}

std::size_t Network::internal_count() const {
  std::size_t c = 0;
  for (const auto& s : slots_) c += (s.alive && !s.out.empty()) ? 1 : 0;
  return c;
}

std::size_t Network::reticulation_count() const {
  std::size_t c = 0;
  for (const auto& s : slots_) c += (s.alive && s.in.size() >= 2) ? 1 : 0;
  return c;
}

std::vector<std::string> Network::leaf_labels() const {
  std::vector<std::string> out;
  for (const auto& s : slots_) {
    if (s.alive && s.out.empty() && s.labeled) out.push_back(s.label);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::optional<NodeId> Network::find_leaf(std::string_view label) const {
  for (std::uint32_t i = 0; i < slots_.size(); ++i) {
    const auto& s = slots_[i];
    if (s.alive && s.out.empty() && s.labeled && s.label == label) return NodeId{i};
  }
  return std::nullopt;
}

std::optional<NodeId> Network::find_by_name(std::string_view name) const {
  for (std::uint32_t i = 0; i < slots_.size(); ++i) {
    const auto& s = slots_[i];
    if (s.alive && !s.out.empty() && s.name == name) return NodeId{i};
  }
  return std::nullopt;
}

std::vector<std::pair<NodeId, NodeId>> Network::edges() const {
  std::vector<std::pair<NodeId, NodeId>> out;
  out.reserve(edges_);
  for (auto u : nodes()) {
    for (auto v : children(u)) out.emplace_back(u, v);
  }
  return out;
}

std::vector<NodeId> topological_order(const Network& n) {
  std::vector<std::size_t> indeg(n.next_id().value, 0);
  std::priority_queue<NodeId, std::vector<NodeId>, std::greater<>> ready;
  for (auto u : n.nodes()) {
    indeg[u.value] = n.in_degree(u);
    if (indeg[u.value] == 0) ready.push(u);
  }
  std::vector<NodeId> order;
  order.reserve(n.node_count());
  while (!ready.empty()) {
    auto u = ready.top();
    ready.pop();
    order.push_back(u);
    for (auto v : n.children(u)) {
      if (--indeg[v.value] == 0) ready.push(v);
    }
  }
  return order;
}

bool is_acyclic(const Network& n) { return topological_order(n).size() == n.node_count(); }

std::optional<Error> find_violation(const Network& n) {
  for (auto u : n.nodes()) {
    if (n.has_edge(u, u)) return Error(ErrorCode::SelfLoop, "self-loop at " + n.display_name(u));
  }
  if (!is_acyclic(n)) return Error(ErrorCode::CyclicGraph, "graph contains a directed cycle");
  std::size_t roots = 0;
  for (auto u : n.nodes()) roots += n.in_degree(u) == 0 ? 1 : 0;
  if (roots == 0) return Error(ErrorCode::NoRoot, "no node has in-degree 0");
  if (roots > 1) return Error(ErrorCode::MultipleRoots, "more than one node has in-degree 0");
  std::set<std::string> seen;
  for (auto u : n.nodes()) {
    if (!n.is_leaf(u)) continue;
    if (n.in_degree(u) != 1) {
      return Error(ErrorCode::LeafWithInDegreeNot1,
                   "leaf " + n.display_name(u) + " has in-degree " + std::to_string(n.in_degree(u)));
    }
    if (!n.has_label(u)) {
      return Error(ErrorCode::UnlabeledLeaf, "leaf " + n.display_name(u) + " has no label");
    }
    if (!seen.insert(n.label(u)).second) {
      return Error(ErrorCode::DuplicateLabel, "duplicate leaf label '" + n.label(u) + "'");
    }
  }
  return std::nullopt;
}

void check_valid(const Network& n) {
  if (auto e = find_violation(n)) throw *e;
}

bool is_valid(const Network& n) { return !find_violation(n).has_value(); }

Network validate(const RawNetwork& raw) {
  Network n;
  std::map<std::string, NodeId> ids;
  auto intern = [&](const std::string& name) {
    auto it = ids.find(name);
    if (it != ids.end()) return it->second;
    auto id = n.add_node(name);
    ids.emplace(name, id);
    return id;
  };
  for (const auto& name : raw.nodes) intern(name);
  for (const auto& [u, v] : raw.edges) {
    auto a = intern(u);
    auto b = intern(v);
    if (a == b) throw Error(ErrorCode::SelfLoop, "self-loop at " + u);
    n.add_edge(a, b);
  }
  for (const auto& [name, label] : raw.labels) {
    auto id = intern(name);
    if (n.is_leaf(id)) n.set_label(id, label);
  }
  check_valid(n);
  return n;
}

std::vector<std::size_t> depths(const Network& n) {
  std::vector<std::size_t> d(n.next_id().value, 0);
  for (auto u : topological_order(n)) {
    for (auto v : n.children(u)) d[v.value] = std::max(d[v.value], d[u.value] + 1);
  }
  return d;
}

LeafUniverse universe_of(const Network& n) { return LeafUniverse(n.leaf_labels()); }

LeafUniverse universe_of(const Network& a, const Network& b) {
  auto labels = a.leaf_labels();
  auto more = b.leaf_labels();
  labels.insert(labels.end(), more.begin(), more.end());
  return LeafUniverse(std::move(labels));
}

std::vector<LeafSet> all_reachable_leaves(const Network& n, const LeafUniverse& universe) {
  std::vector<LeafSet> d(n.next_id().value, universe.empty_set());
  auto order = topological_order(n);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    auto u = *it;
    if (n.is_leaf(u)) {
      if (n.has_label(u)) {
        if (auto i = universe.index_of(n.label(u))) d[u.value].insert(*i);
      }
      continue;
    }
    for (auto v : n.children(u)) d[u.value] |= d[v.value];
  }
  return d;
}

LeafSet reachable_leaves(const Network& n, NodeId u, const LeafUniverse& universe) {
  if (!n.contains(u)) throw Error(ErrorCode::UnknownNode, "unknown node n" + std::to_string(u.value));
  LeafSet out = universe.empty_set();
  std::vector<bool> seen(n.next_id().value, false);
  std::vector<NodeId> stack{u};
  seen[u.value] = true;
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    if (n.is_leaf(x) && n.has_label(x)) {
      if (auto i = universe.index_of(n.label(x))) out.insert(*i);
    }
    for (auto y : n.children(x)) {
      if (!seen[y.value]) {
        seen[y.value] = true;
        stack.push_back(y);
      }
    }
  }
  return out;
}

std::optional<std::vector<NodeId>> find_path(const Network& n, NodeId from, NodeId to,
                                             std::optional<std::pair<NodeId, NodeId>> skip) {
  std::vector<std::int64_t> pred(n.next_id().value, -1);
  std::vector<bool> seen(n.next_id().value, false);
  std::queue<NodeId> q;
  q.push(from);
  seen[from.value] = true;
  while (!q.empty()) {
    auto x = q.front();
    q.pop();
    if (x == to) {
      std::vector<NodeId> path{to};
      while (path.back() != from) path.push_back(NodeId{static_cast<std::uint32_t>(pred[path.back().value])});
      std::reverse(path.begin(), path.end());
      return path;
    }
    for (auto y : n.children(x)) {
      if (skip && skip->first == x && skip->second == y) continue;
      if (seen[y.value]) continue;
      seen[y.value] = true;
      pred[y.value] = x.value;
      q.push(y);
    }
  }
  return std::nullopt;
}

bool reaches(const Network& n, NodeId from, NodeId to) { return find_path(n, from, to).has_value(); }

bool is_degree2(const Network& n, NodeId u) { return n.in_degree(u) == 1 && n.out_degree(u) == 1; }

std::optional<NodeId> find_degree2_node(const Network& n) {
  for (auto u : n.nodes()) {
    if (is_degree2(n, u)) return u;
  }
  return std::nullopt;
}

bool is_tree(const Network& n) { return n.reticulation_count() == 0; }

bool same_leaf_labels(const Network& a, const Network& b) { return a.leaf_labels() == b.leaf_labels(); }

Network quotient(const Network& n, const std::vector<std::vector<NodeId>>& parts) {
  Network q;
  std::vector<std::int64_t> part_of(n.next_id().value, -1);
  for (std::size_t k = 0; k < parts.size(); ++k) {
    q.add_node();
    for (auto u : parts[k]) part_of[u.value] = static_cast<std::int64_t>(k);
  }
  std::vector<NodeId> leaf_id(n.next_id().value);
  for (auto u : n.nodes()) {
    if (!n.is_leaf(u)) {
      if (part_of[u.value] < 0) throw Error(ErrorCode::InvalidWitness, "node " + n.display_name(u) + " is in no part");
      continue;
    }
    leaf_id[u.value] = q.add_node();
    if (n.has_label(u)) q.set_label(leaf_id[u.value], n.label(u));
  }
  auto image = [&](NodeId u) {
    return n.is_leaf(u) ? leaf_id[u.value] : NodeId{static_cast<std::uint32_t>(part_of[u.value])};
  };
  for (auto [u, v] : n.edges()) {
    auto a = image(u);
    auto b = image(v);
    if (a != b) q.add_edge(a, b);
  }
  return q;
}

}  // namespace mcc
