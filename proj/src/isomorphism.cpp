#include <algorithm>
#include <map>
#include <tuple>

#include "mcc/galled.hpp"
#include "mcc/network.hpp"

namespace mcc {

namespace {

using Signature = std::tuple<bool, std::string, std::size_t, std::size_t, std::size_t, std::vector<std::uint64_t>>;

// Joint colour refinement over both networks so colours are comparable.
std::pair<std::vector<int>, std::vector<int>> refine(const Network& a, const Network& b) {
  auto universe = universe_of(a, b);
  const Network* nets[2] = {&a, &b};
  std::vector<int> colour[2];
  std::map<Signature, int> initial;
  for (int k = 0; k < 2; ++k) {
    const Network& n = *nets[k];
    auto d = all_reachable_leaves(n, universe);
    auto depth = depths(n);
    colour[k].assign(n.next_id().value, -1);
    for (auto u : n.nodes()) {
      Signature s{n.is_leaf(u), n.is_leaf(u) ? n.label(u) : std::string(), n.in_degree(u), n.out_degree(u),
                  depth[u.value], d[u.value].words()};
      auto it = initial.emplace(std::move(s), static_cast<int>(initial.size())).first;
      colour[k][u.value] = it->second;
    }
  }
  std::size_t classes = initial.size();
  while (true) {
    std::map<std::tuple<int, std::vector<int>, std::vector<int>>, int> next;
    std::vector<int> updated[2];
    for (int k = 0; k < 2; ++k) {
      const Network& n = *nets[k];
      updated[k].assign(n.next_id().value, -1);
      for (auto u : n.nodes()) {
        std::vector<int> cs;
        std::vector<int> ps;
        for (auto v : n.children(u)) cs.push_back(colour[k][v.value]);
        for (auto p : n.parents(u)) ps.push_back(colour[k][p.value]);
        std::sort(cs.begin(), cs.end());
        std::sort(ps.begin(), ps.end());
        auto key = std::make_tuple(colour[k][u.value], std::move(cs), std::move(ps));
        auto it = next.emplace(std::move(key), static_cast<int>(next.size())).first;
        updated[k][u.value] = it->second;
      }
    }
    colour[0] = std::move(updated[0]);
    colour[1] = std::move(updated[1]);
    if (next.size() == classes) break;
    classes = next.size();
  }
  return {std::move(colour[0]), std::move(colour[1])};
}

}  // namespace

std::optional<NodeMapping> find_isomorphism(const Network& a, const Network& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return std::nullopt;
  if (a.leaf_labels() != b.leaf_labels()) return std::nullopt;
  auto [ca, cb] = refine(a, b);
  {
    std::vector<int> xa;
    std::vector<int> xb;
    for (auto u : a.nodes()) xa.push_back(ca[u.value]);
    for (auto u : b.nodes()) xb.push_back(cb[u.value]);
    std::sort(xa.begin(), xa.end());
    std::sort(xb.begin(), xb.end());
    if (xa != xb) return std::nullopt;
  }
  std::map<int, std::vector<NodeId>> by_colour;
  for (auto u : b.nodes()) by_colour[cb[u.value]].push_back(u);

  NodeMapping phi;
  std::vector<bool> used(b.next_id().value, false);
  for (auto leaf : a.leaves()) {
    auto target = *b.find_leaf(a.label(leaf));
    phi[leaf] = target;
    used[target.value] = true;
  }
  std::vector<NodeId> order;
  for (auto u : topological_order(a)) {
    if (!a.is_leaf(u)) order.push_back(u);
  }

  auto consistent = [&](NodeId x, NodeId y) {
    for (auto p : a.parents(x)) {
      auto it = phi.find(p);
      if (it != phi.end() && !b.has_edge(it->second, y)) return false;
    }
    for (auto c : a.children(x)) {
      auto it = phi.find(c);
      if (it != phi.end() && !b.has_edge(y, it->second)) return false;
    }
    return true;
  };

  std::vector<std::size_t> cursor(order.size(), 0);
  std::size_t depth = 0;
  while (true) {
    if (depth == order.size()) return phi;
    NodeId x = order[depth];
    const auto& cands = by_colour[ca[x.value]];
    bool placed = false;
    while (cursor[depth] < cands.size()) {
      NodeId y = cands[cursor[depth]++];
      if (used[y.value] || !consistent(x, y)) continue;
      phi[x] = y;
      used[y.value] = true;
      placed = true;
      break;
    }
    if (placed) {
      ++depth;
      if (depth < order.size()) cursor[depth] = 0;
      continue;
    }
    if (depth == 0) return std::nullopt;
    cursor[depth] = 0;
    --depth;
    NodeId prev = order[depth];
    used[phi[prev].value] = false;
    phi.erase(prev);
  }
}

bool is_isomorphic(const Network& a, const Network& b) {
  if (a.node_count() != b.node_count() || a.edge_count() != b.edge_count()) return false;
  if (a.leaf_labels() != b.leaf_labels()) return false;
  if (is_weakly_galled(a) && is_weakly_galled(b)) return canonical_form(a) == canonical_form(b);
  return find_isomorphism(a, b).has_value();
}

}  // namespace mcc
