#include "mcc/galled.hpp"

#include <algorithm>
#include <functional>

#include "mcc/edit_ops.hpp"

namespace mcc {

namespace {

struct Component {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<NodeId> nodes;
};

std::vector<Component> biconnected_components(const Network& n) {
  const std::size_t size = n.next_id().value;
  auto edge_list = n.edges();
  std::vector<std::vector<std::pair<std::uint32_t, std::size_t>>> adj(size);
  for (std::size_t e = 0; e < edge_list.size(); ++e) {
    auto [u, v] = edge_list[e];
    adj[u.value].emplace_back(v.value, e);
    adj[v.value].emplace_back(u.value, e);
  }
  constexpr std::size_t none = static_cast<std::size_t>(-1);
  std::vector<std::int64_t> disc(size, -1);
  std::vector<std::int64_t> low(size, 0);
  std::vector<std::size_t> edge_stack;
  std::vector<Component> out;
  std::int64_t timer = 0;

  struct Frame {
    std::uint32_t node;
    std::size_t next;
    std::size_t parent_edge;
  };

  auto pop_component = [&](std::size_t until) {
    Component c;
    std::vector<NodeId> nodes;
    while (true) {
      auto e = edge_stack.back();
      edge_stack.pop_back();
      c.edges.push_back(edge_list[e]);
      nodes.push_back(edge_list[e].first);
      nodes.push_back(edge_list[e].second);
      if (e == until) break;
    }
    std::sort(nodes.begin(), nodes.end());
    nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
    c.nodes = std::move(nodes);
    out.push_back(std::move(c));
  };

  for (auto s : n.nodes()) {
    if (disc[s.value] >= 0) continue;
    disc[s.value] = low[s.value] = timer++;
    std::vector<Frame> stack{{s.value, 0, none}};
    while (!stack.empty()) {
      auto& top = stack.back();
      auto u = top.node;
      if (top.next < adj[u].size()) {
        auto [v, e] = adj[u][top.next++];
        if (e == top.parent_edge) continue;
        if (disc[v] < 0) {
          edge_stack.push_back(e);
          disc[v] = low[v] = timer++;
          stack.push_back({v, 0, e});
        } else if (disc[v] < disc[u]) {
          edge_stack.push_back(e);
          low[u] = std::min(low[u], disc[v]);
        }
      } else {
        auto pe = top.parent_edge;
        stack.pop_back();
        if (stack.empty()) break;
        auto p = stack.back().node;
        low[p] = std::min(low[p], low[u]);
        if (low[u] >= disc[p]) pop_component(pe);
      }
    }
  }
  return out;
}

// Builds the cycle of a single-cycle component, or nothing if the component
// is not a reticulation cycle.
std::optional<ReticulationCycle> cycle_from_component(const Component& c) {
  std::map<NodeId, std::vector<NodeId>> out;
  std::map<NodeId, int> in;
  for (auto [u, v] : c.edges) {
    out[u].push_back(v);
    in[v] += 1;
  }
  std::optional<NodeId> root;
  std::optional<NodeId> ret;
  for (auto u : c.nodes) {
    auto outs = out.count(u) != 0 ? out[u].size() : 0;
    auto ins = in.count(u) != 0 ? static_cast<std::size_t>(in[u]) : 0;
    if (outs == 2 && ins == 0) {
      if (root) return std::nullopt;
      root = u;
    } else if (ins == 2 && outs == 0) {
      if (ret) return std::nullopt;
      ret = u;
    } else if (!(ins == 1 && outs == 1)) {
      return std::nullopt;
    }
  }
  if (!root || !ret) return std::nullopt;
  ReticulationCycle cyc{*root, *ret, {}, {}};
  std::vector<NodeId>* sides[2] = {&cyc.side_a, &cyc.side_b};
  for (int k = 0; k < 2; ++k) {
    NodeId cur = out[*root][k];
    while (cur != *ret) {
      sides[k]->push_back(cur);
      cur = out[cur].front();
    }
  }
  return cyc;
}

}  // namespace

std::vector<NodeId> ReticulationCycle::order() const {
  std::vector<NodeId> o{root};
  o.insert(o.end(), side_a.begin(), side_a.end());
  o.push_back(reticulation);
  o.insert(o.end(), side_b.rbegin(), side_b.rend());
  return o;
}

bool is_weakly_galled(const Network& n) {
  for (auto u : n.nodes()) {
    if (n.in_degree(u) > 2) return false;
  }
  for (const auto& c : biconnected_components(n)) {
    if (c.edges.size() == 1) continue;
    if (c.edges.size() != c.nodes.size()) return false;
    if (!cycle_from_component(c)) return false;
  }
  return true;
}

std::vector<ReticulationCycle> cycles(const Network& n) {
  if (!is_weakly_galled(n)) throw Error(ErrorCode::NotWeaklyGalled, "network is not a weakly galled tree");
  auto universe = universe_of(n);
  auto d = all_reachable_leaves(n, universe);
  std::vector<ReticulationCycle> out;
  for (const auto& c : biconnected_components(n)) {
    if (c.edges.size() == 1) continue;
    auto cyc = *cycle_from_component(c);
    auto first = [&](const std::vector<NodeId>& side) { return side.empty() ? cyc.reticulation : side.front(); };
    NodeId fa = first(cyc.side_a);
    NodeId fb = first(cyc.side_b);
    const auto& da = d[fa.value];
    const auto& db = d[fb.value];
    bool swap = (db < da) || (!(da < db) && fb < fa);
    if (swap) std::swap(cyc.side_a, cyc.side_b);
    out.push_back(std::move(cyc));
  }
  std::sort(out.begin(), out.end(),
            [](const ReticulationCycle& a, const ReticulationCycle& b) { return a.reticulation < b.reticulation; });
  return out;
}

int CycleMap::cycle_of_edge(NodeId u, NodeId v) const {
  auto it = edge_cycle.find({u.value, v.value});
  return it == edge_cycle.end() ? -1 : it->second;
}

CycleMap cycle_map(const Network& n) {
  CycleMap m;
  m.cycles = cycles(n);
  m.internal_of.assign(n.next_id().value, -1);
  m.rooted_at.assign(n.next_id().value, {});
  for (std::size_t k = 0; k < m.cycles.size(); ++k) {
    const auto& c = m.cycles[k];
    int id = static_cast<int>(k);
    m.rooted_at[c.root.value].push_back(id);
    for (const auto* side : {&c.side_a, &c.side_b}) {
      NodeId prev = c.root;
      for (auto x : *side) {
        m.internal_of[x.value] = id;
        m.edge_cycle[{prev.value, x.value}] = id;
        prev = x;
      }
      m.edge_cycle[{prev.value, c.reticulation.value}] = id;
    }
  }
  return m;
}

bool CladeIndex::unicity_holds() const {
  for (const auto& [s, nodes] : one) {
    if (nodes.size() > 2) return false;
  }
  for (const auto& [s, pairs] : two) {
    if (pairs.size() > 1) return false;
  }
  return true;
}

CladeIndex clade_index(const Network& n, const LeafUniverse& universe) {
  auto cm = cycle_map(n);
  auto d = all_reachable_leaves(n, universe);
  CladeIndex idx;
  for (auto u : n.internal_nodes()) {
    if (!cm.is_cycle_internal(u)) idx.one[d[u.value]].push_back(u);
  }
  for (const auto& c : cm.cycles) {
    auto add = [&](NodeId x, NodeId y) { idx.two[d[x.value] | d[y.value]].emplace_back(x, y); };
    for (auto x : c.side_a) {
      for (auto y : c.side_b) add(x, y);
    }
    for (auto x : c.side_a) add(x, c.reticulation);
    for (auto y : c.side_b) add(y, c.reticulation);
  }
  return idx;
}

std::vector<CladeEntry> one_clades(const Network& n, const LeafUniverse& universe) {
  auto idx = clade_index(n, universe);
  std::vector<CladeEntry> out;
  for (auto& [s, nodes] : idx.one) out.push_back({s, nodes, {}});
  std::sort(out.begin(), out.end(), [](const CladeEntry& a, const CladeEntry& b) { return a.leaves < b.leaves; });
  return out;
}

std::vector<CladeEntry> two_clades(const Network& n, const LeafUniverse& universe) {
  auto idx = clade_index(n, universe);
  std::vector<CladeEntry> out;
  for (auto& [s, pairs] : idx.two) out.push_back({s, {}, pairs});
  std::sort(out.begin(), out.end(), [](const CladeEntry& a, const CladeEntry& b) { return a.leaves < b.leaves; });
  return out;
}

namespace {

// One rule contraction on `cur` against `other`, or nothing.
std::optional<RuleStep> find_rule(const Network& cur, const Network& other, const LeafUniverse& universe, int rule) {
  auto cm = cycle_map(cur);
  auto d = all_reachable_leaves(cur, universe);
  auto idx = clade_index(other, universe);
  auto r = cur.root();
  for (auto u : cur.children(r)) {
    if (cur.is_leaf(u) || cur.is_reticulation(u)) continue;
    if (rule == 1) {
      if (cm.is_cycle_internal(u)) continue;
      if (!idx.contains(d[u.value])) return RuleStep{0, 1, u};
    } else {
      if (!cm.is_cycle_internal(u)) continue;
      const auto& c = cm.cycles[static_cast<std::size_t>(cm.internal_of[u.value])];
      bool on_a = std::find(c.side_a.begin(), c.side_a.end(), u) != c.side_a.end();
      std::vector<NodeId> partners = on_a ? c.side_b : c.side_a;
      partners.push_back(c.reticulation);
      bool all_absent = std::all_of(partners.begin(), partners.end(),
                                    [&](NodeId y) { return !idx.contains(d[u.value] | d[y.value]); });
      if (all_absent) return RuleStep{0, 2, u};
    }
  }
  return std::nullopt;
}

}  // namespace

RuleResult apply_rules(const Network& n1, const Network& n2) {
  if (!is_weakly_galled(n1) || !is_weakly_galled(n2)) {
    throw Error(ErrorCode::NotWeaklyGalled, "rules need weakly galled trees");
  }
  if (n1.leaf_labels() != n2.leaf_labels()) throw Error(ErrorCode::LeafSetMismatch, "networks have different leaf sets");
  auto universe = universe_of(n1);
  RuleResult res{n1, n2, 0, {}};
  while (true) {
    std::optional<RuleStep> step;
    for (int net = 1; net <= 2 && !step; ++net) {
      const Network& cur = net == 1 ? res.n1 : res.n2;
      const Network& other = net == 1 ? res.n2 : res.n1;
      for (int rule = 1; rule <= 2 && !step; ++rule) {
        step = find_rule(cur, other, universe, rule);
        if (step) step->network = net;
      }
    }
    if (!step) break;
    Network& target = step->network == 1 ? res.n1 : res.n2;
    target = contract_admissible(target, target.root(), step->child);
    res.steps.push_back(*step);
    ++res.count;
  }
  return res;
}

std::string canonical_form(const Network& n) {
  auto cm = cycle_map(n);
  std::function<std::string(NodeId)> enc;
  auto side_enc = [&](const std::vector<NodeId>& side) {
    std::string s;
    for (auto x : side) s += "<" + enc(x) + ">";
    return s;
  };
  enc = [&](NodeId u) -> std::string {
    if (n.is_leaf(u)) {
      const auto& l = n.label(u);
      return "L" + std::to_string(l.size()) + ":" + l;
    }
    std::vector<std::string> items;
    for (auto c : n.children(u)) {
      if (cm.cycle_of_edge(u, c) >= 0) continue;
      items.push_back(enc(c));
    }
    for (int k : cm.rooted_at[u.value]) {
      const auto& c = cm.cycles[static_cast<std::size_t>(k)];
      auto a = side_enc(c.side_a);
      auto b = side_enc(c.side_b);
      if (b < a) std::swap(a, b);
      items.push_back("C{" + a + "|" + b + "}" + enc(c.reticulation));
    }
    std::sort(items.begin(), items.end());
    std::string s = "(";
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (i > 0) s += ",";
      s += items[i];
    }
    return s + ")";
  };
  return enc(n.root());
}

}  // namespace mcc
