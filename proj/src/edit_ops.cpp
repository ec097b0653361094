#include "mcc/edit_ops.hpp"

#include <algorithm>
#include <numeric>
#include <set>

namespace mcc {

namespace {

std::string node_text(const Network& n, NodeId u) {
  return n.contains(u) ? n.display_name(u) : "n" + std::to_string(u.value);
}

std::string path_text(const Network& n, const std::vector<NodeId>& path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i > 0) out += " -> ";
    out += node_text(n, path[i]);
  }
  return out;
}

std::vector<NodeId> sorted_unique(std::vector<NodeId> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

bool weakly_connected(const Network& n, const std::vector<NodeId>& part) {
  if (part.empty()) return false;
  std::set<NodeId> members(part.begin(), part.end());
  std::set<NodeId> seen{part.front()};
  std::vector<NodeId> stack{part.front()};
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    auto visit = [&](NodeId y) {
      if (members.count(y) != 0 && seen.insert(y).second) stack.push_back(y);
    };
    for (auto y : n.children(x)) visit(y);
    for (auto y : n.parents(x)) visit(y);
  }
  return seen.size() == members.size();
}

}  // namespace

Network contract(const Network& n, const Contraction& c) {
  if (!n.has_edge(c.u, c.v)) {
    throw Error(ErrorCode::NotAnEdge, node_text(n, c.u) + " -> " + node_text(n, c.v) + " is not an edge");
  }
  Network out = n;
  auto in_w = sorted_unique([&] {
    std::vector<NodeId> v = n.parents(c.u);
    for (auto p : n.parents(c.v)) {
      if (p != c.u) v.push_back(p);
    }
    return v;
  }());
  auto out_w = sorted_unique([&] {
    std::vector<NodeId> v;
    for (auto x : n.children(c.u)) {
      if (x != c.v) v.push_back(x);
    }
    for (auto x : n.children(c.v)) v.push_back(x);
    return v;
  }());
  out.remove_node(c.u);
  out.remove_node(c.v);
  auto w = out.add_node_with_id(c.w);
  for (auto p : in_w) out.add_edge(p, w);
  for (auto x : out_w) out.add_edge(w, x);
  return out;
}

Network contract(const Network& n, NodeId u, NodeId v) { return contract(n, Contraction{u, v, n.next_id()}); }

bool is_admissible(const Network& n, NodeId u, NodeId v) {
  if (!n.has_edge(u, v)) {
    throw Error(ErrorCode::NotAnEdge, node_text(n, u) + " -> " + node_text(n, v) + " is not an edge");
  }
  if (n.is_leaf(v)) return false;
  return !find_path(n, u, v, std::make_pair(u, v)).has_value();
}

Network contract_admissible(const Network& n, const Contraction& c) {
  if (!n.has_edge(c.u, c.v)) {
    throw Error(ErrorCode::NotAnEdge, node_text(n, c.u) + " -> " + node_text(n, c.v) + " is not an edge");
  }
  if (n.is_leaf(c.v)) {
    throw Error(ErrorCode::InadmissibleContraction, "contraction would absorb leaf " + n.display_name(c.v));
  }
  if (auto path = find_path(n, c.u, c.v, std::make_pair(c.u, c.v))) {
    throw Error(ErrorCode::InadmissibleContraction, "alternative path " + path_text(n, *path));
  }
  return contract(n, c);
}

Network contract_admissible(const Network& n, NodeId u, NodeId v) {
  return contract_admissible(n, Contraction{u, v, n.next_id()});
}

Network expand(const Network& n, const Expansion& e) {
  if (!n.contains(e.u) || n.is_leaf(e.u)) {
    throw Error(ErrorCode::InadmissibleExpansion, "only internal nodes can be expanded");
  }
  if (e.v == e.w || e.v < n.next_id() || e.w < n.next_id()) {
    throw Error(ErrorCode::InadmissibleExpansion, "expansion needs two distinct fresh ids");
  }
  auto check_classes = [&](const std::vector<NodeId>& actual, std::initializer_list<const std::vector<NodeId>*> classes,
                           const char* what) {
    std::vector<NodeId> all;
    for (const auto* c : classes) all.insert(all.end(), c->begin(), c->end());
    auto total = all.size();
    all = sorted_unique(all);
    if (all.size() != total || all != sorted_unique(actual)) {
      throw Error(ErrorCode::InadmissibleExpansion, std::string(what) + " classes do not partition the neighbours");
    }
  };
  check_classes(n.parents(e.u), {&e.x_in, &e.y_in, &e.z_in}, "in-neighbour");
  check_classes(n.children(e.u), {&e.x_out, &e.y_out, &e.z_out}, "out-neighbour");

  Network out = n;
  out.remove_node(e.u);
  NodeId first = std::min(e.v, e.w);
  NodeId second = std::max(e.v, e.w);
  out.add_node_with_id(first);
  out.add_node_with_id(second);
  for (auto p : e.x_in) out.add_edge(p, e.v);
  for (auto p : e.y_in) out.add_edge(p, e.w);
  for (auto p : e.z_in) {
    out.add_edge(p, e.v);
    out.add_edge(p, e.w);
  }
  out.add_edge(e.v, e.w);
  for (auto x : e.x_out) out.add_edge(e.v, x);
  for (auto x : e.y_out) out.add_edge(e.w, x);
  for (auto x : e.z_out) {
    out.add_edge(e.v, x);
    out.add_edge(e.w, x);
  }
  if (auto err = find_violation(out)) {
    throw Error(ErrorCode::InadmissibleExpansion, std::string("result is not a network: ") + err->what());
  }
  if (out.leaf_labels() != n.leaf_labels()) {
    throw Error(ErrorCode::InadmissibleExpansion, "expansion changes the leaf set");
  }
  return out;
}

Expansion reversing_expansion(const Network& before, const Contraction& c, NodeId fresh_v, NodeId fresh_w) {
  auto has = [](const std::vector<NodeId>& v, NodeId x) { return std::binary_search(v.begin(), v.end(), x); };
  const auto& in_u = before.parents(c.u);
  const auto& in_v = before.parents(c.v);
  const auto& out_u = before.children(c.u);
  const auto& out_v = before.children(c.v);
  Expansion e{c.w, fresh_v, fresh_w, {}, {}, {}, {}, {}, {}};
  for (auto p : in_u) (has(in_v, p) ? e.z_in : e.x_in).push_back(p);
  for (auto p : in_v) {
    if (p != c.u && !has(in_u, p)) e.y_in.push_back(p);
  }
  for (auto x : out_u) {
    if (x == c.v) continue;
    (has(out_v, x) ? e.z_out : e.x_out).push_back(x);
  }
  for (auto x : out_v) {
    if (!has(out_u, x)) e.y_out.push_back(x);
  }
  return e;
}

Network apply_step(const Network& n, const EditStep& step) {
  if (const auto* c = std::get_if<Contraction>(&step)) return contract_admissible(n, *c);
  return expand(n, std::get<Expansion>(step));
}

Network replay(const Network& n, const EditSequence& seq) {
  Network cur = n;
  for (const auto& step : seq) cur = apply_step(cur, step);
  return cur;
}

Network star_network(const std::vector<std::string>& labels) {
  Network n;
  auto r = n.add_node();
  for (const auto& l : labels) {
    auto x = n.add_node();
    n.set_label(x, l);
    n.add_edge(r, x);
  }
  return n;
}

bool is_star(const Network& n) { return n.internal_count() == 1; }

EditSequence contract_to_star(const Network& n) {
  EditSequence seq;
  Network cur = n;
  while (cur.internal_count() > 1) {
    auto r = cur.root();
    std::optional<NodeId> target;
    for (auto x : topological_order(cur)) {
      if (!cur.is_leaf(x) && cur.has_edge(r, x)) {
        target = x;
        break;
      }
    }
    Contraction c{r, *target, cur.next_id()};
    cur = contract_admissible(cur, c);
    seq.emplace_back(c);
  }
  return seq;
}

EditSequence connect(const Network& n1, const Network& n2) {
  if (n1.leaf_labels() != n2.leaf_labels()) {
    throw Error(ErrorCode::LeafSetMismatch, "networks have different leaf sets");
  }
  EditSequence seq = contract_to_star(n1);
  Network cur = replay(n1, seq);

  EditSequence down = contract_to_star(n2);
  std::vector<Network> stages{n2};
  for (const auto& step : down) stages.push_back(apply_step(stages.back(), step));

  // Maps ids of the current n2 stage onto ids of `cur`.
  NodeMapping phi;
  const Network& star2 = stages.back();
  phi[star2.root()] = cur.root();
  for (auto leaf : star2.leaves()) phi[leaf] = *cur.find_leaf(star2.label(leaf));

  for (std::size_t i = down.size(); i-- > 0;) {
    const auto& c = std::get<Contraction>(down[i]);
    const Network& before = stages[i];
    NodeId fresh_v = cur.next_id();
    NodeId fresh_w{fresh_v.value + 1};
    Expansion e = reversing_expansion(before, c, fresh_v, fresh_w);
    auto map_all = [&](std::vector<NodeId>& v) {
      for (auto& x : v) x = phi.at(x);
    };
    e.u = phi.at(c.w);
    map_all(e.x_in);
    map_all(e.y_in);
    map_all(e.z_in);
    map_all(e.x_out);
    map_all(e.y_out);
    map_all(e.z_out);
    cur = expand(cur, e);
    seq.emplace_back(e);
    phi.erase(c.w);
    phi[c.u] = fresh_v;
    phi[c.v] = fresh_w;
  }
  return seq;
}

WitnessCheck validate_witness(const Network& n, const Network& m, const WitnessStructure& w) {
  auto internal_m = m.internal_nodes();
  std::vector<NodeId> keys;
  for (const auto& [k, part] : w.parts) keys.push_back(k);
  if (keys != internal_m) {
    throw Error(ErrorCode::KeyMismatch, "witness keys differ from the internal nodes of the target");
  }
  auto fail = [](std::string why) { return WitnessCheck{false, std::move(why)}; };
  if (n.leaf_labels() != m.leaf_labels()) return fail("leaf sets differ");

  std::vector<std::int64_t> owner(n.next_id().value, -1);
  std::size_t covered = 0;
  for (const auto& [k, part] : w.parts) {
    if (part.empty()) return fail("part of " + m.display_name(k) + " is empty");
    for (auto x : part) {
      if (!n.contains(x) || n.is_leaf(x)) return fail("part of " + m.display_name(k) + " holds a non-internal node");
      if (owner[x.value] >= 0) return fail(n.display_name(x) + " lies in two parts");
      owner[x.value] = k.value;
      ++covered;
    }
    if (!weakly_connected(n, part)) return fail("part of " + m.display_name(k) + " is not weakly connected");
  }
  if (covered != n.internal_count()) return fail("parts do not cover every internal node");

  std::set<std::pair<std::uint32_t, std::uint32_t>> realized;
  for (auto [x, y] : n.edges()) {
    if (n.is_leaf(y)) continue;
    auto a = static_cast<std::uint32_t>(owner[x.value]);
    auto b = static_cast<std::uint32_t>(owner[y.value]);
    if (a == b) continue;
    if (!m.has_edge(NodeId{a}, NodeId{b})) {
      return fail("edge " + n.display_name(x) + " -> " + n.display_name(y) + " has no counterpart in the target");
    }
    realized.emplace(a, b);
  }
  for (auto [a, b] : m.edges()) {
    if (m.is_leaf(b)) continue;
    if (realized.count({a.value, b.value}) == 0) {
      return fail("target edge " + m.display_name(a) + " -> " + m.display_name(b) + " is not realized");
    }
  }
  for (auto leaf : n.leaves()) {
    auto target_leaf = m.find_leaf(n.label(leaf));
    auto parent_n = n.parents(leaf).front();
    auto parent_m = m.parents(*target_leaf).front();
    if (owner[parent_n.value] != static_cast<std::int64_t>(parent_m.value)) {
      return fail("parent of leaf " + n.label(leaf) + " is not in the part of its target parent");
    }
  }
  return {};
}

EditSequence witness_to_sequence(const Network& n, const Network& m, const WitnessStructure& w) {
  if (auto check = validate_witness(n, m, w); !check) {
    throw Error(ErrorCode::InvalidWitness, check.violation);
  }
  EditSequence seq;
  Network cur = n;
  for (const auto& [key, original] : w.parts) {
    std::set<NodeId> part(original.begin(), original.end());
    while (part.size() > 1) {
      auto order = topological_order(cur);
      std::vector<std::size_t> pos(cur.next_id().value, 0);
      for (std::size_t i = 0; i < order.size(); ++i) pos[order[i].value] = i;
      NodeId first = *std::min_element(part.begin(), part.end(),
                                       [&](NodeId a, NodeId b) { return pos[a.value] < pos[b.value]; });
      std::optional<NodeId> next;
      for (auto y : cur.children(first)) {
        if (part.count(y) != 0 && (!next || pos[y.value] < pos[next->value])) next = y;
      }
      if (!next) throw Error(ErrorCode::InvalidWitness, "part is not contractible from its first node");
      Contraction c{first, *next, cur.next_id()};
      if (!is_admissible(cur, c.u, c.v)) {
        throw Error(ErrorCode::InvalidWitness, "inadmissible step inside a part");
      }
      cur = contract(cur, c);
      seq.emplace_back(c);
      part.erase(c.u);
      part.erase(c.v);
      part.insert(c.w);
    }
  }
  return seq;
}

std::pair<Network, WitnessStructure> sequence_to_witness(const Network& n, const EditSequence& seq) {
  std::map<NodeId, std::vector<NodeId>> members;
  for (auto u : n.internal_nodes()) members[u] = {u};
  Network cur = n;
  for (std::size_t i = 0; i < seq.size(); ++i) {
    const auto* c = std::get_if<Contraction>(&seq[i]);
    if (c == nullptr) throw Error(ErrorCode::InadmissibleStep, "step " + std::to_string(i) + " is not a contraction");
    try {
      cur = contract_admissible(cur, *c);
    } catch (const Error& e) {
      throw Error(ErrorCode::InadmissibleStep, "step " + std::to_string(i) + ": " + e.what());
    }
    auto merged = members[c->u];
    auto& from_v = members[c->v];
    merged.insert(merged.end(), from_v.begin(), from_v.end());
    std::sort(merged.begin(), merged.end());
    members.erase(c->u);
    members.erase(c->v);
    members[c->w] = std::move(merged);
  }
  WitnessStructure w;
  for (auto x : cur.internal_nodes()) w.parts[x] = members.at(x);
  return {std::move(cur), std::move(w)};
}

std::int64_t delta_mcc_from_common(const Network& n1, const Network& n2, const Network& m) {
  return static_cast<std::int64_t>(n1.internal_count()) + static_cast<std::int64_t>(n2.internal_count()) -
         2 * static_cast<std::int64_t>(m.internal_count());
}

}  // namespace mcc
