#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "mcc/edit_ops.hpp"
#include "mcc/galled.hpp"
#include "mcc/generators.hpp"
#include "mcc/network.hpp"
#include "mcc/rng.hpp"

namespace fixture {

using namespace mcc;

inline Network build(const std::vector<std::pair<std::string, std::string>>& edges,
                     const std::map<std::string, std::string>& labels) {
  RawNetwork raw;
  raw.edges = edges;
  raw.labels = labels;
  return validate(raw);
}

// Cycle r->a->t, r->b->t with leaves t->1, a->2, b->3.
inline Network g1() {
  return build({{"r", "a"}, {"r", "b"}, {"a", "t"}, {"b", "t"}, {"t", "x1"}, {"a", "x2"}, {"b", "x3"}},
               {{"x1", "1"}, {"x2", "2"}, {"x3", "3"}});
}

// G1 with the side leaves swapped: a carries 3, b carries 2.
inline Network g1_swapped() {
  return build({{"r", "b"}, {"r", "a"}, {"b", "t"}, {"a", "t"}, {"t", "x1"}, {"a", "x3"}, {"b", "x2"}},
               {{"x1", "1"}, {"x2", "2"}, {"x3", "3"}});
}

inline Network t3a() {
  return build({{"r", "p"}, {"r", "x3"}, {"p", "x1"}, {"p", "x2"}}, {{"x1", "1"}, {"x2", "2"}, {"x3", "3"}});
}

inline Network t3b() {
  return build({{"r", "p"}, {"r", "x2"}, {"p", "x1"}, {"p", "x3"}}, {{"x1", "1"}, {"x2", "2"}, {"x3", "3"}});
}

inline std::vector<std::string> labels(std::size_t count) {
  std::vector<std::string> out;
  for (std::size_t i = 1; i <= count; ++i) out.push_back(std::to_string(i));
  return out;
}

// Caterpillar on leaves 1..l: spine p1..p(l-1), p_i carries leaf i, the last
// spine node carries l-1 and l.
inline Network caterpillar(std::size_t l) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::map<std::string, std::string> lab;
  for (std::size_t i = 1; i < l; ++i) {
    auto p = "p" + std::to_string(i);
    if (i + 1 < l) edges.emplace_back(p, "p" + std::to_string(i + 1));
    edges.emplace_back(p, "x" + std::to_string(i));
    lab["x" + std::to_string(i)] = std::to_string(i);
  }
  edges.emplace_back("p" + std::to_string(l - 1), "x" + std::to_string(l));
  lab["x" + std::to_string(l)] = std::to_string(l);
  return build(edges, lab);
}

// Same network with internal node ids assigned in shuffled order.
inline Network shuffled_copy(const Network& n, SplitMix64& rng) {
  auto nodes = n.nodes();
  for (std::size_t i = nodes.size(); i > 1; --i) std::swap(nodes[i - 1], nodes[rng.below(i)]);
  RawNetwork raw;
  std::map<NodeId, std::string> name;
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    name[nodes[i]] = "q" + std::to_string(i);
    raw.nodes.push_back(name[nodes[i]]);
  }
  for (auto [u, v] : n.edges()) raw.edges.emplace_back(name[u], name[v]);
  for (auto leaf : n.leaves()) raw.labels[name[leaf]] = n.label(leaf);
  return validate(raw);
}

// Random network (not necessarily weakly galled): a random tree plus extra
// forward edges between internal nodes of a topological order.
inline Network random_network(std::size_t leaves, std::size_t extra, SplitMix64& rng) {
  Network n = random_tree(leaves, rng);
  auto order = topological_order(n);
  std::vector<NodeId> internal;
  for (auto u : order) {
    if (!n.is_leaf(u)) internal.push_back(u);
  }
  for (std::size_t k = 0; k < extra * 4 && extra > 0 && internal.size() >= 2; ++k) {
    auto i = rng.below(internal.size());
    auto j = rng.below(internal.size());
    if (i == j) continue;
    if (i > j) std::swap(i, j);
    if (j == 0 || n.has_edge(internal[i], internal[j])) continue;
    n.add_edge(internal[i], internal[j]);
    if (--extra == 0) break;
  }
  return n;
}

inline std::vector<std::pair<NodeId, NodeId>> internal_edges(const Network& n) {
  std::vector<std::pair<NodeId, NodeId>> out;
  for (auto [u, v] : n.edges()) {
    if (!n.is_leaf(v)) out.emplace_back(u, v);
  }
  return out;
}

// Applies up to `steps` random admissible contractions.
inline Network random_contraction(Network n, std::size_t steps, SplitMix64& rng) {
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<std::pair<NodeId, NodeId>> ok;
    for (auto [u, v] : internal_edges(n)) {
      if (is_admissible(n, u, v)) ok.emplace_back(u, v);
    }
    if (ok.empty()) break;
    auto [u, v] = ok[rng.below(ok.size())];
    n = contract_admissible(n, u, v);
  }
  return n;
}

// Random weakly galled tree without degree-2 nodes, derived from a common
// ancestor by contractions that keep it degree-2-free.
inline Network degree2_free_contraction(const Network& base, std::size_t steps, SplitMix64& rng) {
  Network n = base;
  for (std::size_t s = 0; s < steps; ++s) {
    std::vector<std::pair<NodeId, NodeId>> ok;
    for (auto [u, v] : internal_edges(n)) {
      if (is_admissible(n, u, v)) ok.emplace_back(u, v);
    }
    for (std::size_t i = ok.size(); i > 1; --i) std::swap(ok[i - 1], ok[rng.below(i)]);
    for (auto [u, v] : ok) {
      auto m = contract_admissible(n, u, v);
      if (!find_degree2_node(m)) {
        n = std::move(m);
        break;
      }
    }
  }
  return n;
}

// Pair on the same leaves that tends to share structure.
inline std::pair<Network, Network> related_pair(std::size_t leaves, std::size_t retics, std::uint64_t seed) {
  SplitMix64 rng(seed);
  Network base = random_wgt(leaves, retics, seed);
  auto a = degree2_free_contraction(base, rng.below(4), rng);
  auto b = degree2_free_contraction(base, rng.below(4), rng);
  return {a, b};
}

// Brute-force closure: every network reachable by admissible contractions,
// one representative per isomorphism class. Admissibility is decided by
// acyclicity of the raw contraction, independently of is_admissible.
inline std::vector<Network> contraction_closure(const Network& n) {
  std::vector<Network> seen{n};
  std::vector<std::size_t> frontier{0};
  while (!frontier.empty()) {
    std::vector<std::size_t> next;
    for (auto idx : frontier) {
      Network cur = seen[idx];
      for (auto [u, v] : internal_edges(cur)) {
        Network m = contract(cur, u, v);
        if (!is_acyclic(m)) continue;
        bool fresh = std::none_of(seen.begin(), seen.end(), [&](const Network& s) {
          return s.internal_count() == m.internal_count() && is_isomorphic(s, m);
        });
        if (fresh) {
          seen.push_back(std::move(m));
          next.push_back(seen.size() - 1);
        }
      }
    }
    frontier = std::move(next);
  }
  return seen;
}

// Maximum common contraction size by intersecting both closures.
inline std::size_t closure_common_size(const Network& a, const Network& b) {
  auto ca = contraction_closure(a);
  auto cb = contraction_closure(b);
  std::size_t best = 0;
  for (const auto& x : ca) {
    if (x.internal_count() <= best) continue;
    for (const auto& y : cb) {
      if (y.internal_count() == x.internal_count() && is_isomorphic(x, y)) {
        best = x.internal_count();
        break;
      }
    }
  }
  return best;
}

// Independent DFS reachability to leaves.
inline std::set<std::string> leaves_below(const Network& n, NodeId u) {
  std::set<std::string> out;
  std::vector<NodeId> stack{u};
  std::set<NodeId> seen{u};
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    if (n.is_leaf(x)) out.insert(n.label(x));
    for (auto c : n.children(x)) {
      if (seen.insert(c).second) stack.push_back(c);
    }
  }
  return out;
}

// Shared internal clades of two trees, counted by direct set comparison.
inline std::size_t shared_tree_clades(const Network& a, const Network& b) {
  std::set<std::set<std::string>> ca;
  std::set<std::set<std::string>> cb;
  for (auto u : a.internal_nodes()) ca.insert(leaves_below(a, u));
  for (auto u : b.internal_nodes()) cb.insert(leaves_below(b, u));
  std::size_t shared = 0;
  for (const auto& s : ca) shared += cb.count(s);
  return shared;
}

// Random partition of I(n) into weakly connected parts by random merging
// along internal edges.
inline std::vector<std::vector<NodeId>> random_connected_partition(const Network& n, SplitMix64& rng) {
  std::map<NodeId, NodeId> parent;
  for (auto u : n.internal_nodes()) parent[u] = u;
  auto find = [&](NodeId x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  auto edges = internal_edges(n);
  std::size_t merges = edges.empty() ? 0 : rng.below(edges.size() + 1);
  for (std::size_t k = 0; k < merges; ++k) {
    auto [u, v] = edges[rng.below(edges.size())];
    parent[find(v)] = find(u);
  }
  std::map<NodeId, std::vector<NodeId>> groups;
  for (auto u : n.internal_nodes()) groups[find(u)].push_back(u);
  std::vector<std::vector<NodeId>> out;
  for (auto& [rep, members] : groups) out.push_back(std::move(members));
  return out;
}

}  // namespace fixture
