#include "mcc/generators.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "mcc/edit_ops.hpp"
#include "mcc/galled.hpp"

namespace mcc {

namespace {

NodeId add_leaf(Network& n, NodeId parent, const std::string& label) {
  auto leaf = n.add_node();
  n.set_label(leaf, label);
  n.add_edge(parent, leaf);
  return leaf;
}

// Path of internal nodes carrying the leaves in order; the last node
// carries the last two leaves.
NodeId leaf_chain(Network& n, const std::vector<std::string>& labels, const std::string& prefix) {
  std::size_t k = labels.size();
  std::vector<NodeId> chain;
  for (std::size_t i = 0; i + 1 < k; ++i) chain.push_back(n.add_node(prefix + std::to_string(i + 1)));
  for (std::size_t i = 0; i + 1 < chain.size(); ++i) {
    n.add_edge(chain[i], chain[i + 1]);
    add_leaf(n, chain[i], labels[i]);
  }
  add_leaf(n, chain.back(), labels[k - 2]);
  add_leaf(n, chain.back(), labels[k - 1]);
  return chain.front();
}

// Caterpillar with trailing contractions (m <= l-1) or with m - (l-1)
// extra nodes in triangles along the spine (m > l-1). label[i] is the
// label of the leaf at spine position i (1-based).
Network diameter_side(std::size_t l, std::size_t m, const std::vector<std::string>& label) {
  Network n;
  if (m <= l - 1) {
    std::vector<NodeId> p;
    for (std::size_t i = 1; i <= m; ++i) p.push_back(n.add_node("p" + std::to_string(i)));
    for (std::size_t i = 1; i < m; ++i) {
      n.add_edge(p[i - 1], p[i]);
      add_leaf(n, p[i - 1], label[i]);
    }
    for (std::size_t i = m; i <= l; ++i) add_leaf(n, p[m - 1], label[i]);
    return n;
  }
  std::size_t diff = m - (l - 1);
  bool odd = diff % 2 == 1;
  std::size_t rungs = (diff + (odd ? 1 : 0)) / 2;
  if (rungs > l - 2) {
    throw Error(ErrorCode::InvalidParameters,
                "m=" + std::to_string(m) + " needs more triangles than the spine of " + std::to_string(l) +
                    " leaves holds");
  }
  std::vector<NodeId> p;
  for (std::size_t i = 1; i <= l - 1; ++i) p.push_back(n.add_node("p" + std::to_string(i)));
  for (std::size_t i = 1; i + 1 <= l - 1; ++i) {
    if (i >= l - rungs) {
      auto x = n.add_node("x" + std::to_string(i));
      auto t = n.add_node("t" + std::to_string(i));
      n.add_edge(p[i - 1], x);
      n.add_edge(p[i - 1], t);
      n.add_edge(x, t);
      n.add_edge(t, p[i]);
      add_leaf(n, x, label[i]);
    } else {
      n.add_edge(p[i - 1], p[i]);
      add_leaf(n, p[i - 1], label[i]);
    }
  }
  auto x = n.add_node("x" + std::to_string(l - 1));
  auto y = n.add_node("y" + std::to_string(l - 1));
  n.add_edge(p[l - 2], x);
  n.add_edge(p[l - 2], y);
  n.add_edge(x, y);
  add_leaf(n, x, label[l - 1]);
  add_leaf(n, y, label[l]);
  if (odd) n = contract_admissible(n, p[0], p[1]);
  return n;
}

}  // namespace

void check_instance(const SetSplittingInstance& inst) {
  std::set<std::string> universe(inst.universe.begin(), inst.universe.end());
  if (universe.size() != inst.universe.size()) throw Error(ErrorCode::InvalidParameters, "duplicate universe element");
  for (const auto& s : inst.sets) {
    if (s.empty()) throw Error(ErrorCode::InvalidParameters, "empty set in family");
    for (const auto& x : s) {
      if (universe.count(x) == 0) throw Error(ErrorCode::InvalidParameters, "element " + x + " not in universe");
    }
  }
}

SetSplittingInstance parse_instance(const std::string& text) {
  SetSplittingInstance inst;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    std::istringstream words(line);
    std::vector<std::string> tokens;
    for (std::string w; words >> w;) tokens.push_back(w);
    if (first) {
      inst.universe = std::move(tokens);
      first = false;
    } else if (!tokens.empty()) {
      inst.sets.push_back(std::move(tokens));
    }
  }
  if (first) throw Error(ErrorCode::SyntaxError, "instance file is empty");
  check_instance(inst);
  return inst;
}

std::string write_instance(const SetSplittingInstance& inst) {
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i > 0 ? " " : "") + v[i];
    return s;
  };
  std::string out = join(inst.universe) + "\n";
  for (const auto& s : inst.sets) out += join(s) + "\n";
  return out;
}

bool is_splittable(const SetSplittingInstance& inst) {
  std::size_t n = inst.universe.size();
  std::vector<std::vector<std::size_t>> sets;
  for (const auto& s : inst.sets) {
    std::vector<std::size_t> idx;
    for (const auto& x : s) {
      idx.push_back(static_cast<std::size_t>(
          std::find(inst.universe.begin(), inst.universe.end(), x) - inst.universe.begin()));
    }
    sets.push_back(std::move(idx));
  }
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    bool ok = std::all_of(sets.begin(), sets.end(), [&](const std::vector<std::size_t>& s) {
      bool in = false;
      bool out = false;
      for (auto i : s) ((mask >> i) & 1U ? in : out) = true;
      return in && out;
    });
    if (ok) return true;
  }
  return false;
}

NetworkPair diameter_pair(std::size_t l, std::size_t m, std::size_t mprime) {
  if (l <= 3 || m <= 1 || mprime <= 1) {
    throw Error(ErrorCode::InvalidParameters, "diameter pair needs l > 3, m > 1, mprime > 1");
  }
  std::vector<std::string> label(l + 1);
  for (std::size_t i = 1; i <= l; ++i) label[i] = std::to_string(i);
  auto mirrored = label;
  std::swap(mirrored[1], mirrored[l]);
  return {diameter_side(l, m, label), diameter_side(l, mprime, mirrored)};
}

ReductionInstance reduction_deg_bounded(const SetSplittingInstance& inst) {
  check_instance(inst);
  if (inst.universe.empty() || inst.sets.empty()) {
    throw Error(ErrorCode::InvalidParameters, "reduction needs a non-empty universe and family");
  }
  const std::size_t m = inst.sets.size();
  const std::size_t n = inst.universe.size();
  auto set_leaf = [](std::size_t i) { return "S" + std::to_string(i + 1); };
  auto set_leaf_p = [](std::size_t i) { return "S" + std::to_string(i + 1) + "p"; };

  ReductionInstance res;
  res.k = 3;
  {
    Network& g = res.n1;
    auto r1 = g.add_node("r1");
    auto r1p = g.add_node("r1p");
    auto a1 = g.add_node("a1");
    auto a1p = g.add_node("a1p");
    auto b1 = g.add_node("b1");
    auto b1p = g.add_node("b1p");
    g.add_edge(r1, r1p);
    g.add_edge(r1p, a1);
    g.add_edge(r1p, b1);
    g.add_edge(a1, a1p);
    g.add_edge(b1, b1p);
    add_leaf(g, a1p, "A");
    add_leaf(g, a1p, "Ap");
    add_leaf(g, b1p, "B");
    add_leaf(g, b1p, "Bp");

    std::vector<NodeId> u(m);
    std::vector<NodeId> v(m);
    for (std::size_t i = 0; i < m; ++i) {
      u[i] = g.add_node("u" + std::to_string(i + 1));
      v[i] = g.add_node("v" + std::to_string(i + 1));
      add_leaf(g, u[i], set_leaf(i));
      add_leaf(g, v[i], set_leaf_p(i));
    }
    std::vector<NodeId> t(n);
    for (std::size_t x = 0; x < n; ++x) t[x] = g.add_node("t" + inst.universe[x]);

    std::size_t plen = std::max<std::size_t>(m - 1, 1);
    std::vector<NodeId> p;
    for (std::size_t i = 0; i < plen; ++i) p.push_back(g.add_node("p" + std::to_string(i + 1)));
    g.add_edge(r1, p[0]);
    for (std::size_t i = 0; i + 1 < plen; ++i) g.add_edge(p[i], p[i + 1]);
    for (std::size_t i = 0; i + 1 < m; ++i) g.add_edge(p[i], u[i]);
    g.add_edge(p.back(), u[m - 1]);
    add_leaf(g, p.back(), "R");

    std::size_t qlen = std::max<std::size_t>(n - 1, 1);
    std::vector<NodeId> q;
    std::vector<NodeId> qp;
    for (std::size_t i = 0; i < qlen; ++i) q.push_back(g.add_node("q" + std::to_string(i + 1)));
    for (std::size_t i = 0; i < qlen; ++i) qp.push_back(g.add_node("qp" + std::to_string(i + 1)));
    g.add_edge(a1, q[0]);
    for (std::size_t i = 0; i + 1 < qlen; ++i) {
      g.add_edge(q[i], q[i + 1]);
      g.add_edge(qp[i + 1], qp[i]);
    }
    for (std::size_t i = 0; i + 1 < n; ++i) {
      g.add_edge(q[i], t[i]);
      g.add_edge(t[i], qp[i]);
    }
    g.add_edge(q.back(), t[n - 1]);
    g.add_edge(t[n - 1], qp.back());
    g.add_edge(qp[0], b1);

    for (std::size_t i = 0; i < m; ++i) {
      for (const auto& e : inst.sets[i]) {
        auto x = static_cast<std::size_t>(std::find(inst.universe.begin(), inst.universe.end(), e) -
                                          inst.universe.begin());
        g.add_edge(u[i], t[x]);
        g.add_edge(t[x], v[i]);
      }
    }
  }
  std::vector<std::string> a_leaves;
  std::vector<std::string> b_leaves;
  for (std::size_t i = 0; i < m; ++i) {
    a_leaves.push_back(set_leaf(i));
    b_leaves.push_back(set_leaf_p(i));
  }
  {
    Network& g = res.n2;
    auto r2 = g.add_node("r2");
    auto x1 = g.add_node("x1");
    auto x2 = g.add_node("x2");
    auto a2 = g.add_node("a2");
    auto b2 = g.add_node("b2");
    add_leaf(g, r2, "R");
    g.add_edge(r2, x1);
    g.add_edge(r2, x2);
    add_leaf(g, x1, "A");
    add_leaf(g, x2, "B");
    g.add_edge(x1, a2);
    g.add_edge(x2, b2);
    g.add_edge(a2, b2);
    auto a_chain = a_leaves;
    a_chain.push_back("Ap");
    auto b_chain = b_leaves;
    b_chain.push_back("Bp");
    g.add_edge(a2, leaf_chain(g, a_chain, "c"));
    g.add_edge(b2, leaf_chain(g, b_chain, "d"));
  }
  {
    Network& g = res.target;
    auto r = g.add_node("r");
    auto a = g.add_node("a");
    auto b = g.add_node("b");
    g.add_edge(r, a);
    g.add_edge(r, b);
    g.add_edge(a, b);
    add_leaf(g, r, "R");
    for (const auto& s : a_leaves) add_leaf(g, a, s);
    add_leaf(g, a, "A");
    add_leaf(g, a, "Ap");
    for (const auto& s : b_leaves) add_leaf(g, b, s);
    add_leaf(g, b, "B");
    add_leaf(g, b, "Bp");
  }
  check_valid(res.n1);
  check_valid(res.n2);
  return res;
}

ReductionInstance reduction_five_leaves(const SetSplittingInstance& inst) {
  check_instance(inst);
  ReductionInstance res;
  res.k = 4;
  {
    Network& g = res.n2;
    auto a = g.add_node("a");
    auto b = g.add_node("b");
    auto c = g.add_node("c");
    auto d = g.add_node("d");
    g.add_edge(a, b);
    g.add_edge(b, c);
    g.add_edge(c, d);
    add_leaf(g, a, "1");
    add_leaf(g, b, "2");
    add_leaf(g, c, "3");
    add_leaf(g, d, "4");
    add_leaf(g, d, "4p");
  }
  {
    Network& g = res.n1;
    auto a1 = g.add_node("a1");
    auto s = g.add_node("s");
    auto t = g.add_node("t");
    auto b1 = g.add_node("b1");
    add_leaf(g, a1, "1");
    add_leaf(g, s, "2");
    add_leaf(g, t, "3");
    add_leaf(g, b1, "4");
    add_leaf(g, b1, "4p");
    g.add_edge(a1, s);
    g.add_edge(s, t);
    g.add_edge(t, b1);
    std::vector<NodeId> tx;
    for (const auto& x : inst.universe) {
      auto node = g.add_node("t" + x);
      g.add_edge(s, node);
      g.add_edge(node, t);
      tx.push_back(node);
    }
    for (std::size_t i = 0; i < inst.sets.size(); ++i) {
      auto u = g.add_node("u" + std::to_string(i + 1));
      auto v = g.add_node("v" + std::to_string(i + 1));
      g.add_edge(a1, u);
      g.add_edge(u, v);
      g.add_edge(v, b1);
      for (const auto& e : inst.sets[i]) {
        auto x = static_cast<std::size_t>(std::find(inst.universe.begin(), inst.universe.end(), e) -
                                          inst.universe.begin());
        g.add_edge(u, tx[x]);
        g.add_edge(tx[x], v);
      }
    }
  }
  res.target = res.n2;
  check_valid(res.n1);
  return res;
}

Network random_tree(std::size_t num_leaves, SplitMix64& rng) {
  if (num_leaves == 0) throw Error(ErrorCode::InvalidParameters, "a network needs at least one leaf");
  Network n;
  std::vector<NodeId> roots;
  for (std::size_t i = 1; i <= num_leaves; ++i) {
    auto leaf = n.add_node();
    n.set_label(leaf, std::to_string(i));
    roots.push_back(leaf);
  }
  if (num_leaves == 1) {
    auto r = n.add_node();
    n.add_edge(r, roots.front());
    return n;
  }
  while (roots.size() > 1) {
    std::size_t k = roots.size() >= 3 && rng.below(3) == 0 ? 3 : 2;
    auto parent = n.add_node();
    for (std::size_t j = 0; j < k; ++j) {
      auto pick = rng.below(roots.size());
      n.add_edge(parent, roots[pick]);
      roots.erase(roots.begin() + static_cast<std::ptrdiff_t>(pick));
    }
    roots.push_back(parent);
  }
  return n;
}

Network add_random_reticulations(const Network& base, std::size_t count, SplitMix64& rng) {
  constexpr int kAttempts = 200;
  Network n = base;
  for (std::size_t added = 0; added < count; ++added) {
    bool done = false;
    for (int attempt = 0; attempt < kAttempts && !done; ++attempt) {
      std::vector<NodeId> forks;
      for (auto u : n.internal_nodes()) {
        if (n.out_degree(u) >= 2) forks.push_back(u);
      }
      if (forks.empty()) break;
      auto z = forks[rng.below(forks.size())];
      const auto& kids = n.children(z);
      auto i1 = rng.below(kids.size());
      auto i2 = rng.below(kids.size() - 1);
      if (i2 >= i1) ++i2;
      auto walk = [&](NodeId start) {
        std::pair<NodeId, NodeId> e{z, start};
        while (!n.is_leaf(e.second) && rng.coin()) {
          const auto& next = n.children(e.second);
          e = {e.second, next[rng.below(next.size())]};
        }
        return e;
      };
      auto e1 = walk(kids[i1]);
      auto e2 = walk(kids[i2]);
      if (e1 == e2) continue;
      Network candidate = n;
      auto x = candidate.add_node();
      auto y = candidate.add_node();
      candidate.remove_edge(e1.first, e1.second);
      candidate.add_edge(e1.first, x);
      candidate.add_edge(x, e1.second);
      candidate.remove_edge(e2.first, e2.second);
      candidate.add_edge(e2.first, y);
      candidate.add_edge(y, e2.second);
      candidate.add_edge(x, y);
      if (!is_valid(candidate) || !is_weakly_galled(candidate) || find_degree2_node(candidate)) continue;
      n = std::move(candidate);
      done = true;
    }
    if (!done) {
      throw Error(ErrorCode::GenerationFailed, "could not place reticulation " + std::to_string(added + 1));
    }
  }
  return n;
}

Network random_wgt(std::size_t num_leaves, std::size_t num_retics, std::uint64_t seed) {
  constexpr int kTrees = 20;
  SplitMix64 rng(seed);
  for (int attempt = 0; attempt < kTrees; ++attempt) {
    Network tree = random_tree(num_leaves, rng);
    try {
      return add_random_reticulations(tree, num_retics, rng);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::GenerationFailed) throw;
    }
  }
  throw Error(ErrorCode::GenerationFailed, "no weakly galled tree with " + std::to_string(num_retics) +
                                               " reticulations on " + std::to_string(num_leaves) + " leaves found");
}

}  // namespace mcc
