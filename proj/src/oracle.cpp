#include "mcc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <set>
#include <unordered_set>

#include "mcc/galled.hpp"

namespace mcc {

namespace {

class Budget {
 public:
  explicit Budget(std::uint64_t limit) : left_(limit) {}
  void spend(std::uint64_t amount = 1) {
    if (amount > left_) throw Error(ErrorCode::BudgetExhausted, "oracle step budget exhausted");
    left_ -= amount;
  }

 private:
  std::uint64_t left_;
};

using Mask = std::uint64_t;

class ContractionSearch {
 public:
  ContractionSearch(const Network& n, const Network& m, Budget& budget) : n_(n), m_(m), budget_(budget) {}

  std::optional<WitnessStructure> run() {
    targets_ = m_.internal_nodes();
    k_ = targets_.size();
    if (k_ > 64) throw Error(ErrorCode::SizeCapExceeded, "target has too many internal nodes");
    sources_ = n_.internal_nodes();
    if (sources_.size() < k_) return std::nullopt;
    std::vector<int> target_index(m_.next_id().value, -1);
    for (std::size_t i = 0; i < k_; ++i) target_index[targets_[i].value] = static_cast<int>(i);
    index_.assign(n_.next_id().value, -1);
    for (std::size_t i = 0; i < sources_.size(); ++i) index_[sources_[i].value] = static_cast<int>(i);

    up_.assign(k_, 0);
    down_.assign(k_, 0);
    for (std::size_t a = 0; a < k_; ++a) {
      up_[a] = down_[a] = Mask{1} << a;
    }
    for (auto [x, y] : m_.edges()) {
      if (m_.is_leaf(y)) continue;
      auto a = static_cast<std::size_t>(target_index[x.value]);
      auto b = static_cast<std::size_t>(target_index[y.value]);
      down_[a] |= Mask{1} << b;
      up_[b] |= Mask{1} << a;
    }

    Mask all = k_ == 64 ? ~Mask{0} : ((Mask{1} << k_) - 1);
    domain_.assign(sources_.size(), all);
    value_.assign(sources_.size(), -1);

    std::vector<std::pair<std::size_t, std::size_t>> fixed;
    fixed.emplace_back(idx(n_.root()), static_cast<std::size_t>(target_index[m_.root().value]));
    for (auto leaf : n_.leaves()) {
      auto target_leaf = m_.find_leaf(n_.label(leaf));
      auto pn = n_.parents(leaf).front();
      auto pm = m_.parents(*target_leaf).front();
      fixed.emplace_back(idx(pn), static_cast<std::size_t>(target_index[pm.value]));
    }
    std::vector<std::pair<std::size_t, Mask>> trail;
    for (auto [x, a] : fixed) {
      if (value_[x] >= 0) {
        if (value_[x] != static_cast<int>(a)) return std::nullopt;
        continue;
      }
      if (!assign(x, a, trail)) return std::nullopt;
    }

    // Unassigned nodes in breadth-first order from the fixed ones.
    std::vector<bool> queued(sources_.size(), false);
    std::vector<std::size_t> queue;
    for (std::size_t x = 0; x < sources_.size(); ++x) {
      if (value_[x] >= 0) {
        queue.push_back(x);
        queued[x] = true;
      }
    }
    for (std::size_t head = 0; head < queue.size() || order_.size() + fixed_count() < sources_.size(); ++head) {
      if (head == queue.size()) {
        for (std::size_t x = 0; x < sources_.size(); ++x) {
          if (!queued[x]) {
            queue.push_back(x);
            queued[x] = true;
            order_.push_back(x);
            break;
          }
        }
      }
      auto x = queue[head];
      auto visit = [&](NodeId y) {
        if (n_.is_leaf(y)) return;
        auto j = idx(y);
        if (queued[j]) return;
        queued[j] = true;
        queue.push_back(j);
        order_.push_back(j);
      };
      for (auto y : n_.children(sources_[x])) visit(y);
      for (auto y : n_.parents(sources_[x])) visit(y);
    }
    if (!search(0)) return std::nullopt;
    WitnessStructure w;
    for (std::size_t a = 0; a < k_; ++a) w.parts[targets_[a]] = {};
    for (std::size_t x = 0; x < sources_.size(); ++x) {
      w.parts[targets_[static_cast<std::size_t>(value_[x])]].push_back(sources_[x]);
    }
    return w;
  }

 private:
  std::size_t idx(NodeId u) const { return static_cast<std::size_t>(index_[u.value]); }

  std::size_t fixed_count() const {
    std::size_t c = 0;
    for (auto v : value_) c += v >= 0 ? 1 : 0;
    return c;
  }

  // Assigns x := a and narrows neighbour domains; false on a wipe-out.
  bool assign(std::size_t x, std::size_t a, std::vector<std::pair<std::size_t, Mask>>& trail) {
    if ((domain_[x] & (Mask{1} << a)) == 0) return false;
    value_[x] = static_cast<int>(a);
    auto narrow = [&](NodeId y, Mask allowed) {
      if (n_.is_leaf(y)) return true;
      auto j = idx(y);
      if (value_[j] >= 0) return ((allowed >> value_[j]) & 1U) != 0;
      Mask next = domain_[j] & allowed;
      if (next != domain_[j]) {
        trail.emplace_back(j, domain_[j]);
        domain_[j] = next;
      }
      return next != 0;
    };
    for (auto y : n_.children(sources_[x])) {
      if (!narrow(y, down_[a])) return false;
    }
    for (auto y : n_.parents(sources_[x])) {
      if (!narrow(y, up_[a])) return false;
    }
    return true;
  }

  bool search(std::size_t depth) {
    budget_.spend();
    if (depth == order_.size()) return complete();
    std::size_t unassigned = order_.size() - depth;
    Mask used = 0;
    for (auto v : value_) {
      if (v >= 0) used |= Mask{1} << v;
    }
    if (static_cast<std::size_t>(std::popcount(~used & (k_ == 64 ? ~Mask{0} : (Mask{1} << k_) - 1))) > unassigned) {
      return false;
    }
    auto x = order_[depth];
    Mask options = domain_[x];
    while (options != 0) {
      auto a = static_cast<std::size_t>(std::countr_zero(options));
      options &= options - 1;
      std::vector<std::pair<std::size_t, Mask>> trail;
      if (assign(x, a, trail) && search(depth + 1)) return true;
      for (auto it = trail.rbegin(); it != trail.rend(); ++it) domain_[it->first] = it->second;
      value_[x] = -1;
    }
    return false;
  }

  bool complete() {
    std::vector<std::vector<NodeId>> parts(k_);
    for (std::size_t x = 0; x < sources_.size(); ++x) parts[static_cast<std::size_t>(value_[x])].push_back(sources_[x]);
    WitnessStructure w;
    for (std::size_t a = 0; a < k_; ++a) w.parts[targets_[a]] = parts[a];
    return static_cast<bool>(validate_witness(n_, m_, w));
  }

  const Network& n_;
  const Network& m_;
  Budget& budget_;
  std::vector<NodeId> targets_;
  std::vector<NodeId> sources_;
  std::size_t k_ = 0;
  std::vector<int> index_;
  std::vector<Mask> up_;
  std::vector<Mask> down_;
  std::vector<Mask> domain_;
  std::vector<int> value_;
  std::vector<std::size_t> order_;
};

std::optional<WitnessStructure> contraction_with(const Network& n, const Network& m, Budget& budget) {
  if (n.leaf_labels() != m.leaf_labels()) throw Error(ErrorCode::LeafSetMismatch, "networks have different leaf sets");
  return ContractionSearch(n, m, budget).run();
}

class PartitionEnumerator {
 public:
  PartitionEnumerator(const Network& n, Budget& budget) : n_(n), budget_(budget) {
    nodes_ = n.internal_nodes();
    std::vector<int> index(n.next_id().value, -1);
    for (std::size_t i = 0; i < nodes_.size(); ++i) index[nodes_[i].value] = static_cast<int>(i);
    adj_.assign(nodes_.size(), 0);
    for (auto [u, v] : n.edges()) {
      if (n.is_leaf(v)) continue;
      auto a = static_cast<std::size_t>(index[u.value]);
      auto b = static_cast<std::size_t>(index[v.value]);
      adj_[a] |= Mask{1} << b;
      adj_[b] |= Mask{1} << a;
      arcs_.emplace_back(a, b);
    }
  }

  // Acyclic-quotient partitions bucketed by their number of parts.
  std::map<std::size_t, std::vector<std::vector<Mask>>, std::greater<>> run() {
    Mask all = nodes_.size() == 64 ? ~Mask{0} : ((Mask{1} << nodes_.size()) - 1);
    std::vector<Mask> parts;
    grow(all, parts);
    return std::move(found_);
  }

  const std::vector<NodeId>& nodes() const { return nodes_; }

 private:
  bool connected(Mask set) const {
    Mask seen = set & (~set + 1);
    Mask frontier = seen;
    while (frontier != 0) {
      Mask next = 0;
      for (Mask f = frontier; f != 0; f &= f - 1) next |= adj_[static_cast<std::size_t>(std::countr_zero(f))];
      next &= set & ~seen;
      seen |= next;
      frontier = next;
    }
    return seen == set;
  }

  bool acyclic_quotient(const std::vector<Mask>& parts) const {
    std::vector<std::size_t> part_of(nodes_.size());
    for (std::size_t k = 0; k < parts.size(); ++k) {
      for (Mask f = parts[k]; f != 0; f &= f - 1) part_of[static_cast<std::size_t>(std::countr_zero(f))] = k;
    }
    std::vector<Mask> succ(parts.size(), 0);
    for (auto [a, b] : arcs_) {
      auto pa = part_of[a];
      auto pb = part_of[b];
      if (pa != pb) succ[pa] |= Mask{1} << pb;
    }
    std::vector<int> indeg(parts.size(), 0);
    for (auto s : succ) {
      for (Mask f = s; f != 0; f &= f - 1) ++indeg[static_cast<std::size_t>(std::countr_zero(f))];
    }
    std::vector<std::size_t> ready;
    for (std::size_t k = 0; k < parts.size(); ++k) {
      if (indeg[k] == 0) ready.push_back(k);
    }
    std::size_t seen = 0;
    while (!ready.empty()) {
      auto k = ready.back();
      ready.pop_back();
      ++seen;
      for (Mask f = succ[k]; f != 0; f &= f - 1) {
        auto j = static_cast<std::size_t>(std::countr_zero(f));
        if (--indeg[j] == 0) ready.push_back(j);
      }
    }
    return seen == parts.size();
  }

  // Each partition is produced once: parts are chosen in order of their
  // lowest unassigned node.
  void grow(Mask unassigned, std::vector<Mask>& parts) {
    budget_.spend();
    if (unassigned == 0) {
      if (acyclic_quotient(parts)) found_[parts.size()].push_back(parts);
      return;
    }
    Mask lowest = unassigned & (~unassigned + 1);
    Mask rest = unassigned & ~lowest;
    for (Mask sub = rest;; sub = (sub - 1) & rest) {
      Mask part = sub | lowest;
      if (connected(part)) {
        parts.push_back(part);
        grow(unassigned & ~part, parts);
        parts.pop_back();
      }
      if (sub == 0) break;
    }
  }

  const Network& n_;
  Budget& budget_;
  std::vector<NodeId> nodes_;
  std::vector<Mask> adj_;
  std::vector<std::pair<std::size_t, std::size_t>> arcs_;
  std::map<std::size_t, std::vector<std::vector<Mask>>, std::greater<>> found_;
};

}  // namespace

std::optional<WitnessStructure> is_contraction(const Network& n, const Network& m, std::uint64_t budget) {
  Budget b(budget);
  return contraction_with(n, m, b);
}

MccResult exact_mcc(const Network& n1, const Network& n2, const OracleLimits& limits) {
  if (n1.leaf_labels() != n2.leaf_labels()) throw Error(ErrorCode::LeafSetMismatch, "networks have different leaf sets");
  auto cap = std::min<std::size_t>(limits.max_internal, 60);
  if (n1.internal_count() > cap || n2.internal_count() > cap) {
    throw Error(ErrorCode::SizeCapExceeded, "internal node count exceeds the oracle cap of " + std::to_string(cap));
  }
  Budget budget(limits.budget);
  PartitionEnumerator enumerator(n1, budget);
  auto buckets = enumerator.run();
  const auto& nodes = enumerator.nodes();
  std::size_t bound = std::min(n1.internal_count(), n2.internal_count());

  for (const auto& [size, partitions] : buckets) {
    if (size > bound) continue;
    std::unordered_set<std::string> tried;
    for (const auto& masks : partitions) {
      std::vector<std::vector<NodeId>> parts;
      for (auto mask : masks) {
        std::vector<NodeId> part;
        for (Mask f = mask; f != 0; f &= f - 1) part.push_back(nodes[static_cast<std::size_t>(std::countr_zero(f))]);
        parts.push_back(std::move(part));
      }
      Network q = quotient(n1, parts);
      if (!is_valid(q)) continue;
      if (is_weakly_galled(q) && !tried.insert(canonical_form(q)).second) continue;
      auto w2 = contraction_with(n2, q, budget);
      if (!w2) continue;
      MccResult res;
      res.common = q;
      for (std::size_t k = 0; k < parts.size(); ++k) {
        res.w1.parts[NodeId{static_cast<std::uint32_t>(k)}] = parts[k];
      }
      res.w2 = std::move(*w2);
      res.delta = n1.internal_count() + n2.internal_count() - 2 * size;
      return res;
    }
  }
  throw Error(ErrorCode::BudgetExhausted, "no common contraction found");
}

TreeMccResult tree_mcc(const Network& t1, const Network& t2) {
  for (const Network* t : {&t1, &t2}) {
    if (!is_tree(*t)) throw Error(ErrorCode::NotATree, "input contains a reticulation");
    if (auto u = find_degree2_node(*t)) {
      throw Error(ErrorCode::Degree2Node, "internal node " + t->display_name(*u) + " has in- and out-degree 1");
    }
  }
  if (t1.leaf_labels() != t2.leaf_labels()) throw Error(ErrorCode::LeafSetMismatch, "trees have different leaf sets");
  auto universe = universe_of(t1);
  auto count_clades = [&](const Network& t) {
    std::map<LeafSet, std::size_t> c;
    auto d = all_reachable_leaves(t, universe);
    for (auto u : t.internal_nodes()) ++c[d[u.value]];
    return c;
  };
  auto c1 = count_clades(t1);
  auto c2 = count_clades(t2);
  std::vector<LeafSet> shared;
  for (const auto& [s, k] : c1) {
    auto it = c2.find(s);
    if (it == c2.end()) continue;
    for (std::size_t i = 0; i < std::min(k, it->second); ++i) shared.push_back(s);
  }
  std::stable_sort(shared.begin(), shared.end(),
                   [](const LeafSet& a, const LeafSet& b) { return a.count() > b.count(); });
  TreeMccResult res;
  Network& m = res.common;
  std::vector<NodeId> ids;
  for (std::size_t i = 0; i < shared.size(); ++i) {
    ids.push_back(m.add_node());
    for (std::size_t j = i; j-- > 0;) {
      if (shared[i].is_subset_of(shared[j])) {
        m.add_edge(ids[j], ids[i]);
        break;
      }
    }
  }
  for (std::size_t b = 0; b < universe.size(); ++b) {
    auto leaf = m.add_node();
    m.set_label(leaf, universe.label(b));
    for (std::size_t j = shared.size(); j-- > 0;) {
      if (shared[j].contains(b)) {
        m.add_edge(ids[j], leaf);
        break;
      }
    }
  }
  res.delta = t1.internal_count() + t2.internal_count() - 2 * shared.size();
  return res;
}

}  // namespace mcc
