#include "mcc/dp.hpp"

#include <algorithm>
#include <array>
#include <deque>
#include <functional>
#include <map>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

#include "mcc/galled.hpp"

namespace mcc {

std::uint64_t Cost::value() const {
  if (infinite_) throw std::logic_error("infinite cost has no value");
  return value_;
}

std::string Cost::to_string() const { return infinite_ ? "inf" : std::to_string(value_); }

namespace {

using Kind = PrimeKey::Kind;

std::size_t mix(std::size_t h, std::size_t v) { return h ^ (v + 0x9E3779B97F4A7C15ULL + (h << 6) + (h >> 2)); }

struct PrimeHash {
  std::size_t operator()(const PrimeKey& p) const {
    std::size_t h = static_cast<std::size_t>(p.kind);
    h = mix(h, p.id);
    h = mix(h, p.alpha);
    return mix(h, p.beta);
  }
};

struct KeyHash {
  std::size_t operator()(const CompositeKey& k) const {
    std::size_t h = k.bare_leaf ? k.bare_leaf->value + 1 : 0;
    for (const auto& p : k.primes) h = mix(h, PrimeHash{}(p));
    return h;
  }
};

class Bits {
 public:
  Bits() = default;
  explicit Bits(std::size_t n) : words_((n + 63) / 64, 0) {}
  void set(std::size_t i) { words_[i / 64] |= std::uint64_t{1} << (i % 64); }
  bool test(std::size_t i) const { return ((words_[i / 64] >> (i % 64)) & 1U) != 0; }
  Bits& operator|=(const Bits& o) {
    for (std::size_t k = 0; k < words_.size(); ++k) words_[k] |= o.words_[k];
    return *this;
  }
  template <typename F>
  void for_each(F f) const {
    for (std::size_t k = 0; k < words_.size(); ++k) {
      for (std::uint64_t w = words_[k]; w != 0; w &= w - 1) {
        f(k * 64 + static_cast<std::size_t>(__builtin_ctzll(w)));
      }
    }
  }

 private:
  std::vector<std::uint64_t> words_;
};

// Per-network precomputation.
struct NetData {
  const Network* g = nullptr;
  CycleMap cm;
  std::vector<LeafSet> d;
  std::vector<Bits> reach;
  std::vector<std::vector<PrimeKey>> offpath;
  CladeIndex clades;

  NetData(const Network& n, const LeafUniverse& universe) : g(&n), cm(cycle_map(n)) {
    d = all_reachable_leaves(n, universe);
    std::size_t size = n.next_id().value;
    reach.assign(size, Bits(size));
    auto order = topological_order(n);
    for (auto it = order.rbegin(); it != order.rend(); ++it) {
      reach[it->value].set(it->value);
      for (auto c : n.children(*it)) reach[it->value] |= reach[c.value];
    }
    offpath.assign(size, {});
    for (auto u : n.nodes()) {
      auto& out = offpath[u.value];
      for (auto c : n.children(u)) {
        if (cm.cycle_of_edge(u, c) < 0) out.push_back(PrimeKey{Kind::Dangling, c.value, 0, 0});
      }
      for (int k : cm.rooted_at[u.value]) out.push_back(PrimeKey{Kind::CycleTop, static_cast<std::uint32_t>(k), 0, 0});
      std::sort(out.begin(), out.end());
    }
    clades = clade_index(n, universe);
  }

  const ReticulationCycle& cycle(std::uint32_t k) const { return cm.cycles[k]; }
  const std::vector<NodeId>& side(std::uint32_t k, int s) const {
    return s == 0 ? cm.cycles[k].side_a : cm.cycles[k].side_b;
  }
  // Position i on side s, with i == |side| denoting the reticulation.
  NodeId at(std::uint32_t k, int s, std::size_t i) const {
    const auto& sd = side(k, s);
    return i < sd.size() ? sd[i] : cm.cycles[k].reticulation;
  }

  PrimeKey top(std::uint32_t k, std::uint32_t alpha, std::uint32_t beta) const {
    const auto& c = cm.cycles[k];
    if (alpha == c.side_a.size() && beta == c.side_b.size()) {
      return PrimeKey{Kind::Dangling, c.reticulation.value, 0, 0};
    }
    return PrimeKey{Kind::CycleTop, k, alpha, beta};
  }

  std::vector<NodeId> children(const PrimeKey& p) const {
    if (p.kind == Kind::Dangling) return {NodeId{p.id}};
    return {at(p.id, 0, p.alpha), at(p.id, 1, p.beta)};
  }

  bool is_leaf(NodeId u) const { return g->is_leaf(u); }
};

CompositeKey make_key(std::vector<PrimeKey> primes) {
  std::sort(primes.begin(), primes.end());
  return CompositeKey{std::move(primes), std::nullopt};
}

CompositeKey node_key(const NetData& nd, NodeId u) {
  if (nd.is_leaf(u)) return CompositeKey{{}, u};
  return CompositeKey{nd.offpath[u.value], std::nullopt};
}

// Primes of the nodes merged into one root.
CompositeKey merged_key(const NetData& nd, const std::vector<NodeId>& nodes) {
  std::vector<PrimeKey> primes;
  for (auto x : nodes) {
    const auto& o = nd.offpath[x.value];
    primes.insert(primes.end(), o.begin(), o.end());
  }
  return make_key(std::move(primes));
}

struct PrimeInfo {
  PrimeKey key;
  LeafSet leaves;
  Bits nodes;
  std::size_t internal = 0;  // internal nodes below the prime root
};

struct KeyInfo {
  CompositeKey key;
  std::vector<int> primes;
  LeafSet leaves;
  Bits nodes;
};

enum class PChoice : std::uint8_t {
  Singleton,
  Case1,
  KeepDangling,
  ContractDangling,
  RootChild,
  Bottom,
};

struct PEntry {
  Cost cost;
  PChoice choice = PChoice::Singleton;
  // RootChild: net, side. Bottom: a, b, c, d, crossed.
  std::array<std::uint32_t, 5> args{};
};

struct LatRange {
  std::uint32_t cycle = 0;
  int side = 0;
  int lo = 0;
  int hi = -1;

  bool empty() const { return lo > hi; }
};

using LatKey = std::array<std::uint32_t, 8>;

struct LatKeyHash {
  std::size_t operator()(const LatKey& k) const {
    std::size_t h = 0;
    for (auto v : k) h = mix(h, v);
    return h;
  }
};

struct LEntry {
  Cost cost;
  bool split = false;
  int k1 = 0;
  int k2 = 0;
};

struct RuleFire {
  int net = 0;
  NodeId node;
};

class Solver {
 public:
  Solver(const Network& n1, const Network& n2, const LeafUniverse& universe)
      : nets_{NetData(n1, universe), NetData(n2, universe)}, universe_(universe) {}

  Cost top() {
    top1_ = intern_key(0, node_key(nets_[0], nets_[0].g->root()));
    top2_ = intern_key(1, node_key(nets_[1], nets_[1].g->root()));
    return fc(top1_, top2_);
  }

  DpTelemetry telemetry() const {
    DpTelemetry t;
    t.fc_entries = memo_c_.size();
    t.fp_entries = memo_p_.size();
    t.fl_entries = fl_calls_;
    t.fl_valid_entries = memo_l_.size();
    return t;
  }

  // Groups of merged original nodes for both networks.
  std::array<std::vector<std::vector<NodeId>>, 2> trace() {
    for (int k = 0; k < 2; ++k) {
      parent_[k].resize(nets_[k].g->next_id().value);
      std::iota(parent_[k].begin(), parent_[k].end(), 0U);
    }
    trace_c(top1_, nets_[0].g->root(), top2_, nets_[1].g->root());
    std::array<std::vector<std::vector<NodeId>>, 2> out;
    for (int k = 0; k < 2; ++k) {
      std::map<std::uint32_t, std::vector<NodeId>> groups;
      for (auto u : nets_[k].g->internal_nodes()) groups[find(k, u.value)].push_back(u);
      for (auto& [rep, members] : groups) out[k].push_back(std::move(members));
      std::sort(out[k].begin(), out[k].end());
    }
    return out;
  }

 private:
  // Interning.
  int intern_prime(int net, const PrimeKey& p) {
    auto [it, fresh] = prime_ids_[net].emplace(p, static_cast<int>(primes_[net].size()));
    if (fresh) {
      const auto& nd = nets_[net];
      PrimeInfo info{p, universe_.empty_set(), Bits(nd.g->next_id().value), 0};
      for (auto c : nd.children(p)) {
        info.leaves |= nd.d[c.value];
        info.nodes |= nd.reach[c.value];
      }
      info.nodes.for_each([&](std::size_t x) {
        if (!nd.g->is_leaf(NodeId{static_cast<std::uint32_t>(x)})) ++info.internal;
      });
      primes_[net].push_back(std::move(info));
    }
    return it->second;
  }

  int intern_key(int net, const CompositeKey& k) {
    auto it = key_ids_[net].find(k);
    if (it != key_ids_[net].end()) return it->second;
    const auto& nd = nets_[net];
    KeyInfo info{k, {}, universe_.empty_set(), Bits(nd.g->next_id().value)};
    if (k.bare_leaf) {
      info.leaves = nd.d[k.bare_leaf->value];
    }
    for (const auto& p : k.primes) {
      int pid = intern_prime(net, p);
      info.primes.push_back(pid);
      info.leaves |= primes_[net][static_cast<std::size_t>(pid)].leaves;
      info.nodes |= primes_[net][static_cast<std::size_t>(pid)].nodes;
    }
    int id = static_cast<int>(keys_[net].size());
    keys_[net].push_back(std::move(info));
    key_ids_[net].emplace(k, id);
    return id;
  }

  // S is a 1- or 2-clade of the key network other than its root clade.
  bool has_clade(int net, const KeyInfo& ki, const LeafSet& s) const {
    const auto& idx = nets_[net].clades;
    if (auto it = idx.one.find(s); it != idx.one.end()) {
      for (auto x : it->second) {
        if (ki.nodes.test(x.value)) return true;
      }
    }
    if (auto it = idx.two.find(s); it != idx.two.end()) {
      for (auto [x, y] : it->second) {
        if (ki.nodes.test(x.value) && ki.nodes.test(y.value)) return true;
      }
    }
    return false;
  }

  // First applicable rule on `net`'s key against the other key; returns the
  // rewritten key id.
  std::optional<std::pair<int, NodeId>> fire_rule(int net, int kid, int other_kid, int rule) {
    const auto& nd = nets_[net];
    const KeyInfo& ki = keys_[net][static_cast<std::size_t>(kid)];
    const KeyInfo& other = keys_[1 - net][static_cast<std::size_t>(other_kid)];
    const auto& primes = ki.key.primes;
    for (std::size_t i = 0; i < primes.size(); ++i) {
      const auto& p = primes[i];
      if (rule == 1) {
        if (p.kind != Kind::Dangling) continue;
        NodeId u{p.id};
        if (nd.is_leaf(u) || has_clade(1 - net, other, nd.d[u.value])) continue;
        std::vector<PrimeKey> next;
        for (std::size_t j = 0; j < primes.size(); ++j) {
          if (j != i) next.push_back(primes[j]);
        }
        const auto& o = nd.offpath[u.value];
        next.insert(next.end(), o.begin(), o.end());
        return std::make_pair(intern_key(net, make_key(std::move(next))), u);
      }
      if (p.kind != Kind::CycleTop) continue;
      for (int s = 0; s < 2; ++s) {
        std::uint32_t pos = s == 0 ? p.alpha : p.beta;
        std::uint32_t other_pos = s == 0 ? p.beta : p.alpha;
        if (pos >= nd.side(p.id, s).size()) continue;
        NodeId u = nd.at(p.id, s, pos);
        const auto& far = nd.side(p.id, 1 - s);
        bool all_absent = !has_clade(1 - net, other, nd.d[u.value] | nd.d[nd.cycle(p.id).reticulation.value]);
        for (std::size_t j = other_pos; j < far.size() && all_absent; ++j) {
          if (has_clade(1 - net, other, nd.d[u.value] | nd.d[far[j].value])) all_absent = false;
        }
        if (!all_absent) continue;
        std::vector<PrimeKey> next;
        for (std::size_t j = 0; j < primes.size(); ++j) {
          if (j != i) next.push_back(primes[j]);
        }
        next.push_back(s == 0 ? nd.top(p.id, p.alpha + 1, p.beta) : nd.top(p.id, p.alpha, p.beta + 1));
        const auto& o = nd.offpath[u.value];
        next.insert(next.end(), o.begin(), o.end());
        return std::make_pair(intern_key(net, make_key(std::move(next))), u);
      }
    }
    return std::nullopt;
  }

  struct Reduced {
    std::uint64_t count = 0;
    int k1 = 0;
    int k2 = 0;
    std::vector<RuleFire> fired;
  };

  Reduced reduce(int k1, int k2) {
    Reduced r{0, k1, k2, {}};
    while (true) {
      std::optional<std::pair<int, NodeId>> step;
      int net = 0;
      for (net = 0; net < 2 && !step; ++net) {
        for (int rule = 1; rule <= 2 && !step; ++rule) {
          step = net == 0 ? fire_rule(0, r.k1, r.k2, rule) : fire_rule(1, r.k2, r.k1, rule);
        }
        if (step) break;
      }
      if (!step) return r;
      (net == 0 ? r.k1 : r.k2) = step->first;
      r.fired.push_back(RuleFire{net, step->second});
      ++r.count;
    }
  }

  // Primes of both keys paired by leaf set, or nothing if they do not match.
  std::optional<std::vector<std::pair<int, int>>> match(int k1, int k2) const {
    const auto& a = keys_[0][static_cast<std::size_t>(k1)].primes;
    const auto& b = keys_[1][static_cast<std::size_t>(k2)].primes;
    if (a.size() != b.size()) return std::nullopt;
    auto by_leaves = [&](int net, std::vector<int> ids) {
      std::sort(ids.begin(), ids.end(), [&](int x, int y) {
        return primes_[net][static_cast<std::size_t>(x)].leaves < primes_[net][static_cast<std::size_t>(y)].leaves;
      });
      return ids;
    };
    auto sa = by_leaves(0, a);
    auto sb = by_leaves(1, b);
    std::vector<std::pair<int, int>> out;
    for (std::size_t i = 0; i < sa.size(); ++i) {
      if (primes_[0][static_cast<std::size_t>(sa[i])].leaves != primes_[1][static_cast<std::size_t>(sb[i])].leaves) {
        return std::nullopt;
      }
      out.emplace_back(sa[i], sb[i]);
    }
    return out;
  }

  static std::uint64_t pair_key(int a, int b) {
    return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(a)) << 32) | static_cast<std::uint32_t>(b);
  }

  Cost fc(int k1, int k2) {
    auto mk = pair_key(k1, k2);
    if (auto it = memo_c_.find(mk); it != memo_c_.end()) return it->second;
    Cost result = fc_compute(k1, k2);
    memo_c_.emplace(mk, result);
    return result;
  }

  Cost fc_compute(int k1, int k2) {
    const KeyInfo& a = keys_[0][static_cast<std::size_t>(k1)];
    const KeyInfo& b = keys_[1][static_cast<std::size_t>(k2)];
    if (a.key.bare_leaf || b.key.bare_leaf) {
      bool same = a.key.bare_leaf && b.key.bare_leaf && a.leaves == b.leaves;
      return same ? Cost(0) : Cost::infinity();
    }
    if (a.leaves != b.leaves) return Cost::infinity();
    if (a.primes.size() == 1 && b.primes.size() == 1) return fp(a.primes[0], b.primes[0]).cost;
    auto r = reduce(k1, k2);
    auto pairs = match(r.k1, r.k2);
    if (!pairs) return Cost::infinity();
    Cost total(r.count);
    for (auto [p, q] : *pairs) {
      total = total + fp(p, q).cost;
      if (total.is_infinite()) break;
    }
    return total;
  }

  const PEntry& fp(int p1, int p2) {
    auto mk = pair_key(p1, p2);
    if (auto it = memo_p_.find(mk); it != memo_p_.end()) return it->second;
    PEntry e = fp_compute(p1, p2);
    return memo_p_.emplace(mk, e).first->second;
  }

  static void consider(PEntry& best, Cost c, PChoice choice, std::array<std::uint32_t, 5> args = {}) {
    if (c < best.cost) {
      best.cost = c;
      best.choice = choice;
      best.args = args;
    }
  }

  int single(int net, int pid) { return intern_key(net, make_key({primes_[net][static_cast<std::size_t>(pid)].key})); }

  // Nodes of the bottom path from side-A position a through the reticulation
  // to side-B position b.
  std::vector<NodeId> bottom_path(int net, std::uint32_t k, std::uint32_t a, std::uint32_t b) const {
    const auto& nd = nets_[net];
    std::vector<NodeId> path;
    for (std::size_t i = a; i < nd.side(k, 0).size(); ++i) path.push_back(nd.side(k, 0)[i]);
    path.push_back(nd.cycle(k).reticulation);
    for (std::size_t i = b; i < nd.side(k, 1).size(); ++i) path.push_back(nd.side(k, 1)[i]);
    return path;
  }

  int bottom_key(int net, std::uint32_t k, std::uint32_t a, std::uint32_t b) {
    return intern_key(net, merged_key(nets_[net], bottom_path(net, k, a, b)));
  }

  // Key after contracting the root edge to side s of a cycle-top prime.
  int contract_top_child(int net, const PrimeKey& p, int s) {
    const auto& nd = nets_[net];
    NodeId u = nd.at(p.id, s, s == 0 ? p.alpha : p.beta);
    std::vector<PrimeKey> next{s == 0 ? nd.top(p.id, p.alpha + 1, p.beta) : nd.top(p.id, p.alpha, p.beta + 1)};
    const auto& o = nd.offpath[u.value];
    next.insert(next.end(), o.begin(), o.end());
    return intern_key(net, make_key(std::move(next)));
  }

  PEntry fp_compute(int p1, int p2) {
    const PrimeInfo& a = primes_[0][static_cast<std::size_t>(p1)];
    const PrimeInfo& b = primes_[1][static_cast<std::size_t>(p2)];
    PEntry best{Cost::infinity(), PChoice::Singleton, {}};
    if (a.leaves != b.leaves) return best;
    const PrimeKey pa = a.key;
    const PrimeKey pb = b.key;
    bool leaf_a = pa.kind == Kind::Dangling && nets_[0].is_leaf(NodeId{pa.id});
    bool leaf_b = pb.kind == Kind::Dangling && nets_[1].is_leaf(NodeId{pb.id});
    if (leaf_a || leaf_b) {
      // A root over a single leaf: everything else collapses into the root.
      best.cost = Cost(leaf_a ? b.internal : a.internal);
      return best;
    }
    if (pa.kind == Kind::Dangling && pb.kind == Kind::Dangling) {
      best.cost = fc(intern_key(0, node_key(nets_[0], NodeId{pa.id})), intern_key(1, node_key(nets_[1], NodeId{pb.id})));
      best.choice = PChoice::Case1;
      return best;
    }
    if (pa.kind == Kind::Dangling || pb.kind == Kind::Dangling) {
      int dnet = pa.kind == Kind::Dangling ? 0 : 1;
      const PrimeKey& dp = dnet == 0 ? pa : pb;
      const PrimeKey& cp = dnet == 0 ? pb : pa;
      int cnet = 1 - dnet;
      const auto& nd = nets_[cnet];
      int below = intern_key(dnet, node_key(nets_[dnet], NodeId{dp.id}));
      auto path_cost = static_cast<std::uint64_t>(nd.side(cp.id, 0).size() - cp.alpha + nd.side(cp.id, 1).size() - cp.beta);
      {
        // Positions in the cyclic order: left child at alpha + 1, right child
        // at l - beta, with l the number of non-root cycle nodes.
        std::uint64_t l = nd.side(cp.id, 0).size() + nd.side(cp.id, 1).size() + 1;
        std::uint64_t v = cp.alpha;
        std::uint64_t w = l - cp.beta + 1;
        if (w - v - 2 != path_cost) throw std::logic_error("cycle collapse count disagrees with |w - v| - 2");
      }
      int bottom = bottom_key(cnet, cp.id, cp.alpha, cp.beta);
      Cost keep = dnet == 0 ? fc(below, bottom) : fc(bottom, below);
      consider(best, keep + Cost(path_cost), PChoice::KeepDangling);
      int whole = single(cnet, dnet == 0 ? p2 : p1);
      Cost cut = dnet == 0 ? fc(below, whole) : fc(whole, below);
      consider(best, cut + Cost(1), PChoice::ContractDangling);
      return best;
    }
    // Both cycle tops.
    for (int net = 0; net < 2; ++net) {
      const PrimeKey& p = net == 0 ? pa : pb;
      for (int s = 0; s < 2; ++s) {
        std::uint32_t pos = s == 0 ? p.alpha : p.beta;
        if (pos >= nets_[net].side(p.id, s).size()) continue;
        int next = contract_top_child(net, p, s);
        Cost c = net == 0 ? fc(next, single(1, p2)) : fc(single(0, p1), next);
        consider(best, c + Cost(1), PChoice::RootChild,
                 {static_cast<std::uint32_t>(net), static_cast<std::uint32_t>(s), 0, 0, 0});
      }
    }
    const auto& n1 = nets_[0];
    const auto& n2 = nets_[1];
    std::unordered_map<LeafSet, std::vector<std::pair<std::uint32_t, std::uint32_t>>, LeafSetHash> ends;
    for (std::uint32_t c = pb.alpha; c <= n2.side(pb.id, 0).size(); ++c) {
      for (std::uint32_t d = pb.beta; d <= n2.side(pb.id, 1).size(); ++d) {
        ends[n2.d[n2.at(pb.id, 0, c).value] | n2.d[n2.at(pb.id, 1, d).value]].emplace_back(c, d);
      }
    }
    for (std::uint32_t a2 = pa.alpha; a2 <= n1.side(pa.id, 0).size(); ++a2) {
      for (std::uint32_t b2 = pa.beta; b2 <= n1.side(pa.id, 1).size(); ++b2) {
        auto it = ends.find(n1.d[n1.at(pa.id, 0, a2).value] | n1.d[n1.at(pa.id, 1, b2).value]);
        if (it == ends.end()) continue;
        for (auto [c, d] : it->second) {
          for (std::uint32_t crossed = 0; crossed < 2; ++crossed) {
            Cost cost = fb(pa, pb, a2, b2, c, d, crossed != 0);
            consider(best, cost, PChoice::Bottom, {a2, b2, c, d, crossed});
          }
        }
      }
    }
    return best;
  }

  std::pair<LatRange, LatRange> laterals(const PrimeKey& p, std::uint32_t a, std::uint32_t b) const {
    return {LatRange{p.id, 0, static_cast<int>(p.alpha), static_cast<int>(a) - 1},
            LatRange{p.id, 1, static_cast<int>(p.beta), static_cast<int>(b) - 1}};
  }

  Cost fb(const PrimeKey& pa, const PrimeKey& pb, std::uint32_t a, std::uint32_t b, std::uint32_t c, std::uint32_t d,
          bool crossed) {
    const auto& n1 = nets_[0];
    const auto& n2 = nets_[1];
    auto edges = static_cast<std::uint64_t>((n1.side(pa.id, 0).size() - a) + (n1.side(pa.id, 1).size() - b) +
                                            (n2.side(pb.id, 0).size() - c) + (n2.side(pb.id, 1).size() - d));
    auto [la, lb] = laterals(pa, a, b);
    auto [lc, ld] = laterals(pb, c, d);
    Cost lat = crossed ? fl(la, ld) + fl(lb, lc) : fl(la, lc) + fl(lb, ld);
    if (lat.is_infinite()) return lat;
    return Cost(edges) + lat + fc(bottom_key(0, pa.id, a, b), bottom_key(1, pb.id, c, d));
  }

  LeafSet lateral_leaves(int net, const LatRange& r) const {
    const auto& nd = nets_[net];
    return nd.d[nd.at(r.cycle, r.side, static_cast<std::size_t>(r.lo)).value] -
           nd.d[nd.at(r.cycle, r.side, static_cast<std::size_t>(r.hi + 1)).value];
  }

  bool lateral_valid(const LatRange& x, const LatRange& y) const {
    if (x.empty() || y.empty()) return x.empty() == y.empty();
    return lateral_leaves(0, x) == lateral_leaves(1, y);
  }

  static LatKey lat_key(const LatRange& x, const LatRange& y) {
    return {x.cycle, static_cast<std::uint32_t>(x.side), static_cast<std::uint32_t>(x.lo),
            static_cast<std::uint32_t>(x.hi), y.cycle, static_cast<std::uint32_t>(y.side),
            static_cast<std::uint32_t>(y.lo), static_cast<std::uint32_t>(y.hi)};
  }

  std::vector<NodeId> range_nodes(int net, const LatRange& r) const {
    const auto& sd = nets_[net].side(r.cycle, r.side);
    return {sd.begin() + r.lo, sd.begin() + r.hi + 1};
  }

  Cost fl(const LatRange& x, const LatRange& y) {
    ++fl_calls_;
    if (x.empty() && y.empty()) return Cost(0);
    if (!lateral_valid(x, y)) return Cost::infinity();
    auto key = lat_key(x, y);
    if (auto it = memo_l_.find(key); it != memo_l_.end()) return it->second.cost;
    LEntry best{Cost::infinity(), false, 0, 0};
    int full1 = intern_key(0, merged_key(nets_[0], range_nodes(0, x)));
    int full2 = intern_key(1, merged_key(nets_[1], range_nodes(1, y)));
    best.cost = fc(full1, full2) + Cost(static_cast<std::uint64_t>((x.hi - x.lo) + (y.hi - y.lo)));
    for (int k = x.lo; k < x.hi; ++k) {
      LatRange x1{x.cycle, x.side, x.lo, k};
      LatRange x2{x.cycle, x.side, k + 1, x.hi};
      for (int k2 = y.lo; k2 < y.hi; ++k2) {
        LatRange y1{y.cycle, y.side, y.lo, k2};
        if (!lateral_valid(x1, y1)) continue;
        LatRange y2{y.cycle, y.side, k2 + 1, y.hi};
        Cost c = fl(x1, y1) + fl(x2, y2);
        if (c < best.cost) best = LEntry{c, true, k, k2};
      }
    }
    memo_l_.emplace(key, best);
    return best.cost;
  }

  // Traceback.
  std::uint32_t find(int net, std::uint32_t x) {
    auto& p = parent_[net];
    while (p[x] != x) {
      p[x] = p[p[x]];
      x = p[x];
    }
    return x;
  }
  void unite(int net, NodeId a, NodeId b) {
    auto ra = find(net, a.value);
    auto rb = find(net, b.value);
    if (ra != rb) parent_[net][rb] = ra;
  }

  void trace_c(int k1, NodeId g1, int k2, NodeId g2) {
    const KeyInfo& a = keys_[0][static_cast<std::size_t>(k1)];
    const KeyInfo& b = keys_[1][static_cast<std::size_t>(k2)];
    if (a.key.bare_leaf || b.key.bare_leaf) return;
    if (a.primes.size() == 1 && b.primes.size() == 1) {
      trace_p(a.primes[0], g1, b.primes[0], g2);
      return;
    }
    auto r = reduce(k1, k2);
    for (const auto& f : r.fired) unite(f.net, f.net == 0 ? g1 : g2, f.node);
    auto pairs = match(r.k1, r.k2);
    for (auto [p, q] : *pairs) trace_p(p, g1, q, g2);
  }

  void trace_p(int p1, NodeId g1, int p2, NodeId g2) {
    PEntry e = fp(p1, p2);
    const PrimeKey pa = primes_[0][static_cast<std::size_t>(p1)].key;
    const PrimeKey pb = primes_[1][static_cast<std::size_t>(p2)].key;
    switch (e.choice) {
      case PChoice::Singleton: {
        for (int net = 0; net < 2; ++net) {
          const auto& info = primes_[net][static_cast<std::size_t>(net == 0 ? p1 : p2)];
          NodeId g = net == 0 ? g1 : g2;
          info.nodes.for_each([&](std::size_t x) {
            NodeId u{static_cast<std::uint32_t>(x)};
            if (!nets_[net].is_leaf(u)) unite(net, g, u);
          });
        }
        return;
      }
      case PChoice::Case1: {
        NodeId u{pa.id};
        NodeId v{pb.id};
        trace_c(intern_key(0, node_key(nets_[0], u)), u, intern_key(1, node_key(nets_[1], v)), v);
        return;
      }
      case PChoice::KeepDangling: {
        int dnet = pa.kind == Kind::Dangling ? 0 : 1;
        const PrimeKey& dp = dnet == 0 ? pa : pb;
        const PrimeKey& cp = dnet == 0 ? pb : pa;
        int cnet = 1 - dnet;
        auto path = bottom_path(cnet, cp.id, cp.alpha, cp.beta);
        NodeId t = nets_[cnet].cycle(cp.id).reticulation;
        for (auto x : path) unite(cnet, t, x);
        NodeId u{dp.id};
        int below = intern_key(dnet, node_key(nets_[dnet], u));
        int bottom = bottom_key(cnet, cp.id, cp.alpha, cp.beta);
        if (dnet == 0) {
          trace_c(below, u, bottom, t);
        } else {
          trace_c(bottom, t, below, u);
        }
        return;
      }
      case PChoice::ContractDangling: {
        int dnet = pa.kind == Kind::Dangling ? 0 : 1;
        const PrimeKey& dp = dnet == 0 ? pa : pb;
        NodeId u{dp.id};
        unite(dnet, dnet == 0 ? g1 : g2, u);
        int below = intern_key(dnet, node_key(nets_[dnet], u));
        if (dnet == 0) {
          trace_c(below, g1, single(1, p2), g2);
        } else {
          trace_c(single(0, p1), g1, below, g2);
        }
        return;
      }
      case PChoice::RootChild: {
        int net = static_cast<int>(e.args[0]);
        int s = static_cast<int>(e.args[1]);
        const PrimeKey& p = net == 0 ? pa : pb;
        NodeId u = nets_[net].at(p.id, s, s == 0 ? p.alpha : p.beta);
        unite(net, net == 0 ? g1 : g2, u);
        int next = contract_top_child(net, p, s);
        if (net == 0) {
          trace_c(next, g1, single(1, p2), g2);
        } else {
          trace_c(single(0, p1), g1, next, g2);
        }
        return;
      }
      case PChoice::Bottom: {
        auto [a, b, c, d, crossed] = e.args;
        NodeId t1 = nets_[0].cycle(pa.id).reticulation;
        NodeId t2 = nets_[1].cycle(pb.id).reticulation;
        for (auto x : bottom_path(0, pa.id, a, b)) unite(0, t1, x);
        for (auto x : bottom_path(1, pb.id, c, d)) unite(1, t2, x);
        trace_c(bottom_key(0, pa.id, a, b), t1, bottom_key(1, pb.id, c, d), t2);
        auto [la, lb] = laterals(pa, a, b);
        auto [lc, ld] = laterals(pb, c, d);
        if (crossed != 0) {
          trace_l(la, ld);
          trace_l(lb, lc);
        } else {
          trace_l(la, lc);
          trace_l(lb, ld);
        }
        return;
      }
    }
  }

  void trace_l(const LatRange& x, const LatRange& y) {
    if (x.empty() && y.empty()) return;
    fl(x, y);
    const LEntry& e = memo_l_.at(lat_key(x, y));
    if (e.split) {
      trace_l(LatRange{x.cycle, x.side, x.lo, e.k1}, LatRange{y.cycle, y.side, y.lo, e.k2});
      trace_l(LatRange{x.cycle, x.side, e.k1 + 1, x.hi}, LatRange{y.cycle, y.side, e.k2 + 1, y.hi});
      return;
    }
    auto nodes1 = range_nodes(0, x);
    auto nodes2 = range_nodes(1, y);
    for (auto u : nodes1) unite(0, nodes1.front(), u);
    for (auto u : nodes2) unite(1, nodes2.front(), u);
    trace_c(intern_key(0, merged_key(nets_[0], nodes1)), nodes1.front(), intern_key(1, merged_key(nets_[1], nodes2)),
            nodes2.front());
  }

  std::array<NetData, 2> nets_;
  const LeafUniverse& universe_;
  std::array<std::deque<PrimeInfo>, 2> primes_;
  std::array<std::unordered_map<PrimeKey, int, PrimeHash>, 2> prime_ids_;
  std::array<std::deque<KeyInfo>, 2> keys_;
  std::array<std::unordered_map<CompositeKey, int, KeyHash>, 2> key_ids_;
  std::unordered_map<std::uint64_t, Cost> memo_c_;
  std::unordered_map<std::uint64_t, PEntry> memo_p_;
  std::unordered_map<LatKey, LEntry, LatKeyHash> memo_l_;
  std::array<std::vector<std::uint32_t>, 2> parent_;
  std::size_t fl_calls_ = 0;
  int top1_ = 0;
  int top2_ = 0;
};

void check_input(const Network& n) {
  if (!is_weakly_galled(n)) throw Error(ErrorCode::NotWeaklyGalled, "input is not a weakly galled tree");
  if (auto u = find_degree2_node(n)) {
    throw Error(ErrorCode::Degree2Node, "node " + n.display_name(*u) + " has in-degree 1 and out-degree 1");
  }
}

}  // namespace

CompositeKey decompose(const Network& n, NodeId u) {
  NetData nd(n, universe_of(n));
  return node_key(nd, u);
}

Network materialize(const Network& n, const CompositeKey& key) {
  Network out;
  if (key.bare_leaf) {
    auto leaf = out.add_node();
    out.set_label(leaf, n.label(*key.bare_leaf));
    return out;
  }
  NetData nd(n, universe_of(n));
  auto root = out.add_node("root");
  Bits nodes(n.next_id().value);
  std::vector<NodeId> tops;
  for (const auto& p : key.primes) {
    for (auto c : nd.children(p)) {
      nodes |= nd.reach[c.value];
      tops.push_back(c);
    }
  }
  std::unordered_map<std::uint32_t, NodeId> copy;
  nodes.for_each([&](std::size_t x) {
    NodeId u{static_cast<std::uint32_t>(x)};
    auto v = out.add_node(n.name(u));
    if (n.is_leaf(u)) out.set_label(v, n.label(u));
    copy.emplace(u.value, v);
  });
  nodes.for_each([&](std::size_t x) {
    NodeId u{static_cast<std::uint32_t>(x)};
    for (auto c : n.children(u)) {
      if (auto it = copy.find(c.value); it != copy.end()) out.add_edge(copy.at(u.value), it->second);
    }
  });
  for (auto c : tops) out.add_edge(root, copy.at(c.value));
  return out;
}

DpResult solve(const Network& n1, const Network& n2, const DpOptions& options) {
  check_input(n1);
  check_input(n2);
  if (n1.leaf_labels() != n2.leaf_labels()) throw Error(ErrorCode::LeafSetMismatch, "networks have different leaf sets");
  auto universe = universe_of(n1);
  Solver solver(n1, n2, universe);
  DpResult res;
  res.delta = solver.top();
  if (options.traceback && !res.delta.is_infinite()) {
    auto groups = solver.trace();
    Network m1 = quotient(n1, groups[0]);
    Network m2 = quotient(n2, groups[1]);
    auto expected = (n1.internal_count() + n2.internal_count() - res.delta.value()) / 2;
    if (m1.internal_count() != expected || !is_valid(m1) || !is_valid(m2)) {
      throw std::logic_error("traceback produced an inconsistent contraction");
    }
    auto phi = find_isomorphism(m1, m2);
    if (!phi) throw std::logic_error("traceback contractions are not isomorphic");
    for (std::size_t k = 0; k < groups[0].size(); ++k) {
      NodeId id{static_cast<std::uint32_t>(k)};
      res.w1.parts[id] = groups[0][k];
      res.w2.parts[id] = groups[1][phi->at(id).value];
    }
    res.common = std::move(m1);
  }
  res.telemetry = solver.telemetry();
  return res;
}

}  // namespace mcc
