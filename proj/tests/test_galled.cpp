#include <doctest.h>

#include "support.hpp"

using namespace mcc;

namespace {

std::vector<std::string> set_labels(const LeafUniverse& u, const LeafSet& s) { return u.to_labels(s); }

std::set<std::vector<std::string>> clade_sets(const std::vector<CladeEntry>& entries, const LeafUniverse& u) {
  std::set<std::vector<std::string>> out;
  for (const auto& e : entries) out.insert(set_labels(u, e.leaves));
  return out;
}

// Sides of lengths p and q under root r with reticulation t; each side node
// and t carry one leaf.
Network side_cycle(std::size_t p, std::size_t q) {
  std::vector<std::pair<std::string, std::string>> edges;
  std::map<std::string, std::string> labels;
  int leaf = 0;
  auto add_leaf = [&](const std::string& parent) {
    auto name = "x" + std::to_string(++leaf);
    edges.emplace_back(parent, name);
    labels[name] = std::to_string(leaf);
  };
  for (auto [len, tag] : {std::pair{p, "a"}, std::pair{q, "b"}}) {
    std::string prev = "r";
    for (std::size_t i = 1; i <= len; ++i) {
      auto cur = std::string(tag) + std::to_string(i);
      edges.emplace_back(prev, cur);
      add_leaf(cur);
      prev = cur;
    }
    edges.emplace_back(prev, "t");
  }
  add_leaf("t");
  return fixture::build(edges, labels);
}

// Independent 1-/2-clade enumeration straight from the cycle definitions.
std::pair<std::set<std::set<std::string>>, std::set<std::set<std::string>>> direct_clades(const Network& n) {
  std::set<std::set<std::string>> one;
  std::set<std::set<std::string>> two;
  std::set<NodeId> internal_to_cycle;
  for (const auto& c : cycles(n)) {
    internal_to_cycle.insert(c.side_a.begin(), c.side_a.end());
    internal_to_cycle.insert(c.side_b.begin(), c.side_b.end());
    auto join = [&](NodeId x, NodeId y) {
      auto s = fixture::leaves_below(n, x);
      auto o = fixture::leaves_below(n, y);
      s.insert(o.begin(), o.end());
      two.insert(s);
    };
    for (auto x : c.side_a) {
      for (auto y : c.side_b) join(x, y);
    }
    for (auto x : c.side_a) join(x, c.reticulation);
    for (auto y : c.side_b) join(y, c.reticulation);
  }
  for (auto u : n.internal_nodes()) {
    if (internal_to_cycle.count(u) == 0) one.insert(fixture::leaves_below(n, u));
  }
  return {one, two};
}

std::set<std::set<std::string>> as_sets(const std::vector<CladeEntry>& entries, const LeafUniverse& u) {
  std::set<std::set<std::string>> out;
  for (const auto& e : entries) {
    auto v = u.to_labels(e.leaves);
    out.insert(std::set<std::string>(v.begin(), v.end()));
  }
  return out;
}

}  // namespace

TEST_CASE("weakly galled recognition") {
  CHECK(is_weakly_galled(fixture::t3a()));
  CHECK(is_weakly_galled(fixture::g1()));
  // Two cycles sharing the edge r->a.
  auto shared = fixture::build({{"r", "a"}, {"r", "b"}, {"a", "t"}, {"b", "t"}, {"a", "c"}, {"r", "s"}, {"c", "s2"},
                                {"s", "s2"}, {"t", "x1"}, {"s2", "x2"}, {"c", "x3"}, {"b", "x4"}, {"s", "x5"}},
                               {{"x1", "1"}, {"x2", "2"}, {"x3", "3"}, {"x4", "4"}, {"x5", "5"}});
  CHECK_FALSE(is_weakly_galled(shared));
  // A reticulation of in-degree 3.
  auto triple = fixture::build({{"r", "a"}, {"r", "b"}, {"r", "c"}, {"a", "t"}, {"b", "t"}, {"c", "t"}, {"t", "x1"},
                                {"a", "x2"}, {"b", "x3"}, {"c", "x4"}},
                               {{"x1", "1"}, {"x2", "2"}, {"x3", "3"}, {"x4", "4"}});
  CHECK_FALSE(is_weakly_galled(triple));
}

TEST_CASE("cycle extraction") {
  CHECK(cycles(fixture::t3a()).empty());
  auto g = fixture::g1();
  auto cs = cycles(g);
  REQUIRE(cs.size() == 1);
  CHECK(cs[0].root == *g.find_by_name("r"));
  CHECK(cs[0].reticulation == *g.find_by_name("t"));
  CHECK(cs[0].side_a.size() == 1);
  CHECK(cs[0].side_b.size() == 1);
  std::set<NodeId> sides{cs[0].side_a[0], cs[0].side_b[0]};
  CHECK(sides == std::set<NodeId>{*g.find_by_name("a"), *g.find_by_name("b")});
  CHECK(cs[0].order().size() == 4);

  // A second cycle hanging below the first reticulation.
  auto stacked = fixture::build({{"r", "a"}, {"r", "b"}, {"a", "t"}, {"b", "t"}, {"t", "c"}, {"t", "d"}, {"c", "s"},
                                 {"d", "s"}, {"s", "x1"}, {"a", "x2"}, {"b", "x3"}, {"c", "x4"}, {"d", "x5"}},
                                {{"x1", "1"}, {"x2", "2"}, {"x3", "3"}, {"x4", "4"}, {"x5", "5"}});
  CHECK(is_weakly_galled(stacked));
  CHECK(cycles(stacked).size() == 2);
  try {
    auto shared = fixture::build({{"r", "a"}, {"r", "b"}, {"r", "c"}, {"a", "t"}, {"b", "t"}, {"c", "t"},
                                  {"t", "x1"}, {"a", "x2"}, {"b", "x3"}, {"c", "x4"}},
                                 {{"x1", "1"}, {"x2", "2"}, {"x3", "3"}, {"x4", "4"}});
    cycles(shared);
    FAIL("cycles accepted a non weakly galled network");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotWeaklyGalled);
  }
}

TEST_CASE("clade examples") {
  auto g = fixture::g1();
  auto u = universe_of(g);
  using Sets = std::set<std::vector<std::string>>;
  CHECK(clade_sets(one_clades(g, u), u) == Sets{{"1", "2", "3"}, {"1"}});
  CHECK(clade_sets(two_clades(g, u), u) == Sets{{"1", "2", "3"}, {"1", "2"}, {"1", "3"}});
  auto t = fixture::t3a();
  auto ut = universe_of(t);
  CHECK(clade_sets(one_clades(t, ut), ut) == Sets{{"1", "2", "3"}, {"1", "2"}});
  CHECK(two_clades(t, ut).empty());
  auto star = star_network({"1", "2", "3"});
  CHECK(clade_sets(one_clades(star, ut), ut) == Sets{{"1", "2", "3"}});

  for (std::size_t p = 1; p <= 3; ++p) {
    for (std::size_t q = 1; q <= 3; ++q) {
      auto n = side_cycle(p, q);
      auto un = universe_of(n);
      std::size_t pairs = 0;
      for (const auto& e : two_clades(n, un)) pairs += e.pairs.size();
      CHECK(pairs == p * q + p + q);
    }
  }
}

TEST_CASE("clade index matches direct enumeration") {
  for (std::uint64_t seed = 1; seed <= 80; ++seed) {
    SplitMix64 rng(seed);
    auto n = random_wgt(3 + rng.below(5), rng.below(3), seed);
    auto u = universe_of(n);
    auto [one, two] = direct_clades(n);
    CHECK(as_sets(one_clades(n, u), u) == one);
    CHECK(as_sets(two_clades(n, u), u) == two);
    CHECK(clade_index(n, u).unicity_holds());
  }
}

TEST_CASE("closure and conservation under admissible contractions") {
  std::size_t samples = 0;
  for (std::uint64_t seed = 1; seed <= 120; ++seed) {
    SplitMix64 rng(seed);
    auto n = random_wgt(3 + rng.below(6), rng.below(3), seed);
    auto u = universe_of(n);
    auto src = clade_index(n, u);
    for (auto [x, y] : fixture::internal_edges(n)) {
      if (!is_admissible(n, x, y)) continue;
      auto m = contract_admissible(n, x, y);
      CHECK(is_weakly_galled(m));
      CHECK(cycles(m).size() <= cycles(n).size());
      auto dst = clade_index(m, u);
      for (const auto& [s, nodes] : dst.one) CHECK((src.one.count(s) != 0 || src.two.count(s) != 0));
      for (const auto& [s, pairs] : dst.two) CHECK(src.two.count(s) != 0);
      if (!find_degree2_node(m)) CHECK(dst.unicity_holds());
      ++samples;
    }
  }
  CHECK(samples > 300);
}

TEST_CASE("reduction rule examples") {
  auto g = fixture::g1();
  auto same = apply_rules(g, g);
  CHECK(same.count == 0);
  auto r = apply_rules(fixture::t3a(), fixture::t3b());
  CHECK(r.count == 2);
  CHECK(is_star(r.n1));
  CHECK(is_star(r.n2));
  REQUIRE(r.steps.size() == 2);
  CHECK(r.steps[0].network == 1);
  CHECK(r.steps[1].network == 2);
  CHECK(r.steps[0].rule == 1);

  auto cat = diameter_pair(4, 3, 3);
  auto d = apply_rules(cat.first, cat.second);
  CHECK(d.count == 4);
  CHECK(is_star(d.n1));
  CHECK(is_star(d.n2));

  try {
    apply_rules(fixture::t3a(), star_network({"1", "2", "4"}));
    FAIL("mismatched leaves accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LeafSetMismatch);
  }
}
