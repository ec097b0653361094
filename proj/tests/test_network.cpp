#include <doctest.h>

#include "support.hpp"

using namespace mcc;

namespace {

ErrorCode validate_error(const RawNetwork& raw) {
  try {
    validate(raw);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("validate accepted an invalid network");
  return ErrorCode::IoError;
}

std::vector<std::string> labels_of(const LeafUniverse& u, const LeafSet& s) { return u.to_labels(s); }

}  // namespace

TEST_CASE("validate accepts the minimal network") {
  RawNetwork raw{{"r", "a"}, {{"r", "a"}}, {{"a", "1"}}};
  auto n = validate(raw);
  CHECK(n.node_count() == 2);
  CHECK(n.display_name(n.root()) == "r");
  CHECK(n.leaf_labels() == std::vector<std::string>{"1"});
}

TEST_CASE("validate reports the violated invariant") {
  CHECK(validate_error({{}, {{"r", "a"}, {"a", "r"}}, {}}) == ErrorCode::CyclicGraph);
  CHECK(validate_error({{}, {{"r", "a"}, {"s", "b"}}, {{"a", "1"}, {"b", "2"}}}) == ErrorCode::MultipleRoots);
  CHECK(validate_error({{}, {{"r", "r"}}, {}}) == ErrorCode::SelfLoop);
  CHECK(validate_error({{}, {{"r", "a"}, {"r", "b"}}, {{"a", "1"}}}) == ErrorCode::UnlabeledLeaf);
  CHECK(validate_error({{}, {{"r", "a"}, {"r", "b"}}, {{"a", "1"}, {"b", "1"}}}) == ErrorCode::DuplicateLabel);
  CHECK(validate_error({{}, {{"r", "a"}, {"r", "b"}, {"a", "x"}, {"b", "x"}}, {{"x", "1"}}}) ==
        ErrorCode::LeafWithInDegreeNot1);
}

TEST_CASE("topological order puts every edge forward") {
  auto g = fixture::g1();
  auto order = topological_order(g);
  REQUIRE(order.size() == g.node_count());
  std::map<NodeId, std::size_t> pos;
  for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
  for (auto [u, v] : g.edges()) CHECK(pos[u] < pos[v]);
  CHECK(order.front() == *g.find_by_name("r"));

  auto star = star_network({"1", "2", "3"});
  auto sorder = topological_order(star);
  CHECK(sorder.front() == star.root());
}

TEST_CASE("reachable leaves on G1") {
  auto g = fixture::g1();
  auto universe = universe_of(g);
  CHECK(labels_of(universe, reachable_leaves(g, *g.find_by_name("t"), universe)) == std::vector<std::string>{"1"});
  CHECK(labels_of(universe, reachable_leaves(g, *g.find_by_name("a"), universe)) ==
        std::vector<std::string>{"1", "2"});
  CHECK(labels_of(universe, reachable_leaves(g, g.root(), universe)) == g.leaf_labels());
}

TEST_CASE("isomorphism examples") {
  CHECK(is_isomorphic(fixture::g1(), fixture::g1()));
  CHECK_FALSE(is_isomorphic(fixture::t3a(), fixture::t3b()));
  auto a = fixture::g1();
  auto b = fixture::g1_swapped();
  auto phi = find_isomorphism(a, b);
  REQUIRE(phi.has_value());
  CHECK(b.display_name(phi->at(*a.find_by_name("a"))) == "b");
  CHECK(b.display_name(phi->at(*a.find_by_name("b"))) == "a");
}

TEST_CASE("network properties on random networks") {
  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    SplitMix64 rng(seed);
    auto n = fixture::random_network(3 + rng.below(6), rng.below(4), rng);
    REQUIRE(is_valid(n));
    auto universe = universe_of(n);
    auto d = all_reachable_leaves(n, universe);
    CHECK(d[n.root().value] == universe.make(n.leaf_labels()));
    auto order = topological_order(n);
    std::map<NodeId, std::size_t> pos;
    for (std::size_t i = 0; i < order.size(); ++i) pos[order[i]] = i;
    for (auto [u, v] : n.edges()) {
      CHECK(pos[u] < pos[v]);
      CHECK(d[v.value].is_subset_of(d[u.value]));
    }
    for (auto u : n.nodes()) {
      std::vector<std::string> expected;
      for (const auto& l : fixture::leaves_below(n, u)) expected.push_back(l);
      CHECK(universe.to_labels(d[u.value]) == expected);
    }
    auto copy = fixture::shuffled_copy(n, rng);
    CHECK(is_isomorphic(n, copy));
    CHECK(is_isomorphic(copy, n));
    CHECK(is_isomorphic(n, n));
  }
}

TEST_CASE("isomorphism rejects perturbed copies") {
  for (std::uint64_t seed = 1; seed <= 40; ++seed) {
    SplitMix64 rng(seed);
    auto n = random_wgt(4 + rng.below(4), rng.below(2), seed);
    auto edges = fixture::internal_edges(n);
    bool tested = false;
    for (auto [u, v] : edges) {
      if (!is_admissible(n, u, v)) continue;
      auto m = contract_admissible(n, u, v);
      CHECK_FALSE(is_isomorphic(n, m));
      tested = true;
      break;
    }
    CHECK(tested);
    // Swapping the labels of sibling leaves keeps the network.
    auto leaves = n.leaves();
    Network swapped = n;
    auto l0 = n.label(leaves[0]);
    auto l1 = n.label(leaves[1]);
    swapped.set_label(leaves[0], l1);
    swapped.set_label(leaves[1], l0);
    bool same_parent = n.parents(leaves[0]) == n.parents(leaves[1]);
    if (same_parent) CHECK(is_isomorphic(n, swapped));
  }
}

TEST_CASE("backtracking isomorphism agrees with the weakly galled canonical form") {
  int agreements = 0;
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    SplitMix64 rng(seed);
    auto [a, b] = fixture::related_pair(4, rng.below(2), seed);
    bool same = canonical_form(a) == canonical_form(b);
    CHECK(find_isomorphism(a, b).has_value() == same);
    agreements += same ? 1 : 0;
    auto c = fixture::shuffled_copy(a, rng);
    CHECK(canonical_form(a) == canonical_form(c));
  }
  CHECK(agreements > 0);
}

TEST_CASE("leaf sets") {
  LeafUniverse u({"b", "a", "c"});
  CHECK(u.labels() == std::vector<std::string>{"a", "b", "c"});
  auto s = u.make({"a", "c"});
  auto t = u.make({"c"});
  CHECK(t.is_subset_of(s));
  CHECK((s - t) == u.make({"a"}));
  CHECK((s & t) == t);
  CHECK((s | t) == s);
  CHECK(s.count() == 2);
  CHECK(u.format(s) == "{a,c}");
}
