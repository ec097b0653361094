#include <doctest.h>

#include <stdexcept>

#include "mcc/dp.hpp"
#include "mcc/oracle.hpp"
#include "support.hpp"

using namespace mcc;

namespace {

// Subnetwork induced by everything reachable from u, with u as root.
Network below(const Network& n, NodeId u) {
  RawNetwork raw;
  std::vector<NodeId> stack{u};
  std::set<NodeId> seen{u};
  while (!stack.empty()) {
    auto x = stack.back();
    stack.pop_back();
    raw.nodes.push_back("n" + std::to_string(x.value));
    if (n.is_leaf(x)) raw.labels["n" + std::to_string(x.value)] = n.label(x);
    for (auto c : n.children(x)) {
      raw.edges.emplace_back("n" + std::to_string(x.value), "n" + std::to_string(c.value));
      if (seen.insert(c).second) stack.push_back(c);
    }
  }
  return validate(raw);
}

void check_result(const Network& a, const Network& b, const DpResult& r) {
  REQUIRE_FALSE(r.delta.is_infinite());
  CHECK(validate_witness(a, r.common, r.w1));
  CHECK(validate_witness(b, r.common, r.w2));
  CHECK(r.delta.value() == static_cast<std::uint64_t>(delta_mcc_from_common(a, b, r.common)));
}

}  // namespace

TEST_CASE("cost arithmetic") {
  Cost inf = Cost::infinity();
  CHECK((Cost(2) + Cost(3)) == Cost(5));
  CHECK((Cost(2) + inf).is_infinite());
  CHECK((inf + inf).is_infinite());
  CHECK(Cost(1) < Cost(2));
  CHECK(Cost(7) < inf);
  CHECK_FALSE(inf < Cost(7));
  CHECK_FALSE(inf < inf);
  CHECK(std::min(inf, Cost(4)) == Cost(4));
  CHECK(inf.to_string() == "inf");
  CHECK(Cost(9).to_string() == "9");
  CHECK_THROWS_AS(inf.value(), std::logic_error);
}

TEST_CASE("dp examples") {
  auto g = fixture::g1();
  auto same = solve(g, g);
  CHECK(same.delta == Cost(0));
  CHECK(is_isomorphic(same.common, g));

  auto ab = solve(fixture::t3a(), fixture::t3b());
  CHECK(ab.delta == Cost(2));
  CHECK(is_star(ab.common));
  check_result(fixture::t3a(), fixture::t3b(), ab);

  auto d = diameter_pair(5, 6, 4);
  auto dr = solve(d.first, d.second);
  CHECK(dr.delta == Cost(8));
  CHECK(is_star(dr.common));

  auto cat = diameter_pair(4, 3, 3);
  CHECK(solve(cat.first, cat.second).delta == Cost(4));

  auto no_trace = solve(d.first, d.second, {false});
  CHECK(no_trace.delta == Cost(8));
  CHECK(no_trace.telemetry.fp_entries > 0);
}

TEST_CASE("decompose and materialize") {
  auto g = fixture::g1();
  auto k = decompose(g, g.root());
  REQUIRE(k.primes.size() == 1);
  CHECK(k.primes[0].kind == PrimeKey::Kind::CycleTop);
  CHECK(k.primes[0].alpha == 0);
  CHECK(k.primes[0].beta == 0);
  CHECK_FALSE(k.bare_leaf.has_value());
  CHECK(is_isomorphic(materialize(g, k), g));

  auto t = fixture::t3a();
  auto kt = decompose(t, t.root());
  CHECK(kt.primes.size() == 2);
  CHECK(std::all_of(kt.primes.begin(), kt.primes.end(),
                    [](const PrimeKey& p) { return p.kind == PrimeKey::Kind::Dangling; }));
  CHECK(is_isomorphic(materialize(t, kt), t));
  auto leaf = decompose(t, *t.find_leaf("3"));
  CHECK(leaf.bare_leaf.has_value());
  CHECK(materialize(t, leaf).leaf_labels() == std::vector<std::string>{"3"});

  for (std::uint64_t seed = 1; seed <= 60; ++seed) {
    auto n = random_wgt(4 + seed % 6, seed % 3, seed);
    auto cm = cycle_map(n);
    for (auto u : n.internal_nodes()) {
      if (cm.is_cycle_internal(u)) continue;
      CHECK(is_isomorphic(materialize(n, decompose(n, u)), below(n, u)));
    }
  }
}

TEST_CASE("dp rejects unsupported inputs") {
  auto chain = fixture::build({{"r", "p"}, {"p", "q"}, {"q", "x1"}, {"q", "x2"}, {"r", "x3"}},
                              {{"x1", "1"}, {"x2", "2"}, {"x3", "3"}});
  try {
    solve(chain, fixture::t3a());
    FAIL("degree-2 node accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Degree2Node);
  }
  auto triple = fixture::build({{"r", "a"}, {"r", "b"}, {"r", "c"}, {"a", "t"}, {"b", "t"}, {"c", "t"}, {"t", "x1"},
                                {"a", "x2"}, {"b", "x3"}, {"c", "x4"}},
                               {{"x1", "1"}, {"x2", "2"}, {"x3", "3"}, {"x4", "4"}});
  try {
    solve(triple, star_network({"1", "2", "3", "4"}));
    FAIL("non weakly galled input accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::NotWeaklyGalled);
  }
  try {
    solve(fixture::t3a(), star_network({"1", "2", "4"}));
    FAIL("mismatched leaves accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LeafSetMismatch);
  }
}

TEST_CASE("dp properties on random pairs") {
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    SplitMix64 rng(seed);
    auto leaves = 3 + rng.below(10);
    Network a;
    Network b;
    if (seed % 2 == 0) {
      auto p = fixture::related_pair(leaves, rng.below(4), seed);
      a = p.first;
      b = p.second;
    } else {
      a = random_wgt(leaves, rng.below(3), seed);
      b = random_wgt(leaves, rng.below(3), seed + 1000);
    }
    auto r = solve(a, b);
    check_result(a, b, r);
    CHECK(r.delta.value() <= a.internal_count() + b.internal_count() - 2);
    CHECK(solve(b, a).delta == r.delta);
    CHECK((r.delta == Cost(0)) == is_isomorphic(a, b));
    CHECK(solve(a, a).delta == Cost(0));
    CHECK(solve(a, b, {false}).delta == r.delta);
  }
}

TEST_CASE("dp agrees with the exact oracle") {
  std::size_t pairs = 0;
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    SplitMix64 rng(seed);
    auto leaves = 3 + rng.below(4);
    auto [a, b] = fixture::related_pair(leaves, rng.below(3), seed);
    if (a.internal_count() > 8 || b.internal_count() > 8) continue;
    CHECK(solve(a, b).delta == Cost(exact_mcc(a, b).delta));
    ++pairs;
  }
  CHECK(pairs > 80);
}
