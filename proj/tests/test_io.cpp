#include <doctest.h>

#include <filesystem>

#include "mcc/io.hpp"
#include "support.hpp"

using namespace mcc;

namespace {

ErrorCode parse_error(const std::string& text, Format format = Format::ENewick) {
  try {
    parse_network(text, format);
  } catch (const Error& e) {
    return e.code();
  }
  FAIL("parse accepted " << text);
  return ErrorCode::IoError;
}

std::vector<std::filesystem::path> corpus() {
  std::vector<std::filesystem::path> out;
  for (const auto& e : std::filesystem::directory_iterator(FIXTURE_DIR)) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

TEST_CASE("eNewick parse examples") {
  auto g = parse_enewick("(((1)#H1,2),(#H1,3));");
  CHECK(is_isomorphic(g, fixture::g1()));
  CHECK(is_isomorphic(parse_enewick("((1,2),3);"), fixture::t3a()));
  CHECK(is_isomorphic(parse_enewick(" ( (1 , 2) , 3 ) ;\n"), fixture::t3a()));
  CHECK(is_star(parse_enewick("(1,2,3);")));

  auto named = parse_enewick("((1,2)p,3)root;");
  CHECK(named.find_by_name("p").has_value());
  CHECK(named.display_name(named.root()) == "root");

  auto quoted = parse_enewick("('a b','it''s');");
  CHECK(quoted.leaf_labels() == std::vector<std::string>{"a b", "it's"});

  std::vector<std::string> warnings;
  auto lengths = parse_enewick("((1:0.5,2:1e-3):2,3);", &warnings);
  CHECK(is_isomorphic(lengths, fixture::t3a()));
  REQUIRE(warnings.size() == 3);
  CHECK(warnings[0].find("0.5") != std::string::npos);

  CHECK(is_isomorphic(parse_enewick("[x]((1,2)[y],3)[z];"), fixture::t3a()));
}

TEST_CASE("eNewick errors") {
  CHECK(parse_error("((1,2);") == ErrorCode::SyntaxError);
  CHECK(parse_error("((1,2),3)") == ErrorCode::SyntaxError);
  CHECK(parse_error("((1,),3);") == ErrorCode::SyntaxError);
  CHECK(parse_error("((1,2),3);x") == ErrorCode::SyntaxError);
  CHECK(parse_error("('abc,2);") == ErrorCode::SyntaxError);
  CHECK(parse_error("((1,#H1),2);") == ErrorCode::UnresolvedHybridTag);
  CHECK(parse_error("(((1)#H1,(2)#H1),3);") == ErrorCode::DuplicateHybridDefinition);
  CHECK(parse_error("((1,2),1);") == ErrorCode::DuplicateLabel);
  try {
    parse_enewick("((1,2)\n,3;");
    FAIL("missing parenthesis accepted");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::SyntaxError);
    CHECK(std::string(e.what()).rfind("2:", 0) == 0);
  }
}

TEST_CASE("eNewick writer") {
  CHECK(write_enewick(fixture::t3a()) == "((1,2),3);");
  CHECK(write_enewick(fixture::t3b()) == "((1,3),2);");
  CHECK(write_enewick(star_network({"3", "1", "2"})) == "(1,2,3);");
  auto g = write_enewick(fixture::g1());
  CHECK(g.find("#H1") != std::string::npos);
  CHECK(is_isomorphic(parse_enewick(g), fixture::g1()));
  CHECK(write_enewick(parse_enewick("('a b',c);")) == "('a b',c);");
  CHECK(write_network(fixture::t3a(), Format::ENewick) == "((1,2),3);\n");
  // Byte-stable under relabeling of node ids.
  for (std::uint64_t seed = 1; seed <= 100; ++seed) {
    SplitMix64 rng(seed);
    auto n = random_wgt(4 + seed % 10, seed % 4, seed);
    CHECK(write_enewick(fixture::shuffled_copy(n, rng)) == write_enewick(n));
  }
}

TEST_CASE("edge list parse and write") {
  auto g = parse_edgelist("r a\nr b\na t\nb t\nt x1\na x2\nb x3\n#leaves\nx1 1\nx2 2\nx3 3\n");
  CHECK(is_isomorphic(g, fixture::g1()));
  CHECK(is_isomorphic(parse_edgelist(write_edgelist(g)), g));
  CHECK(parse_error("r a b\n#leaves\na 1\n", Format::EdgeList) == ErrorCode::SyntaxError);
  CHECK(parse_error("r a\n#leaves\na 1\n#leaves\n", Format::EdgeList) == ErrorCode::SyntaxError);
  CHECK(parse_error("r a\n#bogus\n", Format::EdgeList) == ErrorCode::SyntaxError);
  CHECK(parse_error("r a\nr b\n#leaves\na 1\n", Format::EdgeList) == ErrorCode::UnlabeledLeaf);
  CHECK(parse_error("r a\na r\n#leaves\n", Format::EdgeList) == ErrorCode::CyclicGraph);
  auto dot = write_dot(g);
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(dot.find("red") != std::string::npos);
}

TEST_CASE("fixture corpus round trip") {
  auto files = corpus();
  REQUIRE(files.size() >= 10);
  for (const auto& path : files) {
    CAPTURE(path.string());
    auto format = path.extension() == ".edges" ? Format::EdgeList : Format::ENewick;
    auto n = parse_network(read_file(path.string()), format);
    for (auto out : {Format::ENewick, Format::EdgeList}) {
      CHECK(is_isomorphic(parse_network(write_network(n, out), out), n));
    }
  }
  CHECK_THROWS_AS(read_file(std::string(FIXTURE_DIR) + "/missing.nwk"), Error);
}

TEST_CASE("random round trips") {
  for (std::uint64_t seed = 1; seed <= 200; ++seed) {
    auto n = random_wgt(4 + seed % 15, seed % 4, seed);
    auto text = write_enewick(n);
    auto back = parse_enewick(text);
    CHECK(is_isomorphic(back, n));
    CHECK(write_enewick(back) == text);
    CHECK(is_isomorphic(parse_edgelist(write_edgelist(n)), n));
  }
}

TEST_CASE("token mutation fuzz") {
  const std::string alphabet = "(),;#H1:'[] a";
  std::size_t accepted = 0;
  for (std::uint64_t seed = 1; seed <= 2000; ++seed) {
    SplitMix64 rng(seed);
    auto text = write_enewick(random_wgt(3 + seed % 5, seed % 3, seed));
    auto edits = 1 + rng.below(3);
    for (std::size_t k = 0; k < edits; ++k) {
      auto pos = rng.below(text.size() + 1);
      switch (rng.below(3)) {
        case 0:
          if (pos < text.size()) text.erase(pos, 1);
          break;
        case 1:
          text.insert(pos, 1, alphabet[rng.below(alphabet.size())]);
          break;
        default:
          if (pos < text.size()) text[pos] = alphabet[rng.below(alphabet.size())];
      }
    }
    try {
      auto n = parse_enewick(text);
      CHECK(is_valid(n));
      ++accepted;
    } catch (const Error&) {
    }
  }
  CHECK(accepted > 0);
}
