#include <doctest.h>

#include <fstream>
#include <sstream>

#include "qie/diagram.hpp"
#include "qie/error.hpp"
#include "support.hpp"

using namespace qie;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_SUITE("diagram") {

TEST_CASE("text and JSON forms round-trip") {
  for (auto name : {"hopfsum", "aslink:1", "aslink:2", "aslink:3", "trefoil", "figure8", "unknot", "hopf"}) {
    CAPTURE(name);
    const auto d = generate(name);
    CHECK(parse_link(serialize(d)) == d);
    CHECK(parse_link(to_text(d)) == d);
  }
}

TEST_CASE("canonical JSON layout") {
  const auto s = serialize(generate("hopf"));
  CHECK(s == R"({"name":"hopf","arcs":2,"crossings":[{"r":1,"u":1,"o":2,"s":1},{"r":2,"u":2,"o":1,"s":1}]})");
}

TEST_CASE("parse errors carry positions") {
  try {
    parse_link("# arcs: 3\nc1: x2 = x1 * x3\nc2: x3 = x2 ? x1\n");
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("line 3") != std::string::npos);
  }
  CHECK_THROWS_AS(parse_link("{\"arcs\": 2, \"crossings\": [ {\"r\":1} ]}"), ParseError);
  CHECK_THROWS_AS(parse_link("{\"arcs\": 2, "), ParseError);
  CHECK_THROWS_AS(parse_link("{\"arcs\":2,\"crossings\":[{\"r\":1,\"u\":1,\"o\":2,\"s\":2}]}"), ParseError);
}

TEST_CASE("strict validation") {
  // Arc 3 appears only as an over-strand.
  LinkDiagram d{"bad", 3, {{0, 1, 2, Sign::Positive}, {1, 0, 2, Sign::Positive}}, false};
  const auto rep = validate(d, ValidationMode::Strict);
  REQUIRE_FALSE(rep.clean());
  CHECK(rep.violations.front() == "arc 3 never produced");
  CHECK(validate(d, ValidationMode::Lenient).clean());

  LinkDiagram out_of_range{"oor", 2, {{0, 1, 5, Sign::Positive}}, false};
  CHECK_FALSE(validate(out_of_range, ValidationMode::Lenient).clean());
  CHECK_THROWS_AS(parse_link("# arcs: 2\nc1: x1 = x2 * x3\n"), ValidationError);
  CHECK_THROWS_AS(parse_link("c1: x0 = x1 * x1\n"), ValidationError);

  for (auto name : {"hopfsum", "aslink:1", "aslink:2", "aslink:3", "trefoil", "trefoil_r1", "figure8", "unknot", "hopf"})
    CHECK(validate(generate(name), ValidationMode::Strict).clean());
}

TEST_CASE("tangles are validated leniently") {
  const auto d = parse_link("# tangle\n# arcs: 3\nc1: x2 = x1 * x3\n");
  CHECK(d.tangle);
  CHECK(d.crossings.size() == 1);
}

TEST_CASE("generator sizes") {
  CHECK(generate("hopfsum").crossings.size() == 4);
  CHECK(generate("aslink:1").crossings.size() == 45);
  CHECK(generate("aslink:1").arc_count == 45);
  CHECK(generate("aslink:2").crossings.size() == 85);
  CHECK(generate("aslink:2").arc_count == 85);
  CHECK(generate("aslink:3").crossings.size() == 125);
  CHECK(generate("aslink:3").arc_count == 125);
  CHECK(generate("aslink:8").crossings.size() == 325);
  CHECK_THROWS_AS(generate("aslink:9"), GuardError);
  CHECK_THROWS_AS(generate("aslink:x"), ParseError);
  CHECK_THROWS_AS(generate("nosuch"), ValidationError);
}

TEST_CASE("aslink:0 is the Hopf sum up to relabeling") {
  CHECK(same_up_to_relabeling(generate("aslink:0"), generate("hopfsum")));
  CHECK_FALSE(same_up_to_relabeling(generate("aslink:1"), generate("hopfsum")));
}

TEST_CASE("replication reproduces the embedded L2") {
  CHECK(replicate_allen_swenberg(2).crossings == generate("aslink:2").crossings);
  // Every extra block is a shifted copy of the first.
  const auto l3 = generate("aslink:3");
  const auto l2 = generate("aslink:2");
  for (std::size_t i = kAsPrefixArcs; i < l2.crossings.size(); ++i) {
    const auto& a = l2.crossings[i];
    const auto& b = l3.crossings[i + kAsBlockCrossings];
    CHECK(b.sign == a.sign);
    for (auto [x, y] : {std::pair{a.result, b.result}, {a.under_in, b.under_in}, {a.over, b.over}})
      if (x >= kAsPrefixArcs) CHECK(y == x + kAsBlockArcs);
  }
}

TEST_CASE("reference table transcriptions") {
  const auto h = parse_link(slurp(test::data_path("hopfsum_table.txt")));
  CHECK(serialize(h) == serialize(generate("hopfsum")));
  // The reference L1/L2 tables are not strict-valid as written (x2 is an
  // under-strand end three times); they parse leniently.
  CHECK_THROWS_AS(parse_link(slurp(test::data_path("aslink1_table.txt"))), ValidationError);
  const auto l1 = parse_link(slurp(test::data_path("aslink1_table.txt")), ValidationMode::Lenient);
  CHECK(l1.crossings.size() == 45);
  const auto l2 = parse_link(slurp(test::data_path("aslink2_table.txt")), ValidationMode::Lenient);
  CHECK(l2.crossings.size() == 85);
}

TEST_CASE("arc isomorphism search") {
  const auto t = generate("trefoil");
  // Relabel 1->3, 2->1, 3->2.
  LinkDiagram r = t;
  const ArcIndex map[] = {2, 0, 1};
  for (auto& c : r.crossings) c = {map[c.result], map[c.under_in], map[c.over], c.sign};
  const auto phi = find_arc_isomorphism(t.crossings, 3, r.crossings, 3);
  REQUIRE(phi);
  CHECK((*phi)[0] == 2);
  CHECK(same_up_to_relabeling(t, r));
  CHECK_FALSE(same_up_to_relabeling(t, generate("figure8")));
}

}  // TEST_SUITE
