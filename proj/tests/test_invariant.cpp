#include <doctest.h>

#include <set>

#include "qie/error.hpp"
#include "support.hpp"

using namespace qie;

TEST_SUITE("invariant") {

TEST_CASE("polynomial text") {
  EnhancedPolynomial p;
  CHECK(p.to_text() == "0");
  p.terms = {{1, 25}, {2, 360}, {3, 840}};
  CHECK(p.to_text() == "25q^1 + 360q^2 + 840q^3");
  CHECK(p.coefficient_sum() == 1225);
  CHECK(p.degree() == 3);
  CHECK(parse_polynomial(p.to_text()) == p);
  CHECK(parse_polynomial("0") == EnhancedPolynomial{});
  CHECK_THROWS_AS(parse_polynomial("25q + 3"), ParseError);
  CHECK_THROWS_AS(parse_polynomial(""), ParseError);
}

TEST_CASE("image size and partitions") {
  const std::vector<Element> f = {4, 7, 7, 4, 9};
  CHECK(image_size(f) == 3);
  const auto part = color_partition(f);
  CHECK(part.to_string() == "{{1,4},{2,3},{5}}");
  CHECK(image_size(std::vector<Element>{}) == 0);
}

TEST_CASE("hopf sum census over Z5") {
  const auto h = solve(generate("hopfsum"), test::symplectic(5));
  CHECK(counting_invariant(h) == 1225);
  const auto poly = enhanced_polynomial(h);
  CHECK(poly.to_text() == "25q^1 + 360q^2 + 840q^3");
  CHECK(poly.degree() == 3);

  const auto census = partition_census(h);
  REQUIRE(census.count(1) == 1);
  REQUIRE(census.at(1).size() == 1);
  CHECK(census.at(1)[0].multiplicity == 25);
  std::set<std::string> two;
  for (const auto& e : census.at(2)) two.insert(e.partition.to_string());
  CHECK(two == std::set<std::string>{"{{1,2,3},{4}}", "{{1,4},{2,3}}", "{{1},{2,3,4}}"});

  for (const auto& [k, entries] : census) {
    std::uint64_t sum = 0;
    for (const auto& e : entries) sum += e.multiplicity;
    CHECK(sum == poly.terms.at(k));
  }
}

TEST_CASE("coefficient sums match counts") {
  for (auto name : {"hopfsum", "aslink:1", "trefoil", "figure8"})
    for (auto spec : {"symplectic:p=2,n=1", "symplectic:p=3,n=1", "takasaki:n=5"}) {
      const auto h = solve(generate(name), build_quandle(spec));
      CHECK(enhanced_polynomial(h).coefficient_sum() == counting_invariant(h));
    }
}

TEST_CASE("distinguishes") {
  const auto q = test::symplectic(5);
  const auto h = enhanced_polynomial(solve(generate("hopfsum"), q));
  const auto l1 = enhanced_polynomial(solve(generate("aslink:1"), q));
  const auto v = distinguishes(h, l1);
  CHECK(v.enhanced);
  CHECK_FALSE(v.counting);
  CHECK_FALSE(distinguishes(h, h).enhanced);
  CHECK_FALSE(distinguishes(h, h).counting);
}

TEST_CASE("block correspondence") {
  CHECK(block_source_arc(0) == 25);
  CHECK(block_source_arc(1) == 4);
  for (std::size_t j = 0; j < 40; ++j) CHECK(block_source_arc(j) < 45);
}

TEST_CASE("extend_coloring") {
  for (int p : {2, 3}) {
    const auto q = test::symplectic(p);
    const auto h1 = solve(generate("aslink:1"), q);
    const auto l2 = generate("aslink:2");
    std::set<std::vector<Element>> images;
    for (std::size_t i = 0; i < h1.size(); ++i) {
      const auto f1 = h1.coloring(i);
      const auto f2 = extend_coloring(f1, 2, q);
      REQUIRE(f2.size() == l2.arc_count);
      CHECK(satisfies(l2, q, f2));
      CHECK(std::set<Element>(f1.begin(), f1.end()) == std::set<Element>(f2.begin(), f2.end()));
      images.insert(f2);
    }
    CHECK(images.size() == h1.size());
  }

  const auto q = test::symplectic(5);
  const std::vector<Element> constant(45, 17);
  const auto f2 = extend_coloring(constant, 2, q);
  CHECK(f2 == std::vector<Element>(85, 17));

  std::vector<Element> bad(45, 0);
  bad[0] = 1;
  CHECK_THROWS_AS(extend_coloring(bad, 2, q), ValidationError);
  CHECK_THROWS_AS(extend_coloring(std::vector<Element>(44, 0), 2, q), ValidationError);
}

}  // TEST_SUITE
