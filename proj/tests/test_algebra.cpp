#include <doctest.h>

#include <fstream>
#include <random>

#include "qie/error.hpp"
#include "qie/quandle.hpp"
#include "support.hpp"

using namespace qie;

TEST_SUITE("algebra") {

TEST_CASE("field arithmetic") {
  CHECK(is_prime(2));
  CHECK(is_prime(65521));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(4));
  const FieldElement a(3, 5), b(4, 5);
  CHECK((a + b).value() == 2);
  CHECK((a - b).value() == 4);
  CHECK((a * b).value() == 2);
  CHECK((-a).value() == 2);
  CHECK((a * a.inverse()).value() == 1);
  CHECK(FieldElement(-7, 5).value() == 3);
  CHECK_THROWS_AS(FieldElement(1, 4), ValidationError);
  CHECK_THROWS_AS(FieldElement(1, 65537), ValidationError);
  CHECK_THROWS_AS(FieldElement(0, 5).inverse(), std::domain_error);
}

TEST_CASE("symplectic form validation") {
  CHECK(SymplecticForm::standard(5, 2).non_degenerate());
  CHECK(SymplecticForm::standard(5, 4, 2).non_degenerate());
  CHECK_FALSE(SymplecticForm(5, 2, {0, 0, 0, 0}).non_degenerate());
  CHECK_THROWS_AS(SymplecticForm(5, 3, std::vector<std::int64_t>(9, 0)), ValidationError);
  CHECK_THROWS_AS(SymplecticForm(5, 2, {0, 1, 1, 0}), ValidationError);
  // p = 2: anti-symmetry is vacuous, the zero diagonal is not.
  CHECK_THROWS_AS(SymplecticForm(2, 2, {1, 1, 1, 0}), ValidationError);
  CHECK_NOTHROW(SymplecticForm(2, 2, {0, 1, 1, 0}));
}

TEST_CASE("build_quandle examples") {
  CHECK(build_quandle("symplectic:p=5,n=1,a=1").size() == 25);
  const auto q = test::symplectic(5);
  const Element x = q.from_coordinates({1, 0}), y = q.from_coordinates({0, 1});
  CHECK(q.label(q.op(x, y)) == "(1,1)");
  CHECK(q.label(quandle_op(q, x, y, Sign::Negative)) == "(1,4)");

  const auto alex = build_quandle("alexander:n=5,t=1");
  for (Element a = 0; a < 5; ++a)
    for (Element b = 0; b < 5; ++b) CHECK(alex.op(a, b) == a);

  CHECK(quandle_op(build_quandle("takasaki:n=5"), 1, 3, Sign::Positive) == 0);
  CHECK(build_quandle("symplectic:p=3,dim=4").size() == 81);
  CHECK(build_quandle("symplectic:p=5,n=1,matrix=0;2;3;0").size() == 25);
}

TEST_CASE("build_quandle errors") {
  CHECK_THROWS_AS(build_quandle("symplectic:p=4,n=1"), ValidationError);
  CHECK_THROWS_AS(build_quandle("symplectic:p=5,dim=3"), ValidationError);
  CHECK_THROWS_AS(build_quandle("symplectic:p=5,n=1,a=0"), ValidationError);
  CHECK_THROWS_AS(build_quandle("symplectic:n=1"), ParseError);
  CHECK(build_quandle("symplectic:p=5").size() == 25);  // n defaults to 1
  CHECK_THROWS_AS(build_quandle("nonsense:n=3"), ParseError);
  CHECK_THROWS_AS(build_quandle("takasaki"), ParseError);
  CHECK_THROWS_AS(build_quandle("takasaki:n=3,bogus=1"), ParseError);
  CHECK_THROWS_AS(build_quandle("alexander:n=6,t=2"), ValidationError);  // t not a unit
  CHECK_THROWS_AS(quandle_op(build_quandle("takasaki:n=3"), 3, 0, Sign::Positive), std::out_of_range);
}

TEST_CASE("quandle_op idempotency on every kind") {
  for (auto spec : {"symplectic:p=3,n=1", "takasaki:n=6", "alexander:n=7,t=3", "trivial:size=4"}) {
    const auto q = build_quandle(spec);
    for (Element a = 0; a < q.size(); ++a) CHECK(quandle_op(q, a, a, Sign::Positive) == a);
  }
}

TEST_CASE("inv_op undoes op") {
  for (auto spec : {"symplectic:p=5,n=1", "symplectic:p=3,dim=4", "takasaki:n=9", "alexander:n=11,t=4",
                    "trivial:size=16", "symplectic:p=7,n=1,a=3"}) {
    const auto q = build_quandle(spec);
    REQUIRE(q.size() <= 256);
    for (Element a = 0; a < q.size(); ++a)
      for (Element b = 0; b < q.size(); ++b) {
        CHECK(q.inv_op(q.op(a, b), b) == a);
        CHECK(q.op(q.inv_op(a, b), b) == a);
      }
  }
  // Above the exhaustive threshold: formula evaluation, randomized.
  const auto big = build_quandle("symplectic:p=67,n=1");
  REQUIRE_FALSE(big.tabulated());
  std::mt19937 rng(7);
  std::uniform_int_distribution<Element> pick(0, big.size() - 1);
  int bad = 0;
  for (int i = 0; i < 100000; ++i) {
    const Element a = pick(rng), b = pick(rng);
    bad += big.inv_op(big.op(a, b), b) != a;
  }
  CHECK(bad == 0);
}

TEST_CASE("table and formula paths agree") {
  const auto q = build_quandle("symplectic:p=61,n=1");  // 3721 elements, tabulated
  REQUIRE(q.tabulated());
  const auto form = SymplecticForm::standard(61, 2);
  for (Element a = 0; a < q.size(); a += 97)
    for (Element b = 0; b < q.size(); b += 89) {
      const auto x = q.coordinates(a), y = q.coordinates(b);
      const auto s = form.pair(x, y);
      const Element expect = q.from_coordinates({(x[0] + s * y[0]) % 61, (x[1] + s * y[1]) % 61});
      CHECK(q.op(a, b) == expect);
    }
}

TEST_CASE("axiom checks") {
  for (auto spec : {"symplectic:p=5,n=1", "symplectic:p=2,n=1", "symplectic:p=3,dim=4", "takasaki:n=6",
                    "alexander:n=7,t=3", "trivial:size=5"}) {
    CAPTURE(spec);
    CHECK(check_axioms(build_quandle(spec)).ok());
  }
  // op(a,b) = b: idempotent, not right-invertible.
  std::vector<Element> proj(9);
  for (Element a = 0; a < 3; ++a)
    for (Element b = 0; b < 3; ++b) proj[a * 3 + b] = b;
  const auto bad = check_axioms(FiniteQuandle::from_table(3, proj));
  CHECK(bad.idempotent);
  CHECK_FALSE(bad.right_invertible);
  REQUIRE(bad.invertibility_counterexample);
  CHECK_THROWS_AS(check_axioms(build_quandle("symplectic:p=101,n=1")), GuardError);
}

TEST_CASE("symplectic alternating: x op x = x") {
  for (int p : {2, 3, 5, 7}) {
    const auto q = test::symplectic(p);
    for (Element x = 0; x < q.size(); ++x) CHECK(q.op(x, x) == x);
  }
}

TEST_CASE("connected components") {
  for (int p : {2, 3, 5, 7}) {
    const auto q = test::symplectic(p);
    const auto orbits = connected_components(q, nonzero_elements(q));
    REQUIRE(orbits.size() == 1);
    CHECK(orbits[0].size() == static_cast<std::size_t>(p * p - 1));
  }
  const auto triv = build_quandle("trivial:size=25");
  CHECK(connected_components(triv, nonzero_elements(triv)).size() == 25);
  CHECK(connected_components(build_quandle("takasaki:n=2"), {0, 1}).size() == 2);
  // {1} is not closed in takasaki n=5: 1 op 1 = 1, fine; {1,2}: 1 op 2 = 3.
  CHECK_THROWS_AS(connected_components(build_quandle("takasaki:n=5"), {1, 2}), ValidationError);
}

TEST_CASE("zero matrix gives the trivial quandle") {
  const auto z = build_quandle("symplectic:p=5,n=1,matrix=0;0;0;0,nondegenerate=false");
  const auto t = build_quandle("trivial:size=25");
  for (Element a = 0; a < 25; ++a)
    for (Element b = 0; b < 25; ++b) CHECK(z.op(a, b) == t.op(a, b));
  CHECK_THROWS_AS(build_quandle("symplectic:p=5,n=1,matrix=0;0;0;0"), ValidationError);
}

TEST_CASE("alexander t = -1 is takasaki") {
  for (std::uint32_t n : {3u, 5u, 7u, 9u}) {
    const auto a = build_quandle("alexander:n=" + std::to_string(n) + ",t=" + std::to_string(n - 1));
    const auto k = build_quandle("takasaki:n=" + std::to_string(n));
    for (Element x = 0; x < n; ++x)
      for (Element y = 0; y < n; ++y) CHECK(a.op(x, y) == k.op(x, y));
  }
}

TEST_CASE("table quandle from CSV") {
  const std::string path = "algebra_table_test.csv";
  {
    std::ofstream f(path);
    f << "0,2,1\n2,1,0\n1,0,2\n";  // takasaki n=3
  }
  const auto q = build_quandle("table:path=" + path);
  const auto k = build_quandle("takasaki:n=3");
  for (Element x = 0; x < 3; ++x)
    for (Element y = 0; y < 3; ++y) CHECK(q.op(x, y) == k.op(x, y));
  CHECK(check_axioms(q).ok());
  {
    std::ofstream f(path);
    f << "0,1\n1\n";
  }
  CHECK_THROWS_AS(build_quandle("table:path=" + path), ParseError);
  std::remove(path.c_str());
}

}  // TEST_SUITE
