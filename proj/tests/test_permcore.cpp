#include <doctest.h>

#include "support.hpp"

using namespace retra;
using namespace retra::testing;

namespace {

PermGroup square_reflections() { return PermGroup(4, {cyc("(1 3)", 4), cyc("(0 1)(2 3)", 4)}); }

}  // namespace

TEST_CASE("perm basics") {
  Perm a = cyc("(0 1 2)", 4);
  Perm b = cyc("(2 3)", 4);
  CHECK((a * b)(3) == 0);  // b first, then a
  CHECK((a * b)(2) == 3);
  CHECK(a.order() == 3);
  CHECK((a * a.inverse()).is_identity());
  CHECK(a.to_cycles() == "(0 1 2)");
  CHECK(Perm(3).to_cycles() == "()");
  CHECK(Perm::from_cycles("(0,1)(2,3)", 4) == cyc("(0 1)(2 3)", 4));
  CHECK_THROWS_AS(Perm::from_cycles("(0 4)", 4), ParseError);
  CHECK_THROWS_AS(Perm::from_cycles("(0 1 0)", 4), ParseError);
  CHECK_THROWS_AS(Perm::from_cycles("0 1", 4), ParseError);
}

TEST_CASE("order examples") {
  CHECK(PermGroup(3, {cyc("(0 1)", 3), cyc("(0 1 2)", 3)}).order() == 6);
  CHECK(PermGroup(1, {}).order() == 1);
  CHECK(square_reflections().order() == 8);
  CHECK(closure(square_reflections()).size() == 8);
}

TEST_CASE("membership examples") {
  PermGroup z2(2, {cyc("(0 1)", 2)});
  CHECK(z2.contains(cyc("(0 1)", 2)));
  CHECK_FALSE(PermGroup(3, {cyc("(0 1)", 3)}).contains(cyc("(0 1 2)", 3)));
  CHECK(square_reflections().contains(cyc("(0 2)(1 3)", 4)));
  CHECK_FALSE(square_reflections().contains(cyc("(0 1)", 4)));
}

TEST_CASE("order cap raises BudgetExceeded") {
  std::vector<Point> img(20);
  for (Point i = 0; i < 20; ++i) img[i] = (i + 1) % 20;
  Limits lim;
  lim.max_order = 1000;
  PermGroup s20(20, {Perm(img), cyc("(0 1)", 20)}, lim);
  CHECK_THROWS_AS(s20.order(), BudgetExceeded);
}

TEST_CASE("property: order and membership agree with closure") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 120; ++trial) {
    const std::size_t degree = 2 + rng() % 6;
    std::vector<Perm> gens;
    for (std::size_t i = 0, n = 1 + rng() % 3; i < n; ++i) gens.push_back(random_perm(degree, rng));
    PermGroup g(degree, gens);
    auto elems = closure(g);
    REQUIRE(g.order() == elems.size());
    for (int probe = 0; probe < 10; ++probe) {
      Perm x = random_perm(degree, rng);
      CHECK(g.contains(x) == (elems.count(x) > 0));
    }
    // Stabilizer chain invariants: orbit sizes multiply to the order.
    std::uint64_t product = 1;
    for (const auto& level : g.chain().levels()) product *= level.orbit.size();
    CHECK(product == g.order());
  }
}

TEST_CASE("kernel examples") {
  PermGroup d8 = square_reflections();
  PermGroup z2(2, {cyc("(0 1)", 2)});
  auto h = hom_by_graph(d8, z2, {cyc("(0 1)", 2), Perm(2)});
  REQUIRE(h);
  CHECK(kernel(*h).order() == 4);
  auto id = hom_by_graph(d8, d8, d8.generators());
  REQUIRE(id);
  CHECK(kernel(*id).order() == 1);
  CHECK(is_injective(*id));
  auto triv = hom_by_graph(d8, PermGroup::trivial(), {Perm(1), Perm(1)});
  REQUIRE(triv);
  CHECK(kernel(*triv).order() == 8);
  // (1 3) -> (0 1), (0 1)(2 3) -> (0 1) kills the rotation: fine. Sending a
  // reflection to a 3-cycle is not a homomorphism.
  PermGroup s3(3, {cyc("(0 1)", 3), cyc("(0 1 2)", 3)});
  CHECK_FALSE(hom_by_graph(d8, s3, {cyc("(0 1 2)", 3), cyc("(0 1)", 3)}));
}

TEST_CASE("property: |source| = |kernel| * |image| against pair enumeration") {
  std::mt19937_64 rng(5);
  int checked = 0;
  for (int trial = 0; trial < 300 && checked < 60; ++trial) {
    const std::size_t sd = 3 + rng() % 4;
    const std::size_t td = 2 + rng() % 4;
    std::vector<Perm> sg{random_perm(sd, rng), random_perm(sd, rng)};
    std::vector<Perm> imgs{random_perm(td, rng), random_perm(td, rng)};
    if (rng() % 2) imgs[1] = imgs[0];
    PermGroup src(sd, sg);
    PermGroup dst(td, imgs);
    auto brute = brute_hom(sg, sd, imgs, td);
    auto h = hom_by_graph(src, dst, imgs);
    REQUIRE(h.has_value() == brute.has_value());
    if (!h) continue;
    ++checked;
    std::set<Perm> ker, img;
    for (const auto& [x, fx] : *brute) {
      if (fx.is_identity()) ker.insert(x);
      img.insert(fx);
      CHECK(h->apply(x) == fx);
    }
    CHECK(kernel(*h).order() == ker.size());
    CHECK(image(*h).order() == img.size());
    CHECK(src.order() == kernel(*h).order() * image(*h).order());
  }
  CHECK(checked >= 20);
}

TEST_CASE("element_to_word examples") {
  PermGroup klein(4, {cyc("(0 1)", 4), cyc("(2 3)", 4)});
  CHECK(element_to_word(klein, Perm(4)).empty());
  CHECK(element_to_word(klein, cyc("(0 1)", 4)) == Word{Letter{0, false}});
  Word ab = element_to_word(klein, cyc("(0 1)(2 3)", 4));
  CHECK(ab.size() == 2);
  CHECK(evaluate(ab, klein.generators(), 4) == cyc("(0 1)(2 3)", 4));
}

TEST_CASE("property: element_to_word is a shortest word") {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t degree = 3 + rng() % 4;
    std::vector<Perm> gens{random_perm(degree, rng), random_perm(degree, rng)};
    PermGroup g(degree, gens);
    auto elems = closure(g);
    std::vector<Perm> list(elems.begin(), elems.end());
    for (int probe = 0; probe < 5; ++probe) {
      const Perm& x = list[rng() % list.size()];
      Word w = element_to_word(g, x);
      CHECK(evaluate(w, gens, degree) == x);
      CHECK(w.size() == brute_word_length(gens, degree, x));
    }
  }
}

TEST_CASE("element table") {
  PermGroup g(4, {cyc("(0 1 2 3)", 4), cyc("(0 2)", 4)});
  ElementTable t(g);
  REQUIRE(t.size() == 8);
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(t.index_of(t.element(i)) == i);
    CHECK(evaluate(t.word(i), g.generators(), 4) == t.element(i));
    for (std::size_t s = 0; s < 2; ++s) CHECK(t.element(t.left_mul(s, i)) == g.generators()[s] * t.element(i));
  }
  CHECK_FALSE(t.index_of(cyc("(0 1)", 4)));
}

TEST_CASE("p-groups and solubility") {
  PermGroup s3(3, {cyc("(0 1)", 3), cyc("(0 1 2)", 3)});
  CHECK(is_p_group(square_reflections(), 2));
  CHECK_FALSE(is_p_group(s3, 2));
  CHECK(is_soluble(s3));
  PermGroup a5(5, {cyc("(0 1 2)", 5), cyc("(0 1 2 3 4)", 5)});
  CHECK(a5.order() == 60);
  CHECK_FALSE(is_soluble(a5));
  CHECK(derived_series(a5).back().order() == 60);
  PermGroup s4(4, {cyc("(0 1)", 4), cyc("(0 1 2 3)", 4)});
  std::vector<std::uint64_t> orders;
  for (const PermGroup& d : derived_series(s4)) orders.push_back(d.order());
  CHECK(orders == std::vector<std::uint64_t>{24, 12, 4, 1});
  CHECK(normal_closure(s4, {cyc("(0 1)(2 3)", 4)}).order() == 4);
}

TEST_CASE("product embedding examples") {
  GeneratorImages ax{2, {cyc("(0 1)", 2), Perm(2)}};
  GeneratorImages bx{2, {Perm(2), cyc("(0 1)", 2)}};
  CHECK(product_embedding({ax, bx}, 2).order() == 4);
  CHECK(product_embedding({ax}, 2).order() == 2);
  PermGroup empty = product_embedding({}, 2);
  CHECK(empty.degree() == 1);
  CHECK(empty.order() == 1);
  CHECK(empty.generators().size() == 2);
}

TEST_CASE("group file round trip and errors") {
  PermGroup g = parse_group(slurp(data_path("d8.grp")));
  CHECK(g.order() == 8);
  PermGroup back = parse_group(format_group(g));
  CHECK(back.generators() == g.generators());
  CHECK_THROWS_AS(parse_group("(0 1)\n"), ParseError);
  CHECK_THROWS_AS(parse_group("degree 2\n(0 2)\n"), ParseError);
  CHECK_THROWS_AS(parse_group("degree x\n"), ParseError);
}
