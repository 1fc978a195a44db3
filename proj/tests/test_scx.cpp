#include <doctest.h>

#include "support.hpp"

using namespace retra;
using namespace retra::testing;

namespace {

SimplicialComplex load(const std::string& name) { return parse_complex(slurp(data_path(name))); }

SimplicialComplex named(std::vector<std::vector<std::string>> facets) {
  return SimplicialComplex::from_named_facets(facets);
}

std::vector<std::string> names(const SimplicialComplex& k, const Simplex& s) { return k.names_of(s); }

// Random flag complex: random graph on n vertices, cliques up to size 3 filled.
SimplicialComplex random_flag(std::mt19937_64& rng, std::size_t n, double density) {
  std::bernoulli_distribution edge(density);
  std::vector<std::vector<bool>> adj(n, std::vector<bool>(n, false));
  std::vector<std::vector<std::string>> facets;
  for (std::size_t a = 0; a < n; ++a) {
    facets.push_back({"v" + std::to_string(a)});
    for (std::size_t b = a + 1; b < n; ++b) adj[a][b] = adj[b][a] = edge(rng);
  }
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      if (!adj[a][b]) continue;
      facets.push_back({"v" + std::to_string(a), "v" + std::to_string(b)});
      for (std::size_t c = b + 1; c < n; ++c) {
        if (adj[a][c] && adj[b][c] && rng() % 4 != 0) {
          facets.push_back({"v" + std::to_string(a), "v" + std::to_string(b), "v" + std::to_string(c)});
        }
      }
    }
  }
  return named(facets);
}

}  // namespace

TEST_CASE("construction normalizes facets") {
  SimplicialComplex k = named({{"b", "a"}, {"a"}, {"a", "b", "c"}, {"c", "b"}});
  REQUIRE(k.facets().size() == 1);
  CHECK(k.dim() == 2);
  CHECK(k.simplices().size() == 7);
  CHECK(k.vertex_names() == std::vector<std::string>{"a", "b", "c"});
  CHECK(SimplicialComplex().dim() == -1);
  CHECK_THROWS_AS(named({{"a", "a"}}), std::invalid_argument);
}

TEST_CASE("link examples") {
  SimplicialComplex tri = load("triangle.cx");
  SimplicialComplex l = link(tri, tri.simplex_from_names({"a"}));
  CHECK(l == named({{"b", "c"}}));
  SimplicialComplex hex = load("hexagon.cx");
  SimplicialComplex lh = link(hex, hex.simplex_from_names({"a"}));
  CHECK(lh == named({{"b"}, {"f"}}));
  SimplicialComplex oct = load("octahedron.cx");
  SimplicialComplex le = link(oct, oct.simplex_from_names({"x", "y"}));
  CHECK(le == named({{"z"}, {"Z"}}));
  CHECK(le == brute_link(oct, {"x", "y"}));
  CHECK(link(tri, tri.simplex_from_names({"a", "b", "c"})).empty());
}

TEST_CASE("block examples") {
  SimplicialComplex tri = load("triangle.cx");
  BlockCheck b = validate_block(tri);
  REQUIRE(b.block);
  CHECK(b.block->sides.size() == 3);
  BlockCheck bow = validate_block(named({{"a", "b", "c"}, {"a", "d", "e"}}));
  CHECK_FALSE(bow.block);
  CHECK(bow.reason == BlockFailure::not_gallery_connected);
  BlockCheck two = validate_block(named({{"a", "b", "c"}, {"b", "c", "d"}}));
  REQUIRE(two.block);
  CHECK(two.block->sides.size() == 4);
  CHECK_FALSE(validate_block(load("octahedron.cx")).block);  // closed: no boundary
  CHECK_FALSE(validate_block(named({{"a", "b", "c"}, {"c", "d"}})).block);  // not pure
}

TEST_CASE("systole examples") {
  SimplicialComplex hex = load("hexagon.cx");
  CHECK(systole_at_least(hex, 6).holds);
  SystoleResult r7 = systole_at_least(hex, 7);
  CHECK_FALSE(r7.holds);
  CHECK(r7.witness.size() == 6);
  SystoleResult tri = systole_at_least(load("triangle_boundary.cx"), 4);
  CHECK_FALSE(tri.holds);
  CHECK(tri.witness.size() == 3);
  SimplicialComplex oct = load("octahedron.cx");
  SystoleResult o = systole_at_least(oct, 5);
  CHECK_FALSE(o.holds);
  REQUIRE(o.witness.size() == 4);
  CHECK(brute_systole(oct) == 4);
  // The witness is an induced 4-cycle: consecutive vertices adjacent, opposite ones not.
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(oct.adjacent(o.witness[i], o.witness[(i + 1) % 4]));
    CHECK_FALSE(oct.adjacent(o.witness[i], o.witness[(i + 2) % 4]));
  }
}

TEST_CASE("largeness examples") {
  CHECK(is_k_large(load("triangle.cx"), 6).holds);
  LargenessResult o = is_k_large(load("octahedron.cx"), 5);
  CHECK_FALSE(o.holds);
  CHECK(is_k_large(load("hexagon.cx"), 6).holds);
  CHECK(is_k_large(load("octagon.cx"), 6).holds);
  CHECK_FALSE(is_k_large(load("octagon.cx"), 9).holds);
}

TEST_CASE("flagness examples") {
  CHECK_FALSE(is_flag(load("triangle_boundary.cx")));
  CHECK(is_flag(load("triangle.cx")));
  CHECK(is_flag(load("octahedron.cx")));
}

TEST_CASE("property: systole agrees with subset enumeration and is monotone") {
  std::mt19937_64 rng(29);
  for (int trial = 0; trial < 80; ++trial) {
    SimplicialComplex k = random_flag(rng, 5 + rng() % 6, 0.25 + 0.1 * static_cast<double>(rng() % 4));
    const std::size_t s = brute_systole(k);
    for (std::size_t bound = 3; bound <= 11; ++bound) {
      const bool expect = s == 0 || s >= bound;
      SystoleResult r = systole_at_least(k, bound);
      REQUIRE(r.holds == expect);
      if (!r.holds) CHECK(r.witness.size() == s);
    }
  }
}

TEST_CASE("property: largeness agrees with brute force") {
  std::mt19937_64 rng(31);
  for (int trial = 0; trial < 40; ++trial) {
    SimplicialComplex k = random_flag(rng, 5 + rng() % 4, 0.45);
    for (std::size_t bound : {4, 5, 6}) CHECK(is_k_large(k, bound).holds == brute_k_large(k, bound));
  }
}

TEST_CASE("barycentric subdivision and cones") {
  SimplicialComplex tri = load("triangle.cx");
  SimplicialComplex sd = barycentric_subdivision(tri);
  CHECK(sd.num_vertices() == 7);
  CHECK(sd.facets().size() == 6);
  CHECK(sd.find_vertex("{a,b}"));
  CHECK(sd.find_vertex("{a,b,c}"));
  SimplicialComplex c = cone(load("hexagon.cx"), "apex");
  CHECK(c.facets().size() == 6);
  CHECK(c.dim() == 2);
  CHECK_THROWS_AS(cone(load("hexagon.cx"), "a"), std::invalid_argument);
}

TEST_CASE("union, intersection, subcomplex") {
  SimplicialComplex up = load("arc_upper.cx");
  SimplicialComplex lo = load("arc_lower.cx");
  CHECK(complex_union(up, lo) == load("hexagon.cx"));
  CHECK(complex_intersection(up, lo) == named({{"a"}, {"d"}}));
  CHECK(is_subcomplex(up, load("hexagon.cx")));
  CHECK_FALSE(is_subcomplex(load("triangle.cx"), load("hexagon.cx")));
}

TEST_CASE("complex file round trip and errors") {
  SimplicialComplex k = load("rp2.cx");
  CHECK(parse_complex(format_complex(k)) == k);
  CHECK(k.facets().size() == 10);
  CHECK(parse_complex("# nothing\n").empty());
  CHECK_THROWS_AS(parse_complex("a a\n"), ParseError);
  CHECK(names(k, k.facets().front()).size() == 3);
}
