// Fixtures and brute-force oracles shared by the test binaries. Oracles avoid
// the library's algorithms: groups are enumerated by closure, ranks come from
// dense elimination, cycles from subset enumeration.
#pragma once

#include <algorithm>
#include <cstdint>
#include <deque>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "retra/cog.hpp"
#include "retra/complex.hpp"
#include "retra/homology.hpp"
#include "retra/perm.hpp"

namespace retra::testing {

inline std::string data_path(const std::string& name) { return std::string(RETRA_TEST_DATA) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Perm cyc(const std::string& c, std::size_t degree) { return Perm::from_cycles(c, degree); }

inline PermGroup cyclic(std::size_t n) {
  if (n == 1) return PermGroup::trivial();
  std::vector<Point> img(n);
  for (std::size_t i = 0; i < n; ++i) img[i] = static_cast<Point>((i + 1) % n);
  return PermGroup(n, {Perm(img)});
}

// ---------------------------------------------------------------------------
// Group oracles

inline std::set<Perm> closure(const std::vector<Perm>& gens, std::size_t degree, std::size_t cap = 200000) {
  std::set<Perm> seen{Perm(degree)};
  std::deque<Perm> queue{Perm(degree)};
  while (!queue.empty()) {
    Perm x = queue.front();
    queue.pop_front();
    for (const Perm& g : gens) {
      Perm y = g * x;
      if (seen.insert(y).second) {
        if (seen.size() > cap) throw std::runtime_error("closure oracle cap exceeded");
        queue.push_back(y);
      }
    }
  }
  return seen;
}

inline std::set<Perm> closure(const PermGroup& g, std::size_t cap = 200000) {
  return closure(g.generators(), g.degree(), cap);
}

// Walks the pairs (x, f(x)) over the source's Cayley graph; the assignment is a
// homomorphism iff no element receives two images.
inline std::optional<std::map<Perm, Perm>> brute_hom(const std::vector<Perm>& src_gens, std::size_t src_degree,
                                                     const std::vector<Perm>& images, std::size_t dst_degree) {
  std::map<Perm, Perm> f{{Perm(src_degree), Perm(dst_degree)}};
  std::deque<Perm> queue{Perm(src_degree)};
  while (!queue.empty()) {
    Perm x = queue.front();
    queue.pop_front();
    const Perm fx = f.at(x);
    for (std::size_t i = 0; i < src_gens.size(); ++i) {
      Perm y = src_gens[i] * x;
      Perm fy = images[i] * fx;
      auto [it, fresh] = f.emplace(y, fy);
      if (fresh) {
        queue.push_back(y);
      } else if (it->second != fy) {
        return std::nullopt;
      }
    }
  }
  return f;
}

inline bool is_power_of(std::uint64_t n, std::uint64_t p) {
  if (n == 0) return false;
  while (n % p == 0) n /= p;
  return n == 1;
}

// Length of the shortest positive word; positive words suffice in finite groups.
inline std::size_t brute_word_length(const std::vector<Perm>& gens, std::size_t degree, const Perm& target) {
  std::map<Perm, std::size_t> dist{{Perm(degree), 0}};
  std::deque<Perm> queue{Perm(degree)};
  while (!queue.empty()) {
    Perm x = queue.front();
    queue.pop_front();
    if (x == target) return dist[x];
    for (const Perm& g : gens) {
      Perm y = g * x;
      if (dist.emplace(y, dist[x] + 1).second) queue.push_back(y);
    }
  }
  return static_cast<std::size_t>(-1);
}

inline Perm random_perm(std::size_t degree, std::mt19937_64& rng) {
  std::vector<Point> img(degree);
  for (std::size_t i = 0; i < degree; ++i) img[i] = static_cast<Point>(i);
  std::shuffle(img.begin(), img.end(), rng);
  return Perm(img);
}

// ---------------------------------------------------------------------------
// Complex oracles

inline std::set<std::vector<std::string>> faces_by_name(const SimplicialComplex& k) {
  std::set<std::vector<std::string>> out;
  for (const Simplex& f : k.facets()) {
    for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << f.size()); ++mask) {
      std::vector<std::string> s;
      for (std::size_t i = 0; i < f.size(); ++i) {
        if (mask & (std::uint64_t{1} << i)) s.push_back(k.vertex_names()[f[i]]);
      }
      std::sort(s.begin(), s.end());
      out.insert(s);
    }
  }
  return out;
}

inline std::size_t dense_rank(std::vector<std::vector<std::int64_t>> m, std::int64_t p) {
  std::size_t rank = 0;
  const std::size_t rows = m.size();
  const std::size_t cols = rows ? m[0].size() : 0;
  for (std::size_t c = 0; c < cols && rank < rows; ++c) {
    std::size_t piv = rank;
    while (piv < rows && m[piv][c] % p == 0) ++piv;
    if (piv == rows) continue;
    std::swap(m[piv], m[rank]);
    std::int64_t inv = 1;
    for (std::int64_t e = p - 2, b = ((m[rank][c] % p) + p) % p; e > 0; e >>= 1, b = b * b % p) {
      if (e & 1) inv = inv * b % p;
    }
    for (std::size_t r = 0; r < rows; ++r) {
      if (r == rank) continue;
      const std::int64_t f = ((m[r][c] % p) + p) % p * inv % p;
      if (!f) continue;
      for (std::size_t j = 0; j < cols; ++j) m[r][j] = ((m[r][j] - f * m[rank][j]) % p + p) % p;
    }
    ++rank;
  }
  return rank;
}

// Reduced Betti numbers in degrees 0..dim from dense boundary matrices.
inline std::vector<std::size_t> brute_betti(const SimplicialComplex& k, std::int64_t p) {
  auto faces = faces_by_name(k);
  std::size_t top = 0;
  for (const auto& f : faces) top = std::max(top, f.size());
  std::vector<std::vector<std::vector<std::string>>> by_dim(top);
  for (const auto& f : faces) by_dim[f.size() - 1].push_back(f);
  std::vector<std::size_t> rank(top + 1, 0);
  rank[0] = 1;  // augmentation
  for (std::size_t d = 1; d < top; ++d) {
    std::vector<std::vector<std::int64_t>> m(by_dim[d - 1].size(), std::vector<std::int64_t>(by_dim[d].size(), 0));
    for (std::size_t j = 0; j < by_dim[d].size(); ++j) {
      const auto& s = by_dim[d][j];
      for (std::size_t i = 0; i < s.size(); ++i) {
        auto f = s;
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
        const auto row = std::find(by_dim[d - 1].begin(), by_dim[d - 1].end(), f) - by_dim[d - 1].begin();
        m[static_cast<std::size_t>(row)][j] = (i % 2 == 0) ? 1 : p - 1;
      }
    }
    rank[d] = dense_rank(m, p);
  }
  std::vector<std::size_t> b(top);
  for (std::size_t d = 0; d < top; ++d) b[d] = by_dim[d].size() - rank[d] - rank[d + 1];
  return b;
}

// Shortest full-subcomplex circle by subset enumeration; 0 when none.
inline std::size_t brute_systole(const SimplicialComplex& k) {
  const std::size_t n = k.num_vertices();
  auto faces = faces_by_name(k);
  const auto& names = k.vertex_names();
  auto edge = [&](std::size_t a, std::size_t b) {
    std::vector<std::string> e{names[a], names[b]};
    std::sort(e.begin(), e.end());
    return faces.count(e) > 0;
  };
  std::size_t best = 0;
  for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
    const std::size_t size = static_cast<std::size_t>(__builtin_popcountll(mask));
    if (size < 3 || (best && size >= best)) continue;
    std::vector<std::size_t> vs;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (std::uint64_t{1} << i)) vs.push_back(i);
    }
    bool two_regular = true;
    for (std::size_t a : vs) {
      std::size_t deg = 0;
      for (std::size_t b : vs) deg += (a != b && edge(a, b));
      two_regular = two_regular && deg == 2;
    }
    if (!two_regular) continue;
    // Connected?
    std::set<std::size_t> seen{vs[0]};
    std::vector<std::size_t> stack{vs[0]};
    while (!stack.empty()) {
      std::size_t a = stack.back();
      stack.pop_back();
      for (std::size_t b : vs) {
        if (a != b && edge(a, b) && seen.insert(b).second) stack.push_back(b);
      }
    }
    if (seen.size() != vs.size()) continue;
    if (size == 3) {
      std::vector<std::string> t{names[vs[0]], names[vs[1]], names[vs[2]]};
      std::sort(t.begin(), t.end());
      if (faces.count(t)) continue;
    }
    best = size;
  }
  return best;
}

inline SimplicialComplex brute_link(const SimplicialComplex& k, const std::vector<std::string>& sigma) {
  std::vector<std::vector<std::string>> facets;
  for (const auto& f : faces_by_name(k)) {
    if (!std::includes(f.begin(), f.end(), sigma.begin(), sigma.end())) continue;
    std::vector<std::string> rest;
    std::set_difference(f.begin(), f.end(), sigma.begin(), sigma.end(), std::back_inserter(rest));
    if (!rest.empty()) facets.push_back(rest);
  }
  return SimplicialComplex::from_named_facets(facets);
}

inline bool brute_k_large(const SimplicialComplex& k, std::size_t bound) {
  auto ok = [&](const SimplicialComplex& c) {
    std::size_t s = brute_systole(c);
    return s == 0 || s >= bound;
  };
  if (!ok(k)) return false;
  for (const auto& s : faces_by_name(k)) {
    SimplicialComplex l = brute_link(k, s);
    if (l.dim() >= 1 && !ok(l)) return false;
  }
  return true;
}

// Chains of invariant simplices under vertex maps, named like barycentric_subdivision.
inline std::set<std::vector<std::string>> brute_fixed_simplices(const SimplicialComplex& k,
                                                                 const std::vector<Perm>& maps) {
  std::vector<std::vector<VertexId>> inv;
  for (const Simplex& s : k.simplices()) {
    bool fixed = true;
    for (const Perm& g : maps) {
      Simplex t;
      for (VertexId v : s) t.push_back(g(v));
      std::sort(t.begin(), t.end());
      fixed = fixed && t == s;
    }
    if (fixed) inv.push_back(s);
  }
  auto name = [&](const Simplex& s) {
    std::string n = "{";
    for (std::size_t i = 0; i < s.size(); ++i) n += (i ? "," : "") + k.vertex_names()[s[i]];
    return n + "}";
  };
  std::set<std::vector<std::string>> out;
  // Every chain of length <= 4 (complexes in the oracle tests have dim <= 3).
  std::function<void(std::vector<std::size_t>&)> grow = [&](std::vector<std::size_t>& chain) {
    std::vector<std::string> names;
    for (std::size_t i : chain) names.push_back(name(inv[i]));
    std::sort(names.begin(), names.end());
    out.insert(names);
    const Simplex& last = inv[chain.back()];
    for (std::size_t j = 0; j < inv.size(); ++j) {
      const Simplex& t = inv[j];
      if (t.size() > last.size() && std::includes(t.begin(), t.end(), last.begin(), last.end())) {
        chain.push_back(j);
        grow(chain);
        chain.pop_back();
      }
    }
  };
  for (std::size_t i = 0; i < inv.size(); ++i) {
    std::vector<std::size_t> chain{i};
    grow(chain);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Block-of-groups fixtures

inline Block edge_block() {
  SimplicialComplex e({"a", "b"}, {{0, 1}});
  return *validate_block(e).block;
}

// Edge with two Z_2 vertex groups and the dihedral group of order 2k on top,
// generated by two reflections. k = 2 uses the Klein four-group on 4 points.
inline ExtendedBlockOfGroups dihedral_edge(std::size_t k) {
  Perm z = cyc("(0 1)", 2);
  std::vector<LocalGroup> ls{LocalGroup{cyclic(2), {z}}, LocalGroup{cyclic(2), {z}}, make_local(1, {})};
  BlockOfGroups cog(edge_block(), ls);
  if (k == 2) {
    Perm a = cyc("(0 1)", 4);
    Perm b = cyc("(2 3)", 4);
    return ExtendedBlockOfGroups(cog, PermGroup(4, {a, b}), {a, b});
  }
  std::vector<Point> r1(k), r2(k);
  for (std::size_t i = 0; i < k; ++i) {
    r1[i] = static_cast<Point>((k - i) % k);
    r2[i] = static_cast<Point>((k + 1 - i) % k);
  }
  Perm a(r1), b(r2);
  return ExtendedBlockOfGroups(cog, PermGroup(k, {a, b}), {a, b});
}

inline BlockOfGroups edge_of(const PermGroup& ga, const PermGroup& gb) {
  std::vector<LocalGroup> ls{LocalGroup{ga, ga.generators()}, LocalGroup{gb, gb.generators()}, make_local(1, {})};
  return BlockOfGroups(edge_block(), ls);
}

// ---------------------------------------------------------------------------
// Randomized Helly instances: covers of a simplex's subcomplexes by full
// simplices on vertex subsets. Some instances force every proper
// sub-intersection nonempty and the full intersection empty, so the union is a
// sphere and the empty intersection carries degree -1.

struct HellyInstance {
  SimplicialComplex x;
  std::vector<SimplicialComplex> ys;
  std::string kind;
};

inline SimplicialComplex full_simplex(const std::vector<std::size_t>& verts) {
  std::vector<std::string> f;
  for (std::size_t v : verts) f.push_back("v" + std::to_string(v));
  return SimplicialComplex::from_named_facets({f});
}

inline HellyInstance random_helly_instance(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> mode(0, 2);
  std::uniform_int_distribution<std::size_t> nd(1, 4);
  const std::size_t n = nd(rng);
  const bool subdivide = rng() % 3 == 0;
  const std::size_t universe = subdivide ? 5 : 9;
  HellyInstance inst;
  std::vector<std::vector<std::size_t>> sets(n);
  const int m = mode(rng);
  if (m == 0 && n >= 2) {
    // Vertex t_j lies in every set except the j-th; extras are private.
    inst.kind = "sphere";
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        if (j != i) sets[i].push_back(j);
      }
      for (std::size_t v = n; v < universe; ++v) {
        if (v % n == i && rng() % 2) sets[i].push_back(v);
      }
    }
  } else {
    inst.kind = "random";
    std::bernoulli_distribution in(0.55);
    for (auto& s : sets) {
      for (std::size_t v = 0; v < universe; ++v) {
        if (in(rng)) s.push_back(v);
      }
      if (s.empty()) s.push_back(rng() % universe);
    }
  }
  std::vector<std::size_t> all(universe);
  for (std::size_t v = 0; v < universe; ++v) all[v] = v;
  inst.x = full_simplex(all);
  for (const auto& s : sets) inst.ys.push_back(full_simplex(s));
  if (subdivide) {
    inst.kind += "+subdivided";
    inst.x = barycentric_subdivision(inst.x);
    for (auto& y : inst.ys) y = barycentric_subdivision(y);
  }
  return inst;
}

}  // namespace retra::testing
