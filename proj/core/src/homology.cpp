#include "retra/homology.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>
#include <unordered_map>

namespace retra {

namespace {

std::uint32_t pow_mod(std::uint64_t a, std::uint64_t e, std::uint32_t p) {
  std::uint64_t r = 1;
  a %= p;
  while (e) {
    if (e & 1) r = r * a % p;
    a = a * a % p;
    e >>= 1;
  }
  return static_cast<std::uint32_t>(r);
}

void check_prime(std::uint32_t p) {
  if (p < 2) throw std::invalid_argument("p must be prime");
  for (std::uint32_t d = 2; d * d <= p; ++d) {
    if (p % d == 0) throw std::invalid_argument("p must be prime");
  }
}

// a - f * b over F_p, both sorted by row.
SparseColumn axpy(const SparseColumn& a, std::uint32_t f, const SparseColumn& b, std::uint32_t p) {
  SparseColumn out;
  out.reserve(a.size() + b.size());
  std::size_t i = 0;
  std::size_t j = 0;
  while (i < a.size() || j < b.size()) {
    if (j == b.size() || (i < a.size() && a[i].first < b[j].first)) {
      out.push_back(a[i++]);
    } else if (i == a.size() || b[j].first < a[i].first) {
      const std::uint32_t v = static_cast<std::uint32_t>((p - static_cast<std::uint64_t>(f) * b[j].second % p) % p);
      if (v) out.emplace_back(b[j].first, v);
      ++j;
    } else {
      const std::uint64_t v = (a[i].second + p - static_cast<std::uint64_t>(f) * b[j].second % p) % p;
      if (v) out.emplace_back(a[i].first, static_cast<std::uint32_t>(v));
      ++i;
      ++j;
    }
  }
  return out;
}

}  // namespace

std::size_t rank_mod_p(std::vector<SparseColumn> columns, std::uint32_t p) {
  std::unordered_map<std::size_t, std::size_t> owner;
  std::size_t rank = 0;
  for (std::size_t j = 0; j < columns.size(); ++j) {
    SparseColumn& col = columns[j];
    while (!col.empty()) {
      const auto [row, coef] = col.back();
      auto it = owner.find(row);
      if (it == owner.end()) {
        owner.emplace(row, j);
        ++rank;
        break;
      }
      const SparseColumn& piv = columns[it->second];
      const std::uint32_t f = static_cast<std::uint32_t>(
          static_cast<std::uint64_t>(coef) * pow_mod(piv.back().second, p - 2, p) % p);
      col = axpy(col, f, piv, p);
    }
  }
  return rank;
}

ChainComplexFp build_chain_complex(const SimplicialComplex& k, std::uint32_t p) {
  check_prime(p);
  ChainComplexFp c;
  c.p = p;
  const int d = k.dim();
  if (d < 0) return c;
  c.cells.resize(static_cast<std::size_t>(d) + 1);
  for (const Simplex& s : k.simplices()) c.cells[s.size() - 1].push_back(s);
  std::vector<std::map<Simplex, std::size_t>> index(c.cells.size());
  for (std::size_t q = 0; q < c.cells.size(); ++q) {
    for (std::size_t i = 0; i < c.cells[q].size(); ++i) index[q].emplace(c.cells[q][i], i);
  }
  c.boundary.resize(c.cells.size());
  for (std::size_t q = 1; q < c.cells.size(); ++q) {
    for (const Simplex& s : c.cells[q]) {
      SparseColumn col;
      for (std::size_t i = 0; i < s.size(); ++i) {
        Simplex f = s;
        f.erase(f.begin() + static_cast<std::ptrdiff_t>(i));
        col.emplace_back(index[q - 1].at(f), i % 2 == 0 ? 1u : p - 1);
      }
      std::sort(col.begin(), col.end());
      c.boundary[q].push_back(std::move(col));
    }
  }
  return c;
}

bool ChainComplexFp::boundaries_compose_to_zero() const {
  for (std::size_t q = 2; q < boundary.size(); ++q) {
    for (const SparseColumn& col : boundary[q]) {
      std::map<std::size_t, std::uint64_t> acc;
      for (const auto& [row, coef] : col) {
        for (const auto& [r2, c2] : boundary[q - 1][row]) acc[r2] = (acc[r2] + static_cast<std::uint64_t>(coef) * c2) % p;
      }
      for (const auto& [r, v] : acc) {
        if (v != 0) return false;
      }
    }
  }
  return true;
}

std::vector<std::size_t> reduced_betti_from_minus_one(const SimplicialComplex& k, std::uint32_t p) {
  if (k.empty()) {
    check_prime(p);
    return {1};
  }
  ChainComplexFp c = build_chain_complex(k, p);
  const std::size_t top = c.cells.size();
  std::vector<std::size_t> rank(top + 1, 0);  // rank[q] = rank of boundary C_q -> C_{q-1}; rank[0] augmentation
  rank[0] = 1;
  for (std::size_t q = 1; q < top; ++q) rank[q] = rank_mod_p(c.boundary[q], p);
  std::vector<std::size_t> betti(top + 1, 0);
  betti[0] = 0;  // degree -1: C_{-1} = F_p, hit by the augmentation
  for (std::size_t q = 0; q < top; ++q) betti[q + 1] = c.cells[q].size() - rank[q] - rank[q + 1];
  return betti;
}

std::vector<std::size_t> reduced_betti(const SimplicialComplex& k, std::uint32_t p) {
  if (k.empty()) throw std::invalid_argument("reduced_betti: empty complex");
  auto b = reduced_betti_from_minus_one(k, p);
  return std::vector<std::size_t>(b.begin() + 1, b.end());
}

bool is_mod_p_acyclic(const SimplicialComplex& k, std::uint32_t p) {
  auto b = reduced_betti(k, p);
  return std::all_of(b.begin(), b.end(), [](std::size_t x) { return x == 0; });
}

std::int64_t euler_characteristic(const SimplicialComplex& k) {
  std::int64_t chi = 0;
  for (const Simplex& s : k.simplices()) chi += (s.size() % 2 == 1) ? 1 : -1;
  return chi;
}

// ---------------------------------------------------------------------------
// Fixed sets

namespace {

Simplex apply(const Perm& g, const Simplex& s) {
  Simplex t;
  t.reserve(s.size());
  for (VertexId v : s) t.push_back(g(v));
  std::sort(t.begin(), t.end());
  return t;
}

std::string bary_name(const SimplicialComplex& k, const Simplex& s) {
  std::string n = "{";
  for (std::size_t i = 0; i < s.size(); ++i) n += (i ? "," : "") + k.vertex_names()[s[i]];
  return n + "}";
}

}  // namespace

SimplicialComplex fixed_subcomplex(const SimplicialComplex& k, const std::vector<Perm>& vertex_maps) {
  for (const Perm& g : vertex_maps) {
    if (g.degree() != k.num_vertices()) throw std::invalid_argument("vertex map degree does not match complex");
    for (const Simplex& f : k.facets()) {
      Simplex t = apply(g, f);
      if (!std::binary_search(k.facets().begin(), k.facets().end(), t)) {
        throw std::invalid_argument("action is not simplicial");
      }
    }
  }
  std::set<Simplex> inv;
  for (const Simplex& s : k.simplices()) {
    bool fixed = std::all_of(vertex_maps.begin(), vertex_maps.end(), [&](const Perm& g) { return apply(g, s) == s; });
    if (fixed) inv.insert(s);
  }
  // Covering relations among invariant simplices, via the facets containing each.
  std::map<Simplex, std::vector<Simplex>> covers;
  std::vector<Simplex> minimal;
  for (const Simplex& s : inv) {
    std::set<Simplex> ups;
    for (const Simplex& f : k.facets()) {
      if (!std::includes(f.begin(), f.end(), s.begin(), s.end()) || f.size() == s.size()) continue;
      Simplex rest;
      std::set_difference(f.begin(), f.end(), s.begin(), s.end(), std::back_inserter(rest));
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << rest.size()); ++mask) {
        Simplex t = s;
        for (std::size_t i = 0; i < rest.size(); ++i) {
          if (mask & (std::uint64_t{1} << i)) t.push_back(rest[i]);
        }
        std::sort(t.begin(), t.end());
        if (inv.count(t)) ups.insert(t);
      }
    }
    std::vector<Simplex>& cv = covers[s];
    for (const Simplex& t : ups) {
      bool direct = std::none_of(ups.begin(), ups.end(), [&](const Simplex& m) {
        return m.size() < t.size() && std::includes(t.begin(), t.end(), m.begin(), m.end());
      });
      if (direct) cv.push_back(t);
    }
    bool is_min = true;
    for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << s.size()) && is_min; ++mask) {
      Simplex f;
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (mask & (std::uint64_t{1} << i)) f.push_back(s[i]);
      }
      if (inv.count(f)) is_min = false;
    }
    if (is_min) minimal.push_back(s);
  }
  std::vector<std::vector<std::string>> chains;
  std::vector<std::string> chain;
  std::function<void(const Simplex&)> walk = [&](const Simplex& s) {
    chain.push_back(bary_name(k, s));
    const auto& cv = covers[s];
    if (cv.empty()) chains.push_back(chain);
    for (const Simplex& t : cv) walk(t);
    chain.pop_back();
  };
  for (const Simplex& m : minimal) walk(m);
  return SimplicialComplex::from_named_facets(chains);
}

SimplicialComplex fixed_subcomplex(const SimplicialComplex& k, const PermGroup& acting,
                                   const std::vector<Perm>& action, const PermGroup& h) {
  if (action.size() != acting.generators().size()) throw std::invalid_argument("one vertex map per generator");
  auto hom = hom_by_graph(acting, PermGroup(k.num_vertices(), action), action);
  if (!hom) throw std::invalid_argument("vertex maps do not define an action");
  std::vector<Perm> maps;
  for (const Perm& g : h.generators()) {
    if (!acting.contains(g)) throw std::invalid_argument("subgroup element outside the acting group");
    maps.push_back(hom->apply(g));
  }
  return fixed_subcomplex(k, maps);
}

// ---------------------------------------------------------------------------
// Helly degree shift

HellyVerdict helly_shift_check(const SimplicialComplex& x, const std::vector<SimplicialComplex>& ys, std::uint32_t p) {
  if (ys.empty()) throw std::invalid_argument("helly_shift_check needs at least one subcomplex");
  if (ys.size() > 20) throw std::invalid_argument("helly_shift_check: too many subcomplexes");
  for (const SimplicialComplex& y : ys) {
    if (!is_subcomplex(y, x)) throw std::invalid_argument("helly_shift_check: Y is not a subcomplex of X");
  }
  HellyVerdict v;
  const std::size_t n = ys.size();
  for (std::uint64_t mask = 1; mask + 1 < (std::uint64_t{1} << n); ++mask) {
    SimplicialComplex inter;
    bool first = true;
    std::string label = "{";
    for (std::size_t i = 0; i < n; ++i) {
      if (!(mask & (std::uint64_t{1} << i))) continue;
      label += (first ? "" : ",") + std::to_string(i);
      inter = first ? ys[i] : complex_intersection(inter, ys[i]);
      first = false;
    }
    label += "}";
    auto b = reduced_betti_from_minus_one(inter, p);
    if (std::any_of(b.begin(), b.end(), [](std::size_t z) { return z != 0; })) {
      v.hypotheses_hold = false;
      v.failed_subsets.push_back(label);
    }
  }
  if (!v.hypotheses_hold) return v;
  SimplicialComplex uni = ys[0];
  SimplicialComplex inter = ys[0];
  for (std::size_t i = 1; i < n; ++i) {
    uni = complex_union(uni, ys[i]);
    inter = complex_intersection(inter, ys[i]);
  }
  v.betti_union = reduced_betti_from_minus_one(uni, p);
  v.betti_intersection = reduced_betti_from_minus_one(inter, p);
  v.evaluated = true;
  // Compare degree m of the union with degree m-n+1 of the intersection;
  // index i of a vector stands for degree i-1.
  const std::int64_t shift = static_cast<std::int64_t>(n) - 1;
  auto at = [](const std::vector<std::size_t>& b, std::int64_t deg) -> std::size_t {
    const std::int64_t i = deg + 1;
    return (i < 0 || i >= static_cast<std::int64_t>(b.size())) ? 0 : b[static_cast<std::size_t>(i)];
  };
  const std::int64_t hi = std::max<std::int64_t>(static_cast<std::int64_t>(v.betti_union.size()),
                                                 static_cast<std::int64_t>(v.betti_intersection.size()) + shift);
  v.shift_holds = true;
  // m - shift runs from -1 - shift upward, so every degree of A is compared.
  for (std::int64_t m = -1; m <= hi; ++m) {
    if (at(v.betti_union, m) != at(v.betti_intersection, m - shift)) v.shift_holds = false;
  }
  return v;
}

}  // namespace retra
