#include "retra/complex.hpp"

#include <algorithm>
#include <map>
#include <mutex>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "retra/errors.hpp"

namespace retra {

struct SimplicialComplex::Cache {
  std::once_flag once;
  std::vector<Simplex> simplices;
  std::map<Simplex, std::size_t> index;
  std::vector<std::vector<VertexId>> adjacency;
  std::unordered_set<std::uint64_t> edges;
  std::vector<std::vector<std::size_t>> star;  // vertex -> facets containing it
};

namespace {

std::uint64_t edge_key(VertexId a, VertexId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

std::vector<Simplex> maximal_only(std::vector<Simplex> sets, std::size_t nverts) {
  for (Simplex& s : sets) {
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
      throw std::invalid_argument("facet repeats a vertex");
    }
  }
  sets.erase(std::remove_if(sets.begin(), sets.end(), [](const Simplex& s) { return s.empty(); }), sets.end());
  std::sort(sets.begin(), sets.end(), [](const Simplex& a, const Simplex& b) {
    return a.size() != b.size() ? a.size() > b.size() : a < b;
  });
  sets.erase(std::unique(sets.begin(), sets.end()), sets.end());
  std::vector<std::vector<std::size_t>> by_vertex(nverts);
  std::vector<Simplex> kept;
  for (Simplex& s : sets) {
    bool covered = false;
    for (std::size_t f : by_vertex[s.front()]) {
      if (kept[f].size() > s.size() && std::includes(kept[f].begin(), kept[f].end(), s.begin(), s.end())) {
        covered = true;
        break;
      }
    }
    if (covered) continue;
    for (VertexId v : s) by_vertex[v].push_back(kept.size());
    kept.push_back(std::move(s));
  }
  std::sort(kept.begin(), kept.end());
  return kept;
}

}  // namespace

SimplicialComplex::SimplicialComplex() : cache_(std::make_shared<Cache>()) {}

SimplicialComplex::SimplicialComplex(std::vector<std::string> vertex_names, const std::vector<Simplex>& facets)
    : cache_(std::make_shared<Cache>()) {
  std::vector<bool> used(vertex_names.size(), false);
  for (const Simplex& f : facets) {
    for (VertexId v : f) {
      if (v >= vertex_names.size()) throw std::invalid_argument("facet vertex id out of range");
      used[v] = true;
    }
  }
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < vertex_names.size(); ++i) {
    if (used[i]) order.push_back(i);
  }
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return vertex_names[a] < vertex_names[b]; });
  std::vector<VertexId> remap(vertex_names.size(), 0);
  for (std::size_t k = 0; k < order.size(); ++k) {
    if (k > 0 && vertex_names[order[k]] == vertex_names[order[k - 1]]) {
      throw std::invalid_argument("duplicate vertex name " + vertex_names[order[k]]);
    }
    remap[order[k]] = static_cast<VertexId>(k);
    names_.push_back(vertex_names[order[k]]);
  }
  std::vector<Simplex> mapped;
  mapped.reserve(facets.size());
  for (const Simplex& f : facets) {
    Simplex s;
    s.reserve(f.size());
    for (VertexId v : f) s.push_back(remap[v]);
    mapped.push_back(std::move(s));
  }
  facets_ = maximal_only(std::move(mapped), names_.size());
}

SimplicialComplex SimplicialComplex::from_named_facets(const std::vector<std::vector<std::string>>& facets) {
  std::map<std::string, VertexId> ids;
  std::vector<std::string> names;
  std::vector<Simplex> fs;
  for (const auto& f : facets) {
    Simplex s;
    for (const std::string& n : f) {
      auto [it, fresh] = ids.emplace(n, static_cast<VertexId>(names.size()));
      if (fresh) names.push_back(n);
      s.push_back(it->second);
    }
    fs.push_back(std::move(s));
  }
  return SimplicialComplex(std::move(names), fs);
}

int SimplicialComplex::dim() const {
  int d = -1;
  for (const Simplex& f : facets_) d = std::max(d, static_cast<int>(f.size()) - 1);
  return d;
}

const SimplicialComplex::Cache& SimplicialComplex::cache() const {
  std::call_once(cache_->once, [this] {
    Cache& c = *cache_;
    std::set<Simplex> all;
    for (const Simplex& f : facets_) {
      const std::size_t n = f.size();
      for (std::uint64_t mask = 1; mask < (std::uint64_t{1} << n); ++mask) {
        Simplex s;
        for (std::size_t i = 0; i < n; ++i) {
          if (mask & (std::uint64_t{1} << i)) s.push_back(f[i]);
        }
        all.insert(std::move(s));
      }
    }
    c.simplices.assign(all.begin(), all.end());
    std::stable_sort(c.simplices.begin(), c.simplices.end(),
                     [](const Simplex& a, const Simplex& b) { return a.size() < b.size(); });
    for (std::size_t i = 0; i < c.simplices.size(); ++i) c.index.emplace(c.simplices[i], i);
    c.adjacency.assign(names_.size(), {});
    for (const Simplex& s : c.simplices) {
      if (s.size() != 2) continue;
      c.adjacency[s[0]].push_back(s[1]);
      c.adjacency[s[1]].push_back(s[0]);
      c.edges.insert(edge_key(s[0], s[1]));
    }
    for (auto& a : c.adjacency) std::sort(a.begin(), a.end());
    c.star.assign(names_.size(), {});
    for (std::size_t f = 0; f < facets_.size(); ++f) {
      for (VertexId v : facets_[f]) c.star[v].push_back(f);
    }
  });
  return *cache_;
}

bool SimplicialComplex::contains(const Simplex& s) const {
  if (s.empty()) return true;
  return cache().index.count(s) > 0;
}

const std::vector<Simplex>& SimplicialComplex::simplices() const { return cache().simplices; }

std::vector<Simplex> SimplicialComplex::simplices_of_dim(int d) const {
  std::vector<Simplex> out;
  for (const Simplex& s : simplices()) {
    if (static_cast<int>(s.size()) == d + 1) out.push_back(s);
  }
  return out;
}

std::optional<std::size_t> SimplicialComplex::simplex_index(const Simplex& s) const {
  const auto& idx = cache().index;
  auto it = idx.find(s);
  if (it == idx.end()) return std::nullopt;
  return it->second;
}

std::optional<VertexId> SimplicialComplex::find_vertex(std::string_view name) const {
  auto it = std::lower_bound(names_.begin(), names_.end(), name);
  if (it == names_.end() || *it != name) return std::nullopt;
  return static_cast<VertexId>(it - names_.begin());
}

Simplex SimplicialComplex::simplex_from_names(const std::vector<std::string>& names) const {
  Simplex s;
  for (const std::string& n : names) {
    auto v = find_vertex(n);
    if (!v) throw std::invalid_argument("unknown vertex " + n);
    s.push_back(*v);
  }
  std::sort(s.begin(), s.end());
  if (std::adjacent_find(s.begin(), s.end()) != s.end()) throw std::invalid_argument("simplex repeats a vertex");
  return s;
}

std::vector<std::string> SimplicialComplex::names_of(const Simplex& s) const {
  std::vector<std::string> out;
  for (VertexId v : s) out.push_back(names_.at(v));
  return out;
}

const std::vector<std::vector<VertexId>>& SimplicialComplex::adjacency() const { return cache().adjacency; }

bool SimplicialComplex::adjacent(VertexId a, VertexId b) const { return cache().edges.count(edge_key(a, b)) > 0; }

bool operator==(const SimplicialComplex& a, const SimplicialComplex& b) {
  return a.vertex_names() == b.vertex_names() && a.facets() == b.facets();
}

namespace {

// Facets of k containing sigma (sigma nonempty).
std::vector<const Simplex*> facets_containing(const SimplicialComplex& k,
                                              const std::vector<std::vector<std::size_t>>& star,
                                              const Simplex& sigma) {
  std::vector<const Simplex*> out;
  for (std::size_t f : star[sigma.front()]) {
    const Simplex& fs = k.facets()[f];
    if (std::includes(fs.begin(), fs.end(), sigma.begin(), sigma.end())) out.push_back(&fs);
  }
  return out;
}

SimplicialComplex link_from_facets(const SimplicialComplex& k, const std::vector<const Simplex*>& facets,
                                   const Simplex& sigma) {
  std::vector<Simplex> lf;
  for (const Simplex* f : facets) {
    Simplex d;
    std::set_difference(f->begin(), f->end(), sigma.begin(), sigma.end(), std::back_inserter(d));
    if (!d.empty()) lf.push_back(std::move(d));
  }
  return SimplicialComplex(k.vertex_names(), lf);
}

}  // namespace

SimplicialComplex link(const SimplicialComplex& k, const Simplex& sigma) {
  if (sigma.empty()) return k;
  if (!k.contains(sigma)) throw std::invalid_argument("link: simplex not in complex");
  // star index lives in the cache; recompute facets through contains-filter
  std::vector<const Simplex*> fs;
  for (const Simplex& f : k.facets()) {
    if (std::includes(f.begin(), f.end(), sigma.begin(), sigma.end())) fs.push_back(&f);
  }
  return link_from_facets(k, fs, sigma);
}

const char* to_string(BlockFailure f) {
  switch (f) {
    case BlockFailure::none: return "none";
    case BlockFailure::empty_complex: return "empty_complex";
    case BlockFailure::not_pure: return "not_pure";
    case BlockFailure::not_gallery_connected: return "not_gallery_connected";
    case BlockFailure::non_normal_link: return "non_normal_link";
    case BlockFailure::empty_boundary: return "empty_boundary";
  }
  return "unknown";
}

bool is_pure(const SimplicialComplex& k) {
  const int d = k.dim();
  return std::all_of(k.facets().begin(), k.facets().end(),
                     [&](const Simplex& f) { return static_cast<int>(f.size()) == d + 1; });
}

bool is_gallery_connected(const SimplicialComplex& k) {
  const auto& fs = k.facets();
  if (fs.size() <= 1) return true;
  if (k.dim() == 0) return true;
  std::vector<std::size_t> parent(fs.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  std::map<Simplex, std::size_t> first_chamber;
  for (std::size_t c = 0; c < fs.size(); ++c) {
    for (std::size_t drop = 0; drop < fs[c].size(); ++drop) {
      Simplex face = fs[c];
      face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
      auto [it, fresh] = first_chamber.emplace(face, c);
      if (!fresh) parent[find(c)] = find(it->second);
    }
  }
  const std::size_t root = find(0);
  for (std::size_t c = 1; c < fs.size(); ++c) {
    if (find(c) != root) return false;
  }
  return true;
}

bool is_normal(const SimplicialComplex& k) {
  if (!is_pure(k) || !is_gallery_connected(k)) return false;
  const int d = k.dim();
  for (const Simplex& s : k.simplices()) {
    if (static_cast<int>(s.size()) > d - 1) break;  // links of dimension <= 0 are always connected
    if (!is_gallery_connected(link(k, s))) return false;
  }
  return true;
}

BlockCheck validate_block(const SimplicialComplex& k) {
  BlockCheck r;
  if (k.empty()) {
    r.reason = BlockFailure::empty_complex;
    return r;
  }
  if (!is_pure(k)) {
    r.reason = BlockFailure::not_pure;
    return r;
  }
  if (!is_gallery_connected(k)) {
    r.reason = BlockFailure::not_gallery_connected;
    return r;
  }
  const int d = k.dim();
  for (const Simplex& s : k.simplices()) {
    if (static_cast<int>(s.size()) > d - 1) break;
    if (!is_gallery_connected(link(k, s))) {
      r.reason = BlockFailure::non_normal_link;
      std::string names;
      for (const std::string& n : k.names_of(s)) names += (names.empty() ? "" : " ") + n;
      r.detail = "link of {" + names + "} is not gallery connected";
      return r;
    }
  }
  std::map<Simplex, std::size_t> count;
  if (d >= 1) {
    for (const Simplex& f : k.facets()) {
      for (std::size_t drop = 0; drop < f.size(); ++drop) {
        Simplex face = f;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
        ++count[face];
      }
    }
  }
  std::vector<Simplex> sides;
  for (const auto& [face, c] : count) {
    if (c == 1) sides.push_back(face);
  }
  if (sides.empty()) {
    r.reason = BlockFailure::empty_boundary;
    return r;
  }
  Block b;
  b.complex = k;
  b.dim = d;
  b.boundary = SimplicialComplex(k.vertex_names(), sides);
  b.sides = std::move(sides);
  r.block = std::move(b);
  return r;
}

// ---------------------------------------------------------------------------
// Systole

namespace {

class CycleSearch {
 public:
  CycleSearch(const SimplicialComplex& k, std::size_t length) : k_(k), adj_(k.adjacency()), len_(length) {}

  bool run(VertexId start) {
    path_.assign(1, start);
    return extend();
  }
  const std::vector<VertexId>& path() const { return path_; }

 private:
  bool extend() {
    const std::size_t depth = path_.size();
    const VertexId v0 = path_.front();
    for (VertexId u : adj_[path_.back()]) {
      if (u <= v0) continue;
      if (std::find(path_.begin(), path_.end(), u) != path_.end()) continue;
      bool chord = false;
      for (std::size_t i = 1; i + 1 < depth && !chord; ++i) chord = k_.adjacent(u, path_[i]);
      if (chord) continue;
      const bool closes = depth + 1 == len_;
      if (depth >= 2) {
        const bool to_start = k_.adjacent(u, v0);
        if (closes != to_start) continue;
      }
      if (closes) {
        if (u < path_[1]) continue;
        if (len_ == 3) {
          Simplex tri{v0, path_[1], u};
          std::sort(tri.begin(), tri.end());
          if (k_.contains(tri)) continue;
        }
        path_.push_back(u);
        return true;
      }
      path_.push_back(u);
      if (extend()) return true;
      path_.pop_back();
    }
    return false;
  }

  const SimplicialComplex& k_;
  const std::vector<std::vector<VertexId>>& adj_;
  std::size_t len_;
  std::vector<VertexId> path_;
};

}  // namespace

SystoleResult systole_at_least(const SimplicialComplex& k, std::size_t bound) {
  SystoleResult r;
  if (k.dim() < 1) return r;
  for (std::size_t len = 3; len < bound; ++len) {
    CycleSearch search(k, len);
    for (VertexId v = 0; v < k.num_vertices(); ++v) {
      if (search.run(v)) {
        r.holds = false;
        r.witness = search.path();
        return r;
      }
    }
  }
  return r;
}

LargenessResult is_k_large(const SimplicialComplex& k, std::size_t bound) {
  LargenessResult r;
  if (bound < 4) throw std::invalid_argument("is_k_large requires k >= 4");
  auto top = systole_at_least(k, bound);
  if (!top.holds) {
    r.holds = false;
    r.witness = k.names_of(top.witness);
    return r;
  }
  std::vector<std::vector<std::size_t>> star(k.num_vertices());
  for (std::size_t f = 0; f < k.facets().size(); ++f) {
    for (VertexId v : k.facets()[f]) star[v].push_back(f);
  }
  for (const Simplex& s : k.simplices()) {
    auto fs = facets_containing(k, star, s);
    // A link needs an edge to carry a cycle.
    bool has_edge = std::any_of(fs.begin(), fs.end(), [&](const Simplex* f) { return f->size() >= s.size() + 2; });
    if (!has_edge) continue;
    SimplicialComplex lk = link_from_facets(k, fs, s);
    auto res = systole_at_least(lk, bound);
    if (!res.holds) {
      r.holds = false;
      r.at = s;
      r.witness = lk.names_of(res.witness);
      return r;
    }
  }
  return r;
}

bool is_flag(const SimplicialComplex& k) {
  const auto& adj = k.adjacency();
  for (const Simplex& s : k.simplices()) {
    for (VertexId v : adj[s.front()]) {
      if (std::binary_search(s.begin(), s.end(), v)) continue;
      bool all = std::all_of(s.begin() + 1, s.end(), [&](VertexId w) { return k.adjacent(v, w); });
      if (!all) continue;
      Simplex t = s;
      t.insert(std::upper_bound(t.begin(), t.end(), v), v);
      if (!k.contains(t)) return false;
    }
  }
  return true;
}

// ---------------------------------------------------------------------------
// Files and constructions

SimplicialComplex parse_complex(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::vector<std::vector<std::string>> facets;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    std::istringstream ls(line);
    std::vector<std::string> f;
    std::string tok;
    while (ls >> tok) f.push_back(tok);
    if (f.empty()) continue;
    std::vector<std::string> sorted = f;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw ParseError("line " + std::to_string(lineno) + ": facet repeats a vertex");
    }
    facets.push_back(std::move(f));
  }
  return SimplicialComplex::from_named_facets(facets);
}

std::string format_complex(const SimplicialComplex& k) {
  std::string out;
  for (const Simplex& f : k.facets()) {
    for (std::size_t i = 0; i < f.size(); ++i) {
      if (i) out += ' ';
      out += k.vertex_names()[f[i]];
    }
    out += '\n';
  }
  return out;
}

SimplicialComplex barycentric_subdivision(const SimplicialComplex& k) {
  auto bary_name = [&](const Simplex& s) {
    std::string n = "{";
    for (std::size_t i = 0; i < s.size(); ++i) n += (i ? "," : "") + k.vertex_names()[s[i]];
    return n + "}";
  };
  std::vector<std::vector<std::string>> facets;
  for (const Simplex& f : k.facets()) {
    Simplex perm = f;
    do {
      std::vector<std::string> chain;
      Simplex prefix;
      for (VertexId v : perm) {
        prefix.insert(std::upper_bound(prefix.begin(), prefix.end(), v), v);
        chain.push_back(bary_name(prefix));
      }
      facets.push_back(std::move(chain));
    } while (std::next_permutation(perm.begin(), perm.end()));
  }
  return SimplicialComplex::from_named_facets(facets);
}

SimplicialComplex cone(const SimplicialComplex& k, const std::string& apex) {
  if (k.find_vertex(apex)) throw std::invalid_argument("cone apex already a vertex: " + apex);
  std::vector<std::vector<std::string>> facets;
  for (const Simplex& f : k.facets()) {
    auto names = k.names_of(f);
    names.push_back(apex);
    facets.push_back(std::move(names));
  }
  if (facets.empty()) facets.push_back({apex});
  return SimplicialComplex::from_named_facets(facets);
}

SimplicialComplex complex_union(const SimplicialComplex& a, const SimplicialComplex& b) {
  std::vector<std::vector<std::string>> facets;
  for (const Simplex& f : a.facets()) facets.push_back(a.names_of(f));
  for (const Simplex& f : b.facets()) facets.push_back(b.names_of(f));
  return SimplicialComplex::from_named_facets(facets);
}

SimplicialComplex complex_intersection(const SimplicialComplex& a, const SimplicialComplex& b) {
  std::vector<std::vector<std::string>> facets;
  for (const Simplex& fa : a.facets()) {
    auto na = a.names_of(fa);
    std::sort(na.begin(), na.end());
    for (const Simplex& fb : b.facets()) {
      auto nb = b.names_of(fb);
      std::sort(nb.begin(), nb.end());
      std::vector<std::string> both;
      std::set_intersection(na.begin(), na.end(), nb.begin(), nb.end(), std::back_inserter(both));
      if (!both.empty()) facets.push_back(std::move(both));
    }
  }
  return SimplicialComplex::from_named_facets(facets);
}

bool is_subcomplex(const SimplicialComplex& sub, const SimplicialComplex& k) {
  for (const Simplex& f : sub.facets()) {
    Simplex s;
    for (const std::string& n : sub.names_of(f)) {
      auto v = k.find_vertex(n);
      if (!v) return false;
      s.push_back(*v);
    }
    std::sort(s.begin(), s.end());
    if (!k.contains(s)) return false;
  }
  return true;
}

}  // namespace retra
