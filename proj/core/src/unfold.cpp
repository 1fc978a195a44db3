#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "retra/cog.hpp"

namespace retra {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

std::string padded(std::size_t value, std::size_t count) {
  std::string digits = std::to_string(value);
  const std::size_t width = std::to_string(count > 0 ? count - 1 : 0).size();
  return std::string(width - std::min(width, digits.size()), '0') + digits;
}

// Coset labels of g*C for C generated by `gens` (elements of the table's
// group): the smallest element index in each coset.
std::vector<std::size_t> coset_labels(const ElementTable& t, const std::vector<Perm>& gens) {
  std::vector<std::size_t> parent(t.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (const Perm& c : gens) {
    if (c.is_identity()) continue;
    for (std::size_t i = 0; i < t.size(); ++i) {
      std::size_t a = find(i);
      std::size_t b = find(t.right_mul(i, c));
      if (a == b) continue;
      if (a < b) std::swap(a, b);
      parent[a] = b;
    }
  }
  std::vector<std::size_t> label(t.size());
  for (std::size_t i = 0; i < t.size(); ++i) label[i] = find(i);
  return label;
}

bool contains_simplex(const Simplex& big, const Simplex& small) {
  return std::includes(big.begin(), big.end(), small.begin(), small.end());
}

}  // namespace

Unfolding unfold_block(const BlockOfGroups& cog, std::size_t sigma) {
  if (sigma >= cog.num_simplices()) throw std::invalid_argument("unfold: bad simplex");
  if (!cog.on_boundary(sigma)) {
    throw std::invalid_argument("unfold: " + cog.simplex_name(sigma) + " is not on the boundary");
  }
  const SimplicialComplex& k = cog.complex();
  const Simplex& sig = cog.simplex(sigma);
  const PermGroup& hgroup = cog.generated(sigma);
  auto table = std::make_shared<const ElementTable>(hgroup);
  const ElementTable& h = *table;
  const std::size_t order = h.size();
  const auto& sig_gens = cog.generators_at(sigma);
  const std::vector<Perm>& hgens = hgroup.generators();

  Unfolding u;
  u.sigma = sigma;
  u.elements = table;
  u.inverse.resize(order);
  for (std::size_t g = 0; g < order; ++g) u.inverse[g] = *h.index_of(h.element(g).inverse());

  // C_tau = G(tau) ∩ G(sigma) inside G(sigma), generated by the side generators
  // of sides containing tau ∪ sigma; stored as the positions in sig_gens.
  const std::size_t nsimp = cog.num_simplices();
  std::vector<std::vector<std::size_t>> c_positions(nsimp);
  std::vector<std::vector<std::size_t>> labels(nsimp);
  for (std::size_t tau = 0; tau < nsimp; ++tau) {
    std::vector<Perm> cgens;
    for (std::size_t g : cog.generators_at(tau)) {
      if (auto pos = cog.local_position(sigma, g)) {
        c_positions[tau].push_back(*pos);
        cgens.push_back(hgens[*pos]);
      }
    }
    labels[tau] = coset_labels(h, cgens);
  }

  // Vertices [v, g] named "<v>.<coset label>".
  std::vector<std::string> names;
  std::map<std::pair<VertexId, std::size_t>, VertexId> vid;
  for (VertexId v = 0; v < k.num_vertices(); ++v) {
    const std::size_t vs = cog.id_of(Simplex{v});
    for (std::size_t g = 0; g < order; ++g) {
      const std::size_t lab = labels[vs][g];
      if (vid.emplace(std::make_pair(v, lab), static_cast<VertexId>(names.size())).second) {
        names.push_back(k.vertex_names()[v] + "." + padded(lab, order));
      }
    }
  }
  auto vertex_at = [&](VertexId v, std::size_t g) {
    return vid.at({v, labels[cog.id_of(Simplex{v})][g]});
  };
  std::vector<Simplex> facets;
  for (const Simplex& c : k.facets()) {
    for (std::size_t g = 0; g < order; ++g) {
      Simplex f;
      for (VertexId v : c) f.push_back(vertex_at(v, g));
      facets.push_back(std::move(f));
    }
  }
  SimplicialComplex raw(names, facets);
  if (raw.facets().size() != k.facets().size() * order) {
    throw std::logic_error("unfolding at " + cog.simplex_name(sigma) + " identifies distinct tiles");
  }
  BlockCheck bc = validate_block(raw);
  if (!bc.block) {
    throw std::logic_error("unfolding at " + cog.simplex_name(sigma) + " is not a block: " + to_string(bc.reason));
  }
  const Block& nb = *bc.block;
  const SimplicialComplex& nk = nb.complex;
  // Original local vertex ids -> ids in the normalized complex.
  std::vector<VertexId> renum(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) renum[i] = *nk.find_vertex(names[i]);
  auto image_of = [&](const Simplex& tau, std::size_t g) {
    Simplex s;
    for (VertexId v : tau) s.push_back(renum[vertex_at(v, g)]);
    std::sort(s.begin(), s.end());
    return s;
  };

  u.simplex_of.assign(nsimp, std::vector<std::size_t>(order, npos));
  std::vector<std::pair<std::size_t, std::size_t>> origin(nk.simplices().size(), {npos, npos});
  for (std::size_t tau = 0; tau < nsimp; ++tau) {
    for (std::size_t g = 0; g < order; ++g) {
      const std::size_t id = *nk.simplex_index(image_of(cog.simplex(tau), g));
      u.simplex_of[tau][g] = id;
      const std::size_t lab = labels[tau][g];
      if (origin[id].first == npos) {
        origin[id] = {tau, lab};
      } else if (origin[id] != std::make_pair(tau, lab)) {
        throw std::logic_error("unfolding at " + cog.simplex_name(sigma) + " is not simplicial");
      }
    }
  }

  // Sides [s, g] for s not containing sigma.
  std::map<Simplex, std::size_t> side_index;
  for (std::size_t i = 0; i < nb.sides.size(); ++i) side_index.emplace(nb.sides[i], i);
  u.side_of.assign(cog.num_sides(), std::vector<std::size_t>(order, npos));
  std::vector<std::pair<std::size_t, std::size_t>> side_origin(nb.sides.size(), {npos, npos});
  std::size_t expected = 0;
  for (std::size_t s = 0; s < cog.num_sides(); ++s) {
    if (contains_simplex(cog.base().sides[s], sig)) continue;
    ++expected;
    for (std::size_t g = 0; g < order; ++g) {
      auto it = side_index.find(image_of(cog.base().sides[s], g));
      if (it == side_index.end()) throw std::logic_error("unfolded side is not a side of the unfolding");
      u.side_of[s][g] = it->second;
      side_origin[it->second] = {s, g};
    }
  }
  if (expected * order != nb.sides.size()) {
    throw std::logic_error("unfolding at " + cog.simplex_name(sigma) + " has unexpected sides");
  }

  // Side-group generator counts of the new block must be known before the
  // locals: a new side [s, g] carries the generators of s.
  std::vector<LocalGroup> locals;
  locals.reserve(nk.simplices().size());
  for (std::size_t id = 0; id < nk.simplices().size(); ++id) {
    const auto [tau, g0] = origin[id];
    const LocalGroup& lt = cog.local(tau);
    const std::size_t deg = lt.group.degree();
    // Sides of the unfolding containing [tau, g0], ascending.
    std::vector<std::size_t> sides;
    for (std::size_t s : cog.sides_at(tau)) {
      if (contains_simplex(cog.base().sides[s], sig)) continue;
      for (std::size_t g = 0; g < order; ++g) {
        if (labels[tau][g] == g0) sides.push_back(u.side_of[s][g]);
      }
    }
    std::sort(sides.begin(), sides.end());
    // Conjugators c = g0^-1 g' in C_tau, realized in G(tau).
    std::unique_ptr<ElementTable> ctable;
    std::vector<Perm> cgens_h;
    std::vector<Perm> cgens_tau;
    for (std::size_t pos : c_positions[tau]) {
      cgens_h.push_back(hgens[pos]);
      const std::size_t global = sig_gens[pos];
      cgens_tau.push_back(lt.side_images[*cog.local_position(tau, global)]);
    }
    std::vector<Perm> images;
    for (std::size_t ns : sides) {
      const auto [s, gp] = side_origin[ns];
      Perm c = h.element(u.inverse[g0]) * h.element(gp);
      Perm chat(deg);
      if (!c.is_identity()) {
        if (!ctable) ctable = std::make_unique<ElementTable>(PermGroup(hgroup.degree(), cgens_h, hgroup.limits()));
        auto ci = ctable->index_of(c);
        if (!ci) throw std::logic_error("tile conjugator outside the stabilizer");
        chat = evaluate(ctable->word(*ci), cgens_tau, deg);
      }
      const Perm chat_inv = chat.inverse();
      for (std::size_t j = 0; j < cog.side_generator_count(s); ++j) {
        const std::size_t global = cog.side_generator_offset(s) + j;
        const Perm& x = lt.side_images[*cog.local_position(tau, global)];
        images.push_back(chat * x * chat_inv);
      }
    }
    LocalGroup lg = make_local(deg, std::move(images), lt.group.limits());
    // |G'([tau,g])| * |C_tau| = |G(tau)| when r_{tau sigma} exists.
    const std::uint64_t c_order = PermGroup(hgroup.degree(), cgens_h, hgroup.limits()).order();
    if (lg.group.order() * c_order != cog.generated(tau).order()) {
      throw std::domain_error("no retraction from " + cog.simplex_name(tau) + " onto " + cog.simplex_name(sigma));
    }
    locals.push_back(std::move(lg));
  }
  u.block = std::make_shared<const BlockOfGroups>(nb, std::move(locals));
  return u;
}

ExtendedBlockOfGroups unfold(const ExtendedBlockOfGroups& ext, std::size_t sigma) {
  const BlockOfGroups& cog = ext.core();
  if (sigma >= cog.num_simplices() || !cog.on_boundary(sigma)) {
    throw std::invalid_argument("unfold: simplex is not on the boundary");
  }
  if (!retraction(ext, kEmptySimplex, sigma)) {
    throw std::domain_error("unfold: no retraction onto " + cog.simplex_name(sigma));
  }
  Unfolding u = unfold_block(cog, sigma);
  const ElementTable& h = *u.elements;
  const std::size_t deg = ext.top().degree();
  const std::vector<Perm> sig_top = ext.top_images_at(sigma);
  std::vector<Perm> phi_g(h.size());
  for (std::size_t g = 0; g < h.size(); ++g) phi_g[g] = evaluate(h.word(g), sig_top, deg);
  const BlockOfGroups& nb = *u.block;
  std::vector<Perm> top_images(nb.side_generators().size(), Perm(deg));
  for (std::size_t s = 0; s < cog.num_sides(); ++s) {
    for (std::size_t g = 0; g < h.size(); ++g) {
      const std::size_t ns = u.side_of[s][g];
      if (ns == npos) continue;
      const Perm inv = phi_g[g].inverse();
      for (std::size_t j = 0; j < cog.side_generator_count(s); ++j) {
        top_images[nb.side_generator_offset(ns) + j] =
            phi_g[g] * ext.top_images()[cog.side_generator_offset(s) + j] * inv;
      }
    }
  }
  PermGroup top(deg, top_images, ext.top().limits());
  if (top.order() * h.size() != ext.generated_top().order()) {
    throw std::logic_error("unfolded top is not the kernel of the retraction");
  }
  return ExtendedBlockOfGroups(nb, std::move(top), std::move(top_images));
}

// ---------------------------------------------------------------------------
// Developments

Simplex Development::tile(std::size_t simplex_id, std::size_t g) const {
  Simplex s;
  for (VertexId v : base->simplex(simplex_id)) s.push_back(vertex_of[v][g]);
  std::sort(s.begin(), s.end());
  return s;
}

Development development(const ExtendedBlockOfGroups& ext) {
  const BlockOfGroups& cog = ext.core();
  const SimplicialComplex& k = cog.complex();
  auto table = std::make_shared<const ElementTable>(ext.generated_top());
  const ElementTable& t = *table;
  const std::size_t order = t.size();
  std::vector<std::vector<std::size_t>> labels(k.num_vertices());
  std::vector<std::string> names;
  std::map<std::pair<VertexId, std::size_t>, VertexId> vid;
  Development d;
  for (VertexId v = 0; v < k.num_vertices(); ++v) {
    const std::size_t vs = cog.id_of(Simplex{v});
    d.base_vertex_ids.push_back(vs);
    labels[v] = coset_labels(t, ext.top_images_at(vs));
    for (std::size_t g = 0; g < order; ++g) {
      if (vid.emplace(std::make_pair(v, labels[v][g]), static_cast<VertexId>(names.size())).second) {
        names.push_back(k.vertex_names()[v] + "_" + padded(labels[v][g], order));
      }
    }
  }
  std::vector<Simplex> facets;
  for (const Simplex& c : k.facets()) {
    for (std::size_t g = 0; g < order; ++g) {
      Simplex f;
      for (VertexId v : c) f.push_back(vid.at({v, labels[v][g]}));
      facets.push_back(std::move(f));
    }
  }
  d.complex = SimplicialComplex(names, facets);
  std::vector<VertexId> renum(names.size());
  for (std::size_t i = 0; i < names.size(); ++i) renum[i] = *d.complex.find_vertex(names[i]);
  d.vertex_of.assign(k.num_vertices(), std::vector<VertexId>(order));
  for (VertexId v = 0; v < k.num_vertices(); ++v) {
    for (std::size_t g = 0; g < order; ++g) d.vertex_of[v][g] = renum[vid.at({v, labels[v][g]})];
  }
  const std::size_t nv = d.complex.num_vertices();
  for (std::size_t s = 0; s < ext.top_images().size(); ++s) {
    std::vector<Point> img(nv);
    for (VertexId v = 0; v < k.num_vertices(); ++v) {
      for (std::size_t g = 0; g < order; ++g) img[d.vertex_of[v][g]] = d.vertex_of[v][t.left_mul(s, g)];
    }
    d.action.emplace_back(std::move(img));
  }
  d.elements = table;
  d.base = std::make_shared<const BlockOfGroups>(cog);
  return d;
}

}  // namespace retra
