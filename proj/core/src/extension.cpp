#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>

#include "retra/cog.hpp"

namespace retra {

namespace {

constexpr std::size_t npos = static_cast<std::size_t>(-1);

GeneratorImages trivial_action(std::size_t ngens) { return GeneratorImages{1, std::vector<Perm>(ngens, Perm(1))}; }

std::vector<GeneratorImages> actions_from(const BlockOfGroups& cog, int k, const std::vector<std::size_t>& candidates,
                                          const Limits& limits) {
  const std::size_t ngens = cog.side_generators().size();
  if (k <= 0) return {trivial_action(ngens)};
  std::vector<GeneratorImages> out;
  std::size_t total_degree = 0;
  for (std::size_t sigma : candidates) {
    if (!cog.on_boundary(sigma) || cog.generated(sigma).is_trivial()) continue;
    Unfolding u = unfold_block(cog, sigma);
    const BlockOfGroups& nb = *u.block;
    const ElementTable& h = *u.elements;
    const std::size_t order = h.size();
    std::vector<std::size_t> reps;
    for (std::size_t tau = 0; tau < cog.num_simplices(); ++tau) reps.push_back(u.simplex_of[tau][0]);
    std::sort(reps.begin(), reps.end());
    reps.erase(std::unique(reps.begin(), reps.end()), reps.end());
    std::vector<GeneratorImages> subs = actions_from(nb, k - 1, reps, limits);
    const auto& sig_gens = cog.generators_at(sigma);
    for (const GeneratorImages& sub : subs) {
      const std::size_t dsub = sub.degree;
      const std::size_t deg = order * dsub;
      total_degree += deg;
      if (total_degree > limits.max_degree) {
        throw BudgetExceeded("coset actions at level " + std::to_string(k) + " exceed degree cap " +
                             std::to_string(limits.max_degree));
      }
      GeneratorImages gi;
      gi.degree = deg;
      for (std::size_t g = 0; g < ngens; ++g) {
        const SideGenerator& sg = cog.side_generators()[g];
        std::vector<Point> img(deg);
        auto pos = std::find(sig_gens.begin(), sig_gens.end(), g);
        if (pos != sig_gens.end()) {
          const std::size_t p = static_cast<std::size_t>(pos - sig_gens.begin());
          for (std::size_t t = 0; t < order; ++t) {
            const std::size_t t2 = h.left_mul(p, t);
            for (std::size_t y = 0; y < dsub; ++y) img[t * dsub + y] = static_cast<Point>(t2 * dsub + y);
          }
        } else {
          for (std::size_t t = 0; t < order; ++t) {
            const std::size_t ns = u.side_of[sg.side][u.inverse[t]];
            const Perm& py = sub.images[nb.side_generator_offset(ns) + sg.index];
            for (std::size_t y = 0; y < dsub; ++y) img[t * dsub + y] = static_cast<Point>(t * dsub + py(static_cast<Point>(y)));
          }
        }
        gi.images.emplace_back(std::move(img));
      }
      out.push_back(std::move(gi));
    }
  }
  if (out.empty()) out.push_back(trivial_action(ngens));
  return out;
}

}  // namespace

std::vector<GeneratorImages> level_actions(const BlockOfGroups& cog, int k, const Limits& limits) {
  std::vector<std::size_t> all(cog.num_simplices());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return actions_from(cog, k, all, limits);
}

MinimalExtension minimal_extension(const BlockOfGroups& cog, int n, const ConstructionOptions& opts) {
  if (n < 1) throw std::invalid_argument("minimal_extension: n must be at least 1");
  // Links at non-side boundary simplices must be n-retractible.
  for (std::size_t id = 0; id < cog.num_simplices(); ++id) {
    if (!cog.on_boundary(id)) continue;
    if (static_cast<int>(cog.simplex(id).size()) >= cog.base().dim) continue;  // sides have point links
    LinkResult lr = link_cog(cog, id);
    if (!lr.block) continue;
    RetractibilityResult rr = is_n_retractible(*lr.ext, n);
    if (!rr.holds) {
      std::string why;
      for (const std::string& s : rr.path) why += "; " + s;
      throw std::domain_error("link at " + cog.simplex_name(id) + " is not " + std::to_string(n) + "-retractible" + why);
    }
  }
  std::vector<GeneratorImages> actions = level_actions(cog, n, opts.limits);
  const std::size_t ngens = cog.side_generators().size();
  PermGroup top = product_embedding(actions, ngens, opts.limits);
  std::vector<Perm> images = top.generators();
  ExtendedBlockOfGroups ext(cog, top, images);

  if (!kills_relators(direct_limit_presentation(cog), images, top.degree())) {
    throw std::logic_error("minimal extension does not kill the direct-limit relators");
  }
  for (std::size_t id = 0; id < cog.num_simplices(); ++id) {
    if (cog.generators_at(id).empty()) continue;
    PermGroup img(top.degree(), ext.top_images_at(id), opts.limits);
    if (img.order() != cog.generated(id).order()) {
      throw std::logic_error("phi at " + cog.simplex_name(id) + " is not injective");
    }
  }
  if (opts.verify_retractibility) {
    RetractibilityResult rr = is_n_retractible(ext, n);
    if (!rr.holds) throw std::logic_error("minimal extension failed the retractibility check");
  }
  return MinimalExtension{std::move(ext), n, std::move(actions)};
}

// ---------------------------------------------------------------------------
// Retra-products

namespace {

std::string group_key(const PermGroup& g) { return format_group(g); }

}  // namespace

RetraProduct retra_product(int dim, const std::vector<PermGroup>& side_groups, int n, const ConstructionOptions& opts) {
  if (dim < 1) throw std::invalid_argument("retra_product: dimension must be at least 1");
  if (n < 1) throw std::invalid_argument("retra_product: n must be at least 1");
  if (side_groups.size() != static_cast<std::size_t>(dim) + 1) {
    throw std::invalid_argument("retra_product: need dim+1 side groups");
  }
  std::vector<std::string> names;
  Simplex chamber;
  for (int i = 0; i <= dim; ++i) {
    names.push_back(std::to_string(i));
    chamber.push_back(static_cast<VertexId>(i));
  }
  if (dim >= 10) throw std::invalid_argument("retra_product: dimension too large");
  SimplicialComplex delta(names, {chamber});
  Block block = *validate_block(delta).block;
  const auto& simplices = delta.simplices();
  std::vector<std::optional<LocalGroup>> locals(simplices.size());
  std::map<Simplex, std::size_t> side_of;
  for (std::size_t i = 0; i < block.sides.size(); ++i) side_of.emplace(block.sides[i], i);

  // Generators above each simplex in global order (sides ascending).
  std::vector<std::size_t> offset{0};
  for (const PermGroup& g : side_groups) offset.push_back(offset.back() + g.generators().size());

  std::map<std::string, std::pair<PermGroup, std::vector<Perm>>> cache;
  // Process simplices from the chamber downwards (codimension ascending).
  std::vector<std::size_t> order(simplices.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return simplices[a].size() > simplices[b].size(); });
  for (std::size_t id : order) {
    const Simplex& s = simplices[id];
    const int codim = dim + 1 - static_cast<int>(s.size());
    if (codim == 0) {
      locals[id] = make_local(1, {}, opts.limits);
      continue;
    }
    if (codim == 1) {
      const PermGroup& g = side_groups[side_of.at(s)];
      locals[id] = LocalGroup{g, g.generators()};
      continue;
    }
    // Link block of s: simplices rho ↔ rho ∪ s over the vertices not in s.
    std::vector<std::string> link_names;
    Simplex link_chamber;
    for (VertexId v = 0; v <= static_cast<VertexId>(dim); ++v) {
      if (!std::binary_search(s.begin(), s.end(), v)) {
        link_chamber.push_back(static_cast<VertexId>(link_names.size()));
        link_names.push_back(names[v]);
      }
    }
    SimplicialComplex lk(link_names, {link_chamber});
    Block lb = *validate_block(lk).block;
    auto lift = [&](const Simplex& rho) {
      Simplex u = s;
      for (VertexId v : rho) u.push_back(*delta.find_vertex(lk.vertex_names()[v]));
      std::sort(u.begin(), u.end());
      return *delta.simplex_index(u);
    };
    std::string key;
    std::vector<std::size_t> link_sides_global;  // base side index per link side
    for (const Simplex& ls : lb.sides) {
      const std::size_t base_side = side_of.at(simplices[lift(ls)]);
      link_sides_global.push_back(base_side);
      key += group_key(side_groups[base_side]) + "|";
    }
    // Generator order of the link: link sides ascending; each side's generators.
    std::vector<std::size_t> link_gen_global;
    for (std::size_t bs : link_sides_global) {
      for (std::size_t j = offset[bs]; j < offset[bs + 1]; ++j) link_gen_global.push_back(j);
    }
    auto it = cache.find(key);
    if (it == cache.end()) {
      std::vector<LocalGroup> link_locals;
      for (const Simplex& rho : lk.simplices()) {
        const std::size_t base_id = lift(rho);
        const LocalGroup& bl = *locals[base_id];
        // Reorder base generator images (global ascending) into link order.
        std::vector<std::size_t> base_gens;
        for (std::size_t bs = 0; bs < side_groups.size(); ++bs) {
          if (std::includes(block.sides[bs].begin(), block.sides[bs].end(), simplices[base_id].begin(),
                            simplices[base_id].end())) {
            for (std::size_t j = offset[bs]; j < offset[bs + 1]; ++j) base_gens.push_back(j);
          }
        }
        std::vector<Perm> imgs;
        for (std::size_t g : link_gen_global) {
          auto p = std::find(base_gens.begin(), base_gens.end(), g);
          if (p != base_gens.end()) imgs.push_back(bl.side_images[static_cast<std::size_t>(p - base_gens.begin())]);
        }
        link_locals.push_back(LocalGroup{bl.group, std::move(imgs)});
      }
      BlockOfGroups link_cog_(lb, std::move(link_locals));
      MinimalExtension me = minimal_extension(link_cog_, n, opts);
      it = cache.emplace(key, std::make_pair(me.ext.top(), me.ext.top_images())).first;
    }
    // Link generator order -> global ascending order at s.
    std::vector<std::pair<std::size_t, Perm>> tagged;
    for (std::size_t i = 0; i < link_gen_global.size(); ++i) tagged.emplace_back(link_gen_global[i], it->second.second[i]);
    std::sort(tagged.begin(), tagged.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<Perm> imgs;
    for (auto& t : tagged) imgs.push_back(std::move(t.second));
    locals[id] = make_local(it->second.first.degree(), std::move(imgs), opts.limits);
  }
  std::vector<LocalGroup> all;
  for (auto& l : locals) all.push_back(std::move(*l));
  BlockOfGroups cog(block, std::move(all));
  MinimalExtension me = minimal_extension(cog, n, opts);
  return RetraProduct{std::move(me.ext), dim, n};
}

Presentation free_retra_product_presentation(int dim, const std::vector<PermGroup>& side_groups, int n,
                                             const ConstructionOptions& opts) {
  ConstructionOptions o = opts;
  o.verify_retractibility = false;
  return direct_limit_presentation(retra_product(dim, side_groups, n, o).ext.core());
}

}  // namespace retra
