#pragma once

#include <cstddef>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "retra/complex.hpp"
#include "retra/fpres.hpp"
#include "retra/perm.hpp"

namespace retra {

// Stands for the empty simplex wherever a simplex id is expected.
inline constexpr std::size_t kEmptySimplex = std::numeric_limits<std::size_t>::max();

struct SideGenerator {
  std::size_t side = 0;   // index into Block::sides
  std::size_t index = 0;  // position among the side group's generators
};

// Group attached to one simplex. side_images lists, for every side generator
// (s, j) with s containing the simplex, its image in `group` (global order).
struct LocalGroup {
  PermGroup group;
  std::vector<Perm> side_images;
};

LocalGroup make_local(std::size_t degree, std::vector<Perm> side_images, const Limits& limits = {});

// Strict complex of groups over a block. Every local group is indexed by the
// side generators above it; inclusions send (s, j) to (s, j).
class BlockOfGroups {
 public:
  // locals is indexed like base.complex.simplices().
  BlockOfGroups(Block base, std::vector<LocalGroup> locals);

  const Block& base() const { return *base_; }
  const SimplicialComplex& complex() const { return base_->complex; }
  std::size_t num_simplices() const { return locals_.size(); }
  const Simplex& simplex(std::size_t id) const { return complex().simplices()[id]; }
  std::size_t id_of(const Simplex& s) const;
  std::string simplex_name(std::size_t id) const;

  std::size_t num_sides() const { return base_->sides.size(); }
  std::size_t side_simplex(std::size_t side) const { return side_ids_[side]; }
  std::size_t side_generator_offset(std::size_t side) const { return side_offset_[side]; }
  std::size_t side_generator_count(std::size_t side) const { return side_offset_[side + 1] - side_offset_[side]; }
  const std::vector<SideGenerator>& side_generators() const { return side_gens_; }
  std::string generator_name(std::size_t global) const;

  // Sides containing the simplex, ascending.
  const std::vector<std::size_t>& sides_at(std::size_t id) const { return sides_at_[id]; }
  // Global indices of the side generators above the simplex, ascending.
  const std::vector<std::size_t>& generators_at(std::size_t id) const { return gens_at_[id]; }
  std::optional<std::size_t> local_position(std::size_t id, std::size_t global) const;
  bool on_boundary(std::size_t id) const { return !sides_at_[id].empty(); }

  const LocalGroup& local(std::size_t id) const { return locals_[id]; }
  // Subgroup generated by the side images, with those images as generators.
  const PermGroup& generated(std::size_t id) const { return generated_[id]; }

 private:
  std::shared_ptr<const Block> base_;
  std::vector<LocalGroup> locals_;
  std::vector<PermGroup> generated_;
  std::vector<std::size_t> side_ids_;
  std::vector<std::size_t> side_offset_;
  std::vector<SideGenerator> side_gens_;
  std::vector<std::vector<std::size_t>> sides_at_;
  std::vector<std::vector<std::size_t>> gens_at_;
};

// Block of groups with a group at the empty simplex. top_images holds the
// image of every side generator, in global order.
class ExtendedBlockOfGroups {
 public:
  ExtendedBlockOfGroups(BlockOfGroups core, PermGroup top, std::vector<Perm> top_images);

  const BlockOfGroups& core() const { return core_; }
  const PermGroup& top() const { return top_; }
  const std::vector<Perm>& top_images() const { return top_images_; }
  // <top_images> with top_images as its generator list.
  const PermGroup& generated_top() const { return generated_top_; }
  std::vector<Perm> top_images_at(std::size_t id) const;

  // phi_sigma from the generated local group into the top, if it is a homomorphism.
  std::optional<GroupHomPerm> phi(std::size_t id) const;

  // Presentation of generated_top on top_images, computed once.
  const Presentation& top_presentation() const;

 private:
  BlockOfGroups core_;
  PermGroup top_;
  std::vector<Perm> top_images_;
  PermGroup generated_top_;
  struct Cache;
  std::shared_ptr<Cache> cache_;
};

struct Check {
  std::string name;
  bool passed = true;
  std::string detail;
};

struct Diagnostics {
  std::vector<Check> checks;
  bool ok() const;
  const Check* failure() const;
};

Diagnostics validate(const BlockOfGroups& cog);
Diagnostics validate(const ExtendedBlockOfGroups& ext);

// Homomorphism existence between finite groups given by generator images:
// relator check on a Cayley-graph presentation for small sources, graph
// subgroup order for larger ones.
std::optional<GroupHomPerm> homomorphism(const PermGroup& source, const PermGroup& target,
                                         const std::vector<Perm>& images);

// r_{rho tau}; either argument may be kEmptySimplex.
std::optional<GroupHomPerm> retraction(const ExtendedBlockOfGroups& ext, std::size_t rho, std::size_t tau);

struct RetractionFamily {
  // maps[(rho+1) * (n+1) + (tau+1)] with index 0 standing for the empty simplex.
  std::size_t num_simplices = 0;
  std::vector<std::optional<GroupHomPerm>> maps;
  const std::optional<GroupHomPerm>& at(std::size_t rho, std::size_t tau) const;
};
RetractionFamily retraction_family(const ExtendedBlockOfGroups& ext);

struct LinkResult {
  std::optional<ExtendedBlockOfGroups> ext;  // empty when the link is not a block
  bool block = false;
  PermGroup top;  // G(sigma)
  std::string reason;
};

// Link of the complex of groups at a nonempty simplex; chambers are rejected.
LinkResult link_cog(const BlockOfGroups& cog, std::size_t sigma);

// Unfolding of a strict block of groups at a boundary simplex sigma, with the
// bookkeeping needed to relate tiles to the original block.
struct Unfolding {
  std::shared_ptr<const BlockOfGroups> block;
  std::size_t sigma = 0;
  std::shared_ptr<const ElementTable> elements;  // G(sigma) on its side generators
  std::vector<std::vector<std::size_t>> side_of;     // [side][g] -> new side, npos if side contains sigma
  std::vector<std::vector<std::size_t>> simplex_of;  // [simplex][g] -> new simplex id
  std::vector<std::size_t> inverse;                  // index of g^-1
};

Unfolding unfold_block(const BlockOfGroups& cog, std::size_t sigma);
ExtendedBlockOfGroups unfold(const ExtendedBlockOfGroups& ext, std::size_t sigma);

struct Development {
  SimplicialComplex complex;
  std::shared_ptr<const ElementTable> elements;     // top on top_images
  std::vector<std::vector<VertexId>> vertex_of;     // [base vertex index][g]
  std::vector<std::size_t> base_vertex_ids;         // simplex id of each base vertex
  std::vector<Perm> action;                         // per top generator, on vertices
  std::shared_ptr<const BlockOfGroups> base;

  Simplex tile(std::size_t simplex_id, std::size_t g) const;
};

Development development(const ExtendedBlockOfGroups& ext);

struct RetractibilityResult {
  bool holds = true;
  std::vector<std::string> path;  // unfoldings leading to the failure, then the reason
};

RetractibilityResult is_n_retractible(const ExtendedBlockOfGroups& ext, int n);

Presentation direct_limit_presentation(const BlockOfGroups& cog);

struct ConstructionOptions {
  Limits limits;
  // Re-check n-retractibility of each minimal extension after building it.
  bool verify_retractibility = true;
};

// Coset actions of the direct limit on G~/G~_{sigma_1..sigma_k}, one per
// allowed sequence (sequences beyond the first step use tile-1 representatives).
std::vector<GeneratorImages> level_actions(const BlockOfGroups& cog, int k, const Limits& limits = {});

struct MinimalExtension {
  ExtendedBlockOfGroups ext;
  int level = 0;
  std::vector<GeneratorImages> coset_actions;
};

MinimalExtension minimal_extension(const BlockOfGroups& cog, int n, const ConstructionOptions& opts = {});

struct RetraProduct {
  ExtendedBlockOfGroups ext;
  int dim = 0;
  int n = 0;
};

RetraProduct retra_product(int dim, const std::vector<PermGroup>& side_groups, int n,
                           const ConstructionOptions& opts = {});
Presentation free_retra_product_presentation(int dim, const std::vector<PermGroup>& side_groups, int n,
                                             const ConstructionOptions& opts = {});

// Block-of-groups files. Sections, each closed by "end":
//   block                  one facet per line, vertex names separated by spaces
//   side <simplex>         side group: "degree N" then one generator per line
//   local <simplex>        "degree N" then the image of each side generator
//                          above the simplex, in global order
//   top                    optional; image of every side generator
// Inside a group section "extra <cycles>" adds a generator that is not the
// image of any side generator, and "file <path>" reads a group file.
// Simplices are comma-joined vertex names; '#' starts a comment.
struct BogFile {
  std::optional<BlockOfGroups> cog;
  std::optional<ExtendedBlockOfGroups> ext;
};
BogFile parse_bog(std::string_view text, const std::string& base_dir = ".", const Limits& limits = {});
std::string format_bog(const ExtendedBlockOfGroups& ext);
std::string format_bog(const BlockOfGroups& cog);

}  // namespace retra
