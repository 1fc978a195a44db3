#pragma once

#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace retra {

using VertexId = std::uint32_t;
using Simplex = std::vector<VertexId>;  // sorted, nonempty

// Finite abstract simplicial complex over named vertices. Vertex ids follow
// the lexicographic order of the names; facets are kept sorted.
class SimplicialComplex {
 public:
  SimplicialComplex();
  // Facets may contain non-maximal or repeated sets; they are pruned.
  SimplicialComplex(std::vector<std::string> vertex_names, const std::vector<Simplex>& facets);
  static SimplicialComplex from_named_facets(const std::vector<std::vector<std::string>>& facets);

  const std::vector<std::string>& vertex_names() const { return names_; }
  std::size_t num_vertices() const { return names_.size(); }
  const std::vector<Simplex>& facets() const { return facets_; }
  bool empty() const { return facets_.empty(); }
  // -1 for the empty complex.
  int dim() const;

  bool contains(const Simplex& s) const;
  // All nonempty simplices, ordered by dimension then lexicographically.
  const std::vector<Simplex>& simplices() const;
  std::vector<Simplex> simplices_of_dim(int d) const;
  std::optional<std::size_t> simplex_index(const Simplex& s) const;

  std::optional<VertexId> find_vertex(std::string_view name) const;
  Simplex simplex_from_names(const std::vector<std::string>& names) const;
  std::vector<std::string> names_of(const Simplex& s) const;

  // Sorted neighbours of each vertex in the 1-skeleton.
  const std::vector<std::vector<VertexId>>& adjacency() const;
  bool adjacent(VertexId a, VertexId b) const;

 private:
  struct Cache;
  const Cache& cache() const;

  std::vector<std::string> names_;
  std::vector<Simplex> facets_;
  std::shared_ptr<Cache> cache_;
};

bool operator==(const SimplicialComplex& a, const SimplicialComplex& b);

// {tau : tau ∩ sigma = ∅, tau ∪ sigma ∈ K}; an empty sigma gives K itself.
// The link of a facet is the complex with no simplices.
SimplicialComplex link(const SimplicialComplex& k, const Simplex& sigma);

enum class BlockFailure { none, empty_complex, not_pure, not_gallery_connected, non_normal_link, empty_boundary };
const char* to_string(BlockFailure f);

struct Block {
  SimplicialComplex complex;
  int dim = 0;
  SimplicialComplex boundary;
  std::vector<Simplex> sides;  // sorted
};

struct BlockCheck {
  std::optional<Block> block;
  BlockFailure reason = BlockFailure::none;
  std::string detail;
};

BlockCheck validate_block(const SimplicialComplex& k);
bool is_pure(const SimplicialComplex& k);
bool is_gallery_connected(const SimplicialComplex& k);
// Pure, gallery connected, and every link of a nonempty non-facet simplex
// is gallery connected.
bool is_normal(const SimplicialComplex& k);

struct SystoleResult {
  bool holds = true;
  std::vector<VertexId> witness;  // ordered vertex cycle when !holds
};

// True iff no full subcomplex homeomorphic to a circle has fewer than k edges.
// The witness is the shortest such cycle, lexicographically least among those.
SystoleResult systole_at_least(const SimplicialComplex& k, std::size_t bound);

struct LargenessResult {
  bool holds = true;
  std::optional<Simplex> at;  // nullopt: the complex itself
  std::vector<std::string> witness;
};

LargenessResult is_k_large(const SimplicialComplex& k, std::size_t bound);
bool is_flag(const SimplicialComplex& k);

// Complex files: one facet per line, whitespace-separated vertex names, '#'.
SimplicialComplex parse_complex(std::string_view text);
std::string format_complex(const SimplicialComplex& k);

SimplicialComplex barycentric_subdivision(const SimplicialComplex& k);
SimplicialComplex cone(const SimplicialComplex& k, const std::string& apex);
// Name-level union and intersection of complexes.
SimplicialComplex complex_union(const SimplicialComplex& a, const SimplicialComplex& b);
SimplicialComplex complex_intersection(const SimplicialComplex& a, const SimplicialComplex& b);
bool is_subcomplex(const SimplicialComplex& sub, const SimplicialComplex& k);

}  // namespace retra
