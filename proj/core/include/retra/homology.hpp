#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "retra/complex.hpp"
#include "retra/perm.hpp"

namespace retra {

// Sparse column over the p-element field: (row, nonzero coefficient), rows ascending.
using SparseColumn = std::vector<std::pair<std::size_t, std::uint32_t>>;

struct ChainComplexFp {
  std::uint32_t p = 2;
  std::vector<std::vector<Simplex>> cells;                // cells[d]: d-simplices
  std::vector<std::vector<SparseColumn>> boundary;        // boundary[d]: columns of d-cells, rows (d-1)-cells
  bool boundaries_compose_to_zero() const;
};

ChainComplexFp build_chain_complex(const SimplicialComplex& k, std::uint32_t p);
std::size_t rank_mod_p(std::vector<SparseColumn> columns, std::uint32_t p);

// Reduced Betti numbers over F_p in degrees 0..dim; the empty complex is rejected.
std::vector<std::size_t> reduced_betti(const SimplicialComplex& k, std::uint32_t p);
// Same in degrees -1..dim, with the empty complex allowed (degree -1 rank 1).
std::vector<std::size_t> reduced_betti_from_minus_one(const SimplicialComplex& k, std::uint32_t p);
bool is_mod_p_acyclic(const SimplicialComplex& k, std::uint32_t p);
std::int64_t euler_characteristic(const SimplicialComplex& k);

// Fixed-point set of the group generated by `vertex_maps` (simplicial
// automorphisms given as permutations of vertex ids), as the subcomplex of the
// barycentric subdivision spanned by barycenters of setwise-invariant simplices.
// Barycenter names match barycentric_subdivision().
SimplicialComplex fixed_subcomplex(const SimplicialComplex& k, const std::vector<Perm>& vertex_maps);
// H given as a subgroup of a group acting through `action` (one vertex map per
// generator of `acting`). H's generators are mapped through the action.
SimplicialComplex fixed_subcomplex(const SimplicialComplex& k, const PermGroup& acting,
                                   const std::vector<Perm>& action, const PermGroup& h);

struct HellyVerdict {
  bool hypotheses_hold = true;
  std::vector<std::string> failed_subsets;  // e.g. "{0,2}"
  bool evaluated = false;
  // Reduced Betti numbers starting at degree -1.
  std::vector<std::size_t> betti_union;
  std::vector<std::size_t> betti_intersection;
  bool shift_holds = false;
};

HellyVerdict helly_shift_check(const SimplicialComplex& x, const std::vector<SimplicialComplex>& ys, std::uint32_t p);

}  // namespace retra
