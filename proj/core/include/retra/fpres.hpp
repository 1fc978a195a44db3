#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "retra/perm.hpp"

namespace retra {

Word free_reduce(const Word& w);
Word cyclic_reduce(const Word& w);
Word inverse(const Word& w);

struct Presentation {
  std::vector<std::string> generator_names;
  std::vector<Word> relators;

  std::size_t num_generators() const { return generator_names.size(); }
  // Freely and cyclically reduces relators, drops empty ones and duplicates
  // while keeping first-occurrence order.
  void normalize();
};

// Presentation of G on its own generator list: one relator per non-tree edge
// of the breadth-first Cayley graph spanning tree. When |G| is at most
// `verify_order_max`, the presented order is confirmed by coset enumeration.
Presentation present_finite_group(const PermGroup& g, std::uint64_t verify_order_max = 4096);

// True iff every relator of `p` evaluates to the identity under `images`,
// i.e. the generator assignment extends to a homomorphism of the presented group.
bool kills_relators(const Presentation& p, const std::vector<Perm>& images, std::size_t degree);

// Homomorphism source -> target given by generator images, where `p` presents
// `source` on its generator list. Empty when some relator survives or an
// image lies outside `target`.
std::optional<GroupHomPerm> hom_from_images_exists(const Presentation& p, const PermGroup& source,
                                                   const PermGroup& target,
                                                   const std::vector<Perm>& images);

struct CosetTable {
  std::size_t num_cosets = 0;
  std::vector<Perm> action;  // right action of each generator on cosets
  bool complete = false;
};

// Relator-driven (HLT) coset enumeration without lookahead. Returns nullopt
// when more than `max_cosets` cosets would need to be defined.
std::optional<CosetTable> todd_coxeter_bounded(const Presentation& p, const std::vector<Word>& subgroup,
                                               std::size_t max_cosets);

// Image of coset `c` under the word, using the table's right action.
std::size_t act_on_coset(const CosetTable& t, std::size_t c, const Word& w);

// "gens: a b c" then one relator per line, uppercase letters for inverses.
// Multi-character generator names are aliased to letters via "# x = name"
// comment lines when formatting.
Presentation parse_presentation(std::string_view text);
std::string format_presentation(const Presentation& p);
// A single word in the generators of `p`, same syntax as relator lines.
Word parse_word(std::string_view text, const Presentation& p);

}  // namespace retra
