#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "retra/errors.hpp"

namespace retra {

using Point = std::uint32_t;

// Permutation of {0..d-1} stored as its image array. Composition is
// functional: (p * q)(x) = p(q(x)).
class Perm {
 public:
  Perm() : images_{0} {}
  explicit Perm(std::size_t degree);
  explicit Perm(std::vector<Point> images);

  // Parses disjoint-cycle notation such as "(0 1)(2 3)"; "()" is the identity.
  static Perm from_cycles(std::string_view text, std::size_t degree);

  std::size_t degree() const { return images_.size(); }
  Point operator()(Point x) const { return images_[x]; }
  const std::vector<Point>& images() const { return images_; }

  bool is_identity() const;
  Perm inverse() const;
  std::uint64_t order() const;
  std::optional<Point> first_moved() const;
  std::string to_cycles() const;

  friend Perm operator*(const Perm& a, const Perm& b);
  friend bool operator==(const Perm&, const Perm&) = default;
  friend auto operator<=>(const Perm&, const Perm&) = default;

 private:
  std::vector<Point> images_;
};

struct PermHash {
  std::size_t operator()(const Perm& p) const noexcept;
};

// Hard caps shared by every construction.
struct Limits {
  std::size_t max_degree = 1'000'000;
  std::uint64_t max_order = std::uint64_t{1} << 40;
  // Cap on elements * degree for explicit element tables.
  std::uint64_t max_table_entries = std::uint64_t{1} << 29;
};

// Stabilizer chain built by deterministic Schreier-Sims with Schreier vectors.
class StabChain {
 public:
  struct Level {
    Point base = 0;
    std::vector<std::size_t> gens;    // indices into strong generators
    std::vector<Point> orbit;         // breadth-first order
    std::vector<std::int64_t> label;  // -1 outside orbit, -2 at base, else generator index
  };

  StabChain(std::size_t degree, const std::vector<Perm>& generators,
            const std::vector<Point>& initial_base, const Limits& limits);

  std::size_t degree() const { return degree_; }
  const std::vector<Level>& levels() const { return levels_; }
  std::vector<Point> base() const;
  const std::vector<Perm>& strong_generators() const { return sgs_; }
  std::uint64_t order() const { return order_; }

  // Strips g through the chain starting at level `from`. Returns the residue
  // and the level at which stripping stopped (levels().size() when complete).
  std::pair<Perm, std::size_t> sift(Perm g, std::size_t from = 0) const;
  bool contains(const Perm& g) const;

  // Generators of the pointwise stabilizer of the first `level` base points.
  std::vector<Perm> stabilizer_generators(std::size_t level) const;
  // Transversal element mapping the base point of `level` to x.
  Perm transversal(std::size_t level, Point x) const;

 private:
  void strip_level(std::size_t level, Perm& g) const;
  void rebuild_orbit(std::size_t level);
  std::uint64_t checked_order() const;

  std::size_t degree_;
  Limits limits_;
  std::vector<Perm> sgs_;
  std::vector<Perm> sgs_inv_;
  std::vector<Level> levels_;
  std::uint64_t order_ = 1;
};

class PermGroup {
 public:
  PermGroup() : PermGroup(1, {}) {}
  PermGroup(std::size_t degree, std::vector<Perm> generators, Limits limits = {});

  static PermGroup trivial(std::size_t degree = 1) { return PermGroup(degree, {}); }

  std::size_t degree() const { return degree_; }
  const std::vector<Perm>& generators() const { return generators_; }
  const Limits& limits() const { return limits_; }

  const StabChain& chain() const;
  std::uint64_t order() const { return chain().order(); }
  bool contains(const Perm& g) const;
  bool is_trivial() const { return order() == 1; }
  Perm identity() const { return Perm(degree_); }

 private:
  struct Cache;
  std::size_t degree_;
  std::vector<Perm> generators_;
  Limits limits_;
  std::shared_ptr<Cache> cache_;
};

std::uint64_t order(const PermGroup& g);
bool contains(const PermGroup& g, const Perm& x);

// Same subgroup of Sym(d): equal orders and mutual containment of generators.
bool same_group(const PermGroup& a, const PermGroup& b);

// Homomorphism given by generator images. `verified` is set only by the
// constructors that check the defining relations.
struct GroupHomPerm {
  PermGroup source;
  PermGroup target;
  std::vector<Perm> gen_images;
  bool verified = false;

  Perm apply(const Perm& g) const;
};

// Checks that gen_images define a homomorphism by comparing the order of the
// graph subgroup <(g_i, h_i)> with |source|.
std::optional<GroupHomPerm> hom_by_graph(const PermGroup& source, const PermGroup& target,
                                         std::vector<Perm> gen_images);

PermGroup kernel(const GroupHomPerm& h);
PermGroup image(const GroupHomPerm& h);
bool is_injective(const GroupHomPerm& h);

// Letter of a word over a group's generators; inverse letters are allowed.
struct Letter {
  std::uint32_t gen = 0;
  bool inverse = false;
  friend bool operator==(const Letter&, const Letter&) = default;
  friend auto operator<=>(const Letter&, const Letter&) = default;
};
using Word = std::vector<Letter>;

Perm evaluate(const Word& w, const std::vector<Perm>& images, std::size_t degree);

// Breadth-first table of all elements of G, grown by left multiplication by
// generators: element i = gens[label[i]] * element parent[i].
class ElementTable {
 public:
  explicit ElementTable(const PermGroup& g);

  std::size_t size() const { return parent_.size(); }
  std::size_t degree() const { return degree_; }
  Perm element(std::size_t i) const;
  Point image(std::size_t i, Point x) const { return data_[i * degree_ + x]; }
  std::optional<std::size_t> index_of(const Perm& g) const;
  // Index of gens[s] * element(i).
  std::size_t left_mul(std::size_t s, std::size_t i) const { return left_[i * ngens_ + s]; }
  // Index of element(i) * y for any y in the group.
  std::size_t right_mul(std::size_t i, const Perm& y) const;
  std::size_t parent(std::size_t i) const { return parent_[i]; }
  std::int64_t label(std::size_t i) const { return label_[i]; }
  Word word(std::size_t i) const;
  const PermGroup& group() const { return group_; }

 private:
  std::vector<Point> key_of(const Perm& g) const;
  std::vector<Point> key_of_index(std::size_t i) const;

  PermGroup group_;
  std::size_t degree_;
  std::size_t ngens_;
  std::vector<Point> base_;
  std::vector<Point> data_;
  std::vector<std::size_t> parent_;
  std::vector<std::int64_t> label_;
  std::vector<std::size_t> left_;
  struct KeyHash {
    std::size_t operator()(const std::vector<Point>& v) const noexcept;
  };
  std::unordered_map<std::vector<Point>, std::size_t, KeyHash> index_;
};

// Shortest word (breadth-first, ties by generator index) evaluating to g.
Word element_to_word(const PermGroup& g, const Perm& x);

bool is_p_group(const PermGroup& g, std::uint64_t p);
bool is_soluble(const PermGroup& g);
std::vector<PermGroup> derived_series(const PermGroup& g);
PermGroup normal_closure(const PermGroup& g, const std::vector<Perm>& elements);

// Images of a common list of abstract generators in one permutation group.
struct GeneratorImages {
  std::size_t degree = 1;
  std::vector<Perm> images;
};

// Subgroup of the direct product generated by tuples of generator images,
// acting on the disjoint union of the factors' domains.
PermGroup product_embedding(const std::vector<GeneratorImages>& factors,
                            std::size_t generator_count, const Limits& limits = {});

// Text format: "degree N" header then one cycle-form generator per line.
PermGroup parse_group(std::string_view text, const Limits& limits = {});
std::string format_group(const PermGroup& g);

}  // namespace retra
