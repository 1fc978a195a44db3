#include "retra/fpres.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace retra {

Word free_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (const Letter& l : w) {
    if (!out.empty() && out.back().gen == l.gen && out.back().inverse != l.inverse) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

Word cyclic_reduce(const Word& w) {
  Word r = free_reduce(w);
  std::size_t lo = 0;
  std::size_t hi = r.size();
  while (hi - lo >= 2 && r[lo].gen == r[hi - 1].gen && r[lo].inverse != r[hi - 1].inverse) {
    ++lo;
    --hi;
  }
  return Word(r.begin() + static_cast<std::ptrdiff_t>(lo), r.begin() + static_cast<std::ptrdiff_t>(hi));
}

Word inverse(const Word& w) {
  Word r(w.rbegin(), w.rend());
  for (Letter& l : r) l.inverse = !l.inverse;
  return r;
}

void Presentation::normalize() {
  std::set<Word> seen;
  std::vector<Word> out;
  for (const Word& r : relators) {
    for (const Letter& l : r) {
      if (l.gen >= generator_names.size()) {
        throw std::invalid_argument("relator references undeclared generator");
      }
    }
    Word c = cyclic_reduce(r);
    if (c.empty() || !seen.insert(c).second) continue;
    out.push_back(std::move(c));
  }
  relators = std::move(out);
}

bool kills_relators(const Presentation& p, const std::vector<Perm>& images, std::size_t degree) {
  if (images.size() != p.num_generators()) {
    throw std::invalid_argument("image count does not match presentation generators");
  }
  for (const Perm& g : images) {
    if (g.degree() != degree) throw std::invalid_argument("images have inconsistent degrees");
  }
  std::vector<Perm> inv;
  inv.reserve(images.size());
  for (const Perm& g : images) inv.push_back(g.inverse());
  std::vector<Point> cur(degree);
  for (const Word& r : p.relators) {
    // Track the image of every point through the relator; identity iff all fixed.
    for (std::size_t x = 0; x < degree; ++x) cur[x] = static_cast<Point>(x);
    for (auto it = r.rbegin(); it != r.rend(); ++it) {
      const Perm& g = it->inverse ? inv[it->gen] : images[it->gen];
      for (std::size_t x = 0; x < degree; ++x) cur[x] = g(cur[x]);
    }
    for (std::size_t x = 0; x < degree; ++x) {
      if (cur[x] != x) return false;
    }
  }
  return true;
}

std::optional<GroupHomPerm> hom_from_images_exists(const Presentation& p, const PermGroup& source,
                                                   const PermGroup& target,
                                                   const std::vector<Perm>& images) {
  if (p.num_generators() != source.generators().size()) {
    throw std::invalid_argument("presentation does not match source generators");
  }
  if (!kills_relators(p, images, target.degree())) return std::nullopt;
  for (const Perm& h : images) {
    if (!target.contains(h)) return std::nullopt;
  }
  return GroupHomPerm{source, target, images, true};
}

Presentation present_finite_group(const PermGroup& g, std::uint64_t verify_order_max) {
  Presentation p;
  const std::size_t ngens = g.generators().size();
  for (std::size_t i = 0; i < ngens; ++i) p.generator_names.push_back("g" + std::to_string(i));
  ElementTable table(g);
  for (std::size_t e = 0; e < table.size(); ++e) {
    for (std::size_t s = 0; s < ngens; ++s) {
      const std::size_t f = table.left_mul(s, e);
      if (f != 0 && table.parent(f) == e && table.label(f) == static_cast<std::int64_t>(s)) continue;
      Word r = inverse(table.word(f));
      r.push_back(Letter{static_cast<std::uint32_t>(s), false});
      Word we = table.word(e);
      r.insert(r.end(), we.begin(), we.end());
      p.relators.push_back(std::move(r));
    }
  }
  p.normalize();
  if (!kills_relators(p, g.generators(), g.degree())) {
    throw std::logic_error("extracted relator does not hold in the group");
  }
  if (g.order() <= verify_order_max) {
    auto t = todd_coxeter_bounded(p, {}, static_cast<std::size_t>(16 * g.order() + 64));
    if (t && t->num_cosets != g.order()) {
      throw std::logic_error("extracted presentation has the wrong order");
    }
  }
  return p;
}

// ---------------------------------------------------------------------------
// Coset enumeration

namespace {

class Enumerator {
 public:
  Enumerator(std::size_t ngens, std::size_t max_cosets) : cols_(2 * ngens), max_(max_cosets) {
    new_row();
  }

  bool overflow() const { return overflow_; }
  std::size_t defined() const { return parent_.size(); }
  bool live(std::size_t c) const { return parent_[c] == c; }
  std::int64_t& at(std::size_t c, std::size_t x) { return table_[c * cols_ + x]; }

  void scan_and_fill(std::size_t a, const std::vector<std::size_t>& w) {
    if (w.empty()) return;
    std::size_t f = a;
    std::size_t b = a;
    std::size_t i = 0;
    std::size_t j = w.size();  // exclusive upper end
    for (;;) {
      while (i < j && at(f, w[i]) >= 0) f = static_cast<std::size_t>(at(f, w[i++]));
      if (i == j) {
        if (f != b) coincidence(f, b);
        return;
      }
      while (j > i && at(b, w[j - 1] ^ 1) >= 0) b = static_cast<std::size_t>(at(b, w[--j] ^ 1));
      if (j == i) {
        coincidence(f, b);
        return;
      }
      if (j == i + 1) {
        at(f, w[i]) = static_cast<std::int64_t>(b);
        at(b, w[i] ^ 1) = static_cast<std::int64_t>(f);
        return;
      }
      if (!define(f, w[i])) return;
    }
  }

  bool define(std::size_t a, std::size_t x) {
    if (parent_.size() >= max_) {
      overflow_ = true;
      return false;
    }
    const std::size_t b = new_row();
    at(a, x) = static_cast<std::int64_t>(b);
    at(b, x ^ 1) = static_cast<std::int64_t>(a);
    return true;
  }

  void fill_row(std::size_t a) {
    for (std::size_t x = 0; x < cols_ && live(a); ++x) {
      if (at(a, x) < 0 && !define(a, x)) return;
    }
  }

 private:
  std::size_t new_row() {
    const std::size_t b = parent_.size();
    parent_.push_back(b);
    table_.resize(table_.size() + cols_, -1);
    return b;
  }

  std::size_t rep(std::size_t c) {
    std::size_t r = c;
    while (parent_[r] != r) r = parent_[r];
    while (parent_[c] != r) {
      std::size_t next = parent_[c];
      parent_[c] = r;
      c = next;
    }
    return r;
  }

  void merge(std::size_t a, std::size_t b) {
    a = rep(a);
    b = rep(b);
    if (a == b) return;
    if (a > b) std::swap(a, b);
    parent_[b] = a;
    queue_.push_back(b);
  }

  void coincidence(std::size_t a, std::size_t b) {
    queue_.clear();
    merge(a, b);
    for (std::size_t qi = 0; qi < queue_.size(); ++qi) {
      const std::size_t g = queue_[qi];
      for (std::size_t x = 0; x < cols_; ++x) {
        if (at(g, x) < 0) continue;
        const std::size_t d = static_cast<std::size_t>(at(g, x));
        at(d, x ^ 1) = -1;
        const std::size_t mu = rep(g);
        const std::size_t nu = rep(d);
        if (at(mu, x) >= 0) {
          merge(nu, static_cast<std::size_t>(at(mu, x)));
        } else if (at(nu, x ^ 1) >= 0) {
          merge(mu, static_cast<std::size_t>(at(nu, x ^ 1)));
        } else {
          at(mu, x) = static_cast<std::int64_t>(nu);
          at(nu, x ^ 1) = static_cast<std::int64_t>(mu);
        }
      }
    }
  }

  std::size_t cols_;
  std::size_t max_;
  bool overflow_ = false;
  std::vector<std::int64_t> table_;
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> queue_;
};

std::vector<std::size_t> columns(const Word& w, std::size_t ngens) {
  std::vector<std::size_t> c;
  c.reserve(w.size());
  for (const Letter& l : w) {
    if (l.gen >= ngens) throw std::invalid_argument("word references undeclared generator");
    c.push_back(2 * l.gen + (l.inverse ? 1 : 0));
  }
  return c;
}

}  // namespace

std::optional<CosetTable> todd_coxeter_bounded(const Presentation& p, const std::vector<Word>& subgroup,
                                               std::size_t max_cosets) {
  if (max_cosets < 1) throw std::invalid_argument("max_cosets must be at least 1");
  const std::size_t ngens = p.num_generators();
  std::vector<std::vector<std::size_t>> rels;
  for (const Word& r : p.relators) rels.push_back(columns(free_reduce(r), ngens));
  std::vector<std::vector<std::size_t>> subs;
  for (const Word& w : subgroup) subs.push_back(columns(free_reduce(w), ngens));

  Enumerator e(ngens, max_cosets);
  for (const auto& w : subs) {
    e.scan_and_fill(0, w);
    if (e.overflow()) return std::nullopt;
  }
  for (std::size_t a = 0; a < e.defined(); ++a) {
    for (const auto& r : rels) {
      if (!e.live(a)) break;
      e.scan_and_fill(a, r);
      if (e.overflow()) return std::nullopt;
    }
    if (e.live(a)) e.fill_row(a);
    if (e.overflow()) return std::nullopt;
  }

  std::vector<std::int64_t> renum(e.defined(), -1);
  std::size_t n = 0;
  for (std::size_t c = 0; c < e.defined(); ++c) {
    if (e.live(c)) renum[c] = static_cast<std::int64_t>(n++);
  }
  CosetTable t;
  t.num_cosets = n;
  t.complete = true;
  for (std::size_t g = 0; g < ngens; ++g) {
    std::vector<Point> img(n);
    for (std::size_t c = 0; c < e.defined(); ++c) {
      if (!e.live(c)) continue;
      const std::int64_t d = e.at(c, 2 * g);
      if (d < 0 || renum[static_cast<std::size_t>(d)] < 0) {
        throw std::logic_error("coset table incomplete after enumeration");
      }
      img[static_cast<std::size_t>(renum[c])] = static_cast<Point>(renum[static_cast<std::size_t>(d)]);
    }
    t.action.emplace_back(std::move(img));
  }
  return t;
}

std::size_t act_on_coset(const CosetTable& t, std::size_t c, const Word& w) {
  for (const Letter& l : w) {
    const Perm& g = t.action.at(l.gen);
    if (l.inverse) {
      const auto& im = g.images();
      c = static_cast<std::size_t>(std::find(im.begin(), im.end(), static_cast<Point>(c)) - im.begin());
    } else {
      c = g(static_cast<Point>(c));
    }
  }
  return c;
}

// ---------------------------------------------------------------------------
// Text format

namespace {

class RelatorParser {
 public:
  RelatorParser(std::string_view s, const std::vector<std::string>& names) : s_(s), names_(names) {}

  Word parse() {
    Word w = sequence();
    skip_ws();
    if (pos_ != s_.size()) fail("unexpected character");
    return w;
  }

 private:
  Word sequence() {
    Word w;
    for (;;) {
      skip_ws();
      if (pos_ >= s_.size() || s_[pos_] == ')') return w;
      Word atom_word = atom();
      long long power = 1;
      skip_ws();
      if (pos_ < s_.size() && s_[pos_] == '^') {
        ++pos_;
        skip_ws();
        bool neg = false;
        if (pos_ < s_.size() && s_[pos_] == '-') {
          neg = true;
          ++pos_;
        }
        if (pos_ >= s_.size() || !std::isdigit(static_cast<unsigned char>(s_[pos_]))) fail("bad exponent");
        power = 0;
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
          power = power * 10 + (s_[pos_++] - '0');
          if (power > 100000) fail("exponent too large");
        }
        if (neg) atom_word = inverse(atom_word);
      }
      for (long long k = 0; k < power; ++k) w.insert(w.end(), atom_word.begin(), atom_word.end());
    }
  }

  Word atom() {
    const char c = s_[pos_];
    if (c == '(') {
      ++pos_;
      Word inner = sequence();
      if (pos_ >= s_.size() || s_[pos_] != ')') fail("missing ')'");
      ++pos_;
      return inner;
    }
    if (!std::isalpha(static_cast<unsigned char>(c))) fail("unexpected character");
    ++pos_;
    const std::string lower(1, static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    auto it = std::find(names_.begin(), names_.end(), lower);
    if (it == names_.end()) fail("undeclared generator '" + lower + "'");
    return Word{Letter{static_cast<std::uint32_t>(it - names_.begin()),
                       static_cast<bool>(std::isupper(static_cast<unsigned char>(c)))}};
  }

  void skip_ws() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }

  [[noreturn]] void fail(const std::string& why) const {
    throw ParseError(why + " at column " + std::to_string(pos_ + 1) + " in '" + std::string(s_) + "'");
  }

  std::string_view s_;
  const std::vector<std::string>& names_;
  std::size_t pos_ = 0;
};

}  // namespace

Presentation parse_presentation(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  Presentation p;
  bool have_gens = false;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (!have_gens) {
      std::istringstream ls(line);
      std::string kw;
      ls >> kw;
      if (kw != "gens:") throw ParseError("line " + std::to_string(lineno) + ": expected 'gens:' line");
      std::string name;
      while (ls >> name) {
        if (name.size() != 1 || !std::islower(static_cast<unsigned char>(name[0]))) {
          throw ParseError("line " + std::to_string(lineno) + ": generator names must be lowercase letters");
        }
        if (std::find(p.generator_names.begin(), p.generator_names.end(), name) != p.generator_names.end()) {
          throw ParseError("line " + std::to_string(lineno) + ": duplicate generator " + name);
        }
        p.generator_names.push_back(name);
      }
      have_gens = true;
      continue;
    }
    try {
      p.relators.push_back(RelatorParser(line, p.generator_names).parse());
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!have_gens) throw ParseError("missing 'gens:' line");
  p.normalize();
  return p;
}

Word parse_word(std::string_view text, const Presentation& p) {
  return RelatorParser(text, p.generator_names).parse();
}

std::string format_presentation(const Presentation& p) {
  const std::size_t n = p.num_generators();
  bool plain = true;
  for (const std::string& s : p.generator_names) {
    plain = plain && s.size() == 1 && std::islower(static_cast<unsigned char>(s[0]));
  }
  if (!plain && n > 26) throw std::invalid_argument("too many generators for letter notation");
  std::vector<char> letter(n);
  for (std::size_t i = 0; i < n; ++i) letter[i] = plain ? p.generator_names[i][0] : static_cast<char>('a' + i);
  std::string out;
  if (!plain) {
    for (std::size_t i = 0; i < n; ++i) out += std::string("# ") + letter[i] + " = " + p.generator_names[i] + "\n";
  }
  out += "gens:";
  for (char c : letter) out += std::string(" ") + c;
  out += "\n";
  for (const Word& r : p.relators) {
    for (const Letter& l : r) {
      out += l.inverse ? static_cast<char>(std::toupper(static_cast<unsigned char>(letter[l.gen]))) : letter[l.gen];
    }
    out += "\n";
  }
  return out;
}

}  // namespace retra
