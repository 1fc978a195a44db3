#include "retra/perm.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <mutex>
#include <numeric>
#include <sstream>

namespace retra {

namespace {

std::uint64_t mul_capped(std::uint64_t a, std::uint64_t b) {
  if (a != 0 && b > std::numeric_limits<std::uint64_t>::max() / a) {
    return std::numeric_limits<std::uint64_t>::max();
  }
  return a * b;
}

void check_same_degree(std::size_t a, std::size_t b, const char* what) {
  if (a != b) {
    throw std::invalid_argument(std::string(what) + ": degree mismatch (" + std::to_string(a) +
                                " vs " + std::to_string(b) + ")");
  }
}

}  // namespace

Perm::Perm(std::size_t degree) : images_(degree) {
  if (degree == 0) throw std::invalid_argument("permutation degree must be at least 1");
  std::iota(images_.begin(), images_.end(), Point{0});
}

Perm::Perm(std::vector<Point> images) : images_(std::move(images)) {
  if (images_.empty()) throw std::invalid_argument("permutation degree must be at least 1");
  std::vector<bool> seen(images_.size(), false);
  for (Point x : images_) {
    if (x >= images_.size() || seen[x]) throw std::invalid_argument("image array is not a bijection");
    seen[x] = true;
  }
}

Perm Perm::from_cycles(std::string_view text, std::size_t degree) {
  std::vector<Point> img(degree);
  std::iota(img.begin(), img.end(), Point{0});
  std::vector<bool> used(degree, false);
  std::size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
  };
  skip_ws();
  while (i < text.size()) {
    if (text[i] != '(') throw ParseError("expected '(' in cycle notation: " + std::string(text));
    ++i;
    std::vector<Point> cycle;
    for (;;) {
      skip_ws();
      if (i >= text.size()) throw ParseError("unterminated cycle: " + std::string(text));
      if (text[i] == ')') {
        ++i;
        break;
      }
      if (!std::isdigit(static_cast<unsigned char>(text[i]))) {
        throw ParseError("bad character in cycle notation: " + std::string(text));
      }
      std::uint64_t v = 0;
      while (i < text.size() && std::isdigit(static_cast<unsigned char>(text[i]))) {
        v = v * 10 + static_cast<std::uint64_t>(text[i] - '0');
        if (v >= degree) throw ParseError("point out of range in: " + std::string(text));
        ++i;
      }
      if (used[v]) throw ParseError("point repeated in cycle notation: " + std::string(text));
      used[v] = true;
      cycle.push_back(static_cast<Point>(v));
      skip_ws();
      if (i < text.size() && text[i] == ',') ++i;
    }
    for (std::size_t k = 0; k < cycle.size(); ++k) img[cycle[k]] = cycle[(k + 1) % cycle.size()];
    skip_ws();
  }
  return Perm(std::move(img));
}

bool Perm::is_identity() const {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return false;
  }
  return true;
}

Perm Perm::inverse() const {
  std::vector<Point> inv(images_.size());
  for (std::size_t i = 0; i < images_.size(); ++i) inv[images_[i]] = static_cast<Point>(i);
  Perm r;
  r.images_ = std::move(inv);
  return r;
}

std::uint64_t Perm::order() const {
  std::vector<bool> seen(images_.size(), false);
  std::uint64_t o = 1;
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (seen[i]) continue;
    std::uint64_t len = 0;
    for (std::size_t j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      ++len;
    }
    o = std::lcm(o, len);
  }
  return o;
}

std::optional<Point> Perm::first_moved() const {
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (images_[i] != i) return static_cast<Point>(i);
  }
  return std::nullopt;
}

std::string Perm::to_cycles() const {
  std::string out;
  std::vector<bool> seen(images_.size(), false);
  for (std::size_t i = 0; i < images_.size(); ++i) {
    if (seen[i] || images_[i] == i) continue;
    out += '(';
    for (std::size_t j = i; !seen[j]; j = images_[j]) {
      seen[j] = true;
      if (j != i) out += ' ';
      out += std::to_string(j);
    }
    out += ')';
  }
  return out.empty() ? "()" : out;
}

Perm operator*(const Perm& a, const Perm& b) {
  check_same_degree(a.degree(), b.degree(), "composition");
  Perm r;
  r.images_.resize(b.images_.size());
  for (std::size_t i = 0; i < b.images_.size(); ++i) r.images_[i] = a.images_[b.images_[i]];
  return r;
}

std::size_t PermHash::operator()(const Perm& p) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (Point x : p.images()) h = (h ^ x) * 1099511628211ull;
  return h;
}

// ---------------------------------------------------------------------------
// Stabilizer chain

StabChain::StabChain(std::size_t degree, const std::vector<Perm>& generators,
                     const std::vector<Point>& initial_base, const Limits& limits)
    : degree_(degree), limits_(limits) {
  for (const Perm& g : generators) {
    check_same_degree(g.degree(), degree, "stabilizer chain");
    if (g.is_identity()) continue;
    if (std::find(sgs_.begin(), sgs_.end(), g) != sgs_.end()) continue;
    sgs_.push_back(g);
    sgs_inv_.push_back(g.inverse());
  }
  std::vector<Point> base;
  for (Point b : initial_base) {
    if (b >= degree) throw std::invalid_argument("base point out of range");
    if (std::find(base.begin(), base.end(), b) == base.end()) base.push_back(b);
  }
  for (const Perm& s : sgs_) {
    bool fixes_all = std::all_of(base.begin(), base.end(), [&](Point b) { return s(b) == b; });
    if (fixes_all) base.push_back(*s.first_moved());
  }
  levels_.resize(base.size());
  for (std::size_t l = 0; l < base.size(); ++l) {
    levels_[l].base = base[l];
    for (std::size_t s = 0; s < sgs_.size(); ++s) {
      bool fixes = true;
      for (std::size_t m = 0; m < l && fixes; ++m) fixes = sgs_[s](base[m]) == base[m];
      if (fixes) levels_[l].gens.push_back(s);
    }
    rebuild_orbit(l);
  }
  order_ = checked_order();

  std::int64_t i = static_cast<std::int64_t>(levels_.size()) - 1;
  while (i >= 0) {
    const std::size_t li = static_cast<std::size_t>(i);
    bool extended = false;
    for (std::size_t oi = 0; oi < levels_[li].orbit.size() && !extended; ++oi) {
      const Point x = levels_[li].orbit[oi];
      const Perm ux = transversal(li, x);
      for (std::size_t gi = 0; gi < levels_[li].gens.size(); ++gi) {
        Perm h = sgs_[levels_[li].gens[gi]] * ux;
        strip_level(li, h);
        if (h.is_identity()) continue;
        auto [y, j] = sift(std::move(h), li + 1);
        if (y.is_identity()) continue;
        if (j == levels_.size()) {
          levels_.emplace_back();
          levels_.back().base = *y.first_moved();
        }
        sgs_.push_back(y);
        sgs_inv_.push_back(y.inverse());
        for (std::size_t l = li + 1; l <= j; ++l) {
          levels_[l].gens.push_back(sgs_.size() - 1);
          rebuild_orbit(l);
        }
        order_ = checked_order();
        i = static_cast<std::int64_t>(j);
        extended = true;
        break;
      }
    }
    if (!extended) --i;
  }
}

std::uint64_t StabChain::checked_order() const {
  std::uint64_t o = 1;
  for (const Level& lv : levels_) o = mul_capped(o, lv.orbit.size());
  if (o > limits_.max_order) {
    throw BudgetExceeded("group order exceeds cap " + std::to_string(limits_.max_order) +
                         " (degree " + std::to_string(degree_) + ")");
  }
  return o;
}

void StabChain::rebuild_orbit(std::size_t level) {
  Level& lv = levels_[level];
  lv.label.assign(degree_, -1);
  lv.orbit.clear();
  lv.orbit.push_back(lv.base);
  lv.label[lv.base] = -2;
  for (std::size_t k = 0; k < lv.orbit.size(); ++k) {
    const Point y = lv.orbit[k];
    for (std::size_t s : lv.gens) {
      const Point z = sgs_[s](y);
      if (lv.label[z] == -1) {
        lv.label[z] = static_cast<std::int64_t>(s);
        lv.orbit.push_back(z);
      }
    }
  }
}

void StabChain::strip_level(std::size_t level, Perm& g) const {
  const Level& lv = levels_[level];
  Point x = g(lv.base);
  while (lv.label[x] != -2) {
    const Perm& inv = sgs_inv_[static_cast<std::size_t>(lv.label[x])];
    g = inv * g;
    x = inv(x);
  }
}

Perm StabChain::transversal(std::size_t level, Point x) const {
  const Level& lv = levels_[level];
  if (lv.label[x] == -1) throw std::invalid_argument("point outside basic orbit");
  Perm u(degree_);
  while (lv.label[x] != -2) {
    const std::size_t s = static_cast<std::size_t>(lv.label[x]);
    u = u * sgs_[s];
    x = sgs_inv_[s](x);
  }
  return u;
}

std::pair<Perm, std::size_t> StabChain::sift(Perm g, std::size_t from) const {
  for (std::size_t l = from; l < levels_.size(); ++l) {
    if (levels_[l].label[g(levels_[l].base)] == -1) return {std::move(g), l};
    strip_level(l, g);
  }
  return {std::move(g), levels_.size()};
}

bool StabChain::contains(const Perm& g) const {
  check_same_degree(g.degree(), degree_, "membership");
  auto [r, l] = sift(g, 0);
  return l == levels_.size() && r.is_identity();
}

std::vector<Point> StabChain::base() const {
  std::vector<Point> b;
  b.reserve(levels_.size());
  for (const Level& lv : levels_) b.push_back(lv.base);
  return b;
}

std::vector<Perm> StabChain::stabilizer_generators(std::size_t level) const {
  std::vector<Perm> out;
  if (level >= levels_.size()) return out;
  for (std::size_t s : levels_[level].gens) out.push_back(sgs_[s]);
  return out;
}

// ---------------------------------------------------------------------------
// PermGroup

struct PermGroup::Cache {
  std::once_flag once;
  std::unique_ptr<StabChain> chain;
};

PermGroup::PermGroup(std::size_t degree, std::vector<Perm> generators, Limits limits)
    : degree_(degree), generators_(std::move(generators)), limits_(limits),
      cache_(std::make_shared<Cache>()) {
  if (degree == 0) throw std::invalid_argument("group degree must be at least 1");
  if (degree > limits_.max_degree) {
    throw BudgetExceeded("degree " + std::to_string(degree) + " exceeds cap " +
                         std::to_string(limits_.max_degree));
  }
  for (const Perm& g : generators_) check_same_degree(g.degree(), degree, "group generator");
}

const StabChain& PermGroup::chain() const {
  std::call_once(cache_->once, [this] {
    cache_->chain = std::make_unique<StabChain>(degree_, generators_, std::vector<Point>{}, limits_);
  });
  return *cache_->chain;
}

bool PermGroup::contains(const Perm& g) const { return chain().contains(g); }

std::uint64_t order(const PermGroup& g) { return g.order(); }
bool contains(const PermGroup& g, const Perm& x) { return g.contains(x); }

bool same_group(const PermGroup& a, const PermGroup& b) {
  if (a.degree() != b.degree() || a.order() != b.order()) return false;
  return std::all_of(a.generators().begin(), a.generators().end(),
                     [&](const Perm& g) { return b.contains(g); });
}

// ---------------------------------------------------------------------------
// Homomorphisms

namespace {

std::vector<Perm> graph_generators(const PermGroup& source, const PermGroup& target,
                                   const std::vector<Perm>& images) {
  const std::size_t dt = target.degree();
  const std::size_t ds = source.degree();
  std::vector<Perm> gens;
  gens.reserve(images.size());
  for (std::size_t i = 0; i < images.size(); ++i) {
    std::vector<Point> img(dt + ds);
    for (std::size_t x = 0; x < dt; ++x) img[x] = images[i](static_cast<Point>(x));
    for (std::size_t x = 0; x < ds; ++x) {
      img[dt + x] = static_cast<Point>(dt + source.generators()[i](static_cast<Point>(x)));
    }
    gens.emplace_back(std::move(img));
  }
  return gens;
}

}  // namespace

Perm GroupHomPerm::apply(const Perm& g) const {
  return evaluate(element_to_word(source, g), gen_images, target.degree());
}

std::optional<GroupHomPerm> hom_by_graph(const PermGroup& source, const PermGroup& target,
                                         std::vector<Perm> gen_images) {
  if (gen_images.size() != source.generators().size()) {
    throw std::invalid_argument("generator image count does not match source generators");
  }
  for (const Perm& h : gen_images) {
    check_same_degree(h.degree(), target.degree(), "homomorphism image");
    if (!target.contains(h)) return std::nullopt;
  }
  Limits lim = source.limits();
  PermGroup graph(source.degree() + target.degree(), graph_generators(source, target, gen_images), lim);
  if (graph.order() != source.order()) return std::nullopt;
  return GroupHomPerm{source, target, std::move(gen_images), true};
}

PermGroup kernel(const GroupHomPerm& h) {
  if (!h.verified) throw std::invalid_argument("kernel of an unverified homomorphism");
  const std::size_t dt = h.target.degree();
  const std::size_t ds = h.source.degree();
  PermGroup img = image(h);
  StabChain chain(dt + ds, graph_generators(h.source, h.target, h.gen_images), img.chain().base(),
                  h.source.limits());
  const std::size_t level = img.chain().levels().size();
  std::vector<Perm> gens;
  for (const Perm& g : chain.stabilizer_generators(level)) {
    std::vector<Point> r(ds);
    for (std::size_t x = 0; x < ds; ++x) r[x] = static_cast<Point>(g(static_cast<Point>(dt + x)) - dt);
    gens.emplace_back(std::move(r));
  }
  return PermGroup(ds, std::move(gens), h.source.limits());
}

PermGroup image(const GroupHomPerm& h) {
  return PermGroup(h.target.degree(), h.gen_images, h.target.limits());
}

bool is_injective(const GroupHomPerm& h) { return image(h).order() == h.source.order(); }

Perm evaluate(const Word& w, const std::vector<Perm>& images, std::size_t degree) {
  std::vector<Point> cur(degree);
  std::iota(cur.begin(), cur.end(), Point{0});
  // Apply letters right to left to points: (x1 x2 ... xm)(p) = x1(x2(...xm(p))).
  std::vector<Point> tmp(degree);
  for (auto it = w.rbegin(); it != w.rend(); ++it) {
    if (it->gen >= images.size()) throw std::invalid_argument("word letter out of range");
    const Perm& g = images[it->gen];
    check_same_degree(g.degree(), degree, "word evaluation");
    if (it->inverse) {
      const auto& im = g.images();
      for (std::size_t x = 0; x < degree; ++x) tmp[im[x]] = static_cast<Point>(x);
      for (std::size_t x = 0; x < degree; ++x) cur[x] = tmp[cur[x]];
    } else {
      for (std::size_t x = 0; x < degree; ++x) cur[x] = g(cur[x]);
    }
  }
  return Perm(std::move(cur));
}

// ---------------------------------------------------------------------------
// Element tables

std::size_t ElementTable::KeyHash::operator()(const std::vector<Point>& v) const noexcept {
  std::size_t h = 1469598103934665603ull;
  for (Point x : v) h = (h ^ x) * 1099511628211ull;
  return h;
}

ElementTable::ElementTable(const PermGroup& g)
    : group_(g), degree_(g.degree()), ngens_(g.generators().size()), base_(g.chain().base()) {
  const std::uint64_t n = g.order();
  if (mul_capped(n, degree_) > g.limits().max_table_entries) {
    throw BudgetExceeded("element table of " + std::to_string(n) + " elements at degree " +
                         std::to_string(degree_) + " exceeds cap");
  }
  data_.reserve(n * degree_);
  parent_.reserve(n);
  label_.reserve(n);
  left_.assign(n * ngens_, 0);
  index_.reserve(n);
  for (std::size_t x = 0; x < degree_; ++x) data_.push_back(static_cast<Point>(x));
  parent_.push_back(0);
  label_.push_back(-1);
  index_.emplace(key_of_index(0), 0);
  std::vector<Point> key(base_.size());
  for (std::size_t i = 0; i < parent_.size(); ++i) {
    for (std::size_t s = 0; s < ngens_; ++s) {
      const Perm& gs = g.generators()[s];
      for (std::size_t b = 0; b < base_.size(); ++b) key[b] = gs(image(i, base_[b]));
      auto it = index_.find(key);
      std::size_t j;
      if (it == index_.end()) {
        j = parent_.size();
        const std::size_t off = i * degree_;
        for (std::size_t x = 0; x < degree_; ++x) data_.push_back(gs(data_[off + x]));
        parent_.push_back(i);
        label_.push_back(static_cast<std::int64_t>(s));
        index_.emplace(key, j);
      } else {
        j = it->second;
      }
      left_[i * ngens_ + s] = j;
    }
  }
  if (parent_.size() != n) throw std::logic_error("element table size disagrees with group order");
}

std::vector<Point> ElementTable::key_of(const Perm& g) const {
  std::vector<Point> key(base_.size());
  for (std::size_t b = 0; b < base_.size(); ++b) key[b] = g(base_[b]);
  return key;
}

std::vector<Point> ElementTable::key_of_index(std::size_t i) const {
  std::vector<Point> key(base_.size());
  for (std::size_t b = 0; b < base_.size(); ++b) key[b] = image(i, base_[b]);
  return key;
}

Perm ElementTable::element(std::size_t i) const {
  return Perm(std::vector<Point>(data_.begin() + static_cast<std::ptrdiff_t>(i * degree_),
                                 data_.begin() + static_cast<std::ptrdiff_t>((i + 1) * degree_)));
}

std::optional<std::size_t> ElementTable::index_of(const Perm& g) const {
  if (g.degree() != degree_ || !group_.contains(g)) return std::nullopt;
  auto it = index_.find(key_of(g));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::size_t ElementTable::right_mul(std::size_t i, const Perm& y) const {
  std::vector<Point> key(base_.size());
  for (std::size_t b = 0; b < base_.size(); ++b) key[b] = image(i, y(base_[b]));
  auto it = index_.find(key);
  if (it == index_.end()) throw std::invalid_argument("right factor not in group");
  return it->second;
}

Word ElementTable::word(std::size_t i) const {
  Word w;
  while (label_[i] >= 0) {
    w.push_back(Letter{static_cast<std::uint32_t>(label_[i]), false});
    i = parent_[i];
  }
  return w;
}

Word element_to_word(const PermGroup& g, const Perm& x) {
  if (x.degree() != g.degree() || !g.contains(x)) {
    throw std::invalid_argument("element_to_word: element not in group");
  }
  if (x.is_identity()) return {};
  ElementTable table(g);
  return table.word(*table.index_of(x));
}

// ---------------------------------------------------------------------------
// Structure

bool is_p_group(const PermGroup& g, std::uint64_t p) {
  if (p < 2) throw std::invalid_argument("p must be prime");
  std::uint64_t n = g.order();
  while (n % p == 0) n /= p;
  return n == 1;
}

PermGroup normal_closure(const PermGroup& g, const std::vector<Perm>& elements) {
  std::vector<Perm> gens;
  for (const Perm& e : elements) {
    if (!e.is_identity()) gens.push_back(e);
  }
  PermGroup n(g.degree(), gens, g.limits());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (const Perm& s : g.generators()) {
      Perm c = s * gens[i] * s.inverse();
      if (!n.contains(c)) {
        gens.push_back(c);
        n = PermGroup(g.degree(), gens, g.limits());
      }
    }
  }
  return n;
}

std::vector<PermGroup> derived_series(const PermGroup& g) {
  std::vector<PermGroup> series{g};
  for (;;) {
    const PermGroup& cur = series.back();
    std::vector<Perm> comms;
    const auto& gens = cur.generators();
    for (std::size_t i = 0; i < gens.size(); ++i) {
      for (std::size_t j = i + 1; j < gens.size(); ++j) {
        comms.push_back(gens[i].inverse() * gens[j].inverse() * gens[i] * gens[j]);
      }
    }
    PermGroup next = normal_closure(cur, comms);
    if (next.order() == cur.order()) break;
    series.push_back(std::move(next));
  }
  return series;
}

bool is_soluble(const PermGroup& g) { return derived_series(g).back().order() == 1; }

PermGroup product_embedding(const std::vector<GeneratorImages>& factors,
                            std::size_t generator_count, const Limits& limits) {
  if (factors.empty()) {
    return PermGroup(1, std::vector<Perm>(generator_count, Perm(1)), limits);
  }
  std::size_t total = 0;
  for (const GeneratorImages& f : factors) {
    if (f.images.size() != generator_count) {
      throw std::invalid_argument("product_embedding: generator count mismatch");
    }
    for (const Perm& p : f.images) check_same_degree(p.degree(), f.degree, "product_embedding");
    total += f.degree;
    if (total > limits.max_degree) {
      throw BudgetExceeded("product embedding degree exceeds cap " + std::to_string(limits.max_degree));
    }
  }
  std::vector<Perm> gens;
  gens.reserve(generator_count);
  for (std::size_t i = 0; i < generator_count; ++i) {
    std::vector<Point> img;
    img.reserve(total);
    Point off = 0;
    for (const GeneratorImages& f : factors) {
      for (Point x : f.images[i].images()) img.push_back(x + off);
      off += static_cast<Point>(f.degree);
    }
    gens.emplace_back(std::move(img));
  }
  return PermGroup(total, std::move(gens), limits);
}

// ---------------------------------------------------------------------------
// Text format

PermGroup parse_group(std::string_view text, const Limits& limits) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::optional<std::size_t> degree;
  std::vector<Perm> gens;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
    auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    line = line.substr(first, line.find_last_not_of(" \t\r") - first + 1);
    if (!degree) {
      std::istringstream hs(line);
      std::string kw;
      long long d = 0;
      std::string rest;
      if (!(hs >> kw >> d) || kw != "degree" || d < 1 || (hs >> rest)) {
        throw ParseError("line " + std::to_string(lineno) + ": expected 'degree N' header");
      }
      if (static_cast<std::uint64_t>(d) > limits.max_degree) {
        throw BudgetExceeded("degree " + std::to_string(d) + " exceeds cap");
      }
      degree = static_cast<std::size_t>(d);
      continue;
    }
    try {
      gens.push_back(Perm::from_cycles(line, *degree));
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(lineno) + ": " + e.what());
    }
  }
  if (!degree) throw ParseError("missing 'degree N' header");
  return PermGroup(*degree, std::move(gens), limits);
}

std::string format_group(const PermGroup& g) {
  std::string out = "degree " + std::to_string(g.degree()) + "\n";
  for (const Perm& p : g.generators()) out += p.to_cycles() + "\n";
  return out;
}

}  // namespace retra
