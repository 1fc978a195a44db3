#include <algorithm>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "retra/cog.hpp"

namespace retra {

namespace {

std::string trim(const std::string& s) {
  auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  return s.substr(a, s.find_last_not_of(" \t\r") - a + 1);
}

std::vector<std::string> split_simplex(const std::string& s) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  for (const std::string& v : out) {
    if (v.empty()) throw ParseError("empty vertex name in simplex '" + s + "'");
  }
  return out;
}

struct Section {
  std::string kind;
  std::string arg;
  std::vector<std::string> lines;
  std::size_t lineno = 0;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct GroupSpec {
  std::size_t degree = 1;
  std::vector<Perm> images;
  std::vector<Perm> extra;
};

GroupSpec parse_group_section(const Section& sec, const std::string& base_dir, const Limits& limits) {
  GroupSpec g;
  std::optional<std::size_t> degree;
  for (const std::string& line : sec.lines) {
    std::istringstream ls(line);
    std::string kw;
    ls >> kw;
    if (kw == "file") {
      std::string path;
      ls >> path;
      std::filesystem::path p(path);
      if (p.is_relative()) p = std::filesystem::path(base_dir) / p;
      PermGroup pg = parse_group(read_file(p.string()), limits);
      degree = pg.degree();
      g.images.insert(g.images.end(), pg.generators().begin(), pg.generators().end());
    } else if (kw == "degree") {
      long long d = 0;
      if (!(ls >> d) || d < 1) throw ParseError("section at line " + std::to_string(sec.lineno) + ": bad degree");
      if (static_cast<std::uint64_t>(d) > limits.max_degree) throw BudgetExceeded("degree exceeds cap");
      degree = static_cast<std::size_t>(d);
    } else if (kw == "extra") {
      if (!degree) throw ParseError("section at line " + std::to_string(sec.lineno) + ": degree must come first");
      std::string rest;
      std::getline(ls, rest);
      g.extra.push_back(Perm::from_cycles(trim(rest), *degree));
    } else {
      if (!degree) throw ParseError("section at line " + std::to_string(sec.lineno) + ": degree must come first");
      g.images.push_back(Perm::from_cycles(line, *degree));
    }
  }
  if (!degree) throw ParseError("section at line " + std::to_string(sec.lineno) + ": missing degree");
  g.degree = *degree;
  return g;
}

}  // namespace

BogFile parse_bog(std::string_view text, const std::string& base_dir, const Limits& limits) {
  std::istringstream in{std::string(text)};
  std::string raw;
  std::vector<Section> sections;
  bool open = false;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    std::string line = trim(raw);
    if (line.empty()) continue;
    if (!open) {
      std::istringstream ls(line);
      Section s;
      ls >> s.kind;
      ls >> s.arg;
      std::string extra;
      if (ls >> extra) throw ParseError("line " + std::to_string(lineno) + ": unexpected '" + extra + "'");
      if (s.kind != "block" && s.kind != "side" && s.kind != "local" && s.kind != "top") {
        throw ParseError("line " + std::to_string(lineno) + ": unknown section '" + s.kind + "'");
      }
      if ((s.kind == "side" || s.kind == "local") == s.arg.empty()) {
        throw ParseError("line " + std::to_string(lineno) + ": bad section header");
      }
      s.lineno = lineno;
      sections.push_back(std::move(s));
      open = true;
    } else if (line == "end") {
      open = false;
    } else {
      sections.back().lines.push_back(line);
    }
  }
  if (open) throw ParseError("unterminated section starting at line " + std::to_string(sections.back().lineno));
  if (sections.empty() || sections.front().kind != "block") throw ParseError("file must start with a block section");

  std::vector<std::vector<std::string>> facets;
  for (const std::string& l : sections.front().lines) {
    std::istringstream ls(l);
    std::vector<std::string> f;
    std::string v;
    while (ls >> v) f.push_back(v);
    facets.push_back(std::move(f));
  }
  SimplicialComplex k = SimplicialComplex::from_named_facets(facets);
  BlockCheck bc = validate_block(k);
  if (!bc.block) throw ParseError(std::string("block section is not a block: ") + to_string(bc.reason));
  const Block& block = *bc.block;

  auto simplex_id = [&](const Section& sec) {
    Simplex s;
    try {
      s = k.simplex_from_names(split_simplex(sec.arg));
    } catch (const std::invalid_argument& e) {
      throw ParseError("line " + std::to_string(sec.lineno) + ": " + e.what());
    }
    auto id = k.simplex_index(s);
    if (!id) throw ParseError("line " + std::to_string(sec.lineno) + ": '" + sec.arg + "' is not a simplex");
    return *id;
  };

  std::map<std::size_t, GroupSpec> sides;
  std::map<std::size_t, GroupSpec> locals;
  std::optional<GroupSpec> top;
  for (std::size_t i = 1; i < sections.size(); ++i) {
    const Section& sec = sections[i];
    if (sec.kind == "block") throw ParseError("line " + std::to_string(sec.lineno) + ": second block section");
    GroupSpec g = parse_group_section(sec, base_dir, limits);
    if (sec.kind == "top") {
      if (top) throw ParseError("line " + std::to_string(sec.lineno) + ": duplicate top");
      top = std::move(g);
      continue;
    }
    const std::size_t id = simplex_id(sec);
    auto& dest = sec.kind == "side" ? sides : locals;
    if (!dest.emplace(id, std::move(g)).second) {
      throw ParseError("line " + std::to_string(sec.lineno) + ": duplicate section for " + sec.arg);
    }
  }
  std::map<Simplex, std::size_t> side_index;
  for (std::size_t i = 0; i < block.sides.size(); ++i) side_index.emplace(block.sides[i], i);
  for (const auto& [id, g] : sides) {
    if (!side_index.count(k.simplices()[id])) throw ParseError("'side' section names a non-side simplex");
  }
  // Count generators above each simplex to validate local sections.
  std::vector<LocalGroup> ls;
  std::vector<std::size_t> side_gen_count(block.sides.size(), 0);
  for (std::size_t s = 0; s < block.sides.size(); ++s) {
    auto it = sides.find(*k.simplex_index(block.sides[s]));
    if (it == sides.end()) {
      throw ParseError("missing side section for " + k.names_of(block.sides[s]).front() + "...");
    }
    side_gen_count[s] = it->second.images.size();
  }
  for (std::size_t id = 0; id < k.simplices().size(); ++id) {
    const Simplex& s = k.simplices()[id];
    if (auto it = sides.find(id); it != sides.end()) {
      std::vector<Perm> gens = it->second.images;
      std::vector<Perm> decl = gens;
      decl.insert(decl.end(), it->second.extra.begin(), it->second.extra.end());
      ls.push_back(LocalGroup{PermGroup(it->second.degree, decl, limits), gens});
      continue;
    }
    std::size_t above = 0;
    for (std::size_t si = 0; si < block.sides.size(); ++si) {
      if (std::includes(block.sides[si].begin(), block.sides[si].end(), s.begin(), s.end())) above += side_gen_count[si];
    }
    auto it = locals.find(id);
    if (it == locals.end()) {
      if (above != 0) {
        std::string nm;
        for (const auto& n : k.names_of(s)) nm += (nm.empty() ? "" : ",") + n;
        throw ParseError("missing local section for " + nm);
      }
      ls.push_back(make_local(1, {}, limits));
      continue;
    }
    if (it->second.images.size() != above) {
      throw ParseError("local section expects " + std::to_string(above) + " images");
    }
    std::vector<Perm> decl = it->second.images;
    decl.insert(decl.end(), it->second.extra.begin(), it->second.extra.end());
    ls.push_back(LocalGroup{PermGroup(it->second.degree, decl, limits), it->second.images});
  }
  BogFile out;
  BlockOfGroups cog(block, std::move(ls));
  if (top) {
    if (top->images.size() != cog.side_generators().size()) {
      throw ParseError("top section expects " + std::to_string(cog.side_generators().size()) + " images");
    }
    std::vector<Perm> decl = top->images;
    decl.insert(decl.end(), top->extra.begin(), top->extra.end());
    out.ext.emplace(cog, PermGroup(top->degree, decl, limits), top->images);
  }
  out.cog.emplace(std::move(cog));
  return out;
}

namespace {

void emit_group(std::string& out, const std::string& header, const PermGroup& declared, const std::vector<Perm>& images) {
  out += header + "\n  degree " + std::to_string(declared.degree()) + "\n";
  for (const Perm& p : images) out += "  " + p.to_cycles() + "\n";
  for (const Perm& g : declared.generators()) {
    if (std::find(images.begin(), images.end(), g) == images.end()) out += "  extra " + g.to_cycles() + "\n";
  }
  out += "end\n";
}

}  // namespace

std::string format_bog(const BlockOfGroups& cog) {
  const SimplicialComplex& k = cog.complex();
  std::string out = "block\n";
  for (const Simplex& f : k.facets()) {
    out += " ";
    for (const std::string& n : k.names_of(f)) out += " " + n;
    out += "\n";
  }
  out += "end\n";
  auto name = [&](std::size_t id) {
    std::string s;
    for (const std::string& n : k.names_of(cog.simplex(id))) s += (s.empty() ? "" : ",") + n;
    return s;
  };
  for (std::size_t s = 0; s < cog.num_sides(); ++s) {
    const std::size_t id = cog.side_simplex(s);
    emit_group(out, "side " + name(id), cog.local(id).group, cog.local(id).side_images);
  }
  for (std::size_t id = 0; id < cog.num_simplices(); ++id) {
    if (cog.generators_at(id).empty()) continue;
    if (std::find(cog.base().sides.begin(), cog.base().sides.end(), cog.simplex(id)) != cog.base().sides.end()) continue;
    emit_group(out, "local " + name(id), cog.local(id).group, cog.local(id).side_images);
  }
  return out;
}

std::string format_bog(const ExtendedBlockOfGroups& ext) {
  std::string out = format_bog(ext.core());
  emit_group(out, "top", ext.top(), ext.top_images());
  return out;
}

}  // namespace retra
