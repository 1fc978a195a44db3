#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <sstream>

#include "retra/cog.hpp"
#include "retra/complex.hpp"
#include "retra/errors.hpp"
#include "retra/fpres.hpp"
#include "retra/homology.hpp"
#include "retra/perm.hpp"

namespace retra::cli {

using Json = nlohmann::ordered_json;

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

constexpr std::size_t kDefaultMaxCosets = std::size_t{1} << 20;

struct Params {
  std::vector<std::string> inputs;
  int n = 1;
  std::uint32_t p = 2;
  std::size_t k = 6;
  int dim = 1;
  bool verify = true;
  std::vector<std::string> subgroup;
  std::uint64_t max_order = Limits{}.max_order;
  std::size_t max_degree = Limits{}.max_degree;
  std::size_t max_cosets = kDefaultMaxCosets;
  std::string out;
};

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

// Command state: the report being built plus the inputs read so far.
struct Run {
  const Params& params;
  Json report;
  std::string side_output;  // develop: complex text

  Limits limits() const {
    Limits l;
    l.max_order = params.max_order;
    l.max_degree = params.max_degree;
    return l;
  }

  std::string read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError("cannot open " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    std::string text = ss.str();
    report["inputs"].push_back(Json{{"path", path}, {"fnv1a64", hex64(fnv1a64(text))}});
    return text;
  }

  const std::string& input(std::size_t i) const {
    if (i >= params.inputs.size()) throw std::invalid_argument("missing input file");
    return params.inputs[i];
  }
};

std::string dir_of(const std::string& path) {
  auto parent = std::filesystem::path(path).parent_path();
  return parent.empty() ? "." : parent.string();
}

std::string join_names(const std::vector<std::string>& names) {
  std::string s = "{";
  for (std::size_t i = 0; i < names.size(); ++i) s += (i ? "," : "") + names[i];
  return s + "}";
}

std::string join_numbers(const std::vector<std::size_t>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? " " : "") + std::to_string(v[i]);
  return s;
}

// A sides file holds one or more group blocks, each opened by a "degree" line.
std::vector<PermGroup> read_side_groups(const std::string& text, const Limits& limits) {
  std::vector<std::string> chunks;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string first;
    ls >> first;
    if (first == "degree") chunks.emplace_back();
    if (chunks.empty()) {
      if (!first.empty() && first[0] != '#') throw ParseError("sides file: expected 'degree' before generators");
      continue;
    }
    chunks.back() += line + "\n";
  }
  if (chunks.empty()) throw ParseError("sides file holds no group");
  std::vector<PermGroup> out;
  for (const std::string& c : chunks) out.push_back(parse_group(c, limits));
  return out;
}

std::uint64_t prime_of_power(std::uint64_t order) {
  if (order < 2) return 0;
  std::uint64_t p = 2;
  while (p * p <= order && order % p != 0) ++p;
  if (order % p != 0) p = order;
  while (order % p == 0) order /= p;
  return order == 1 ? p : 0;
}

int cmd_product(Run& r) {
  const Params& P = r.params;
  std::vector<PermGroup> groups;
  for (const std::string& path : P.inputs) {
    auto g = read_side_groups(r.read(path), r.limits());
    groups.insert(groups.end(), g.begin(), g.end());
  }
  if (groups.empty()) throw std::invalid_argument("no sides file given");
  if (groups.size() == 1) groups.assign(static_cast<std::size_t>(std::max(P.dim, 0)) + 1, groups.front());
  r.report["params"] = Json{{"dim", P.dim}, {"n", P.n}, {"verify", P.verify}};

  ConstructionOptions opts;
  opts.limits = r.limits();
  opts.verify_retractibility = P.verify;
  RetraProduct rp = retra_product(P.dim, groups, P.n, opts);
  const BlockOfGroups& cog = rp.ext.core();
  Json& res = r.report["result"];

  std::vector<std::size_t> ids(cog.num_simplices());
  for (std::size_t i = 0; i < ids.size(); ++i) ids[i] = i;
  auto codim = [&](std::size_t id) { return P.dim + 1 - static_cast<int>(cog.simplex(id).size()); };
  std::stable_sort(ids.begin(), ids.end(), [&](std::size_t a, std::size_t b) { return codim(a) < codim(b); });
  res["local_orders"] = Json::array();
  for (std::size_t id : ids) {
    res["local_orders"].push_back(
        Json{{"codim", codim(id)}, {"simplex", cog.simplex_name(id)}, {"order", cog.generated(id).order()}});
  }

  bool budget_hit = false;
  const PermGroup& top = rp.ext.top();
  res["top_degree"] = top.degree();
  std::uint64_t p = prime_of_power(groups.front().order());
  for (const PermGroup& g : groups) {
    if (prime_of_power(g.order()) != p) p = 0;
  }
  try {
    res["top_order"] = top.order();
    if (p) {
      res["p_group"] = Json{{"p", p}, {"holds", is_p_group(top, p)}};
    } else {
      res["p_group"] = nullptr;
    }
    res["soluble"] = is_soluble(top);
  } catch (const BudgetExceeded& e) {
    budget_hit = true;
    res["top_order"] = nullptr;
    res["top_order_note"] = e.what();
  }

  // Subgroups generated by proper subsets of side classes against the local
  // group at the simplex those sides cut out.
  Json table = Json::array();
  bool table_ok = true;
  const std::size_t ns = cog.num_sides();
  const Simplex chamber = cog.complex().facets().front();
  for (std::uint64_t mask = 0; mask + 1 < (std::uint64_t{1} << ns); ++mask) {
    std::vector<Perm> imgs;
    Simplex inter = chamber;
    Json sides = Json::array();
    for (std::size_t i = 0; i < ns; ++i) {
      if (!(mask & (std::uint64_t{1} << i))) continue;
      sides.push_back(cog.simplex_name(cog.side_simplex(i)));
      for (std::size_t j = 0; j < cog.side_generator_count(i); ++j) {
        imgs.push_back(rp.ext.top_images()[cog.side_generator_offset(i) + j]);
      }
      Simplex next;
      const Simplex& s = cog.base().sides[i];
      std::set_intersection(inter.begin(), inter.end(), s.begin(), s.end(), std::back_inserter(next));
      inter = std::move(next);
    }
    const std::uint64_t got = PermGroup(top.degree(), imgs, opts.limits).order();
    const std::size_t at = cog.id_of(inter);
    const std::uint64_t want = cog.generated(at).order();
    table_ok = table_ok && got == want;
    table.push_back(Json{{"sides", sides}, {"simplex", cog.simplex_name(at)}, {"generated_order", got},
                         {"local_order", want}, {"matches", got == want}});
  }
  res["generating_sets"] = std::move(table);
  res["generating_sets_match"] = table_ok;
  if (!table_ok) {
    r.report["reason"] = "a proper subset of side classes generates a group of the wrong order";
    return kVerifyFail;
  }
  if (budget_hit) {
    r.report["reason"] = "top order exceeds --max-order";
    return kBudget;
  }
  return kPass;
}

int cmd_check_large(Run& r) {
  const Params& P = r.params;
  r.report["params"] = Json{{"k", P.k}};
  SimplicialComplex k = parse_complex(r.read(r.input(0)));
  LargenessResult lr = is_k_large(k, P.k);
  Json& res = r.report["result"];
  res["holds"] = lr.holds;
  res["at"] = lr.at ? Json(join_names(k.names_of(*lr.at))) : Json(nullptr);
  res["witness"] = lr.witness;
  if (!lr.holds) {
    r.report["reason"] = "cycle of length below " + std::to_string(P.k) +
                         (lr.at ? " in the link of " + join_names(k.names_of(*lr.at)) : std::string(" in the complex"));
    return kVerifyFail;
  }
  return kPass;
}

ExtendedBlockOfGroups read_extended(Run& r) {
  const std::string& path = r.input(0);
  BogFile bf = parse_bog(r.read(path), dir_of(path), r.limits());
  if (!bf.ext) throw ParseError(path + ": no top section");
  return std::move(*bf.ext);
}

int cmd_develop(Run& r) {
  ExtendedBlockOfGroups ext = read_extended(r);
  Development d = development(ext);
  Json& res = r.report["result"];
  res["top_order"] = d.elements->size();
  res["vertices"] = d.complex.num_vertices();
  res["facets"] = d.complex.facets().size();
  std::string text = "# " + std::string(kReportFormat) + " develop " + r.input(0) + " fnv1a64 " +
                     r.report["inputs"][0]["fnv1a64"].get<std::string>() + "\n" + format_complex(d.complex);
  res["output_fnv1a64"] = hex64(fnv1a64(text));
  r.side_output = std::move(text);
  return kPass;
}

int cmd_retract(Run& r) {
  const Params& P = r.params;
  r.report["params"] = Json{{"n", P.n}};
  ExtendedBlockOfGroups ext = read_extended(r);
  RetractibilityResult rr = is_n_retractible(ext, P.n);
  Json& res = r.report["result"];
  res["holds"] = rr.holds;
  res["witness"] = rr.path;
  if (!rr.holds) {
    std::string why;
    for (const std::string& s : rr.path) why += (why.empty() ? "" : "; ") + s;
    r.report["reason"] = "not " + std::to_string(P.n) + "-retractible: " + why;
    return kVerifyFail;
  }
  return kPass;
}

constexpr const char* kScope = "finite simplicial complexes, simplicial cohomology over F_p";

int cmd_homology(Run& r) {
  const Params& P = r.params;
  r.report["params"] = Json{{"p", P.p}};
  SimplicialComplex k = parse_complex(r.read(r.input(0)));
  Json& res = r.report["result"];
  res["scope"] = kScope;
  if (k.empty()) {
    res["reduced_betti_from_minus_one"] = join_numbers(reduced_betti_from_minus_one(k, P.p));
    res["mod_p_acyclic"] = false;
    return kPass;
  }
  auto b = reduced_betti(k, P.p);
  res["reduced_betti"] = join_numbers(b);
  res["euler_characteristic"] = euler_characteristic(k);
  res["mod_p_acyclic"] = is_mod_p_acyclic(k, P.p);
  return kPass;
}

int cmd_helly(Run& r) {
  const Params& P = r.params;
  r.report["params"] = Json{{"p", P.p}};
  if (P.inputs.size() < 2) throw std::invalid_argument("helly needs a complex and at least one subcomplex");
  SimplicialComplex x = parse_complex(r.read(P.inputs[0]));
  std::vector<SimplicialComplex> ys;
  for (std::size_t i = 1; i < P.inputs.size(); ++i) ys.push_back(parse_complex(r.read(P.inputs[i])));
  HellyVerdict v = helly_shift_check(x, ys, P.p);
  Json& res = r.report["result"];
  res["scope"] = kScope;
  res["hypotheses_hold"] = v.hypotheses_hold;
  res["failed_subsets"] = v.failed_subsets;
  res["evaluated"] = v.evaluated;
  if (v.evaluated) {
    res["betti_union_from_minus_one"] = join_numbers(v.betti_union);
    res["betti_intersection_from_minus_one"] = join_numbers(v.betti_intersection);
    res["shift_holds"] = v.shift_holds;
  }
  if (!v.hypotheses_hold) {
    std::string why;
    for (const std::string& s : v.failed_subsets) why += (why.empty() ? "" : " ") + s;
    r.report["reason"] = "partial intersections not acyclic: " + why;
    return kVerifyFail;
  }
  if (!v.shift_holds) {
    r.report["reason"] = "degree shift does not hold";
    return kVerifyFail;
  }
  return kPass;
}

int cmd_enumerate(Run& r) {
  const Params& P = r.params;
  r.report["params"] = Json{{"subgroup", P.subgroup}};
  Presentation pres = parse_presentation(r.read(r.input(0)));
  std::vector<Word> sub;
  for (const std::string& w : P.subgroup) sub.push_back(parse_word(w, pres));
  auto table = todd_coxeter_bounded(pres, sub, P.max_cosets);
  Json& res = r.report["result"];
  res["complete"] = table.has_value();
  if (!table) {
    r.report["reason"] = "coset enumeration exceeded --max-cosets";
    return kBudget;
  }
  res["index"] = table->num_cosets;
  return kPass;
}

using Command = std::function<int(Run&)>;

const std::map<std::string, Command>& commands() {
  static const std::map<std::string, Command> table{
      {"retra", cmd_product},     {"check-large", cmd_check_large}, {"develop", cmd_develop},
      {"retract", cmd_retract},   {"homology", cmd_homology},       {"helly", cmd_helly},
      {"enumerate", cmd_enumerate},
  };
  return table;
}

int execute(const std::string& name, const Params& params, const Json* job, std::ostream& out, std::ostream& err) {
  Run r{params, Json::object(), {}};
  r.report["format"] = kReportFormat;
  r.report["command"] = name;
  if (job) r.report["job"] = *job;
  r.report["inputs"] = Json::array();
  r.report["params"] = Json::object();
  r.report["budgets"] = Json{{"max_order", params.max_order},
                             {"max_degree", params.max_degree},
                             {"max_cosets", params.max_cosets}};
  r.report["status"] = "pass";
  r.report["result"] = Json::object();
  int code = kPass;
  try {
    code = commands().at(name)(r);
  } catch (const ParseError& e) {
    code = kParseFail;
    r.report["reason"] = e.what();
  } catch (const BudgetExceeded& e) {
    code = kBudget;
    r.report["reason"] = e.what();
  } catch (const std::invalid_argument& e) {
    code = kParseFail;
    r.report["reason"] = e.what();
  } catch (const std::exception& e) {
    code = kVerifyFail;
    r.report["reason"] = e.what();
  }
  static const char* status[] = {"pass", "verification-failed", "input-error", "budget-exceeded"};
  r.report["status"] = status[code];
  const std::string text = r.report.dump(2) + "\n";

  auto write_file = [&](const std::string& path, const std::string& body) {
    std::ofstream f(path, std::ios::binary);
    if (!f) {
      err << "cannot write " << path << "\n";
      return false;
    }
    f << body;
    return true;
  };
  if (name == "develop" && code == kPass) {
    if (params.out.empty()) {
      out << r.side_output;
    } else {
      if (!write_file(params.out, r.side_output)) return kParseFail;
      out << text;
    }
  } else if (!params.out.empty()) {
    if (!write_file(params.out, text)) return kParseFail;
  } else {
    out << text;
  }
  return code;
}

// JobSpec: {"version", "command", "inputs", "params", "budgets", "output"}.
int run_job(const std::string& path, std::ostream& out, std::ostream& err) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    err << "cannot open " << path << "\n";
    return kParseFail;
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  const std::string text = ss.str();
  Params P;
  std::string command;
  try {
    Json spec = Json::parse(text);
    if (!spec.is_object()) throw ParseError("job spec must be an object");
    auto reject_unknown = [](const Json& obj, std::initializer_list<const char*> allowed, const std::string& where) {
      if (!obj.is_object()) throw ParseError(where + " must be an object");
      for (const auto& [key, value] : obj.items()) {
        if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; })) {
          throw ParseError("unknown field '" + key + "' in " + where);
        }
      }
    };
    reject_unknown(spec, {"version", "command", "inputs", "params", "budgets", "output"}, "job spec");
    if (!spec.contains("version") || spec["version"] != kJobFormat) {
      throw ParseError(std::string("job spec version must be \"") + kJobFormat + "\"");
    }
    command = spec.at("command").get<std::string>();
    if (!commands().count(command)) throw ParseError("unknown command '" + command + "'");
    const std::string base = dir_of(path);
    auto resolve = [&](const std::string& p) {
      std::filesystem::path fp(p);
      if (!fp.is_relative() || base == ".") return p;
      return (std::filesystem::path(base) / fp).string();
    };
    for (const Json& i : spec.value("inputs", Json::array())) P.inputs.push_back(resolve(i.get<std::string>()));
    if (spec.contains("params")) {
      const Json& prm = spec["params"];
      reject_unknown(prm, {"n", "p", "k", "dim", "verify", "subgroup"}, "params");
      if (prm.contains("n")) P.n = prm["n"].get<int>();
      if (prm.contains("p")) P.p = prm["p"].get<std::uint32_t>();
      if (prm.contains("k")) P.k = prm["k"].get<std::size_t>();
      if (prm.contains("dim")) P.dim = prm["dim"].get<int>();
      if (prm.contains("verify")) P.verify = prm["verify"].get<bool>();
      if (prm.contains("subgroup")) P.subgroup = prm["subgroup"].get<std::vector<std::string>>();
    }
    if (spec.contains("budgets")) {
      const Json& b = spec["budgets"];
      reject_unknown(b, {"max_order", "max_degree", "max_cosets"}, "budgets");
      if (b.contains("max_order")) P.max_order = b["max_order"].get<std::uint64_t>();
      if (b.contains("max_degree")) P.max_degree = b["max_degree"].get<std::size_t>();
      if (b.contains("max_cosets")) P.max_cosets = b["max_cosets"].get<std::size_t>();
    }
    if (spec.contains("output")) P.out = resolve(spec["output"].get<std::string>());
  } catch (const ParseError& e) {
    err << "job spec: " << e.what() << "\n";
    return kParseFail;
  } catch (const nlohmann::json::exception& e) {
    err << "job spec: " << e.what() << "\n";
    return kParseFail;
  }
  Json job{{"path", path}, {"fnv1a64", hex64(fnv1a64(text))}};
  return execute(command, P, &job, out, err);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Retra-products, developments and certification checks for complexes of groups", "retra"};
  app.require_subcommand(1);
  Params P;
  std::string job_path;

  auto budgets = [&](CLI::App* s) {
    s->add_option("--max-order", P.max_order, "Cap on permutation group orders")->capture_default_str();
    s->add_option("--max-degree", P.max_degree, "Cap on permutation degrees")->capture_default_str();
    s->add_option("--max-cosets", P.max_cosets, "Cap on coset enumeration")->capture_default_str();
    s->add_option("--out", P.out, "Write the report (develop: the complex) to this file");
  };

  auto* product = app.add_subcommand("retra", "Build the n-retra-product of a simplex from side groups");
  product->add_option("sides", P.inputs, "Sides file(s): one group for every side, or one group per side")->required();
  product->add_option("--dim", P.dim, "Simplex dimension")->capture_default_str();
  product->add_option("--n", P.n, "Retractibility level")->capture_default_str();
  product->add_flag("!--no-verify", P.verify, "Skip the final retractibility re-check");
  budgets(product);

  auto* large = app.add_subcommand("check-large", "Check that a complex is k-large");
  large->add_option("complex", P.inputs, "Complex file")->required()->expected(1);
  large->add_option("--k", P.k, "Systole bound")->capture_default_str();
  budgets(large);

  auto* develop = app.add_subcommand("develop", "Write the development of an extended block of groups");
  develop->add_option("bog", P.inputs, "Block-of-groups file with a top section")->required()->expected(1);
  budgets(develop);

  auto* retract = app.add_subcommand("retract", "Decide n-retractibility of an extended block of groups");
  retract->add_option("bog", P.inputs, "Block-of-groups file with a top section")->required()->expected(1);
  retract->add_option("--n", P.n, "Retractibility level")->capture_default_str();
  budgets(retract);

  auto* homology = app.add_subcommand("homology", "Reduced Betti numbers over F_p");
  homology->add_option("complex", P.inputs, "Complex file")->required()->expected(1);
  homology->add_option("--p", P.p, "Prime")->capture_default_str();
  budgets(homology);

  auto* helly = app.add_subcommand("helly", "Degree-shift check for a cover by subcomplexes");
  helly->add_option("complexes", P.inputs, "Ambient complex, then the subcomplexes")->required();
  helly->add_option("--p", P.p, "Prime")->capture_default_str();
  budgets(helly);

  auto* enumerate = app.add_subcommand("enumerate", "Coset enumeration over a finite presentation");
  enumerate->add_option("presentation", P.inputs, "Presentation file")->required()->expected(1);
  enumerate->add_option("--subgroup", P.subgroup, "Subgroup generator word (repeatable)");
  budgets(enumerate);

  auto* job = app.add_subcommand("job", "Run a JSON job spec");
  job->add_option("spec", job_path, "Job spec file")->required();

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kPass : kParseFail;
  }
  const std::string name = app.get_subcommands().front()->get_name();
  if (name == "job") return run_job(job_path, out, err);
  return execute(name, P, nullptr, out, err);
}

}  // namespace retra::cli
