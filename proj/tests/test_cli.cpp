#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "support.hpp"

using namespace retra;
using namespace retra::testing;
using Json = nlohmann::ordered_json;

namespace {

struct Outcome {
  int code = 0;
  std::string out;
  std::string err;
  Json report() const { return Json::parse(out); }
};

Outcome call(std::vector<std::string> args) {
  std::ostringstream out, err;
  Outcome o;
  o.code = cli::run(args, out, err);
  o.out = out.str();
  o.err = err.str();
  return o;
}

std::string tmp_path(const std::string& name) {
  return (std::filesystem::temp_directory_path() / ("retra_cli_test_" + name)).string();
}

}  // namespace

TEST_CASE("homology command") {
  Outcome o = call({"homology", data_path("hexagon.cx"), "--p", "2"});
  REQUIRE(o.code == cli::kPass);
  Json r = o.report();
  CHECK(r["format"] == cli::kReportFormat);
  CHECK(r["command"] == "homology");
  CHECK(r["status"] == "pass");
  CHECK(r["result"]["reduced_betti"] == "0 1");
  CHECK(r["result"]["euler_characteristic"] == 0);
  CHECK(r["result"].contains("scope"));
  CHECK(r["inputs"][0]["fnv1a64"].get<std::string>().size() == 16);
  CHECK(call({"homology", data_path("rp2.cx"), "--p", "3"}).report()["result"]["reduced_betti"] == "0 0 0");
  CHECK(call({"homology", data_path("rp2.cx"), "--p", "4"}).code == cli::kParseFail);
}

TEST_CASE("reports are byte-identical across runs") {
  for (const auto& args : std::vector<std::vector<std::string>>{
           {"homology", data_path("rp2.cx")},
           {"check-large", data_path("octagon.cx"), "--k", "6"},
           {"retract", data_path("dihedral_k6.bog"), "--n", "2"},
           {"retra", data_path("z2.grp"), "--dim", "1", "--n", "2"}}) {
    Outcome a = call(args);
    Outcome b = call(args);
    CHECK(a.code == b.code);
    CHECK(a.out == b.out);
  }
}

TEST_CASE("check-large command") {
  Outcome o = call({"check-large", data_path("octagon.cx"), "--k", "6"});
  CHECK(o.code == cli::kPass);
  Outcome f = call({"check-large", data_path("octahedron.cx"), "--k", "5"});
  CHECK(f.code == cli::kVerifyFail);
  Json r = f.report();
  CHECK(r["status"] == "verification-failed");
  CHECK(r["result"]["witness"].size() == 4);
  CHECK(r.contains("reason"));
}

TEST_CASE("retract command gives an unfolding witness") {
  Outcome o = call({"retract", data_path("dihedral_k6.bog"), "--n", "2"});
  REQUIRE(o.code == cli::kVerifyFail);
  Json r = o.report();
  CHECK(r["result"]["holds"] == false);
  CHECK(r["result"]["witness"].size() == 2);
  CHECK(r["result"]["witness"][0].get<std::string>().rfind("unfold at", 0) == 0);
  CHECK(call({"retract", data_path("dihedral_k6.bog"), "--n", "1"}).code == cli::kPass);
  CHECK(call({"retract", data_path("dihedral_k4.bog"), "--n", "2"}).code == cli::kPass);
}

TEST_CASE("retra command") {
  Json r = call({"retra", data_path("z2.grp"), "--dim", "1", "--n", "3"}).report();
  CHECK(r["status"] == "pass");
  CHECK(r["result"]["top_order"] == 16);
  CHECK(r["result"]["p_group"]["holds"] == true);
  CHECK(r["result"]["generating_sets_match"] == true);
  Json z3 = call({"retra", data_path("z3.grp"), "--dim", "1", "--n", "1"}).report();
  CHECK(z3["result"]["top_order"] == 9);
  CHECK(z3["result"]["p_group"]["p"] == 3);
  Json three = call({"retra", data_path("z2_three_sides.grp"), "--dim", "2", "--n", "1"}).report();
  CHECK(three["status"] == "pass");
  CHECK(three["result"]["generating_sets"].size() == 7);
  Outcome capped = call({"retra", data_path("z2.grp"), "--dim", "1", "--n", "3", "--max-order", "8"});
  CHECK(capped.code == cli::kBudget);
  CHECK(capped.report()["status"] == "budget-exceeded");
}

TEST_CASE("develop command") {
  Outcome text = call({"develop", data_path("dihedral_k4.bog")});
  REQUIRE(text.code == cli::kPass);
  CHECK(text.out.rfind("# retra-report/1 develop ", 0) == 0);
  SimplicialComplex k = parse_complex(text.out);
  CHECK(k.num_vertices() == 8);
  CHECK(k.facets().size() == 8);
  const std::string path = tmp_path("dev.cx");
  Outcome rep = call({"develop", data_path("dihedral_k4.bog"), "--out", path});
  REQUIRE(rep.code == cli::kPass);
  CHECK(slurp(path) == text.out);
  char want[17];
  std::snprintf(want, sizeof want, "%016llx", static_cast<unsigned long long>(cli::fnv1a64(text.out)));
  CHECK(rep.report()["result"]["output_fnv1a64"] == want);
  std::filesystem::remove(path);
  CHECK(call({"develop", data_path("edge_no_top.bog")}).code == cli::kParseFail);
}

TEST_CASE("helly command") {
  Outcome o = call({"helly", data_path("hexagon.cx"), data_path("arc_upper.cx"), data_path("arc_lower.cx")});
  REQUIRE(o.code == cli::kPass);
  Json r = o.report();
  CHECK(r["result"]["betti_union_from_minus_one"] == "0 0 1");
  CHECK(r["result"]["betti_intersection_from_minus_one"] == "0 1");
  CHECK(r["result"]["shift_holds"] == true);
  Outcome bad = call({"helly", data_path("hexagon.cx"), data_path("hexagon.cx"), data_path("arc_upper.cx")});
  CHECK(bad.code == cli::kVerifyFail);
  CHECK(bad.report()["result"]["failed_subsets"][0] == "{0}");
}

TEST_CASE("enumerate command") {
  Outcome fin = call({"enumerate", data_path("s3.pres"), "--subgroup", "a"});
  REQUIRE(fin.code == cli::kPass);
  CHECK(fin.report()["result"]["index"] == 3);
  Outcome inf = call({"enumerate", data_path("infinite_dihedral.pres"), "--max-cosets", "1000"});
  CHECK(inf.code == cli::kBudget);
  CHECK(inf.report()["result"]["complete"] == false);
}

TEST_CASE("input errors exit with the parse code") {
  CHECK(call({"homology", data_path("missing.cx")}).code == cli::kParseFail);
  const std::string bad = tmp_path("repeated.cx");
  std::ofstream(bad) << "a a\n";
  CHECK(call({"homology", bad}).code == cli::kParseFail);
  std::filesystem::remove(bad);
  CHECK(call({"retra", data_path("hexagon.cx"), "--dim", "1"}).code == cli::kParseFail);
  CHECK(call({"no-such-command"}).code != cli::kPass);
}

TEST_CASE("job specs") {
  Outcome o = call({"job", data_path("job_homology.json")});
  REQUIRE(o.code == cli::kPass);
  Json r = o.report();
  CHECK(r["result"]["reduced_betti"] == "0 1 1");
  CHECK(r["job"]["fnv1a64"] == call({"job", data_path("job_homology.json")}).report()["job"]["fnv1a64"]);
  // The job and the direct command hash the same input.
  Json direct = call({"homology", data_path("rp2.cx"), "--p", "2"}).report();
  CHECK(r["inputs"][0]["fnv1a64"] == direct["inputs"][0]["fnv1a64"]);
  CHECK(call({"job", data_path("job_unknown_field.json")}).code == cli::kParseFail);
  CHECK(call({"job", data_path("job_bad_version.json")}).code == cli::kParseFail);
  CHECK(call({"job", data_path("missing.json")}).code == cli::kParseFail);
}

TEST_CASE("fnv1a64 reference values") {
  CHECK(cli::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(cli::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
}
