#include <doctest.h>

#include <sstream>

#include "grothlin/cli.hpp"
#include "grothlin/error.hpp"
#include "support.hpp"

using namespace grothlin;
using cli::run_cli;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run invoke(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

}  // namespace

TEST_SUITE_BEGIN("cli");

TEST_CASE("eval reports the interval class") {
  testutil::TempDir tmp;
  std::string f = tmp.write("interval.def", "0 < x & x < 1\n");
  Run r = invoke({"eval", f, "--vars", "x"});
  CHECK(r.code == 0);
  CHECK(r.out.find("class:    -1") != std::string::npos);
  CHECK(r.out.find("chi_g:    -1") != std::string::npos);
  CHECK(r.out.find("bounded:  yes") != std::string::npos);
}

TEST_CASE("eval json round-trips byte for byte") {
  testutil::TempDir tmp;
  std::string f = tmp.write("ray.def", "0 < x\n");
  Run r = invoke({"eval", f, "--vars", "x", "--json"});
  CHECK(r.code == 0);
  nlohmann::json j = nlohmann::json::parse(r.out);
  CHECK(j["class"] == "T");
  CHECK(j["chi_b"] == 0);
  CHECK(j["kinds"]["bad"] == 1);
  CHECK(j.dump(2) + "\n" == r.out);
}

TEST_CASE("eval picks up the vars directive") {
  testutil::TempDir tmp;
  std::string f = tmp.write("with_vars.def", "# vars: x,y\n0 < x & 0 < y\n");
  Run r = invoke({"eval", f});
  CHECK(r.code == 0);
  CHECK(r.out.find("class:    -T") != std::string::npos);
}

TEST_CASE("exit codes distinguish input and semantic errors") {
  testutil::TempDir tmp;
  std::string broken = tmp.write("broken.def", "0 < x &\n");
  Run r1 = invoke({"eval", broken, "--vars", "x"});
  CHECK(r1.code == 2);
  CHECK(!r1.err.empty());

  std::string unknown = tmp.write("unknown.def", "0 < zz\n");
  Run r2 = invoke({"eval", unknown, "--vars", "x"});
  CHECK(r2.code == 3);

  Run r3 = invoke({"eval", tmp.path.string() + "/missing.def", "--vars", "x"});
  CHECK(r3.code == 2);

  Run r4 = invoke({"nonsense"});
  CHECK(r4.code == 2);
}

TEST_CASE("qe subcommand prints the eliminated formula") {
  testutil::TempDir tmp;
  std::string f = tmp.write("q.def", "EX y. (x < y & y < 1)\n");
  Run r = invoke({"qe", f, "--vars", "x"});
  CHECK(r.code == 0);
  CHECK(r.out == "x < 1\n");

  std::string contradiction = tmp.write("c.def", "EX x. (0 < x & x < 0)\n");
  Run rc = invoke({"qe", contradiction, "--vars", ""});
  CHECK(rc.code == 2);  // no --vars and no vars directive in the file
  Run rc2 = invoke({"qe", contradiction, "--vars", "z"});
  CHECK(rc2.code == 0);
  CHECK(rc2.out == "false\n");

  std::string subst = tmp.write("s.def", "EX y. (y = x & 0 < y)\n");
  Run rs = invoke({"qe", subst, "--vars", "x"});
  CHECK(rs.out == "0 < x\n");
}

TEST_CASE("cells subcommand lists kinds and dims") {
  testutil::TempDir tmp;
  std::string f = tmp.write("line.def", "x = x\n");
  Run r = invoke({"cells", f, "--vars", "x"});
  CHECK(r.code == 0);
  CHECK(r.out.find("3 cell(s)") != std::string::npos);
  CHECK(r.out.find("good dim=0") != std::string::npos);
  CHECK(r.out.find("bad dim=1") != std::string::npos);

  Run rj = invoke({"cells", f, "--vars", "x", "--json"});
  nlohmann::json j = nlohmann::json::parse(rj.out);
  CHECK(j["cellCount"] == 3);
  CHECK(j["cells"].size() == 3);
  CHECK(j.dump(2) + "\n" == rj.out);
}

TEST_CASE("map subcommand") {
  testutil::TempDir tmp;
  std::string mapf = tmp.write(
      "halve.json", R"({"src":1,"dst":1,"pieces":[{"where":"x = x","rows":["1/2*x"]}]})");
  std::string setf = tmp.write("set.def", "0 < x & x < 1\n");
  std::string target = tmp.write("target.def", "0 < x & x < 1/2\n");

  Run apply = invoke({"map", "apply", "--map", mapf, "--vars", "x", "--point", "3"});
  CHECK(apply.code == 0);
  CHECK(apply.out == "(3/2)\n");

  Run img = invoke({"map", "image", "--map", mapf, "--set", setf, "--vars", "x"});
  CHECK(img.code == 0);
  CHECK(img.out == "0 < x & 2*x < 1\n");

  Run inj = invoke({"map", "injective", "--map", mapf, "--set", setf, "--vars", "x"});
  CHECK(inj.out == "true\n");

  Run bij = invoke({"map", "bijection", "--map", mapf, "--set", setf, "--target", target,
                    "--vars", "x"});
  CHECK(bij.out == "true\n");

  Run aj = invoke({"map", "apply", "--map", mapf, "--vars", "x", "--point", "3", "--json"});
  nlohmann::json j = nlohmann::json::parse(aj.out);
  CHECK(j["point"] == nlohmann::json::array({"3/2"}));
  CHECK(j.dump(2) + "\n" == aj.out);

  Run bj = invoke({"map", "bijection", "--map", mapf, "--set", setf, "--target", target,
                   "--vars", "x", "--json"});
  CHECK(nlohmann::json::parse(bj.out)["bijection"] == true);

  std::string badmap = tmp.write("bad.json", "{not json");
  Run rb = invoke({"map", "apply", "--map", badmap, "--vars", "x", "--point", "1"});
  CHECK(rb.code == 2);
}

TEST_CASE("map projection with differing dimensions") {
  testutil::TempDir tmp;
  std::string mapf = tmp.write(
      "proj.json", R"({"src":2,"dst":1,"pieces":[{"where":"x = x & y = y","rows":["x"]}]})");
  std::string setf = tmp.write("square.def", "0 < x & x < 1 & 0 < y & y < 1\n");
  Run img = invoke({"map", "image", "--map", mapf, "--set", setf, "--vars", "x,y"});
  CHECK(img.code == 0);
  CHECK(img.out == "0 < x0 & x0 < 1\n");
  Run inj = invoke({"map", "injective", "--map", mapf, "--set", setf, "--vars", "x,y"});
  CHECK(inj.out == "false\n");
}

TEST_CASE("bd subcommand") {
  testutil::TempDir tmp;
  std::string setf = tmp.write("line.def", "x = x\n");
  std::string distf = tmp.write("abs.def", "(0 <= x & t = x) | (x < 0 & t = 0 - x)\n");
  Run r = invoke({"bd", "--set", setf, "--dist", distf, "--vars", "x"});
  CHECK(r.code == 0);
  CHECK(r.out.find("verdict: stabilized") != std::string::npos);

  Run rj = invoke({"bd", "--set", setf, "--dist", distf, "--vars", "x", "--json"});
  CHECK(rj.code == 0);
  nlohmann::json j = nlohmann::json::parse(rj.out);
  CHECK(j["stabilized"] == true);
  CHECK(j.dump(2) + "\n" == rj.out);

  // negative distance violates the nonnegativity precondition
  std::string badf = tmp.write("iddist.def", "t = x\n");
  Run rb = invoke({"bd", "--set", setf, "--dist", badf, "--vars", "x"});
  CHECK(rb.code == 1);
  CHECK(rb.out.find("FAILED") != std::string::npos);
}

TEST_CASE("selftest runs over the bundled corpus") {
  Run r = invoke({"selftest", "--corpus", std::string(GROTHLIN_SOURCE_DIR) + "/corpus",
                  "--filter", "claim"});
  CHECK(r.code == 0);
  CHECK(r.out.find("PASS claim1") != std::string::npos);
  CHECK(r.out.find("PASS claim2") != std::string::npos);
  CHECK(r.out.find("PASS claim3") != std::string::npos);
}

TEST_CASE("selftest names a corrupted corpus file") {
  testutil::TempDir tmp;
  tmp.write("ok.def", "# vars: x\n0 < x\n");
  std::string bad = tmp.write("bad.def", "# vars: x\n0 < x &\n");
  Run r = invoke({"selftest", "--corpus", tmp.path.string(), "--filter", "claim2"});
  CHECK(r.code == 2);
  CHECK(r.err.find("bad.def") != std::string::npos);
}

TEST_CASE("corpus loader surfaces the directives") {
  testutil::TempDir tmp;
  std::string p = tmp.write("entry.def",
                            "# name: sample\n# vars: x,y\n# expect-chi-g: 1\n"
                            "# expect-class: -T\n# note: hand-checked\n0 < x & 0 < y\n");
  cli::CorpusEntry e = cli::load_corpus_file(p);
  CHECK(e.name == "sample");
  CHECK(e.vars == std::vector<std::string>{"x", "y"});
  CHECK(e.expect_chi_g == 1);
  CHECK(!e.expect_chi_b.has_value());
  CHECK(e.expect_class == "-T");
  CHECK(e.formula_text == "0 < x & 0 < y");

  std::string novars = tmp.write("novars.def", "0 < x\n");
  CHECK_THROWS_AS(cli::load_corpus_file(novars), Error);
}

TEST_SUITE_END();
