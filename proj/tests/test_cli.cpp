#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "support/cli_corpus.hpp"

using bsl::testing::run_cli;
using bsl::testing::sample;
using Json = nlohmann::ordered_json;

namespace {

Json json_of(const bsl::testing::CliRun& r) { return Json::parse(r.out); }

bool one_error_line(const std::string& err) {
  return err.rfind("error kind=", 0) == 0 && err.find('\n') == err.size() - 1;
}

}  // namespace

TEST_CASE("classify a sample embedding", "[cli]") {
  auto r = run_cli({"--json", "embed", "classify", "--n", "2", "--l", "1", "--file", sample("phi_1_3.json")});
  REQUIRE(r.code == 0);
  auto j = json_of(r);
  CHECK(j["s"] == "3");
  CHECK(j["m"] == 1);
  CHECK(j["h0"] == 0);
  CHECK(j.contains("j"));
  CHECK(j.contains("k"));
}

TEST_CASE("normalize a word", "[cli]") {
  auto r = run_cli({"bs", "normalize", "--N", "2", "b^-1 a b"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("b^-1 a b") != std::string::npos);
  CHECK(r.out.find("(1,1,1)") != std::string::npos);
  auto j = json_of(run_cli({"--json", "bs", "normalize", "--N", "2", "b^-1 a b"}));
  CHECK(j["x"] == 1);
  CHECK(j["y"] == 1);
  CHECK(j["z"] == 1);
  CHECK(j["c"] == "1/2");
}

TEST_CASE("counting report", "[cli]") {
  auto r = run_cli({"lab", "count-hk", "--n", "2", "--k", "3"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("brute") != std::string::npos);
  CHECK(r.out.find("formula") != std::string::npos);
  auto j = json_of(run_cli({"--json", "lab", "count-hk", "--n", "2", "--k", "3"}));
  CHECK(j["lemma"] == "count-hk");
  CHECK(j["brute"] == 128);
  CHECK(j["formula"] == 32);
  CHECK(j["match"] == false);
}

TEST_CASE("other subcommands", "[cli]") {
  auto axis = json_of(run_cli({"--json", "tree", "axis", "--n", "2", "--map", "1,2,1", "--height", "2"}));
  CHECK(axis["vertex"]["h"] == 2);
  CHECK(axis["vertex"]["c"] == "3");
  auto cov = json_of(run_cli({"--json", "covol", "from-quotient", "--file", sample("quotient_two_orbits.json")}));
  CHECK(cov["covolume"] == "1");
  auto pres = json_of(run_cli({"--json", "present", "verify", "--case", "3", "--n", "2", "--l", "2", "--m-ref", "1"}));
  CHECK(pres["verified"] == true);
  CHECK(pres["y"] == -3);
  auto eq = json_of(run_cli({"--json", "embed", "conjugate", "--file", sample("phi_1_3.json"), "--file2",
                             sample("phi_3_1.json")}));
  CHECK(eq["conjugate"] == true);
  auto ts = json_of(run_cli({"--json", "lab", "trans-search", "--n", "2", "--l", "1", "--beta", "12"}));
  CHECK(ts["results"][0]["raw"]["k"] == 2);
  CHECK(ts["results"][0]["normalized"]["k"] == 0);
  CHECK(ts["results"][0]["certified"] == true);
}

TEST_CASE("exit codes", "[cli]") {
  auto parse = run_cli({"bs", "normalize", "--N", "2", "a x"});
  CHECK(parse.code == 2);
  CHECK(one_error_line(parse.err));
  CHECK(parse.err.find("kind=ParseError") != std::string::npos);

  auto malformed = run_cli({"embed", "classify", "--file", sample("malformed.json")});
  CHECK(malformed.code == 2);
  CHECK(one_error_line(malformed.err));

  CHECK(run_cli({"frobnicate"}).code == 2);
  CHECK(run_cli({}).code == 2);
  CHECK(run_cli({"tree", "act", "--n", "2"}).code == 2);

  auto invalid = run_cli({"embed", "validate", "--file", sample("bad_relation.json")});
  CHECK(invalid.code == 1);
  CHECK(one_error_line(invalid.err));
  CHECK(invalid.err.find("kind=ValidationFailed") != std::string::npos);

  auto straight = run_cli({"embed", "straighten", "--n", "2", "--l", "1", "--phi", "1,2"});
  CHECK(straight.code == 1);
  CHECK(straight.err.find("kind=NotStraightenable") != std::string::npos);

  auto big = run_cli({"lab", "count-hk", "--n", "4", "--k", "3"});
  CHECK(big.code == 3);
  CHECK(one_error_line(big.err));
  CHECK(big.err.find("kind=TooLarge") != std::string::npos);

  auto missing = run_cli({"embed", "classify", "--file", sample("no_such_file.json")});
  CHECK(missing.code != 0);
  CHECK(one_error_line(missing.err));
}

TEST_CASE("json output parses", "[cli]") {
  for (const auto& args : bsl::testing::cli_corpus()) {
    if (args.front() != "--json") continue;
    auto r = run_cli(args);
    if (r.code != 0) {
      CHECK(one_error_line(r.err));
      continue;
    }
    INFO(r.out);
    CHECK_NOTHROW(Json::parse(r.out));
  }
}

TEST_CASE("dot output", "[cli]") {
  auto path = std::filesystem::temp_directory_path() / "bsl_test_orbit.dot";
  auto r = run_cli({"--dot", path.string(), "tree", "orbit", "--n", "2", "--map", "0,1,1", "--vertex", "2,0"});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  CHECK(text.rfind("digraph", 0) == 0);
  CHECK(text.find("->") != std::string::npos);
  std::filesystem::remove(path);
}

TEST_CASE("output is deterministic", "[cli]") {
  for (const auto& args : bsl::testing::cli_corpus()) {
    auto first = run_cli(args);
    auto second = run_cli(args);
    auto threaded = args;
    threaded.insert(threaded.begin(), {"--threads", "4"});
    auto third = run_cli(threaded);
    CHECK(first.out == second.out);
    CHECK(first.err == second.err);
    CHECK(first.code == second.code);
    CHECK(first.out == third.out);
    CHECK(first.code == third.code);
  }
}
