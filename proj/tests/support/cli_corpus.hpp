#pragma once

#include <sstream>
#include <string>
#include <vector>

#include "bsl/cli.hpp"

namespace bsl::testing {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
};

inline CliRun run_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

inline std::string sample(const std::string& name) { return std::string(BSL_SAMPLES_DIR) + "/" + name; }

/// Commands covering every subcommand, with and without --json.
inline std::vector<std::vector<std::string>> cli_corpus() {
  std::vector<std::vector<std::string>> base{
      {"bs", "normalize", "--N", "2", "b^-1 a b"},
      {"bs", "mult", "--N", "2", "a", "b^-1 a b"},
      {"bs", "invert", "--N", "3", "b^-1 a^2 b^2"},
      {"bs", "collins", "--N", "2", "--gen", "D", "aba"},
      {"bs", "collins", "--N", "2", "--gen", "theta_3", "a"},
      {"tree", "act", "--n", "2", "--map", "1,2,0", "--vertex", "1,1"},
      {"tree", "orbit", "--n", "3", "--map", "0,1,1", "--vertex", "2,0"},
      {"tree", "axis", "--n", "2", "--map", "1,2,1", "--height", "2"},
      {"tree", "aeta", "--n", "2", "--eta", "3", "--depth", "3"},
      {"embed", "classify", "--file", sample("phi_1_3.json")},
      {"embed", "classify", "--n", "6", "--l", "2", "--phi", "7/3,8"},
      {"embed", "validate", "--file", sample("bad_relation.json")},
      {"embed", "conjugate", "--file", sample("phi_1_3.json"), "--file2", sample("phi_3_1.json")},
      {"embed", "auto-equiv", "--n", "6", "--l", "1", "--phi", "1,2", "--phi2", "1,3"},
      {"--depth", "2", "embed", "straighten", "--file", sample("plus3.json")},
      {"covol", "from-quotient", "--file", sample("quotient_two_orbits.json")},
      {"covol", "enumerate", "--n", "4", "--l", "3", "--phi", "-3/2,2"},
      {"present", "verify", "--case", "3", "--n", "2", "--l", "2", "--m-ref", "1"},
      {"present", "verify", "--case", "2", "--n", "3", "--l", "2"},
      {"lab", "count-hk", "--n", "2", "--k", "3"},
      {"lab", "count-hk", "--n", "3", "--k", "2"},
      {"lab", "centralizer", "--n", "2", "--k", "3", "--m", "2"},
      {"lab", "trans-search", "--n", "2", "--l", "1", "--beta", "12"},
      {"--seed", "7", "lab", "trans-search", "--n", "6", "--l", "2", "--random", "10"},
      {"lab", "level-sum", "--n", "4", "--gamma", "2", "--av", "1", "--depth", "4"},
      {"lab", "jordan-index", "--n", "2", "--k", "3", "--m-from", "1", "--m-to", "4"},
      {"embed", "classify", "--file", sample("malformed.json")},
      {"lab", "count-hk", "--n", "4", "--k", "3"},
      {"bs", "normalize", "--N", "2", "a x"},
  };
  std::vector<std::vector<std::string>> out;
  for (const auto& args : base) {
    out.push_back(args);
    auto json = args;
    json.insert(json.begin(), "--json");
    out.push_back(json);
  }
  return out;
}

}  // namespace bsl::testing
