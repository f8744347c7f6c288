#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace zid {

// One invocation's worth of settings. Outcome/treatment entries are raw
// NAME or NAME=value tokens, surrogates and rule sets bare names, and
// cardinality overrides NAME=K tokens; run() parses them so every bad input
// surfaces through a single place with a consistent diagnostic.
struct RunConfig {
  std::string graph_path;
  std::vector<std::string> outcome;
  std::vector<std::string> treatment;
  std::vector<std::string> surrogate;
  std::string mode = "idz";     // idz | id | thm3 | pearl | cor2 | check-rule
  std::string format = "text";  // text | latex | json
  int verify_n = 0;             // oracle models to check an estimand against
  std::uint64_t seed = 1;
  std::vector<std::string> cardinality;
  int rule = 0;  // 1..3, check-rule mode only
  std::vector<std::string> rule_z;
  std::vector<std::string> rule_w;
};

// Executes one invocation: results on `out`, notices and diagnostics on
// `err`. Returns the process exit status: 0 = identified / property holds,
// 1 = not (z-)identifiable / property fails / oracle verification failed,
// 2 = unusable input.
int run(const RunConfig& config, std::ostream& out, std::ostream& err);

}  // namespace zid
