#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "desk/cli/serialize.hpp"

namespace desk {

struct RunConfig {
  std::uint64_t seed = 1;
  int node_cap = 100000;
  Int bound = 2;         // coefficient bound
  Int search_bound = 4;  // entry bound of frame_embed_search
  int support = 3;
  int precision = 64;  // K
  std::uint64_t p = 2;
  int stages = 3;
  int alpha_star = 1;
  int max_rank = 1000000;
  int max_members = 5000;
  int depth = 2;  // certification depth
  std::string format = "text";  // text | structured
  std::string output;           // empty: stdout
  std::string mutate = "none";
  bool timing = false;  // wall-clock seconds in the report; off keeps reports byte-stable

  // Throws std::invalid_argument naming the first bad field.
  void validate() const;
};

json to_json(const RunConfig& c);
// Fields present in j override base; unknown keys are an error.
RunConfig config_from_json(const json& j, RunConfig base = {});
// Defaults, overridden by the file named in DESK_CONFIG when that is set.
RunConfig default_config();

namespace verdict {
inline constexpr const char* pass = "pass";
inline constexpr const char* fail = "fail";
inline constexpr const char* yes = "yes";
inline constexpr const char* no = "no";
inline constexpr const char* bounded = "not-up-to-bound";
inline constexpr const char* error = "error";
}  // namespace verdict

struct Check {
  std::string id;
  std::string verdict;
  json detail = json::object();
  double seconds = 0;
};

struct Report {
  std::vector<std::string> command;
  RunConfig config;
  std::vector<Check> checks;

  void add(Check c) { checks.push_back(std::move(c)); }
  // False when any check failed or errored.
  bool ok() const;
  std::string render() const;  // config.format decides the layout
};

}  // namespace desk
