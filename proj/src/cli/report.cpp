#include "desk/cli/report.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace desk {

void RunConfig::validate() const {
  auto need = [](bool ok, const char* what) {
    if (!ok) throw std::invalid_argument(std::string("config: ") + what);
  };
  need(node_cap > 0, "node_cap must be positive");
  need(bound > 0, "bound must be positive");
  need(search_bound > 0, "search_bound must be positive");
  need(support > 0, "support must be positive");
  need(precision > 0, "precision must be positive");
  need(p >= 2, "p must be a prime >= 2");
  need(stages >= 0, "stages must be >= 0");
  need(alpha_star >= 0, "alpha_star must be >= 0");
  need(max_rank > 0 && max_members > 0, "stage caps must be positive");
  need(depth >= 0, "depth must be >= 0");
  need(format == "text" || format == "structured", "format is text or structured");
  need(mutate == "none" || mutate == "rho" || mutate == "color" || mutate == "matrix",
       "mutate is none, rho, color or matrix");
}

json to_json(const RunConfig& c) {
  return json{{"seed", c.seed},
              {"node_cap", c.node_cap},
              {"bound", c.bound},
              {"search_bound", c.search_bound},
              {"support", c.support},
              {"precision", c.precision},
              {"p", c.p},
              {"stages", c.stages},
              {"alpha_star", c.alpha_star},
              {"max_rank", c.max_rank},
              {"max_members", c.max_members},
              {"depth", c.depth},
              {"format", c.format},
              {"mutate", c.mutate},
              {"timing", c.timing}};
}

RunConfig config_from_json(const json& j, RunConfig c) {
  for (const auto& [k, v] : j.items()) {
    if (k == "seed") c.seed = v.get<std::uint64_t>();
    else if (k == "node_cap") c.node_cap = v.get<int>();
    else if (k == "bound") c.bound = v.get<Int>();
    else if (k == "search_bound") c.search_bound = v.get<Int>();
    else if (k == "support") c.support = v.get<int>();
    else if (k == "precision") c.precision = v.get<int>();
    else if (k == "p") c.p = v.get<std::uint64_t>();
    else if (k == "stages") c.stages = v.get<int>();
    else if (k == "alpha_star") c.alpha_star = v.get<int>();
    else if (k == "max_rank") c.max_rank = v.get<int>();
    else if (k == "max_members") c.max_members = v.get<int>();
    else if (k == "depth") c.depth = v.get<int>();
    else if (k == "format") c.format = v.get<std::string>();
    else if (k == "output") c.output = v.get<std::string>();
    else if (k == "mutate") c.mutate = v.get<std::string>();
    else if (k == "timing") c.timing = v.get<bool>();
    else throw std::invalid_argument("config: unknown key " + k);
  }
  c.validate();
  return c;
}

RunConfig default_config() {
  const char* path = std::getenv("DESK_CONFIG");
  if (!path || !*path) return {};
  return config_from_json(json::parse(read_file(path)));
}

bool Report::ok() const {
  return std::none_of(checks.begin(), checks.end(), [](const Check& c) {
    return c.verdict == verdict::fail || c.verdict == verdict::error;
  });
}

std::string Report::render() const {
  std::vector<const Check*> sorted;
  for (const auto& c : checks) sorted.push_back(&c);
  std::stable_sort(sorted.begin(), sorted.end(), [](const Check* a, const Check* b) { return a->id < b->id; });

  if (config.format == "structured") {
    json cs = json::array();
    for (const Check* c : sorted) {
      json e{{"id", c->id}, {"verdict", c->verdict}, {"detail", c->detail}};
      if (config.timing) e["seconds"] = c->seconds;
      cs.push_back(e);
    }
    json j{{"command", command}, {"config", to_json(config)}, {"checks", cs}, {"ok", ok()}};
    return j.dump(2) + "\n";
  }

  std::ostringstream out;
  out << "command:";
  for (const auto& w : command) out << ' ' << w;
  out << "\nconfig: " << to_json(config).dump() << "\n";
  for (const Check* c : sorted) {
    out << '[' << c->verdict << "] " << c->id;
    if (!c->detail.empty()) out << ' ' << c->detail.dump();
    if (config.timing) {
      char buf[32];
      std::snprintf(buf, sizeof buf, " (%.3f s)", c->seconds);
      out << buf;
    }
    out << "\n";
  }
  out << (ok() ? "ok" : "FAILED") << " (" << checks.size() << " checks)\n";
  return out.str();
}

}  // namespace desk
