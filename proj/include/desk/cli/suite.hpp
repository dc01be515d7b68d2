#pragma once

#include <string>
#include <vector>

#include "desk/cli/report.hpp"
#include "desk/sbgames/construction.hpp"

namespace desk {

// The acceptance suite. Criterion k yields one check with id "ac0k" / "ac10";
// its parameters are fixed by the criterion, except the seed and --mutate.
inline constexpr int kCriteria = 10;
std::string criterion_id(int k);
std::string criterion_title(int k);
Check run_criterion(int k, const RunConfig& cfg);

// "all", "none" or a comma list such as "1,4,8".
std::vector<int> parse_suite(const std::string& s);
std::vector<Check> run_suite(const std::vector<int>& ids, const RunConfig& cfg);

// Shared with `sb construct`: certify a state and describe the outcome.
json certificate_json(const StageState& s, const CertifyReport& r);
CertifyConfig certify_config(const RunConfig& cfg);
StageBudget stage_budget(const RunConfig& cfg);

}  // namespace desk
