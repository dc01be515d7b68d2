#pragma once

#include <array>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "desk/sbgames/games.hpp"
#include "desk/sbgames/ranked_frame.hpp"

namespace desk {

struct Member {
  int alpha = -1;
  PartialAlphaEmbedding f;  // f.alpha == alpha
  int stage = 0;            // stage that recorded it
  int parent = -1;          // member it extends, -1 at stage 0
  int inverse_of = -1;      // set on recorded inverses: index in the other family
};

struct StageBudget {
  int max_rank = 1000000;
  int max_members = 5000;
};

struct BudgetExhausted : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Frames G^{0,n}, G^{1,n}, the chain e^1..e^n in G^0 and the families F^{l,n}.
struct StageState {
  int n = 0;
  int alpha_star = 0;
  RankedFrame rf[2];
  std::vector<int> e;  // e[k-1] is the coordinate of e^k
  std::vector<Member> family[2];
  // snapshot[t][l]: rank of G^l when the stage-t extensions out of G^l ran;
  // those extensions are total on that prefix
  std::vector<std::array<int, 2>> snapshot;
  // per stage: basis vectors of the final G^l covered by each extension
  struct Coverage {
    long long extensions = 0;
    long long covered = 0;  // sum of |dom h| over extensions recorded this stage
    long long possible = 0;  // extensions times rank of G^l at the end of the stage
  };
  std::vector<Coverage> coverage;
};

StageState initial_state(int alpha_star);
StageState stage_step(const StageState& s, const StageBudget& budget = {});
StageState construct(int alpha_star, int stages, const StageBudget& budget = {});

// Conditions checked on a state: the e-chain, well-founded finite ranks on
// X^1, nilpotence, family membership, inverses, and ranked-frame validity of
// both frames. Violations are prefixed by the condition's tag.
struct ConditionReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};
ConditionReport check_conditions(const StageState& s);
// Later states extend earlier ones: frames and families only grow.
ConditionReport check_extends(const StageState& earlier, const StageState& later);

struct CertifyConfig {
  int depth = 2;  // largest alpha replayed in the game
  int sampled_pairs = 8;
  int moves_per_side = 6;  // sampled moves per side and level; 0 = every coordinate
  std::uint64_t seed = 1;
};

struct CertifyReport {
  bool chain_ok = false;         // e-chain inside X of G^0
  bool wellfounded_ok = false;   // X of G^1 well-founded, rho bounds the rank
  bool games_ok = false;         // sim_alpha replayed for the recorded members
  bool conditions_ok = false;    // the per-stage conditions
  int games_checked = 0;
  int games_skipped = 0;  // members too late for the recorded stages
  int moves_checked = 0;
  std::vector<std::string> notes;
  bool ok() const { return chain_ok && wellfounded_ok && games_ok && conditions_ok; }
};

CertifyReport certify_counterexample(const StageState& s, const CertifyConfig& cfg = {});

// Fault injection for the verification harness.
enum class Mutation { none, rho, color, matrix };
Mutation parse_mutation(const std::string& s);
void mutate(StageState& s, Mutation m);

// Checkpoint text (JSON). Round trips exactly.
std::string to_checkpoint(const StageState& s);
StageState from_checkpoint(const std::string& text);
std::string frame_to_json(const RankedFrame& rf);
RankedFrame frame_from_json(const std::string& text);

}  // namespace desk
