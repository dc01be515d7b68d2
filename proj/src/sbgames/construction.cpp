#include "desk/sbgames/construction.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <set>

#include <json.hpp>

namespace desk {

using nlohmann::json;

StageState initial_state(int alpha_star) {
  if (alpha_star < 0) throw std::invalid_argument("alpha_star must be >= 0");
  StageState s;
  s.alpha_star = alpha_star;
  s.family[0].push_back({alpha_star, {alpha_star, {}}, 0, -1, -1});
  s.family[1].push_back({alpha_star, {alpha_star, {}}, 0, -1, 0});
  s.snapshot.push_back({0, 0});
  s.coverage.push_back({});
  return s;
}

StageState stage_step(const StageState& s, const StageBudget& budget) {
  StageState next = s;
  int step_n = s.n;
  next.n = s.n + 1;
  int prev = s.e.empty() ? -1 : s.e.back();
  next.e.push_back(next.rf[0].add_coordinate(prev, true, SmallOrdinal::infinity()));

  std::array<int, 2> snap{};
  struct Made {
    int side, index;
  };
  std::vector<Made> made;
  auto record = [&](int side, Member m) {
    next.family[side].push_back(std::move(m));
    if (static_cast<int>(next.family[side].size()) > budget.max_members)
      throw BudgetExhausted("family size above " + std::to_string(budget.max_members));
    return static_cast<int>(next.family[side].size()) - 1;
  };
  for (int l = 0; l < 2; ++l) {
    snap[l] = next.rf[l].rank();
    int old = static_cast<int>(s.family[l].size());
    for (int i = 0; i < old; ++i) {
      Member m = next.family[l][i];
      for (int beta = -1; beta < std::max(m.alpha, 0); ++beta) {
        RankedFrame& src = next.rf[l];
        RankedFrame& dst = next.rf[1 - l];
        Extension x = beta < 0 ? extend_minus1(src, dst, m.f, step_n) : extend_beta(src, dst, m.f, beta, step_n);
        if (x.frame.rank() > budget.max_rank) throw BudgetExhausted("rank above " + std::to_string(budget.max_rank));
        dst = std::move(x.frame);
        x.h.alpha = beta;
        int at = record(l, {beta, x.h, next.n, i, -1});
        made.push_back({l, at});
        if (beta >= 0) {
          PartialAlphaEmbedding inv = inverse(next.family[l][at].f, dst.rank());
          record(1 - l, {beta, inv, next.n, -1, at});
        }
      }
    }
  }
  next.snapshot.push_back(snap);
  StageState::Coverage cov;
  for (auto [side, at] : made) {
    ++cov.extensions;
    cov.covered += static_cast<long long>(next.family[side][at].f.domain().size());
    cov.possible += next.rf[side].rank();
  }
  next.coverage.push_back(cov);
  return next;
}

StageState construct(int alpha_star, int stages, const StageBudget& budget) {
  StageState s = initial_state(alpha_star);
  for (int k = 0; k < stages; ++k) s = stage_step(s, budget);
  return s;
}

namespace {

std::vector<std::pair<int, int>> pairs_of(const PartialAlphaEmbedding& f) {
  std::vector<std::pair<int, int>> out;
  for (int c = 0; c < static_cast<int>(f.map.size()); ++c)
    if (f.map[c] >= 0) out.push_back({c, f.map[c]});
  return out;
}

bool chain_ok(const StageState& s, std::vector<std::string>* why) {
  auto bad = [&](const std::string& w) {
    if (why) why->push_back("chain: " + w);
    return false;
  };
  if (static_cast<int>(s.e.size()) != s.n) return bad("chain length differs from the stage");
  for (int k = 0; k < s.n; ++k) {
    int c = s.e[k];
    if (c < 0 || c >= s.rf[0].rank()) return bad("chain element outside G^0");
    if (!s.rf[0].in_x[c]) return bad("e^" + std::to_string(k + 1) + " is not in X");
    if (!s.rf[0].rho[c].infinite) return bad("rho(e^" + std::to_string(k + 1) + ") is finite");
    int want = k == 0 ? -1 : s.e[k - 1];
    if (s.rf[0].phi[c] != want) return bad("phi(e^" + std::to_string(k + 1) + ") is not the previous element");
  }
  return true;
}

bool wellfounded_ok(const RankedFrame& rf, std::vector<std::string>* why) {
  auto wf = wellfounded_check(x_order(rf));
  auto* rank = std::get_if<RankFunction>(&wf);
  if (!rank) {
    if (why) why->push_back("wellfounded: the order on X^1 has a cycle");
    return false;
  }
  for (auto [c, k] : rank->rank) {
    if (rf.rho[c].infinite) {
      if (why) why->push_back("wellfounded: rho^1(" + std::to_string(c) + ") is infinite");
      return false;
    }
    if (rf.rho[c] < SmallOrdinal::natural(k)) {
      if (why) why->push_back("wellfounded: rho^1(" + std::to_string(c) + ") is below the rank");
      return false;
    }
  }
  return true;
}

}  // namespace

ConditionReport check_conditions(const StageState& s) {
  ConditionReport rep;
  chain_ok(s, &rep.violations);
  wellfounded_ok(s.rf[1], &rep.violations);
  for (int l = 0; l < 2; ++l) {
    if (nilpotency_index(s.rf[l]) > s.n) rep.violations.push_back("nilpotent: phi^n is not zero on G^" + std::to_string(l));
    auto g = gamma_validate(s.rf[l], std::max(s.n, 0));
    for (auto& v : g.violations) rep.violations.push_back("G^" + std::to_string(l) + ": " + v);
  }
  for (int l = 0; l < 2; ++l) {
    std::set<std::pair<int, std::vector<std::pair<int, int>>>> other;
    for (const Member& m : s.family[1 - l]) other.insert({m.alpha, pairs_of(m.f)});
    for (std::size_t i = 0; i < s.family[l].size(); ++i) {
      const Member& m = s.family[l][i];
      std::string tag = "F^" + std::to_string(l) + "[" + std::to_string(i) + "]";
      if (m.alpha < -1 || m.alpha > s.alpha_star || m.f.alpha != m.alpha)
        rep.violations.push_back("family: " + tag + " has a bad alpha");
      auto v = validate_partial(s.rf[l], s.rf[1 - l], m.f);
      for (auto& w : v.violations) rep.violations.push_back("family: " + tag + ": " + w);
      if (m.alpha >= 0) {
        auto inv = pairs_of(inverse(m.f, s.rf[1 - l].rank()));
        if (!other.count({m.alpha, inv})) rep.violations.push_back("inverse: " + tag + " has no recorded inverse");
      }
    }
  }
  return rep;
}

ConditionReport check_extends(const StageState& earlier, const StageState& later) {
  ConditionReport rep;
  for (int l = 0; l < 2; ++l) {
    const RankedFrame& a = earlier.rf[l];
    const RankedFrame& b = later.rf[l];
    if (b.rank() < a.rank()) {
      rep.violations.push_back("frames grow: G^" + std::to_string(l) + " shrank");
      continue;
    }
    if (!(b.prefix(a.rank()) == a)) rep.violations.push_back("frames grow: G^" + std::to_string(l) + " changed on old part");
    if (later.family[l].size() < earlier.family[l].size()) {
      rep.violations.push_back("families grow: F^" + std::to_string(l) + " shrank");
      continue;
    }
    for (std::size_t i = 0; i < earlier.family[l].size(); ++i)
      if (pairs_of(earlier.family[l][i].f) != pairs_of(later.family[l][i].f) ||
          earlier.family[l][i].alpha != later.family[l][i].alpha)
        rep.violations.push_back("families grow: F^" + std::to_string(l) + "[" + std::to_string(i) + "] changed");
  }
  return rep;
}

namespace {

// The back-and-forth replayed on stage prefixes: at level t the moves come
// from the part of G^l present when stage t ran, responses from stage t + 1,
// and the base level asks for pointed embeddings of the stage-t parts into
// the final frames.
class SnapshotGame {
 public:
  SnapshotGame(const StageState& s, const CertifyConfig& cfg) : s_(s), cfg_(cfg), rng_(cfg.seed) {
    for (int l = 0; l < 2; ++l) final_[l] = engine_.add(s.rf[l]);
    for (int l = 0; l < 2; ++l) {
      depth_[l].assign(s.rf[l].rank(), 0);
      for (int c = 0; c < s.rf[l].rank(); ++c)
        for (int y = c; s.rf[l].phi[y] >= 0; y = s.rf[l].phi[y]) ++depth_[l][c];
    }
  }

  // side l moves first; a lives in G^l and b in G^{1-l}
  bool play(int t, int alpha, int l, const Tuple& a, const Tuple& b) {
    auto key = std::make_tuple(t, alpha, l, a, b);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    bool ok;
    if (alpha == 0) {
      try {
        ok = engine_.embeds(handle(l, t), a, final_[1 - l], b) && engine_.embeds(handle(1 - l, t), b, final_[l], a);
      } catch (const std::out_of_range&) {
        ok = false;
      }
    } else {
      ok = moves(t, alpha, l, a, b, false) && moves(t, alpha, l, a, b, true);
    }
    memo_[key] = ok;
    return ok;
  }

  int moves_checked = 0;

 private:
  bool moves(int t, int alpha, int l, const Tuple& a, const Tuple& b, bool from_other) {
    int mover = from_other ? 1 - l : l;
    int limit = s_.snapshot[t][mover];
    int reply_limit = s_.snapshot[t + 1][1 - mover];
    std::vector<int> pool(limit);
    for (int c = 0; c < limit; ++c) pool[c] = c;
    if (cfg_.moves_per_side > 0 && limit > cfg_.moves_per_side) {
      std::shuffle(pool.begin(), pool.end(), rng_);
      pool.resize(cfg_.moves_per_side);
      std::sort(pool.begin(), pool.end());
    }
    const RankedFrame& mf = s_.rf[mover];
    const RankedFrame& rf = s_.rf[1 - mover];
    for (int x : pool) {
      ++moves_checked;
      bool found = false;
      for (int y = 0; y < reply_limit && !found; ++y) {
        // responses must at least match the X flag and the phi-depth
        if (rf.in_x[y] != mf.in_x[x] || depth_[1 - mover][y] != depth_[mover][x]) continue;
        Tuple a2 = a, b2 = b;
        a2.push_back(from_other ? y : x);
        b2.push_back(from_other ? x : y);
        found = play(t + 1, alpha - 1, l, a2, b2);
      }
      if (!found) return false;
    }
    return true;
  }

  int handle(int l, int t) {
    auto key = std::make_pair(l, t);
    auto it = prefix_.find(key);
    if (it != prefix_.end()) return it->second;
    int h = engine_.add(s_.rf[l], s_.snapshot[t][l]);
    prefix_[key] = h;
    return h;
  }

  const StageState& s_;
  CertifyConfig cfg_;
  std::mt19937_64 rng_;
  ForestEngine engine_;
  int final_[2];
  std::vector<int> depth_[2];
  std::map<std::pair<int, int>, int> prefix_;
  std::map<std::tuple<int, int, int, Tuple, Tuple>, bool> memo_;
};

}  // namespace

CertifyReport certify_counterexample(const StageState& s, const CertifyConfig& cfg) {
  CertifyReport rep;
  rep.chain_ok = chain_ok(s, &rep.notes);
  rep.wellfounded_ok = wellfounded_ok(s.rf[1], &rep.notes);
  auto cond = check_conditions(s);
  rep.conditions_ok = cond.ok();
  for (auto& v : cond.violations) rep.notes.push_back(v);

  rep.games_ok = true;
  SnapshotGame game(s, cfg);
  std::mt19937_64 rng(cfg.seed ^ 0x5bd1e995u);
  for (int l = 0; l < 2; ++l)
    for (std::size_t i = 0; i < s.family[l].size(); ++i) {
      const Member& m = s.family[l][i];
      if (m.alpha < 0 || m.alpha > cfg.depth) continue;
      int t = m.stage + 1;
      if (t + m.alpha > s.n) {
        ++rep.games_skipped;
        continue;
      }
      auto dom = m.f.domain();
      std::vector<Tuple> tuples{{}};
      std::vector<int> pick = dom;
      std::shuffle(pick.begin(), pick.end(), rng);
      for (int k = 0; k < std::min<int>(cfg.sampled_pairs, pick.size()); ++k) tuples.push_back({pick[k]});
      for (int k = 0; k < cfg.sampled_pairs && dom.size() >= 2; ++k) {
        int x = dom[rng() % dom.size()], y = dom[rng() % dom.size()];
        tuples.push_back({x, y});
      }
      for (const Tuple& a : tuples) {
        Tuple b;
        for (int c : a) b.push_back(m.f.image(c));
        ++rep.games_checked;
        if (!game.play(t, m.alpha, l, a, b)) {
          rep.games_ok = false;
          std::string tup;
          for (int c : a) tup += (tup.empty() ? "" : ",") + std::to_string(c);
          rep.notes.push_back("games: F^" + std::to_string(l) + "[" + std::to_string(i) + "] fails at alpha " +
                              std::to_string(m.alpha) + " on (" + tup + ")");
          break;
        }
      }
    }
  rep.moves_checked = game.moves_checked;
  return rep;
}

Mutation parse_mutation(const std::string& s) {
  if (s.empty() || s == "none") return Mutation::none;
  if (s == "rho") return Mutation::rho;
  if (s == "color") return Mutation::color;
  if (s == "matrix") return Mutation::matrix;
  throw std::invalid_argument("unknown mutation: " + s);
}

void mutate(StageState& s, Mutation kind) {
  RankedFrame& g1 = s.rf[1];
  switch (kind) {
    case Mutation::none:
      return;
    case Mutation::rho:
      for (int c = 0; c < g1.rank(); ++c)
        if (g1.in_x[c] && !g1.rho[c].infinite) {
          g1.rho[c] = SmallOrdinal::infinity();
          return;
        }
      return;
    case Mutation::color:
    case Mutation::matrix:
      for (const Member& m : s.family[0]) {
        if (m.alpha < 0) continue;
        for (int c : m.f.domain()) {
          int v = m.f.map[c];
          if (kind == Mutation::color) {
            if (!s.rf[0].in_x[c]) continue;
            g1.in_x[v] = 0;
          } else if (g1.phi[v] >= 0) {
            g1.phi[v] = -1;
          } else {
            // an earlier root keeps every stage prefix closed under phi
            int root = -1;
            for (int w = 0; w < v && root < 0; ++w)
              if (g1.phi[w] < 0) root = w;
            if (root < 0) continue;
            g1.phi[v] = root;
          }
          return;
        }
      }
      return;
  }
}

namespace {

json frame_json(const RankedFrame& rf) {
  json rho = json::array();
  for (int c = 0; c < rf.rank(); ++c) rho.push_back(rf.in_x[c] ? json(rf.rho[c].str()) : json(nullptr));
  std::vector<int> x(rf.in_x.begin(), rf.in_x.end());
  return json{{"rank", rf.rank()}, {"phi", rf.phi}, {"x", x}, {"rho", rho}};
}

RankedFrame frame_of(const json& j) {
  RankedFrame rf;
  int r = j.at("rank").get<int>();
  auto phi = j.at("phi").get<std::vector<int>>();
  auto x = j.at("x").get<std::vector<int>>();
  const json& rho = j.at("rho");
  if (static_cast<int>(phi.size()) != r || static_cast<int>(x.size()) != r || static_cast<int>(rho.size()) != r)
    throw std::invalid_argument("frame fields disagree with rank");
  for (int c = 0; c < r; ++c) {
    if (phi[c] < -1 || phi[c] >= r) throw std::invalid_argument("phi entry out of range");
    rf.add_coordinate(phi[c], x[c] != 0, x[c] ? SmallOrdinal::parse(rho[c].get<std::string>()) : SmallOrdinal{});
  }
  return rf;
}

}  // namespace

std::string frame_to_json(const RankedFrame& rf) { return frame_json(rf).dump(1) + "\n"; }

RankedFrame frame_from_json(const std::string& text) { return frame_of(json::parse(text)); }

std::string to_checkpoint(const StageState& s) {
  json fam = json::array();
  for (int l = 0; l < 2; ++l) {
    json side = json::array();
    for (const Member& m : s.family[l])
      side.push_back({{"alpha", m.alpha},
                      {"stage", m.stage},
                      {"parent", m.parent},
                      {"inverse_of", m.inverse_of},
                      {"size", m.f.map.size()},
                      {"pairs", pairs_of(m.f)}});
    fam.push_back(side);
  }
  json cov = json::array();
  for (auto& c : s.coverage) cov.push_back({{"extensions", c.extensions}, {"covered", c.covered}, {"possible", c.possible}});
  json j{{"format", "desk-stage/1"},
         {"n", s.n},
         {"alpha_star", s.alpha_star},
         {"frames", {frame_json(s.rf[0]), frame_json(s.rf[1])}},
         {"e", s.e},
         {"families", fam},
         {"snapshots", s.snapshot},
         {"coverage", cov}};
  return j.dump() + "\n";
}

StageState from_checkpoint(const std::string& text) {
  json j = json::parse(text);
  if (j.at("format") != "desk-stage/1") throw std::invalid_argument("not a stage checkpoint");
  StageState s;
  s.n = j.at("n").get<int>();
  s.alpha_star = j.at("alpha_star").get<int>();
  s.rf[0] = frame_of(j.at("frames").at(0));
  s.rf[1] = frame_of(j.at("frames").at(1));
  s.e = j.at("e").get<std::vector<int>>();
  for (int l = 0; l < 2; ++l)
    for (const json& m : j.at("families").at(l)) {
      Member mem;
      mem.alpha = m.at("alpha").get<int>();
      mem.stage = m.at("stage").get<int>();
      mem.parent = m.at("parent").get<int>();
      mem.inverse_of = m.at("inverse_of").get<int>();
      mem.f.alpha = mem.alpha;
      mem.f.map.assign(m.at("size").get<std::size_t>(), -1);
      for (auto& p : m.at("pairs")) {
        auto c = p.at(0).get<std::size_t>();
        if (c >= mem.f.map.size()) throw std::invalid_argument("pair outside map");
        mem.f.map[c] = p.at(1).get<int>();
      }
      s.family[l].push_back(std::move(mem));
    }
  s.snapshot = j.at("snapshots").get<std::vector<std::array<int, 2>>>();
  for (auto& c : j.at("coverage"))
    s.coverage.push_back({c.at("extensions").get<long long>(), c.at("covered").get<long long>(),
                          c.at("possible").get<long long>()});
  if (static_cast<int>(s.snapshot.size()) != s.n + 1) throw std::invalid_argument("snapshot count disagrees with n");
  return s;
}

}  // namespace desk
