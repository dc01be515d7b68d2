#include "desk/cli/suite.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>
#include <random>
#include <set>
#include <sstream>

#include "desk/abelian/embed_search.hpp"
#include "desk/abelian/reductions.hpp"
#include "desk/padic/coding.hpp"
#include "desk/sbgames/games.hpp"
#include "desk/treecode/tensor.hpp"
#include "desk/trees/hfset.hpp"

namespace desk {

namespace {

// All vectors in [-c, c]^r, last coordinate fastest.
std::vector<Vec> box(int r, Int c) {
  std::vector<Vec> out;
  Vec v = Vec::Constant(r, -c);
  while (true) {
    out.push_back(v);
    int i = r - 1;
    while (i >= 0 && v[i] == c) v[i--] = -c;
    if (i < 0) break;
    ++v[i];
  }
  return out;
}

// --- 1 ---------------------------------------------------------------------

Check ac1(const RunConfig&) {
  Check c{criterion_id(1), verdict::pass};
  int groups = 0;
  json failures = json::array();
  for (Int m = 1; m <= 64; ++m)
    for (const auto& g : groups_of_order(m)) {
      ++groups;
      FrameStructure f = augmentation_reduction(g);
      QuotientInvariants q = quotient_invariants(f.subgroups.at("K").lattice());
      if (q.free_rank != 0 || q.torsion != g.invariant_factors)
        failures.push_back(json{{"group", g.invariant_factors}, {"quotient", q.torsion}, {"free_rank", q.free_rank}});
    }
  c.detail = {{"groups", groups}, {"failures", failures}};
  if (!failures.empty()) c.verdict = verdict::fail;
  return c;
}

// --- 2 ---------------------------------------------------------------------

struct Partition {
  std::vector<int> cls;
  int signatures = 0, classes = 0, found = 0, bounded = 0, bad_witnesses = 0;
};

// Classes by iso_invariants, merged inside a signature when the bounded search
// finds an isomorphism to a class representative.
Partition iso_partition(const std::vector<FrameStructure>& fs, Int bound) {
  Partition p;
  p.cls.assign(fs.size(), -1);
  std::map<std::string, std::vector<int>> sig;
  for (size_t i = 0; i < fs.size(); ++i) sig[iso_invariants(fs[i])].push_back(static_cast<int>(i));
  p.signatures = static_cast<int>(sig.size());
  for (const auto& [key, members] : sig) {
    std::vector<int> reps;
    for (int i : members) {
      for (int r : reps) {
        EmbedSearchResult res = frame_embed_search(fs[r], fs[i], bound, true);
        if (res.found()) {
          if (!verify_embedding(fs[r], fs[i], res.witness->matrix, true)) ++p.bad_witnesses;
          ++p.found;
          p.cls[i] = p.cls[r];
          break;
        }
        ++p.bounded;
      }
      if (p.cls[i] < 0) {
        p.cls[i] = p.classes++;
        reps.push_back(i);
      }
    }
  }
  return p;
}

json compare_partitions(const std::string& name, const std::vector<FrameStructure>& in,
                        const std::vector<FrameStructure>& out, Int bound, bool& ok) {
  Partition a = iso_partition(in, bound), b = iso_partition(out, bound);
  // Preservation: equal source classes stay equal. Reflection: the converse.
  std::map<int, int> first_a, first_b;
  int preservation = 0, reflection = 0;
  for (size_t i = 0; i < in.size(); ++i) {
    auto [ia, na] = first_a.emplace(a.cls[i], static_cast<int>(i));
    auto [ib, nb] = first_b.emplace(b.cls[i], static_cast<int>(i));
    if (!na && b.cls[ia->second] != b.cls[i]) ++preservation;
    if (!nb && a.cls[ib->second] != a.cls[i]) ++reflection;
  }
  bool good = preservation == 0 && reflection == 0 && a.bad_witnesses == 0 && b.bad_witnesses == 0;
  ok = ok && good;
  return json{{"reduction", name},
              {"frames", in.size()},
              {"source_classes", a.classes},
              {"coded_classes", b.classes},
              {"source_signatures", a.signatures},
              {"coded_signatures", b.signatures},
              {"witnesses", a.found + b.found},
              {"bounded_negatives", {{"bound", bound}, {"source", a.bounded}, {"coded", b.bounded}}},
              {"preservation_failures", preservation},
              {"reflection_failures", reflection},
              {"bad_witnesses", a.bad_witnesses + b.bad_witnesses}};
}

Check ac2(const RunConfig&) {
  Check c{criterion_id(2), verdict::pass};
  const Int bound = 4;
  std::vector<FrameStructure> fns, fns_coded, subs, subs_coded;
  std::set<std::string> lattices;
  for (const Vec& e : box(4, 2)) {
    Mat m(2, 2);
    m << e[0], e[1], e[2], e[3];
    FrameStructure f = make_frame(2);
    add_function(f, "phi", m);
    fns.push_back(f);
    fns_coded.push_back(eliminate_functions(f));
    // The same entries read as generator rows of a subgroup.
    Lattice l = hnf(m);
    if (!lattices.insert(to_string(l)).second) continue;
    FrameStructure g = make_frame(2);
    add_subgroup(g, "H", l);
    subs.push_back(g);
    subs_coded.push_back(graph_trick(g));
  }
  bool ok = true;
  json parts = json::array();
  parts.push_back(compare_partitions("eliminate_functions", fns, fns_coded, bound, ok));
  parts.push_back(compare_partitions("graph_trick", subs, subs_coded, bound, ok));
  c.detail = {{"reductions", parts}};
  if (!ok) c.verdict = verdict::fail;
  return c;
}

// --- 3 ---------------------------------------------------------------------

std::vector<Vec> normalized_entries(int r, Int c) {
  std::vector<Vec> out;
  for (const Vec& b : box(r, c)) {
    bool odd = false;
    for (int i = 0; i < r; ++i) odd = odd || (b[i] % 2 != 0);
    if (odd) out.push_back(b);
  }
  return out;
}

// Lattices of Z^r with HNF entries in [0, c], 2-pure.
std::vector<Lattice> pure_lattices(int r, Int c) {
  std::vector<Lattice> out;
  std::set<std::string> seen;
  for (int k = 0; k <= r; ++k) {
    std::vector<Int> e(static_cast<size_t>(k * r), 0);
    while (true) {
      std::vector<Vec> rows;
      for (int i = 0; i < k; ++i) {
        Vec v(r);
        for (int j = 0; j < r; ++j) v[j] = e[static_cast<size_t>(i * r + j)];
        rows.push_back(v);
      }
      Lattice l = hnf(rows, r);
      bool small = l.rank() == k && (l.basis.size() == 0 || (l.basis.minCoeff() >= 0 && l.basis.maxCoeff() <= c));
      if (small && seen.insert(to_string(l)).second && p_purify(l, 2) == l) out.push_back(l);
      size_t i = 0;
      while (i < e.size() && e[i] == c) e[i++] = 0;
      if (i == e.size()) break;
      ++e[i];
    }
  }
  return out;
}

Check ac3(const RunConfig& cfg) {
  Check c{criterion_id(3), verdict::pass};
  TagFamily tags = gen_tags(2, 64, 3, 2, 3, cfg.seed);
  bool ok = tags.certificate.verified;

  // (a) distinct normalized sums have distinct values p^2 * sum.
  json uniq = json::array();
  for (int r = 1; r <= 2; ++r) {
    CodedGroup cg = coded_group(r, {full_lattice(r)}, tags);
    std::vector<std::optional<std::pair<int, Vec>>> options{std::nullopt};
    for (int k = -2; k <= 2; ++k)
      for (const Vec& b : normalized_entries(r, 3)) options.push_back(std::make_pair(k, b));
    std::vector<std::pair<std::uint64_t, std::uint64_t>> keys;
    keys.reserve(options.size() * options.size() * options.size());
    for (const auto& o0 : options)
      for (const auto& o1 : options)
        for (const auto& o2 : options) {
          FormalSum s;
          int n = 0;
          for (const auto* o : {&o0, &o1, &o2}) {
            if (*o) s.terms.push_back(Term{n, (*o)->first, (*o)->second});
            ++n;
          }
          auto v = scaled_values(cg, s, 2);
          keys.emplace_back(v[0].residue(), r > 1 ? v[1].residue() : 0);
        }
    std::sort(keys.begin(), keys.end());
    long long collisions = 0;
    for (size_t i = 1; i < keys.size(); ++i) collisions += keys[i] == keys[i - 1];
    ok = ok && collisions == 0;
    uniq.push_back(json{{"rank", r}, {"sums", keys.size()}, {"collisions", collisions}});
  }

  // (b) recover_subgroup against membership.
  json rec = json::array();
  for (int r = 1; r <= 3; ++r) {
    long long vectors = 0, members = 0, disagreements = 0;
    auto ls = pure_lattices(r, 3);
    auto vs = box(r, 4);
    for (const Lattice& l : ls) {
      CodedGroup cg = coded_group(r, {l}, tags);
      for (const Vec& v : vs) {
        bool truth = member(l, v);
        members += truth;
        disagreements += recover_subgroup(cg, 2, embed_vector(cg, v)) != truth;
        ++vectors;
      }
    }
    ok = ok && disagreements == 0;
    rec.push_back(json{{"rank", r}, {"lattices", ls.size()}, {"vectors", vectors}, {"members", members},
                       {"disagreements", disagreements}});
  }
  c.detail = {{"tags", to_json(tags)}, {"uniqueness", uniq}, {"recovery", rec}};
  if (!ok) c.verdict = verdict::fail;
  return c;
}

// --- 4 ---------------------------------------------------------------------

Check ac4(const RunConfig&) {
  Check c{criterion_id(4), verdict::pass};
  long long trees = 0, elements = 0, claim1 = 0, claim2 = 0, good = 0;
  for (const auto& t : enumerate_trees(6, 2)) {
    ++trees;
    TensorStructure ts = tensor_z(t);
    for (int n = 0; n <= t.tree_height(); ++n)
      for (const auto& h : ts.histories_at_height(n)) {
        auto els = graded_elements(ts, h, 3, 2);
        auto oracle = goodness_oracle(ts, h, 3, 2);
        for (size_t i = 0; i < els.size(); ++i) {
          ++elements;
          claim1 += !claim1_check(ts, els[i]).ok();
          bool g = is_good(ts, els[i]);
          good += g;
          claim2 += g != oracle[i];
        }
      }
  }
  c.detail = {{"trees", trees}, {"elements", elements}, {"good", good}, {"claim1_failures", claim1},
              {"claim2_failures", claim2}};
  if (claim1 || claim2) c.verdict = verdict::fail;
  return c;
}

// --- 5 ---------------------------------------------------------------------

// Isomorphic copy with children visited in random order, so numbering changes.
ColoredTree shuffled_copy(const ColoredTree& t, std::mt19937_64& rng) {
  ColoredTree s(t.color[0]);
  std::deque<std::pair<int, int>> q{{0, 0}};
  while (!q.empty()) {
    auto [u, v] = q.front();
    q.pop_front();
    auto kids = t.children[u];
    std::shuffle(kids.begin(), kids.end(), rng);
    for (int k : kids) q.emplace_back(k, s.add_child(v, t.color[k]));
  }
  return s;
}

bool recovery_differs(const ColoredTree& a, const ColoredTree& b, int* height = nullptr) {
  TensorStructure ta = tensor_z(a), tb = tensor_z(b);
  int top = std::max(a.tree_height(), b.tree_height());
  for (int n = 0; n <= top; ++n)
    if (recover_invariants(ta, n) != recover_invariants(tb, n)) {
      if (height) *height = n;
      return true;
    }
  return false;
}

Check ac5(const RunConfig& cfg) {
  Check c{criterion_id(5), verdict::pass};
  std::mt19937_64 rng(cfg.seed);
  int iso_bad = 0, sep_bad = 0, draws = 0;
  json examples = json::array();
  for (int i = 0; i < 100; ++i) {
    ColoredTree t = random_tree(rng, 1 + static_cast<int>(rng() % 8), 2);
    ColoredTree s = shuffled_copy(t, rng);
    if (!(canonical(t) == canonical(s)) || recovery_differs(t, s)) ++iso_bad;
  }
  // Half the pairs are biembeddable as wholes (equal at height 0) and differ
  // only further up: s is t with one extra leaf.
  int hard = 0;
  for (int i = 0; i < 100;) {
    ColoredTree t = random_tree(rng, 1 + static_cast<int>(rng() % (i < 50 ? 8 : 7)), 2);
    ColoredTree s = i < 50 ? random_tree(rng, 1 + static_cast<int>(rng() % 8), 2) : t;
    if (i >= 50) s.add_child(static_cast<int>(rng() % t.size()), static_cast<int>(rng() % 2));
    ++draws;
    if (draws > 1000000) throw std::runtime_error("pair generator stalled");
    if (i >= 50 && !biembeddable(t, s)) continue;
    bool differ = false;
    for (int n = 0; n <= std::max(t.tree_height(), s.tree_height()) && !differ; ++n)
      differ = subtree_classes(t, n) != subtree_classes(s, n);
    if (!differ) continue;
    ++i;
    hard += biembeddable(t, s);
    int h = -1;
    if (!recovery_differs(t, s, &h)) {
      ++sep_bad;
      if (examples.size() < 3) examples.push_back({to_term(t), to_term(s)});
    }
  }
  c.detail = {{"isomorphic_pairs", 100}, {"isomorphic_failures", iso_bad}, {"separated_pairs", 100},
              {"separation_failures", sep_bad}, {"biembeddable_separated_pairs", hard}, {"draws", draws}, {"counterexamples", examples}};
  if (iso_bad || sep_bad) c.verdict = verdict::fail;
  return c;
}

// --- 6 and 7 ---------------------------------------------------------------

Check ac6(const RunConfig&) {
  Check c{criterion_id(6), verdict::pass};
  auto anti = silver_antichain(6, 4, parity_coloring);
  int embeddings = 0;
  json sizes = json::array();
  for (const auto& t : anti) sizes.push_back(t.size());
  for (size_t i = 0; i < anti.size(); ++i)
    for (size_t j = 0; j < anti.size(); ++j)
      if (i != j && embed_search(anti[i], anti[j])) ++embeddings;
  c.detail = {{"trees", anti.size()}, {"sizes", sizes}, {"unordered_pairs", anti.size() * (anti.size() - 1) / 2},
              {"directed_searches", anti.size() * (anti.size() - 1)}, {"embeddings_found", embeddings}};
  if (embeddings) c.verdict = verdict::fail;
  return c;
}

Check ac7(const RunConfig&) {
  Check c{criterion_id(7), verdict::pass};
  auto anti = silver_antichain(6, 4, parity_coloring);
  bool anti_ok = antichain_violations(anti) == 0;
  HFSet e, o1 = ordinal(1), o2 = ordinal(2), s1 = singleton(o1);
  std::vector<HFSet> sample{e, o1, o2, s1, ordinal(3), singleton(s1), HFSet({e, s1}), HFSet({o1, s1}),
                            singleton(o2), HFSet({e, o2})};
  json sets = json::array();
  bool sample_ok = true;
  std::vector<ColoredTree> trees;
  for (size_t i = 0; i < sample.size(); ++i) {
    sets.push_back(sample[i].str());
    sample_ok = sample_ok && sample[i].rank() <= 3;
    for (size_t j = 0; j < i; ++j) sample_ok = sample_ok && !(sample[i] == sample[j]);
    trees.push_back(tree_of_set(sample[i], anti));
  }
  int pairs = 0, biembeddable_pairs = 0;
  for (size_t i = 0; i < trees.size(); ++i)
    for (size_t j = i + 1; j < trees.size(); ++j) {
      ++pairs;
      biembeddable_pairs += biembeddable(trees[i], trees[j]);
    }
  c.detail = {{"antichain_verified", anti_ok}, {"sets", sets}, {"pairs", pairs},
              {"biembeddable_pairs", biembeddable_pairs}};
  if (!anti_ok || !sample_ok || biembeddable_pairs) c.verdict = verdict::fail;
  return c;
}

// --- 8, 9, 10 --------------------------------------------------------------

struct ConstructionRun {
  StageState state;
  CertifyReport report;
  std::string checkpoint;
  std::string certificate;
};

ConstructionRun construction_run(const RunConfig& cfg, Mutation m) {
  ConstructionRun run;
  run.state = construct(1, 3, stage_budget(cfg));
  if (m != Mutation::none) mutate(run.state, m);
  run.report = certify_counterexample(run.state, certify_config(cfg));
  run.checkpoint = to_checkpoint(run.state);
  run.certificate = certificate_json(run.state, run.report).dump();
  return run;
}

Check ac8(const RunConfig& cfg) {
  Check c{criterion_id(8), verdict::pass};
  ConstructionRun run = construction_run(cfg, parse_mutation(cfg.mutate));
  json faults = json::object();
  bool faults_caught = true;
  for (const char* name : {"rho", "color", "matrix"}) {
    ConstructionRun bad = construction_run(cfg, parse_mutation(name));
    faults[name] = bad.report.ok() ? "certified" : "rejected";
    faults_caught = faults_caught && !bad.report.ok();
  }
  c.detail = {{"certificate", json::parse(run.certificate)},
              {"checkpoint_fingerprint", fingerprint(run.checkpoint)},
              {"mutation_runs", faults}};
  if (!run.report.ok() || !faults_caught) c.verdict = verdict::fail;
  return c;
}

Check ac9(const RunConfig&) {
  Check c{criterion_id(9), verdict::pass};
  std::vector<std::pair<ColoredTree, ColoredTree>> lib;
  auto small = enumerate_trees(3, 2);
  for (int i = 0; i < 10; ++i) lib.push_back({small[i], glue_at_root({small[i], small[i]})});
  std::mt19937_64 rng(41);
  auto four = enumerate_trees(4, 2);
  while (lib.size() < 20) {
    auto& a = four[rng() % four.size()];
    auto& b = four[rng() % four.size()];
    if (a.color[0] == b.color[0]) lib.push_back({a, b});
  }
  int disagreements = 0, non_monotone = 0, asymmetric = 0, separated = 0;
  json table = json::array();
  for (auto& [a, b] : lib) {
    bool prev = true;
    std::string row;
    for (int alpha = 0; alpha <= 3; ++alpha) {
      bool fast = sim_alpha(a, {}, b, {}, alpha);
      disagreements += fast != naive_sim_alpha(a, {}, b, {}, alpha);
      asymmetric += fast != sim_alpha(b, {}, a, {}, alpha);
      non_monotone += fast && !prev;
      if (prev && !fast && alpha > 0) ++separated;
      prev = fast;
      row += fast ? '1' : '0';
    }
    table.push_back(json{to_term(a), to_term(b), row});
  }
  c.detail = {{"pairs", lib.size()}, {"max_alpha", 3}, {"oracle_disagreements", disagreements},
              {"non_monotone", non_monotone}, {"asymmetric", asymmetric},
              {"separated_above_zero", separated}, {"table", table}};
  if (disagreements || non_monotone || asymmetric) c.verdict = verdict::fail;
  return c;
}

Check ac10(const RunConfig& cfg) {
  Check c{criterion_id(10), verdict::pass};
  Mutation m = parse_mutation(cfg.mutate);
  ConstructionRun a = construction_run(cfg, m), b = construction_run(cfg, m);
  bool same_checkpoint = a.checkpoint == b.checkpoint;
  bool same_certificate = a.certificate == b.certificate;
  bool round_trip = to_checkpoint(from_checkpoint(a.checkpoint)) == a.checkpoint;
  c.detail = {{"checkpoint_bytes", a.checkpoint.size()}, {"checkpoint_fingerprint", fingerprint(a.checkpoint)},
              {"identical_checkpoints", same_checkpoint}, {"identical_certificates", same_certificate},
              {"checkpoint_round_trip", round_trip}};
  if (!same_checkpoint || !same_certificate || !round_trip) c.verdict = verdict::fail;
  return c;
}

}  // namespace

std::string criterion_id(int k) { return k < 10 ? "ac0" + std::to_string(k) : "ac" + std::to_string(k); }

std::string criterion_title(int k) {
  static const char* titles[] = {"",
                                 "augmentation round trips, groups of order <= 64",
                                 "eliminate_functions and graph_trick preserve and reflect isomorphism on Z^2",
                                 "Hjorth coding: uniqueness and subgroup recovery",
                                 "Claims 1 and 2 on trees with <= 6 nodes",
                                 "recovery invariance on seeded tree pairs",
                                 "silver_antichain(6, 4, parity) is an antichain",
                                 "tree_of_set separates 10 sets of rank <= 3",
                                 "alpha* = 1 construction, 3 stages, certified; mutations rejected",
                                 "sim_alpha against the naive game oracle",
                                 "construction runs are byte-identical"};
  return k >= 1 && k <= kCriteria ? titles[k] : "";
}

Check run_criterion(int k, const RunConfig& cfg) {
  using Fn = Check (*)(const RunConfig&);
  static const Fn fns[] = {nullptr, ac1, ac2, ac3, ac4, ac5, ac6, ac7, ac8, ac9, ac10};
  if (k < 1 || k > kCriteria) throw std::invalid_argument("no criterion " + std::to_string(k));
  auto t0 = std::chrono::steady_clock::now();
  Check c;
  try {
    c = fns[k](cfg);
  } catch (const std::exception& e) {
    c = Check{criterion_id(k), verdict::error, json{{"exception", e.what()}}};
  }
  c.detail["title"] = criterion_title(k);
  c.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return c;
}

std::vector<int> parse_suite(const std::string& s) {
  std::vector<int> ids;
  if (s == "none") return ids;
  if (s == "all") {
    for (int k = 1; k <= kCriteria; ++k) ids.push_back(k);
    return ids;
  }
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ',')) {
    size_t used = 0;
    int k = -1;
    try {
      k = std::stoi(part, &used);
    } catch (const std::exception&) {
    }
    if (used != part.size() || k < 1 || k > kCriteria) throw std::invalid_argument("bad suite entry: " + part);
    if (std::find(ids.begin(), ids.end(), k) == ids.end()) ids.push_back(k);
  }
  std::sort(ids.begin(), ids.end());
  return ids;
}

std::vector<Check> run_suite(const std::vector<int>& ids, const RunConfig& cfg) {
  std::vector<Check> out;
  for (int k : ids) out.push_back(run_criterion(k, cfg));
  return out;
}

json certificate_json(const StageState& s, const CertifyReport& r) {
  json members = json::array(), ranks = json::array(), coverage = json::array();
  for (int l = 0; l < 2; ++l) {
    members.push_back(s.family[l].size());
    ranks.push_back(s.rf[l].rank());
  }
  for (const auto& cv : s.coverage)
    coverage.push_back(json{{"extensions", cv.extensions}, {"covered", cv.covered}, {"possible", cv.possible}});
  return json{{"alpha_star", s.alpha_star},
              {"stages", s.n},
              {"ranks", ranks},
              {"members", members},
              {"coverage", coverage},
              {"chain_in_x", r.chain_ok},
              {"x1_wellfounded_rho_bounds_rank", r.wellfounded_ok},
              {"games_hold", r.games_ok},
              {"stage_conditions", r.conditions_ok},
              {"games_checked", r.games_checked},
              {"games_skipped", r.games_skipped},
              {"moves_checked", r.moves_checked},
              {"notes", r.notes},
              {"ok", r.ok()}};
}

CertifyConfig certify_config(const RunConfig& cfg) {
  CertifyConfig c;
  c.depth = cfg.depth;
  c.seed = cfg.seed;
  return c;
}

StageBudget stage_budget(const RunConfig& cfg) { return StageBudget{cfg.max_rank, cfg.max_members}; }

}  // namespace desk
