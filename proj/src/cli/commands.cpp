#include "desk/cli/commands.hpp"

#include <chrono>
#include <functional>
#include <optional>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "desk/cli/suite.hpp"
#include "desk/padic/coding.hpp"
#include "desk/sbgames/construction.hpp"
#include "desk/sbgames/games.hpp"
#include "desk/treecode/tensor.hpp"
#include "desk/trees/hfset.hpp"

namespace desk {

namespace {

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

Coloring coloring_named(const std::string& name) {
  if (name == "parity") return parity_coloring;
  if (name == "zero") return [](const std::vector<int>&) { return 0; };
  throw std::invalid_argument("unknown coloring " + name + " (parity, zero)");
}

std::string pair_id(const char* prefix, size_t i, size_t j) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%s:%02zu,%02zu", prefix, i, j);
  return buf;
}

Check embed_check(const std::string& id, const ColoredTree& t, const ColoredTree& s) {
  std::optional<TreeEmbedding> f;
  if (t == s) {
    TreeEmbedding id_map;
    for (int u = 0; u < t.size(); ++u) id_map.map.push_back(u);
    f = id_map;
  } else {
    f = embed_search(t, s);
  }
  if (!f) return Check{id, verdict::no, json{{"complete_search", true}}};
  bool again = verify_tree_embedding(t, s, *f);
  return Check{id, again ? verdict::yes : verdict::fail, json{{"witness", to_json(*f)}, {"reverified", again}}};
}

Tuple parse_tuple(const std::string& s) {
  Tuple t;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ','))
    if (!part.empty()) t.push_back(std::stoi(part));
  return t;
}

bool looks_like_json(const std::string& text) {
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) return ch == '{';
  return false;
}

// --- trees -----------------------------------------------------------------

struct TreesArgs {
  std::vector<std::string> files;
  int kappa = 6, depth = 4;
  std::string coloring = "parity";
  std::string set;
  std::string tree_out;
};

void trees_embed(const TreesArgs& a, Report& r) {
  r.add(embed_check("embed", read_tree(a.files[0]), read_tree(a.files[1])));
}

void trees_product(const TreesArgs& a, Report& r) {
  std::vector<ColoredTree> ts;
  for (const auto& f : a.files) ts.push_back(read_tree(f));
  ProductResult pr;
  try {
    pr = product(ts, r.config.node_cap);
  } catch (const NodeBudgetExceeded& e) {
    r.add(Check{"product", verdict::error, json{{"node_cap", r.config.node_cap}, {"message", e.what()}}});
    return;
  }
  if (pr.empty) {
    r.add(Check{"product", verdict::pass, json{{"empty", true}}});
    return;
  }
  std::string term = to_term(pr.tree);
  if (!a.tree_out.empty()) write_file(a.tree_out, term + "\n");
  r.add(Check{"product", verdict::pass, json{{"nodes", pr.tree.size()}, {"term", term}}});
  for (size_t k = 0; k < ts.size(); ++k) {
    TreeEmbedding p = pr.projection(static_cast<int>(k));
    bool ok = verify_tree_embedding(pr.tree, ts[k], p);
    r.add(Check{"projection:" + std::to_string(k), ok ? verdict::yes : verdict::fail,
                json{{"witness", to_json(p)}, {"reverified", ok}}});
  }
}

void trees_antichain(const TreesArgs& a, Report& r) {
  auto anti = silver_antichain(a.kappa, a.depth, coloring_named(a.coloring));
  json terms = json::array();
  for (const auto& t : anti) terms.push_back(to_term(t));
  int found = 0;
  for (size_t i = 0; i < anti.size(); ++i)
    for (size_t j = 0; j < anti.size(); ++j) {
      if (i == j) continue;
      Check c = embed_check(pair_id("embed", i, j), anti[i], anti[j]);
      found += c.verdict == verdict::yes;
      r.add(c);
    }
  r.add(Check{"antichain", found ? verdict::fail : verdict::pass,
              json{{"kappa", a.kappa}, {"depth", a.depth}, {"coloring", a.coloring}, {"embeddings", found},
                   {"trees", terms}}});
}

void trees_set_tree(const TreesArgs& a, Report& r) {
  HFSet s = parse_hfset(a.set);
  auto anti = silver_antichain(a.kappa, a.depth, coloring_named(a.coloring));
  int bad = antichain_violations(anti);
  r.add(Check{"antichain", bad ? verdict::fail : verdict::pass,
              json{{"kappa", a.kappa}, {"depth", a.depth}, {"violations", bad}}});
  if (bad) return;
  ColoredTree t = tree_of_set(s, anti);
  std::string term = to_term(t);
  if (!a.tree_out.empty()) write_file(a.tree_out, term + "\n");
  r.add(Check{"set-tree", verdict::pass,
              json{{"set", s.str()}, {"rank", s.rank()}, {"nodes", t.size()}, {"term", term}}});
}

// --- code ------------------------------------------------------------------

struct CodeArgs {
  std::vector<std::string> files;
  bool verify_claims = false;
  int kappa = 6, depth = 4, multiplicity = 1;
};

void code_tensor(const CodeArgs& a, Report& r) {
  ColoredTree t = read_tree(a.files[0]);
  TensorStructure ts = tensor_z(t);
  json graded = json::array();
  for (const auto& [h, l] : ts.graded) graded.push_back(json{{"history", h}, {"rank", l.rank()}});
  r.add(Check{"tensor", verdict::pass, json{{"rank", ts.rank()}, {"graded", graded}}});
  if (!a.verify_claims) return;
  const int s = r.config.support;
  const Int c = r.config.bound;
  long long elements = 0;
  std::vector<std::string> bad1, bad2;
  for (int n = 0; n <= t.tree_height(); ++n)
    for (const auto& h : ts.histories_at_height(n)) {
      auto els = graded_elements(ts, h, s, c);
      auto oracle = goodness_oracle(ts, h, s, c);
      for (size_t i = 0; i < els.size(); ++i) {
        ++elements;
        if (!claim1_check(ts, els[i]).ok()) bad1.push_back(to_string(els[i].a));
        if (is_good(ts, els[i]) != oracle[i]) bad2.push_back(to_string(els[i].a));
      }
    }
  auto report = [&](const char* id, const std::vector<std::string>& bad) {
    std::vector<std::string> shown(bad.begin(), bad.begin() + std::min<size_t>(bad.size(), 5));
    r.add(Check{id, bad.empty() ? verdict::pass : verdict::fail,
                json{{"elements", elements}, {"support", s}, {"coefficients", c}, {"failures", bad.size()},
                     {"counterexamples", shown}}});
  };
  report("claim1", bad1);
  report("claim2", bad2);
}

void code_hjorth(const CodeArgs& a, Report& r) {
  FrameStructure f = read_frame(a.files[0]);
  if (!f.functions.empty()) throw std::invalid_argument("hjorth coding takes frames without functions");
  std::vector<std::string> names;
  for (const auto& [k, s] : f.subgroups) {
    if (!s.is_explicit()) throw std::invalid_argument("subgroup " + k + " is not explicit");
    names.push_back(k);
  }
  if (f.rank == 0) {
    r.add(Check{"recovery", verdict::pass, json{{"trivial", true}, {"vectors", 0}}});
    return;
  }
  const RunConfig& cfg = r.config;
  TagFamily tags = gen_tags(cfg.p, cfg.precision, static_cast<int>(names.size()) + 2, 2, 3, cfg.seed);
  r.add(Check{"tags", tags.certificate.verified ? verdict::pass : verdict::fail, to_json(tags)});
  CodedGroup c = coded_group(f, tags);
  double cells = 1;
  for (int i = 0; i < f.rank; ++i) cells *= static_cast<double>(2 * cfg.bound + 1);
  if (cells > cfg.node_cap) throw std::invalid_argument("vector box exceeds the node cap");
  auto vs = box(f.rank, cfg.bound);
  // Tag 0 is 1 itself; recovery is asked from tag 1 on.
  for (size_t m = 1; m < c.G.size(); ++m) {
    std::string name = m < 2 ? "full" : names[m - 2];
    long long members = 0;
    std::optional<Vec> counter;
    for (const Vec& v : vs) {
      bool truth = member(c.G[m], v);
      members += truth;
      if (recover_subgroup(c, static_cast<int>(m), embed_vector(c, v)) != truth && !counter) counter = v;
    }
    json d{{"subgroup", name}, {"tag", m}, {"vectors", vs.size()}, {"members", members}, {"bound", cfg.bound}};
    if (counter) d["counterexample"] = to_json(*counter);
    r.add(Check{"recover:" + std::to_string(m), counter ? verdict::fail : verdict::pass, d});
  }
}

void code_seq(const CodeArgs& a, Report& r) {
  FrameStructure f0 = read_frame(a.files[0]), f1 = read_frame(a.files[1]);
  auto anti = silver_antichain(a.kappa, a.depth, parity_coloring);
  auto [c0, c1] = code_seq_finite(f0, f1, anti, a.multiplicity);
  r.add(Check{"composite", verdict::pass, json{{"first", to_json(c0)}, {"second", to_json(c1)}}});
}

// --- sb --------------------------------------------------------------------

struct SbArgs {
  std::vector<std::string> files;
  std::string checkpoint, resume;
  int alpha = 1;
  std::string left, right;
};

void add_certificate(const StageState& s, Report& r) {
  CertifyReport cr = certify_counterexample(s, certify_config(r.config));
  r.add(Check{"certify", cr.ok() ? verdict::pass : verdict::fail, certificate_json(s, cr)});
}

void sb_construct(const SbArgs& a, Report& r) {
  const RunConfig& cfg = r.config;
  StageState s;
  try {
    if (!a.resume.empty()) {
      s = from_checkpoint(read_file(a.resume));
      if (s.n > cfg.stages) throw std::invalid_argument("checkpoint is past the requested stage count");
      while (s.n < cfg.stages) s = stage_step(s, stage_budget(cfg));
    } else {
      s = construct(cfg.alpha_star, cfg.stages, stage_budget(cfg));
    }
  } catch (const BudgetExhausted& e) {
    r.add(Check{"construct", verdict::fail,
                json{{"budget", {{"max_rank", cfg.max_rank}, {"max_members", cfg.max_members}}},
                     {"message", e.what()}}});
    return;
  }
  mutate(s, parse_mutation(cfg.mutate));
  std::string ckpt = to_checkpoint(s);
  if (!a.checkpoint.empty()) write_file(a.checkpoint, ckpt);
  r.add(Check{"construct", verdict::pass,
              json{{"stages", s.n},
                   {"alpha_star", s.alpha_star},
                   {"ranks", {s.rf[0].rank(), s.rf[1].rank()}},
                   {"members", {s.family[0].size(), s.family[1].size()}},
                   {"checkpoint_fingerprint", fingerprint(ckpt)}}});
  // The stage-0 member and its inverse survive every stage.
  bool initial = !s.family[0].empty() && !s.family[1].empty() && s.family[0][0].alpha == s.alpha_star &&
                 s.family[0][0].f.map.empty() && s.family[0][0].stage == 0 && s.family[1][0].inverse_of == 0 &&
                 s.family[1][0].alpha == s.alpha_star && s.family[1][0].f.map.empty();
  r.add(Check{"initial-member", initial ? verdict::pass : verdict::fail,
              json{{"alpha", s.alpha_star}, {"map", "empty"}, {"stage", 0}}});
  add_certificate(s, r);
}

void sb_certify(const SbArgs& a, Report& r) {
  StageState s = from_checkpoint(read_file(a.files[0]));
  mutate(s, parse_mutation(r.config.mutate));
  add_certificate(s, r);
}

void sb_sim(const SbArgs& a, Report& r) {
  std::string tm = read_file(a.files[0]), tn = read_file(a.files[1]);
  Tuple x = parse_tuple(a.left), y = parse_tuple(a.right);
  if (x.size() != y.size()) throw std::invalid_argument("tuples differ in length");
  json d{{"alpha", a.alpha}, {"left", x}, {"right", y}};
  bool v;
  if (looks_like_json(tm) && looks_like_json(tn)) {
    RankedFrame m = frame_from_json(tm), n = frame_from_json(tn);
    std::vector<GameStep> steps;
    v = sim_alpha(m, x, n, y, a.alpha, &steps);
    json tr = json::array();
    for (const auto& st : steps)
      tr.push_back(json{{"depth", st.depth}, {"side", st.in_first ? "first" : "second"}, {"move", st.move},
                        {"response", st.response}});
    d["structures"] = "ranked frames";
    d["transcript"] = tr;
  } else if (!looks_like_json(tm) && !looks_like_json(tn)) {
    ColoredTree m = parse_term(tm), n = parse_term(tn);
    v = sim_alpha(m, x, n, y, a.alpha);
    d["structures"] = "trees";
    if (m.size() <= 6 && n.size() <= 6) {
      bool naive = naive_sim_alpha(m, x, n, y, a.alpha);
      d["naive_oracle"] = naive;
      if (naive != v) {
        r.add(Check{"sim-alpha", verdict::fail, d});
        return;
      }
    }
  } else {
    throw std::invalid_argument("sim-alpha compares two trees or two ranked frames");
  }
  r.add(Check{"sim-alpha", v ? verdict::yes : verdict::no, d});
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"desk: structures, codings and games at desk scale", "desk"};
  app.require_subcommand(1);

  std::string config_path;
  std::optional<std::uint64_t> seed, p;
  std::optional<Int> bound, search_bound;
  std::optional<int> node_cap, precision, stages, alpha_star, max_rank, max_members, depth, support;
  std::optional<std::string> format, output, mutate_name;
  bool timing = false;

  // Run options are accepted on every subcommand.
  auto run_options = [&](CLI::App* a) {
    a->add_option("--config", config_path, "JSON config file (default: $DESK_CONFIG)");
    a->add_option("--seed", seed, "seed");
    a->add_option("--bound", bound, "coefficient bound");
    a->add_option("--search-bound", search_bound, "entry bound for frame searches");
    a->add_option("--support", support, "support bound for graded elements");
    a->add_option("--precision", precision, "p-adic precision K");
    a->add_option("--node-cap", node_cap, "node budget");
    a->add_option("--stages", stages, "construction stages");
    a->add_option("--alpha-star", alpha_star, "alpha* of the construction");
    a->add_option("--max-rank", max_rank, "rank cap per stage frame");
    a->add_option("--max-members", max_members, "family size cap");
    a->add_option("--game-depth", depth, "certification depth");
    a->add_option("--format", format, "report format")->check(CLI::IsMember({"text", "structured"}));
    a->add_option("--out", output, "report path");
    a->add_option("--mutate", mutate_name, "fault injection")->check(CLI::IsMember({"none", "rho", "color", "matrix"}));
    a->add_flag("--timing", timing, "include wall-clock seconds");
  };

  std::function<void(Report&)> action;
  TreesArgs ta;
  CodeArgs ca;
  SbArgs sa;
  std::string suite = "all";

  auto leaf = [&](CLI::App* parent, const char* name, const char* help, std::function<void(Report&)> fn) {
    CLI::App* s = parent->add_subcommand(name, help);
    run_options(s);
    s->callback([&action, fn] { action = fn; });
    return s;
  };

  CLI::App* trees = app.add_subcommand("trees", "colored trees")->require_subcommand(1);
  leaf(trees, "embed", "embedding search t -> s", [&](Report& r) { trees_embed(ta, r); })
      ->add_option("files", ta.files)->required()->expected(2);
  {
    CLI::App* s = leaf(trees, "product", "product of trees", [&](Report& r) { trees_product(ta, r); });
    s->add_option("files", ta.files)->required()->expected(1, 16);
    s->add_option("--tree-out", ta.tree_out, "write the product term here");
  }
  {
    CLI::App* s = leaf(trees, "antichain", "silver antichain and its embed matrix", [&](Report& r) { trees_antichain(ta, r); });
    s->add_option("--kappa", ta.kappa)->check(CLI::PositiveNumber);
    s->add_option("--depth", ta.depth)->check(CLI::NonNegativeNumber);
    s->add_option("--coloring", ta.coloring)->check(CLI::IsMember({"parity", "zero"}));
  }
  {
    CLI::App* s = leaf(trees, "set-tree", "tree of a hereditarily finite set", [&](Report& r) { trees_set_tree(ta, r); });
    s->add_option("set", ta.set)->required();
    s->add_option("--kappa", ta.kappa)->check(CLI::PositiveNumber);
    s->add_option("--depth", ta.depth)->check(CLI::NonNegativeNumber);
    s->add_option("--coloring", ta.coloring)->check(CLI::IsMember({"parity", "zero"}));
    s->add_option("--tree-out", ta.tree_out, "write the tree term here");
  }

  CLI::App* code = app.add_subcommand("code", "codings into torsion-free groups")->require_subcommand(1);
  {
    CLI::App* s = leaf(code, "tensor-z", "tree tensor Z", [&](Report& r) { code_tensor(ca, r); });
    s->add_option("tree", ca.files)->required()->expected(1);
    s->add_flag("--verify-claims", ca.verify_claims, "check both claims on all graded elements");
  }
  {
    CLI::App* s = leaf(code, "hjorth", "tagging reduction and subgroup recovery", [&](Report& r) { code_hjorth(ca, r); });
    s->add_option("frame", ca.files)->required()->expected(1);
    s->add_option("--p", p, "prime");
    s->add_option("--K", precision, "precision");
  }
  {
    CLI::App* s = leaf(code, "seq", "composite coding of two subgroup frames", [&](Report& r) { code_seq(ca, r); });
    s->add_option("frames", ca.files)->required()->expected(2);
    s->add_option("--kappa", ca.kappa)->check(CLI::PositiveNumber);
    s->add_option("--antichain-depth", ca.depth)->check(CLI::NonNegativeNumber);
    s->add_option("--multiplicity", ca.multiplicity)->check(CLI::PositiveNumber);
  }

  CLI::App* sb = app.add_subcommand("sb", "ranked frames and back-and-forth games")->require_subcommand(1);
  {
    CLI::App* s = leaf(sb, "construct", "stage construction and its certificate", [&](Report& r) { sb_construct(sa, r); });
    s->add_option("--checkpoint", sa.checkpoint, "write the checkpoint here");
    s->add_option("--resume", sa.resume, "continue from a checkpoint");
  }
  leaf(sb, "certify", "certify a checkpoint", [&](Report& r) { sb_certify(sa, r); })
      ->add_option("checkpoint", sa.files)->required()->expected(1);
  {
    CLI::App* s = leaf(sb, "sim-alpha", "back-and-forth game", [&](Report& r) { sb_sim(sa, r); });
    s->add_option("structures", sa.files)->required()->expected(2);
    s->add_option("--alpha", sa.alpha)->check(CLI::NonNegativeNumber);
    s->add_option("--left", sa.left, "tuple in the first structure, comma separated");
    s->add_option("--right", sa.right, "tuple in the second structure");
  }

  leaf(&app, "verify-all", "run the acceptance suite", [&](Report& r) {
    for (Check& c : run_suite(parse_suite(suite), r.config)) r.add(std::move(c));
  })->add_option("--suite", suite, "all, none or a list like 1,4,8");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  Report report;
  report.command.push_back("desk");
  report.command.insert(report.command.end(), args.begin(), args.end());
  try {
    RunConfig cfg = config_path.empty() ? default_config() : config_from_json(json::parse(read_file(config_path)));
    if (seed) cfg.seed = *seed;
    if (p) cfg.p = *p;
    if (bound) cfg.bound = *bound;
    if (search_bound) cfg.search_bound = *search_bound;
    if (support) cfg.support = *support;
    if (precision) cfg.precision = *precision;
    if (node_cap) cfg.node_cap = *node_cap;
    if (stages) cfg.stages = *stages;
    if (alpha_star) cfg.alpha_star = *alpha_star;
    if (max_rank) cfg.max_rank = *max_rank;
    if (max_members) cfg.max_members = *max_members;
    if (depth) cfg.depth = *depth;
    if (format) cfg.format = *format;
    if (output) cfg.output = *output;
    if (mutate_name) cfg.mutate = *mutate_name;
    if (timing) cfg.timing = true;
    cfg.validate();
    report.config = cfg;

    auto t0 = std::chrono::steady_clock::now();
    size_t before = report.checks.size();
    action(report);
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    // Commands time as a whole; the suite times each criterion itself.
    for (size_t i = before; i < report.checks.size(); ++i)
      if (report.checks[i].seconds == 0) report.checks[i].seconds = secs;
  } catch (const std::exception& e) {
    err << "desk: " << e.what() << "\n";
    return 2;
  }

  std::string text = report.render();
  if (report.config.output.empty()) {
    out << text;
  } else {
    try {
      write_file(report.config.output, text);
    } catch (const std::exception& e) {
      err << "desk: " << e.what() << "\n";
      return 2;
    }
  }
  return report.ok() ? 0 : 1;
}

}  // namespace desk
