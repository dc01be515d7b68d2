#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <random>
#include <sstream>

#include <unistd.h>

#include "desk/cli/commands.hpp"
#include "desk/cli/serialize.hpp"
#include "desk/cli/suite.hpp"
#include "desk/trees/hfset.hpp"

using namespace desk;
namespace fs = std::filesystem;

namespace {

fs::path scratch() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / ("desk_cli_" + std::to_string(::getpid()));
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

std::string put(const std::string& name, const std::string& text) {
  fs::path p = scratch() / name;
  write_file(p.string(), text);
  return p.string();
}

struct Run {
  int code;
  std::string out, err;
};

Run cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  int code = run_cli(args, out, err);
  return {code, out.str(), err.str()};
}

json structured(std::vector<std::string> args, int expect = 0) {
  args.push_back("--format");
  args.push_back("structured");
  Run r = cli(args);
  REQUIRE_MESSAGE(r.code == expect, r.err);
  return json::parse(r.out);
}

const json& check(const json& report, const std::string& id) {
  for (const json& c : report.at("checks"))
    if (c.at("id") == id) return c;
  FAIL("no check " << id);
  static json none;
  return none;
}

}  // namespace

TEST_CASE("lattices and frames round trip") {
  Lattice l = hnf({make_vec({2, 4, 0}), make_vec({0, 3, 3})}, 3);
  CHECK(lattice_from_json(to_json(l)) == l);
  CHECK(lattice_from_json(json::parse(to_json(l).dump())) == l);

  FrameStructure f = make_frame(2);
  add_subgroup(f, "H", hnf({make_vec({1, 1})}, 2), true);
  f.subgroups["lines"] = SubgroupSpec{Cofamily{{make_vec({1, 0})}}, false};
  Mat m(2, 2);
  m << 0, 1, -1, 0;
  add_function(f, "phi", m);
  add_function(f, "psi", m, std::string("H"));
  json j = to_json(f);
  FrameStructure g = frame_structure_from_json(json::parse(j.dump()));
  CHECK(to_json(g) == j);
  CHECK(g.functions.at("psi").domain == std::optional<std::string>("H"));
  CHECK(!g.subgroups.at("lines").is_explicit());
  CHECK(verify_embedding(f, g, Mat::Identity(2, 2), true));

  // Keys come out sorted whatever order the document used.
  std::string hand = R"({"rank": 1, "functions": {}, "subgroups": {"b": {"basis": [[3]]}, "a": {"basis": [[2]]}}})";
  FrameStructure h = frame_structure_from_json(json::parse(hand));
  CHECK(to_json(h).dump() ==
        R"({"format":"desk-frame/1","functions":{},"rank":1,"subgroups":{"a":{"basis":[[2]],"pure":false},"b":{"basis":[[3]],"pure":false}}})");
  CHECK_THROWS(frame_structure_from_json(json::parse(R"({"format": "other", "rank": 1})")));
  CHECK_THROWS(frame_structure_from_json(json::parse(R"({"rank": 2, "subgroups": {"a": {"basis": [[1]]}}})")));
}

TEST_CASE("formal sums and tag families round trip") {
  TagFamily t = gen_tags(2, 64, 3, 2, 3, 5);
  TagFamily u = tag_family_from_json(json::parse(to_json(t).dump()));
  REQUIRE(u.size() == t.size());
  for (int i = 0; i < t.size(); ++i) CHECK(u.gammas[i] == t.gammas[i]);
  CHECK(u.certificate.verified == t.certificate.verified);
  CHECK(count_vanishing_relations(u, 2, 3) == 0);

  CodedGroup c = coded_group(2, {hnf({make_vec({1, 2})}, 2)}, t);
  FormalSum s = add(c, embed_vector(c, make_vec({1, 2})), FormalSum{{Term{2, -1, make_vec({1, 2})}}});
  CHECK(formal_sum_from_json(json::parse(to_json(s).dump())) == s);
}

TEST_CASE("config files and validation") {
  RunConfig c = config_from_json(json{{"seed", 9}, {"format", "structured"}});
  CHECK(c.seed == 9);
  CHECK(c.format == "structured");
  CHECK(c.node_cap == RunConfig{}.node_cap);
  CHECK_THROWS(config_from_json(json{{"sede", 9}}));
  CHECK_THROWS(config_from_json(json{{"node_cap", 0}}));
  CHECK_THROWS(config_from_json(json{{"mutate", "everything"}}));
  CHECK(config_from_json(to_json(c)).seed == 9);

  std::string path = put("cfg.json", R"({"seed": 7, "bound": 3})");
  ::setenv("DESK_CONFIG", path.c_str(), 1);
  CHECK(default_config().seed == 7);
  Run r = cli({"verify-all", "--suite", "none"});
  CHECK(r.out.find("\"seed\":7") != std::string::npos);
  r = cli({"verify-all", "--suite", "none", "--seed", "11"});
  CHECK(r.out.find("\"seed\":11") != std::string::npos);
  ::unsetenv("DESK_CONFIG");
  CHECK(default_config().seed == 1);
}

TEST_CASE("reports sort checks and stay byte-stable") {
  Report r;
  r.command = {"desk", "x"};
  r.add(Check{"b", verdict::pass, json{{"n", 1}}, 0.5});
  r.add(Check{"a", verdict::no, json::object(), 0.25});
  std::string text = r.render();
  CHECK(text.find("[no] a") < text.find("[pass] b"));
  CHECK(text.find("0.5") == std::string::npos);
  CHECK(r.ok());
  r.config.format = "structured";
  json j = json::parse(r.render());
  CHECK(j.at("checks")[0].at("id") == "a");
  CHECK(!j.at("checks")[0].contains("seconds"));
  CHECK(j.at("ok") == true);
  r.config.timing = true;
  CHECK(json::parse(r.render()).at("checks")[1].at("seconds") == 0.5);
  r.add(Check{"c", verdict::fail});
  CHECK(!r.ok());
}

TEST_CASE("parse_suite") {
  CHECK(parse_suite("none").empty());
  CHECK(parse_suite("all").size() == 10u);
  CHECK(parse_suite("8,1,8") == std::vector<int>{1, 8});
  CHECK_THROWS(parse_suite("11"));
  CHECK_THROWS(parse_suite("1,x"));
  CHECK(criterion_id(3) == "ac03");
  CHECK(criterion_id(10) == "ac10");
}

TEST_CASE("trees subcommands") {
  std::string a = put("a.tree", "node(0, node(1, node(0)), node(0))\n");
  json r = structured({"trees", "embed", a, a});
  CHECK(check(r, "embed").at("verdict") == "yes");
  CHECK(check(r, "embed").at("detail").at("witness") == json({0, 1, 2, 3}));

  std::string b = put("b.tree", "node(0, node(1))\n");
  r = structured({"trees", "embed", b, a});
  CHECK(check(r, "embed").at("verdict") == "yes");
  auto w = check(r, "embed").at("detail").at("witness").get<std::vector<int>>();
  CHECK(verify_tree_embedding(read_tree(b), read_tree(a), TreeEmbedding{w}));
  r = structured({"trees", "embed", a, b});
  CHECK(check(r, "embed").at("verdict") == "no");

  // Product with itself, written out and embedded both ways.
  std::string prod = (scratch() / "aa.tree").string();
  r = structured({"trees", "product", a, a, "--tree-out", prod});
  CHECK(check(r, "projection:0").at("verdict") == "yes");
  CHECK(check(r, "projection:1").at("verdict") == "yes");
  CHECK(check(structured({"trees", "embed", prod, a}), "embed").at("verdict") == "yes");
  CHECK(check(structured({"trees", "embed", a, prod}), "embed").at("verdict") == "yes");
  CHECK(cli({"trees", "product", a, a, "--node-cap", "2"}).code == 1);

  r = structured({"trees", "antichain", "--kappa", "6", "--depth", "4", "--coloring", "parity"});
  CHECK(check(r, "antichain").at("verdict") == "pass");
  CHECK(r.at("checks").size() == 31u);
  CHECK(check(r, "embed:00,01").at("verdict") == "no");

  r = structured({"trees", "set-tree", "{{},{{}}}"});
  CHECK(check(r, "set-tree").at("detail").at("rank") == 2);
  ColoredTree t = parse_term(check(r, "set-tree").at("detail").at("term").get<std::string>());
  CHECK(canonical(t) == canonical(tree_of_set(parse_hfset("{{},{{}}}"), silver_antichain(6, 4, parity_coloring))));
}

TEST_CASE("code subcommands") {
  std::string t = put("t.tree", "node(0, node(1, node(0)), node(1), node(0, node(1)))\n");
  json r = structured({"code", "tensor-z", t, "--verify-claims"});
  CHECK(check(r, "claim1").at("verdict") == "pass");
  CHECK(check(r, "claim2").at("verdict") == "pass");
  CHECK(check(r, "claim1").at("detail").at("elements").get<int>() > 20);

  std::string zero = put("zero.doc", R"({"rank": 0})");
  r = structured({"code", "hjorth", zero, "--p", "2", "--K", "64"});
  CHECK(check(r, "recovery").at("verdict") == "pass");

  FrameStructure f = make_frame(2);
  add_subgroup(f, "H", hnf({make_vec({1, 2})}, 2));
  add_subgroup(f, "L", hnf({make_vec({0, 1})}, 2));
  std::string doc = put("f.doc", to_json(f).dump(1));
  r = structured({"code", "hjorth", doc, "--bound", "3"});
  CHECK(check(r, "tags").at("verdict") == "pass");
  CHECK(check(r, "recover:2").at("verdict") == "pass");
  CHECK(check(r, "recover:2").at("detail").at("members") == 3);  // (0,0), +-(1,2)
  CHECK(check(r, "recover:3").at("verdict") == "pass");

  FrameStructure bad = make_frame(1);
  add_subgroup(bad, "H", hnf({make_vec({2})}, 1));
  Run run = cli({"code", "hjorth", put("bad.doc", to_json(bad).dump())});
  CHECK(run.code == 2);  // not 2-pure

  FrameStructure g = make_frame(1);
  add_subgroup(g, "H", full_lattice(1));
  std::string gd = put("g.doc", to_json(g).dump());
  r = structured({"code", "seq", gd, gd, "--kappa", "3", "--antichain-depth", "2"});
  const json& comp = check(r, "composite").at("detail");
  FrameStructure back = frame_structure_from_json(comp.at("first").at("frame"));
  CHECK(back.rank == comp.at("first").at("tree_rank").get<int>() + 1);
}

TEST_CASE("sb subcommands") {
  json r = structured({"sb", "construct", "--alpha-star", "0", "--stages", "0"});
  CHECK(check(r, "initial-member").at("verdict") == "pass");
  CHECK(check(r, "certify").at("verdict") == "pass");

  std::string c2 = (scratch() / "s2.json").string(), c3 = (scratch() / "s3.json").string(),
              c3b = (scratch() / "s3b.json").string();
  structured({"sb", "construct", "--alpha-star", "1", "--stages", "2", "--checkpoint", c2});
  r = structured({"sb", "construct", "--alpha-star", "1", "--stages", "3", "--checkpoint", c3});
  CHECK(check(r, "certify").at("verdict") == "pass");
  CHECK(check(r, "certify").at("detail").at("ranks") == json({16799, 1528}));
  structured({"sb", "construct", "--stages", "3", "--resume", c2, "--checkpoint", c3b});
  CHECK(read_file(c3) == read_file(c3b));
  CHECK(cli({"sb", "construct", "--stages", "1", "--resume", c2}).code == 2);

  CHECK(check(structured({"sb", "certify", c3}), "certify").at("verdict") == "pass");
  json bad = structured({"sb", "certify", c3, "--mutate", "rho"}, 1);
  CHECK(check(bad, "certify").at("verdict") == "fail");

  // Budget exhaustion is a failed check, not a crash.
  CHECK(cli({"sb", "construct", "--stages", "3", "--max-rank", "100"}).code == 1);

  // Games: a chain x <- y against the same chain plus a second child of x.
  RankedFrame m, n;
  int x = m.add_coordinate(-1, true, SmallOrdinal::natural(1));
  m.add_coordinate(x, true, SmallOrdinal::natural(0));
  x = n.add_coordinate(-1, true, SmallOrdinal::natural(1));
  n.add_coordinate(x, true, SmallOrdinal::natural(0));
  n.add_coordinate(x, true, SmallOrdinal::natural(0));
  std::string md = put("m.json", frame_to_json(m)), nd = put("n.json", frame_to_json(n));
  r = structured({"sb", "sim-alpha", md, nd, "--alpha", "1"});
  CHECK(check(r, "sim-alpha").at("verdict") == "no");
  CHECK(!check(r, "sim-alpha").at("detail").at("transcript").empty());
  r = structured({"sb", "sim-alpha", md, md, "--alpha", "2", "--left", "1", "--right", "1"});
  CHECK(check(r, "sim-alpha").at("verdict") == "yes");

  std::string u = put("u.tree", "node(0, node(1), node(0))\n");
  std::string uu = put("uu.tree", to_term(glue_at_root({read_tree(u), read_tree(u)})) + "\n");
  r = structured({"sb", "sim-alpha", u, uu, "--alpha", "1"});
  CHECK(check(r, "sim-alpha").at("verdict") == "yes");
  CHECK(check(r, "sim-alpha").at("detail").at("naive_oracle") == true);
  CHECK(cli({"sb", "sim-alpha", u, md}).code == 2);
}

TEST_CASE("verify-all and exit codes") {
  Run r = cli({"verify-all", "--suite", "none"});
  CHECK(r.code == 0);
  CHECK(r.out.find("ok (0 checks)") != std::string::npos);
  CHECK(cli({"verify-all", "--suite", "8", "--mutate", "rho"}).code == 1);
  CHECK(cli({"verify-all", "--suite", "6,7,9"}).code == 0);
  CHECK(cli({"verify-all", "--suite", "12"}).code == 2);
  CHECK(cli({"frobnicate"}).code == 2);
  CHECK(cli({"trees", "embed", "/nonexistent/a.tree", "/nonexistent/b.tree"}).code == 2);

  // Equal configs give equal bytes.
  Run a = cli({"verify-all", "--suite", "8,10"}), b = cli({"verify-all", "--suite", "8,10"});
  CHECK(a.code == 0);
  CHECK(a.out == b.out);
  std::string out = (scratch() / "report.txt").string();
  CHECK(cli({"verify-all", "--suite", "8,10", "--out", out}).code == 0);
  std::string written = read_file(out);
  // Only the command echo differs.
  CHECK(written.substr(written.find('\n')) == a.out.substr(a.out.find('\n')));
}
