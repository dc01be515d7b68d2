#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <functional>
#include <map>
#include <random>

#include "desk/trees/hfset.hpp"
#include "desk/trees/tree.hpp"

using namespace desk;

namespace {

ColoredTree T(const char* s) { return parse_term(s); }

HFSet set_of(std::vector<HFSet> e) { return HFSet(std::move(e)); }

// All maps sending the root to the root, checked one by one.
bool naive_embeds(const ColoredTree& t, const ColoredTree& s) {
  std::vector<int> m(t.size(), 0);
  for (;;) {
    if (verify_tree_embedding(t, s, TreeEmbedding{m})) return true;
    int i = t.size() - 1;
    while (i >= 1 && m[i] == s.size() - 1) m[i--] = 0;
    if (i < 1) return false;
    ++m[i];
  }
}

int count_nodes(const ColoredTree& t, int v) {
  int n = 1;
  for (int c : t.children[v]) n += count_nodes(t, c);
  return n;
}

}  // namespace

TEST_CASE("term format round trip and canonical order") {
  ColoredTree t = T("node(0, node(1), node(0, node(2)), node(0))");
  CHECK(to_term(t) == "node(0, node(0), node(0, node(2)), node(1))");
  CHECK(to_term(parse_term(to_term(t))) == to_term(t));
  CHECK(canonical(t) == parse_term(to_term(t)));
  CHECK_THROWS(parse_term("node(0"));
  CHECK_THROWS(parse_term("node(0) x"));
  CHECK_THROWS(parse_term("leaf(1)"));
  for (const auto& u : enumerate_trees(5, 2)) CHECK(to_term(parse_term(to_term(u))) == to_term(u));
}

TEST_CASE("enumerate_trees counts") {
  // Rooted unlabeled trees: 1, 1, 2, 4, 9 by size.
  CHECK(enumerate_trees(5, 1).size() == 1 + 1 + 2 + 4 + 9);
  // Two colors: 2, 4, 14, 52, 214 rooted trees with 1..5 nodes.
  CHECK(enumerate_trees(5, 2).size() == 2 + 4 + 14 + 52 + 214);
}

TEST_CASE("embed_search examples") {
  ColoredTree t = T("node(0, node(1, node(0)), node(2))");
  auto id = embed_search(t, t);
  REQUIRE(id);
  CHECK(verify_tree_embedding(t, t, *id));
  CHECK_FALSE(embed_search(T("node(0)"), T("node(1)")));
  auto w = embed_search(T("node(0, node(1))"), T("node(0, node(1), node(2))"));
  REQUIRE(w);
  CHECK(w->map == std::vector<int>{0, 1});
  // Heights are preserved: a path cannot fold onto a shorter one.
  CHECK_FALSE(embeds(T("node(0, node(0, node(0)))"), T("node(0, node(0))")));
  // Not injective: two equal branches go to one.
  CHECK(embeds(T("node(0, node(1), node(1))"), T("node(0, node(1))")));
}

TEST_CASE("embed_search agrees with the all-maps oracle") {
  auto small = enumerate_trees(4, 2);
  for (const auto& a : small)
    for (const auto& b : small) {
      auto w = embed_search(a, b);
      CHECK(w.has_value() == naive_embeds(a, b));
      if (w) CHECK(verify_tree_embedding(a, b, *w));
    }
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 60; ++trial) {
    ColoredTree a = random_tree(rng, 2 + rng() % 7, 2);
    ColoredTree b = random_tree(rng, 2 + rng() % 7, 2);
    // Dense small colors make positives common enough to matter.
    auto w = embed_search(a, b);
    CHECK(w.has_value() == naive_embeds(a, b));
    if (w) CHECK(verify_tree_embedding(a, b, *w));
  }
}

TEST_CASE("biembeddable examples and equivalence") {
  ColoredTree t = T("node(0, node(1, node(0)), node(0))");
  CHECK(biembeddable(t, t));
  ColoredTree tt = glue_at_root({t, t});
  CHECK(tt.size() == 2 * t.size() - 1);
  // Explicit witness: fold both copies onto one.
  TreeEmbedding fold;
  for (int v = 0; v < tt.size(); ++v) fold.map.push_back(v < t.size() ? v : (v - t.size() + 1));
  CHECK(verify_tree_embedding(tt, t, fold));
  CHECK(biembeddable(t, tt));
  CHECK_FALSE(biembeddable(T("node(0)"), T("node(1)")));

  auto sample = enumerate_trees(4, 2);
  for (const auto& a : sample)
    for (const auto& b : sample) {
      CHECK(biembeddable(a, b) == biembeddable(b, a));
      if (!biembeddable(a, b)) continue;
      for (const auto& c : sample)
        if (biembeddable(b, c)) {
          auto f = *embed_search(a, b), g = *embed_search(b, c);
          CHECK(verify_tree_embedding(a, c, compose(f, g)));
        }
    }
}

TEST_CASE("biembeddability key is a complete invariant") {
  auto sample = enumerate_trees(5, 2);
  for (const auto& a : sample)
    for (const auto& b : sample) CHECK((biembeddability_key(a) == biembeddability_key(b)) == biembeddable(a, b));
  ColoredTree t = T("node(0, node(1, node(0)), node(1), node(1, node(0)))");
  CHECK(biembeddability_key(t) == "node(0, node(1, node(0)))");
}

TEST_CASE("product") {
  ColoredTree t = T("node(0, node(1, node(0)), node(0))");
  ProductResult one = product({t});
  CHECK(to_term(one.tree) == to_term(t));
  ColoredTree s = T("node(0, node(1), node(1, node(1)))");
  ProductResult ts = product({t, s});
  CHECK_FALSE(ts.empty);
  for (int k = 0; k < 2; ++k) CHECK(verify_tree_embedding(ts.tree, k ? s : t, ts.projection(k)));
  CHECK(to_term(ts.tree) == "node(0, node(1), node(1))");
  CHECK(product({T("node(0)"), T("node(1)")}).empty);
  std::vector<ColoredTree> wide{T("node(0, node(0), node(0), node(0))")};
  for (int i = 0; i < 5; ++i) wide.push_back(wide[0]);
  CHECK_THROWS_AS(product(wide, 100), NodeBudgetExceeded);
  CHECK(product(wide).tree.size() == 1 + 729);
}

TEST_CASE("product universal property, all trees with at most 5 nodes") {
  auto all = enumerate_trees(5, 2);
  std::map<std::pair<int, int>, ColoredTree> uv;
  long checked = 0;
  for (size_t u = 0; u < all.size(); ++u)
    for (size_t v = u; v < all.size(); ++v) {
      ProductResult p = product({all[u], all[v]});
      for (const auto& x : all) {
        bool both = embeds(x, all[u]) && embeds(x, all[v]);
        bool into = !p.empty && embeds(x, p.tree);
        if (into != both) FAIL_CHECK("universal property fails");
        ++checked;
      }
    }
  CHECK(checked > 0);
}

TEST_CASE("subtree_at") {
  ColoredTree t = T("node(0, node(1, node(0), node(2)), node(0))");
  CHECK(subtree_at(t, 0) == t);
  for (int v = 0; v < t.size(); ++v)
    if (t.children[v].empty()) CHECK(to_term(subtree_at(t, v)) == "node(" + std::to_string(t.color[v]) + ")");
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    ColoredTree r = random_tree(rng, 1 + rng() % 12, 3);
    long total = 0, oracle = 0;
    for (int v = 0; v < r.size(); ++v) {
      total += subtree_at(r, v).size();
      oracle += r.height(v) + 1;  // each node is counted once per ancestor
    }
    CHECK(total == oracle);
    for (int v = 0; v < r.size(); ++v) CHECK(subtree_at(r, v).size() == count_nodes(r, v));
  }
}

TEST_CASE("silver_antichain shape") {
  auto zero = [](const std::vector<int>&) { return 0; };
  auto s = silver_antichain(2, 2, zero);
  REQUIRE(s.size() == 2);
  CHECK(to_term(s[0]) == "node(0, node(0))");
  CHECK(to_term(s[1]) == "node(0, node(2))");
  CHECK_FALSE(embeds(s[0], s[1]));
  CHECK_FALSE(embeds(s[1], s[0]));
  for (const auto& t : silver_antichain(6, 4, parity_coloring))
    for (int v = 1; v < t.size(); ++v)
      if (t.color[v] >= 2) CHECK(t.color[v] == 2);
  CHECK(parity_coloring({0}) == 1);
  CHECK(parity_coloring({1, 2}) == 1);
  CHECK_THROWS(silver_antichain(1, 4, zero));
}

TEST_CASE("silver antichain with f* is pairwise non-embeddable") {
  auto s = silver_antichain(6, 4, parity_coloring);
  CHECK(antichain_violations(s) == 0);
}

TEST_CASE("HFSet basics") {
  HFSet e;
  HFSet one = singleton(e);
  CHECK(e.rank() == 0);
  CHECK(one.rank() == 1);
  CHECK(ordinal(3).str() == "{{},{{}},{{},{{}}}}");
  CHECK(parse_hfset("{{{}},{},{}}") == set_of({one, e}));
  CHECK(parse_hfset(" { {} , {{}} } ") == ordinal(2));
  CHECK_THROWS(parse_hfset("{{}"));
  CHECK(transitive_closure(singleton(singleton(one))).size() == 3);
  CHECK(ordinal(2).contains(one));
  CHECK(set_union(one, singleton(one)) == ordinal(2));
}

TEST_CASE("tree_of_set examples") {
  auto anti = silver_antichain(6, 4, parity_coloring);
  HFSet e;
  ColoredTree t0 = tree_of_set(e, anti);
  CHECK(to_term(tree_of_set_core(e)) == "node(0)");
  CHECK(t0.size() == 1 + anti[0].size());
  ColoredTree c1 = tree_of_set_core(singleton(e));
  CHECK(to_term(c1) == "node(0, node(0))");
  // {{{}}} : the sequence ({{{}}}, {}) skips a level, so its node is colored 1.
  ColoredTree c2 = tree_of_set_core(singleton(singleton(e)));
  CHECK(to_term(c2) == "node(0, node(0, node(0)), node(1))");
  ColoredTree t2 = tree_of_set(singleton(singleton(e)), anti);
  int grafted = 0;
  for (int v = c2.size(); v < t2.size(); ++v) {
    CHECK(t2.color[v] >= 2);
    ++grafted;
  }
  CHECK(grafted == anti[2].size() + anti[1].size() + 2 * anti[0].size());
  CHECK_THROWS(tree_of_set(ordinal(3), std::vector<ColoredTree>(anti.begin(), anti.begin() + 3)));
}

TEST_CASE("tree_of_set separates a sample of sets") {
  auto anti = silver_antichain(6, 4, parity_coloring);
  REQUIRE(antichain_violations(anti) == 0);
  HFSet e, o1 = ordinal(1), o2 = ordinal(2), s1 = singleton(o1);
  std::vector<HFSet> sample{e, o1, o2, s1, ordinal(3), singleton(s1), set_of({e, s1}), set_of({o1, s1}),
                            singleton(o2), set_of({e, o2})};
  for (size_t i = 0; i < sample.size(); ++i)
    for (size_t j = i + 1; j < sample.size(); ++j) CHECK(!(sample[i] == sample[j]));
  std::vector<ColoredTree> trees;
  for (const auto& a : sample) {
    CHECK(a.rank() <= 3);
    trees.push_back(tree_of_set(a, anti));
  }
  for (size_t i = 0; i < trees.size(); ++i)
    for (size_t j = i + 1; j < trees.size(); ++j) CHECK_FALSE(biembeddable(trees[i], trees[j]));
}
