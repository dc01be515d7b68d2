#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "desk/abelian/embed_search.hpp"
#include "desk/treecode/tensor.hpp"

using namespace desk;

namespace {

ColoredTree T(const char* s) { return parse_term(s); }

Vec unit(int n, int i, Int c = 1) {
  Vec v = Vec::Zero(n);
  v(i) = c;
  return v;
}

}  // namespace

TEST_CASE("tensor_z examples") {
  TensorStructure one = tensor_z(T("node(3)"));
  CHECK(one.rank() == 1);
  CHECK(one.pi.isZero());
  TensorStructure path = tensor_z(T("node(0, node(1))"));
  CHECK(mat_vec(path.pi, unit(2, 1)) == unit(2, 0));
  CHECK(is_zero(mat_vec(path.pi, unit(2, 0))));
  ColoredTree t = T("node(0, node(1), node(1, node(0)), node(0))");
  TensorStructure ts = tensor_z(t);
  CHECK(ts.graded.at({0, 1}).rank() == 2);
  CHECK(ts.graded.at({0, 0}).rank() == 1);
  CHECK(ts.graded.at({0, 1, 0}).rank() == 1);
  FrameStructure f = tensor_frame(ts);
  CHECK(f.subgroups.at("1,1").lattice().rank() == 2);
  CHECK_NOTHROW(f.validate());
  // Construction checks run inside tensor_z and throw on failure.
  for (const auto& u : enumerate_trees(5, 2)) CHECK_NOTHROW(tensor_z(u));
}

TEST_CASE("derived_tree examples") {
  ColoredTree t = T("node(0, node(1, node(0), node(1)), node(1, node(0)))");
  TensorStructure ts = tensor_z(t);
  for (int v = 0; v < t.size(); ++v) {
    GradedElement a = graded(ts, unit(t.size(), v));
    DerivedTree tight = derived_tree(ts, a, {1, 1, 1000});
    CHECK(to_term(tight.tree) == to_term(subtree_at(t, v)));
    DerivedTree d = derived_tree(ts, a);
    CHECK(biembeddable(d.tree, subtree_at(t, v)));
    if (t.children[v].empty()) CHECK(d.tree.size() == 1);
  }
  // Two siblings of color 1: T*_a ~ product of their subtrees.
  Vec a = unit(t.size(), 1) + unit(t.size(), 4);
  DerivedTree d = derived_tree(ts, graded(ts, a));
  CHECK(biembeddable(d.tree, product({subtree_at(t, 1), subtree_at(t, 4)}).tree));
  // Entries of a node's vector sum to the parent's along pi.
  for (int u = 1; u < d.tree.size(); ++u)
    CHECK(mat_vec(ts.pi, d.vectors[u]) == d.vectors[d.tree.parent[u]]);
  CHECK_THROWS(derived_tree(ts, GradedElement{Vec::Zero(t.size()), {0}}));
  CHECK_THROWS_AS(derived_tree(ts, graded(ts, unit(t.size(), 0)), {3, 2, 3}), NodeBudgetExceeded);
}

TEST_CASE("claim1_check examples") {
  ColoredTree t = T("node(0, node(1, node(0)), node(1, node(0)), node(1))");
  TensorStructure ts = tensor_z(t);
  for (int v = 0; v < t.size(); ++v) {
    Claim1Report r = claim1_check(ts, graded(ts, unit(t.size(), v)));
    CHECK(r.ok());
  }
  // Isomorphic subtrees: the product is biembeddable with either.
  Vec a = unit(t.size(), 1) + unit(t.size(), 3, -2);
  Claim1Report r = claim1_check(ts, graded(ts, a));
  CHECK(r.ok());
  CHECK(biembeddable(derived_tree(ts, graded(ts, a)).tree, subtree_at(t, 1)));
}

TEST_CASE("is_good examples") {
  // T_{>=1} and T_{>=3} are incomparable.
  ColoredTree t = T("node(0, node(0, node(0)), node(0, node(1)))");
  TensorStructure ts = tensor_z(t);
  int n = t.size();
  CHECK(is_good(ts, unit(n, 1)));
  Vec sum = unit(n, 1) + unit(n, 3);
  CHECK_FALSE(is_good(ts, sum));
  CHECK_FALSE(is_good(ts, Vec::Zero(n)));
  auto els = graded_elements(ts, {0, 0}, 3, 2);
  auto oracle = goodness_oracle(ts, {0, 0}, 3, 2);
  for (size_t i = 0; i < els.size(); ++i) CHECK(oracle[i] == is_good(ts, els[i]));
  // Nested subtrees: the smaller one decides, so a sum is good.
  ColoredTree u = T("node(0, node(0, node(0)), node(0))");
  TensorStructure tu = tensor_z(u);
  CHECK(is_good(tu, unit(4, 1) + unit(4, 3)));
}

TEST_CASE("Claims 1 and 2 on all trees with at most 4 nodes") {
  int checked = 0;
  for (const auto& t : enumerate_trees(4, 2)) {
    TensorStructure ts = tensor_z(t);
    for (int n = 0; n <= t.tree_height(); ++n)
      for (const auto& h : ts.histories_at_height(n)) {
        auto els = graded_elements(ts, h, 3, 2);
        auto oracle = goodness_oracle(ts, h, 3, 2);
        for (size_t i = 0; i < els.size(); ++i) {
          CHECK(claim1_check(ts, els[i]).ok());
          CHECK(oracle[i] == is_good(ts, els[i]));
          ++checked;
        }
      }
  }
  CHECK(checked > 1000);
}

TEST_CASE("recover_invariants") {
  ColoredTree t = T("node(0, node(1, node(0)), node(1), node(0, node(1), node(1)))");
  TensorStructure ts = tensor_z(t);
  CHECK(recover_invariants(ts, 0) == std::set<std::string>{biembeddability_key(t)});
  CHECK(recover_invariants(ts, 5).empty());
  for (int n = 0; n <= 3; ++n) CHECK(recover_invariants(ts, n) == subtree_classes(t, n));
  for (const auto& u : enumerate_trees(5, 2)) {
    TensorStructure tu = tensor_z(u);
    for (int n = 0; n <= u.tree_height(); ++n) CHECK(recover_invariants(tu, n) == subtree_classes(u, n));
  }
}

namespace {

std::vector<ColoredTree> small_antichain() {
  auto s = silver_antichain(3, 2, parity_coloring);
  return {s[0], s[2]};
}

}  // namespace

TEST_CASE("code_seq_finite") {
  auto anti = small_antichain();
  REQUIRE(antichain_violations(anti) == 0);
  FrameStructure f0 = make_frame(2);
  add_subgroup(f0, "a", hnf({make_vec({1, 0})}, 2));
  add_subgroup(f0, "b", hnf({make_vec({1, 1})}, 2));
  Mat m = make_mat({{1, 1}, {0, 1}});
  FrameStructure f1 = make_frame(2);
  add_subgroup(f1, "a", hnf({make_vec({1, 0})}, 2));
  add_subgroup(f1, "b", hnf({make_vec({2, 1})}, 2));
  REQUIRE(verify_embedding(f0, f1, m, true));

  auto [c0, c1] = code_seq_finite(f0, f1, anti, 2);
  CHECK(c0.tree == c1.tree);
  CHECK_NOTHROW(c0.frame.validate());
  CHECK(c0.copies.size() == 2 * 3 * 2);
  const Mat& psi = c0.frame.functions.at("psi").matrix;
  for (int v = 0; v < c0.tree_rank; ++v)
    if (c0.tree.height(v) != 1) CHECK(psi.col(v).isZero());
  // Every enumeration entry is hit exactly multiplicity times per gamma.
  for (size_t g = 0; g < c0.gammas.size(); ++g)
    for (int j = 0; j < 3; ++j) {
      int hits = 0;
      for (const auto& cp : c0.copies)
        if (cp.gamma == static_cast<int>(g) && cp.slot == j) {
          CHECK(psi.block(c0.tree_rank, cp.start, 2, 1) == c0.enumeration[g][j]);
          ++hits;
        }
      CHECK(hits == 2);
    }

  Mat lift = lift_composite_embedding(c0, c1, m);
  std::string why;
  CHECK_MESSAGE(verify_embedding(c0.frame, c1.frame, lift, true, &why), why);
  Mat inv = make_mat({{1, -1}, {0, 1}});
  CHECK(verify_embedding(c1.frame, c0.frame, lift_composite_embedding(c1, c0, inv), true));

  // Height-1 elements lie in the span of the gamma copies iff T_gamma embeds
  // into their derived tree.
  TensorStructure ts = tensor_z(c0.tree);
  for (const auto& h : ts.histories_at_height(1))
    for (const auto& a : graded_elements(ts, h, 2, 1)) {
      DerivedTree d = derived_tree(ts, a, covering_bounds(a));
      for (int g = 0; g < 2; ++g) {
        bool inside = true;
        for (int s : support(a.a)) {
          bool in_g = false;
          for (const auto& cp : c0.copies) in_g |= cp.gamma == g && cp.start == s;
          inside &= in_g;
        }
        CHECK(inside == embeds(anti[g], d.tree));
      }
    }
}

TEST_CASE("code_seq_finite edge cases") {
  auto anti = small_antichain();
  FrameStructure z = make_frame(0);
  add_subgroup(z, "a", zero_lattice(0));
  auto [c0, c1] = code_seq_finite(z, z, {anti[0]}, 1);
  CHECK(c0.frame.rank == c0.tree_rank);
  TensorStructure ts = tensor_z(c0.tree);
  for (auto& [k, s] : tensor_frame(ts).subgroups) CHECK(c0.frame.subgroups.at("g:" + k).lattice() == s.lattice());

  FrameStructure f = make_frame(1);
  add_subgroup(f, "a", full_lattice(1));
  FrameStructure g = make_frame(1);
  add_subgroup(g, "a", zero_lattice(1));
  auto bad = silver_antichain(3, 2, [](const std::vector<int>&) { return 0; });
  auto [e0, e1] = code_seq_finite(f, g, anti, 1);
  CHECK_THROWS(lift_composite_embedding(e0, e1, make_mat({{1}})));
  std::vector<ColoredTree> twice{anti[0], anti[0]};
  FrameStructure f2 = f;
  add_subgroup(f2, "b", full_lattice(1));
  CHECK_THROWS_AS(code_seq_finite(f2, f2, twice, 1), AntichainCheckFailure);
  CHECK_THROWS_AS(code_seq_finite(f2, f2, {anti[0]}, 1), AntichainCheckFailure);
  (void)bad;
}
