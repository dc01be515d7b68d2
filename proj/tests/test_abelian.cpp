#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>
#include <set>

#include "desk/abelian/embed_search.hpp"
#include "desk/abelian/reductions.hpp"

using namespace desk;

namespace {

// Brute-force membership: v is a combination of gens with coefficients in [-c, c].
bool member_by_coefficients(const std::vector<Vec>& gens, const Vec& v, Int c) {
  const int k = static_cast<int>(gens.size());
  std::vector<Int> x(k, -c);
  if (k == 0) return is_zero(v);
  for (;;) {
    Vec s = Vec::Zero(v.size());
    for (int i = 0; i < k; ++i) s += x[i] * gens[i];
    if (s == v) return true;
    int i = k - 1;
    while (i >= 0 && x[i] == c) x[i--] = -c;
    if (i < 0) return false;
    ++x[i];
  }
}

std::vector<Vec> box(int dim, Int b) {
  std::vector<Vec> out;
  Vec cur = Vec::Constant(dim, -b);
  for (;;) {
    out.push_back(cur);
    int k = dim - 1;
    while (k >= 0 && cur(k) == b) cur(k--) = -b;
    if (k < 0) return out;
    ++cur(k);
  }
}

Lattice random_lattice(std::mt19937_64& rng, int r, int k, Int e) {
  std::uniform_int_distribution<Int> d(-e, e);
  std::vector<Vec> gens;
  for (int i = 0; i < k; ++i) {
    Vec v(r);
    for (int j = 0; j < r; ++j) v(j) = d(rng);
    gens.push_back(v);
  }
  return hnf(gens, r);
}

}  // namespace

TEST_CASE("hnf examples") {
  CHECK(hnf({}, 2).rank() == 0);
  CHECK(hnf({make_vec({1, 0}), make_vec({0, 1})}, 2).basis == Mat::Identity(2, 2));

  std::vector<Vec> gens = {make_vec({2, 0}), make_vec({0, 3}), make_vec({1, 1})};
  Lattice l = hnf(gens, 2);
  // Oracle: the brute-force span over [-6, 6] agrees with HNF membership.
  for (const Vec& v : box(2, 6)) CHECK(member(l, v) == member_by_coefficients(gens, v, 12));
  CHECK(l.basis == make_mat({{1, 0}, {0, 1}}));

  Lattice l2 = hnf({make_vec({4, 6}), make_vec({2, 0})}, 2);
  CHECK(l2.basis == make_mat({{2, 0}, {0, 6}}));
}

TEST_CASE("member examples") {
  Lattice l = hnf({make_vec({2, 2})}, 2);
  CHECK(member(l, make_vec({0, 0})));
  CHECK_FALSE(member(l, make_vec({1, 1})));
  CHECK(member(l, make_vec({4, 4})));
  CHECK_FALSE(member_by_coefficients({make_vec({2, 2})}, make_vec({1, 1}), 10));
  CHECK(member_by_coefficients({make_vec({2, 2})}, make_vec({4, 4}), 10));
  CHECK_THROWS_AS(member(l, make_vec({1})), std::invalid_argument);
}

TEST_CASE("hnf is canonical on random equal spans") {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<Int> d(-3, 3);
  for (int trial = 0; trial < 300; ++trial) {
    int r = 1 + trial % 4;
    Lattice a = random_lattice(rng, r, 1 + trial % 5, 6);
    // Unimodular row operations plus redundant generators give the same span.
    std::vector<Vec> gens = a.rows();
    for (size_t i = 0; i + 1 < gens.size(); ++i) gens[i] += d(rng) * gens[i + 1];
    if (!gens.empty()) gens.push_back(d(rng) * gens[0]);
    std::shuffle(gens.begin(), gens.end(), rng);
    Lattice b = hnf(gens, r);
    REQUIRE(contains(a, b));
    REQUIRE(contains(b, a));
    CHECK(a == b);
    CHECK(hnf(a.basis) == a);
  }
}

TEST_CASE("purify examples and properties") {
  Lattice l = hnf({make_vec({2, 2})}, 2);
  Lattice p = purify(l);
  CHECK(p.basis == make_mat({{1, 1}}));
  for (Int n = 1; n <= 12; ++n) {
    // n Z^2 cap p = n p, checked on the box.
    for (const Vec& v : box(2, 12)) {
      bool in_nz = v(0) % n == 0 && v(1) % n == 0;
      bool in_np = member(p, v) && coordinates(p, v).value()(0) % n == 0;
      CHECK((in_nz && member(p, v)) == in_np);
    }
  }
  CHECK(purify(zero_lattice(3)).rank() == 0);
  CHECK(purify(p) == p);

  CHECK(p_purify(hnf({make_vec({3, 3})}, 2), 2).basis == make_mat({{3, 3}}));
  CHECK(p_purify(hnf({make_vec({4, 0})}, 2), 2).basis == make_mat({{1, 0}}));
  CHECK(p_purify(p, 2) == p);

  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 400; ++trial) {
    int r = 1 + trial % 4;
    Lattice a = random_lattice(rng, r, 1 + (trial / 4) % r, 9);
    Lattice pa = purify(a);
    CHECK(pa.rank() == a.rank());
    CHECK(purify(pa) == pa);
    CHECK(contains(pa, a));
    for (Int q : {2, 3, 5}) {
      Lattice qa = p_purify(a, q);
      CHECK(p_purify(qa, q) == qa);
      CHECK(contains(qa, a));
      CHECK(contains(pa, qa));
    }
  }
}

TEST_CASE("p_purify only divides by p") {
  Lattice l = hnf({make_vec({6, 0})}, 2);
  CHECK(p_purify(l, 2).basis == make_mat({{3, 0}}));
  CHECK(p_purify(l, 3).basis == make_mat({{2, 0}}));
  CHECK(p_purify(l, 5) == l);
  for (Int n = 0; n <= 8; ++n) {
    Int pn = Int(1) << n;
    Lattice r = p_purify(hnf({make_vec({3, 3})}, 2), 2);
    for (const Vec& v : box(2, 9)) {
      bool lhs = member(r, v) && v(0) % pn == 0 && v(1) % pn == 0;
      bool rhs = member(r, v) && coordinates(r, v).value()(0) % pn == 0;
      CHECK(lhs == rhs);
    }
  }
}

TEST_CASE("intersect and kernels") {
  Lattice a = hnf({make_vec({2, 0}), make_vec({0, 1})}, 2);
  Lattice b = hnf({make_vec({1, 1})}, 2);
  CHECK(intersect(a, b).basis == make_mat({{2, 2}}));
  Lattice k = right_kernel(make_mat({{1, 1, 1}}));
  CHECK(k.rank() == 2);
  for (const Vec& v : k.rows()) CHECK(v.sum() == 0);
}

TEST_CASE("augmentation_reduction examples") {
  FrameStructure t = augmentation_reduction(FiniteAbGroup(std::vector<Int>{}));
  CHECK(t.rank == 1);
  CHECK(t.subgroups.at("K").lattice() == full_lattice(1));

  FrameStructure z2 = augmentation_reduction(FiniteAbGroup({2}));
  Lattice k = z2.subgroups.at("K").lattice();
  CHECK(k.basis == make_mat({{1, 0}, {0, 2}}));
  // Oracle: a is in the kernel iff a(1) is even, on the box.
  for (const Vec& v : box(2, 4)) CHECK(member(k, v) == (v(1) % 2 == 0));
  CHECK(lattice_index(k) == 2);

  Lattice k4 = augmentation_kernel(FiniteAbGroup({2, 2}));
  CHECK(k4.rank() == 4);
  CHECK(quotient_invariants(k4).torsion == std::vector<Int>{2, 2});
}

TEST_CASE("augmentation recovers invariant factors up to order 64") {
  for (Int m = 1; m <= 64; ++m)
    for (const FiniteAbGroup& g : groups_of_order(m)) {
      QuotientInvariants q = quotient_invariants(augmentation_kernel(g));
      CHECK(q.free_rank == 0);
      CHECK(q.torsion == g.invariant_factors);
    }
  CHECK(groups_of_order(16).size() == 5);
  CHECK(groups_of_order(64).size() == 11);
}

TEST_CASE("graph_trick examples") {
  FrameStructure f0 = make_frame(2);
  add_subgroup(f0, "H", zero_lattice(2));
  FrameStructure e0 = graph_trick(f0);
  CHECK(e0.rank == 2);
  CHECK(e0.functions.at("H").matrix == Mat::Zero(2, 2));

  FrameStructure f = make_frame(2);
  add_subgroup(f, "H", hnf({make_vec({2, 0})}, 2));
  FrameStructure e = graph_trick(f);
  REQUIRE(e.rank == 3);
  const Mat& phi = e.functions.at("H").matrix;
  CHECK(mat_vec(phi, make_vec({0, 0, 1})) == make_vec({2, 0, 0}));
  // Oracle: kernel and image by enumeration.
  for (const Vec& v : box(3, 5)) {
    CHECK(is_zero(mat_vec(phi, v)) == (v(2) == 0));
    Vec w = mat_vec(phi, v);
    CHECK(w(0) == 2 * v(2));
  }
  FrameStructure back = graph_trick_recover(e);
  CHECK(back.rank == 2);
  CHECK(back.subgroups.at("H").lattice() == f.subgroups.at("H").lattice());
  CHECK(intersect(image(full_lattice(3), phi), hnf({make_vec({1, 0, 0}), make_vec({0, 1, 0})}, 3)) ==
        hnf({make_vec({2, 0, 0})}, 3));
}

TEST_CASE("graph_trick round trip on subgroups of Z^3") {
  std::mt19937_64 rng(3);
  std::uniform_int_distribution<Int> d(-3, 3);
  for (int trial = 0; trial < 120; ++trial) {
    std::vector<Vec> gens;
    for (int i = 0; i < 1 + trial % 3; ++i) gens.push_back(make_vec({d(rng), d(rng), d(rng)}));
    FrameStructure f = make_frame(3);
    add_subgroup(f, "H", hnf(gens, 3));
    FrameStructure back = graph_trick_recover(graph_trick(f));
    auto r = frame_embed_search(f, back, 1, true);
    CHECK(r.found());
  }
}

TEST_CASE("eliminate_functions examples") {
  FrameStructure f = make_frame(1);
  FrameStructure e = eliminate_functions(f);
  CHECK(e.rank == 2);
  CHECK(e.subgroups.at("*0").lattice().basis == make_mat({{1, 0}}));
  CHECK(e.subgroups.at("*1").lattice().basis == make_mat({{1, 1}}));

  FrameStructure id = make_frame(1);
  add_function(id, "0", make_mat({{1}}));
  CHECK(eliminate_functions(id).subgroups.at("graph:0").lattice().basis == make_mat({{1, 1}}));

  FrameStructure two = make_frame(1);
  add_function(two, "0", make_mat({{2}}));
  FrameStructure e2 = eliminate_functions(two);
  const auto& g = e2.subgroups.at("graph:0");
  CHECK(g.lattice().basis == make_mat({{1, 2}}));
  CHECK(is_pure(g.lattice()));
  CHECK(g.purity_required);

  // A function on the non-pure domain 2Z has a non-pure graph.
  FrameStructure half = make_frame(1);
  add_subgroup(half, "d", hnf({make_vec({2})}, 1));
  add_function(half, "0", make_mat({{3}}), std::string("d"));
  CHECK_FALSE(is_pure(eliminate_functions(half).subgroups.at("graph:0").lattice()));
}

TEST_CASE("the two-subgroup coding alone does not reflect isomorphism") {
  FrameStructure a = make_frame(2), b = make_frame(2);
  add_function(a, "0", make_mat({{2, 0}, {0, 2}}));
  add_function(b, "0", make_mat({{2, -2}, {0, 2}}));
  CHECK(frame_embed_search(a, b, 4, true).verdict == SearchVerdict::No);
  EliminateOptions literal;
  literal.tag_second_axis = false;
  CHECK(frame_embed_search(eliminate_functions(a, literal), eliminate_functions(b, literal), 2, true).found());
  CHECK_FALSE(frame_embed_search(eliminate_functions(a), eliminate_functions(b), 2, true).found());
}

TEST_CASE("purity_repair examples") {
  FrameStructure f = make_frame(1);
  add_subgroup(f, "0", zero_lattice(1));
  FrameStructure e = purity_repair(f, {{"0", {}}});
  CHECK(e.rank == 1);
  CHECK(e.domain_of("phi:0").rank() == 0);
  CHECK(image(e.domain_of("phi:0"), e.functions.at("phi:0").matrix).rank() == 0);

  FrameStructure g = make_frame(2);
  add_subgroup(g, "0", hnf({make_vec({2, 0})}, 2));
  FrameStructure r = purity_repair(g, {{"0", {make_vec({2, 0})}}});
  REQUIRE(r.rank == 3);
  const Mat& phi = r.functions.at("phi:0").matrix;
  CHECK(mat_vec(phi, make_vec({0, 0, 1})) == make_vec({2, 0, 0}));
  Lattice im = image(r.domain_of("phi:0"), phi);
  CHECK(im == hnf({make_vec({2, 0, 0})}, 3));
  for (const auto& [idx, s] : r.subgroups) CHECK(is_pure(s.lattice()));
  CHECK_NOTHROW(r.validate());

  CHECK_THROWS_AS(purity_repair(g, {{"0", {make_vec({4, 0})}}}), std::invalid_argument);
}

TEST_CASE("purity_repair output is pure on random frames") {
  std::mt19937_64 rng(5);
  std::uniform_int_distribution<Int> d(-4, 4);
  for (int trial = 0; trial < 60; ++trial) {
    FrameStructure f = make_frame(2);
    std::map<std::string, std::vector<Vec>> sets;
    for (int n = 0; n < 2; ++n) {
      std::vector<Vec> gens;
      for (int i = 0; i < 1 + (trial + n) % 3; ++i) gens.push_back(make_vec({d(rng), d(rng)}));
      add_subgroup(f, std::to_string(n), hnf(gens, 2));
      sets[std::to_string(n)] = gens;
    }
    FrameStructure e = purity_repair(f, sets);
    for (const auto& [idx, s] : e.subgroups) CHECK(purify(s.lattice()) == s.lattice());
    for (int n = 0; n < 2; ++n) {
      std::string i = std::to_string(n);
      Lattice im = image(e.domain_of("phi:" + i), e.functions.at("phi:" + i).matrix);
      std::vector<Vec> orig;
      for (const Vec& v : f.subgroups.at(i).lattice().rows()) {
        Vec w = Vec::Zero(e.rank);
        w.head(2) = v;
        orig.push_back(w);
      }
      CHECK(im == hnf(orig, e.rank));
    }
  }
}

TEST_CASE("rmod_view examples") {
  FiniteRing z2 = ring_zmod(2);
  TaggedFiniteGroup v = rmod_view(z2, regular_module(z2));
  CHECK(v.endo[1] == std::vector<int>{0, 1});
  CHECK(v.endo[0] == std::vector<int>{0, 0});

  FiniteRing z4 = ring_zmod(4);
  TaggedFiniteGroup w = rmod_view(z4, zmod_module(z4, 2));
  CHECK(w.endo[2] == std::vector<int>{0, 0});
  CHECK(w.endo[1] == std::vector<int>{0, 1});

  FiniteRing dual = ring_f2_dual();
  TaggedFiniteGroup trivial = rmod_view(dual, f2_dual_module({{0, 0}, {0, 0}}));
  TaggedFiniteGroup jordan = rmod_view(dual, f2_dual_module({{0, 1}, {0, 0}}));
  CHECK_FALSE(tagged_isomorphism(trivial, jordan).has_value());
  CHECK(tagged_isomorphism(jordan, rmod_view(dual, f2_dual_module({{0, 0}, {1, 0}}))).has_value());
  CHECK(tagged_isomorphism(jordan, jordan).has_value());
  // The regular module is also a Jordan block on F_2^2.
  CHECK(tagged_isomorphism(jordan, rmod_view(dual, regular_module(dual))).has_value());

  // Oracle for the separation: none of the 6 invertible matrices over F_2
  // conjugates the zero action to the Jordan block.
  int conjugating = 0;
  for (int a = 0; a < 16; ++a) {
    int m00 = a & 1, m01 = (a >> 1) & 1, m10 = (a >> 2) & 1, m11 = (a >> 3) & 1;
    if (((m00 * m11) ^ (m01 * m10)) == 0) continue;
    // M * 0 = J * M needs J * M = 0, i.e. the second row of M is zero.
    if (m10 == 0 && m11 == 0) ++conjugating;
  }
  CHECK(conjugating == 0);

  FiniteModule bad = zmod_module(z4, 2);
  bad.act[1][1] = 0;
  CHECK_THROWS(rmod_view(z4, bad));
}

TEST_CASE("omega_minus_reduction examples") {
  FrameStructure t = omega_minus_reduction(FiniteAbGroup(std::vector<Int>{}), {});
  CHECK(t.rank == 1);
  CHECK(t.subgroups.at("*").lattice() == full_lattice(1));

  FrameStructure z = omega_minus_reduction(FiniteAbGroup({2}), {{}, {{1}}});
  CHECK(z.subgroups.at("0").lattice() == z.subgroups.at("*").lattice());
  CHECK(z.subgroups.at("1").lattice() == full_lattice(2));

  // The quotient G'/G'_* carries G'_n onto G_n: index counts match.
  FiniteAbGroup g({2, 4});
  FrameStructure f = omega_minus_reduction(g, {{{0, 2}}, {{1, 0}}, {{1, 1}}});
  Int star_index = lattice_index(f.subgroups.at("*").lattice());
  CHECK(star_index == 8);
  CHECK(lattice_index(f.subgroups.at("0").lattice()) == 4);
  CHECK(lattice_index(f.subgroups.at("1").lattice()) == 4);
  CHECK(lattice_index(f.subgroups.at("2").lattice()) == 2);
}

TEST_CASE("frame_embed_search examples") {
  FrameStructure f = make_frame(2);
  add_subgroup(f, "0", hnf({make_vec({1, 2})}, 2));
  add_function(f, "s", make_mat({{0, 1}, {1, 0}}));
  auto self = frame_embed_search(f, f, 2);
  REQUIRE(self.found());
  CHECK(self.witness->matrix == Mat::Identity(2, 2));

  FrameStructure a = make_frame(1), b = make_frame(1);
  add_subgroup(a, "0", full_lattice(1));
  add_subgroup(b, "0", hnf({make_vec({2})}, 1));
  // Oracle over [-5, 5]: x embeds exactly when x is even and nonzero, so
  // multiplication by 2 is a witness and only the +-1 box misses it.
  for (Int x = -5; x <= 5; ++x)
    CHECK(verify_embedding(a, b, make_mat({{x}})) == (x != 0 && x % 2 == 0));
  CHECK(frame_embed_search(a, b, 1).verdict == SearchVerdict::NotUpToBound);
  for (Int bound = 2; bound <= 5; ++bound) {
    auto r = frame_embed_search(a, b, bound);
    REQUIRE(r.found());
    CHECK(r.witness->matrix(0, 0) % 2 == 0);
    // As frames up to isomorphism they differ: Z/2Z versus the trivial quotient.
    CHECK(frame_embed_search(a, b, bound, true).verdict == SearchVerdict::No);
  }

  FrameStructure p = make_frame(1);
  auto r = frame_embed_search(p, p, 1);
  REQUIRE(r.found());
  CHECK(r.witness->matrix == make_mat({{1}}));

  CHECK(frame_embed_search(make_frame(3), make_frame(2), 3).verdict == SearchVerdict::No);
}

TEST_CASE("frame_embed_search witnesses re-verify") {
  std::mt19937_64 rng(17);
  std::uniform_int_distribution<Int> d(-2, 2);
  int found = 0;
  for (int trial = 0; trial < 80; ++trial) {
    FrameStructure s = make_frame(2), t = make_frame(2);
    add_subgroup(s, "0", hnf({make_vec({d(rng), d(rng)})}, 2));
    add_subgroup(t, "0", hnf({make_vec({d(rng), d(rng)}), make_vec({d(rng), d(rng)})}, 2));
    auto r = frame_embed_search(s, t, 2);
    if (r.found()) {
      ++found;
      CHECK(verify_embedding(s, t, r.witness->matrix));
    }
  }
  CHECK(found > 0);
}

TEST_CASE("cofamily subgroups in embeddings") {
  FrameStructure s = make_frame(2), t = make_frame(2);
  s.subgroups["c"] = SubgroupSpec{Cofamily{{make_vec({1, 0})}}, false};
  t.subgroups["c"] = SubgroupSpec{Cofamily{{make_vec({0, 1})}}, false};
  CHECK_NOTHROW(s.validate());
  CHECK(cofamily_member(s.subgroups.at("c").cofamily(), make_vec({0, 3})));
  CHECK_FALSE(cofamily_member(s.subgroups.at("c").cofamily(), make_vec({-2, 0})));
  // The swap carries the exception line onto the exception line.
  CHECK(verify_embedding(s, t, make_mat({{0, 1}, {1, 0}}), true));
  CHECK_FALSE(verify_embedding(s, t, Mat::Identity(2, 2)));
  auto r = frame_embed_search(s, t, 1, true);
  CHECK(r.found());
}

TEST_CASE("char_poly") {
  CHECK(char_poly(make_mat({{2, 0}, {0, 3}})) == std::vector<Int>{1, -5, 6});
  CHECK(char_poly(make_mat({{0, 1}, {0, 0}})) == std::vector<Int>{1, 0, 0});
  CHECK(char_poly(Mat(0, 0)) == std::vector<Int>{1});
}
