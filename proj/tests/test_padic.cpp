#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <random>

#include "desk/abelian/embed_search.hpp"
#include "desk/padic/coding.hpp"

using namespace desk;

namespace {

const TagFamily& tags3() {
  static const TagFamily t = gen_tags(2, 64, 3, 2, 3, 1);
  return t;
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

}  // namespace

TEST_CASE("PadicTrunc arithmetic and digits") {
  PadicTrunc a = PadicTrunc::from_int(2, 8, -1);
  CHECK(a.residue() == 255);
  CHECK(a.digits() == std::vector<int>(8, 1));
  PadicTrunc b = PadicTrunc::from_digits(3, {2, 1, 0, 0});
  CHECK(b.residue() == 5);
  CHECK((b * b).residue() == 25);
  CHECK((b - b).is_zero());
  CHECK(PadicTrunc::from_int(2, 64, -3).residue() == ~std::uint64_t(0) - 2);
  CHECK((PadicTrunc::from_int(2, 64, -1) * PadicTrunc::from_int(2, 64, -1)).residue() == 1);
  CHECK(PadicTrunc::from_int(5, 4, 50).valuation() == 2);
  CHECK_FALSE(PadicTrunc::from_int(2, 8, 256).valuation().has_value());
  CHECK(PadicTrunc::from_int(2, 8, 12).shift_down(2).residue() == 3);
  CHECK(PadicTrunc::from_int(2, 8, 12).shift_down(2).precision() == 6);
  CHECK_THROWS(PadicTrunc(2, 65));
  CHECK_THROWS(PadicTrunc(4, 8));
}

TEST_CASE("valuation is exact below the precision") {
  std::mt19937_64 rng(2);
  for (int trial = 0; trial < 2000; ++trial) {
    const std::uint64_t p = trial % 2 ? 3 : 2;
    const int K = p == 2 ? 20 : 12;
    std::int64_t x = static_cast<std::int64_t>(rng() % 1000000) - 500000;
    PadicTrunc t = PadicTrunc::from_int(p, K, x);
    if (t.is_zero()) continue;
    // Lifts x + j p^K share every digit below K, hence the valuation.
    std::int64_t pk = static_cast<std::int64_t>(ipow(p, K));
    for (std::int64_t j = -3; j <= 3; ++j) {
      std::int64_t lift = x + j * pk;
      int v = 0;
      while (lift % static_cast<std::int64_t>(p) == 0) {
        lift /= static_cast<std::int64_t>(p);
        ++v;
      }
      CHECK(*t.valuation() == v);
    }
  }
}

TEST_CASE("gen_tags examples") {
  TagFamily one = gen_tags(2, 64, 1, 2, 3, 9);
  REQUIRE(one.size() == 1);
  CHECK(one.gammas[0].residue() == 1);

  const TagFamily& t = tags3();
  CHECK(t.certificate.verified);
  for (const auto& g : t.gammas) CHECK(g.residue() % 2 == 1);
  CHECK(gen_tags(2, 64, 3, 2, 3, 1).gammas == t.gammas);

  TagFamily small = gen_tags(2, 16, 3, 2, 3, 4);
  CHECK(small.certificate.verified);
  // 7^6 monomial tuples plus 7^5 for each extended family.
  CHECK(small.certificate.relations_checked == 117649u + 2u * 16807u);
  // Independent oracle: expand every relation of degree <= 2 directly.
  const std::uint64_t m = 1 << 16;
  std::uint64_t g1 = small.gammas[1].residue(), g2 = small.gammas[2].residue();
  std::uint64_t mons[6] = {1, g1, g2, g1 * g1 % m, g1 * g2 % m, g2 * g2 % m};
  int zero = 0;
  int c[6];
  for (int code = 0; code < 117649; ++code) {
    int x = code;
    bool all0 = true;
    for (int i = 0; i < 6; ++i) {
      c[i] = x % 7 - 3;
      x /= 7;
      all0 &= c[i] == 0;
    }
    if (all0) continue;
    long long s = 0;
    for (int i = 0; i < 6; ++i) s += c[i] * static_cast<long long>(mons[i]);
    if (((s % static_cast<long long>(m)) + m) % m == 0) ++zero;
  }
  CHECK(zero == 0);
  CHECK(count_vanishing_relations(small, 2, 3) == 0);

  TagFamily bad = small;
  bad.gammas[2] = bad.gammas[1];
  CHECK(count_vanishing_relations(bad, 2, 3) > 0);
  CHECK_THROWS_AS(gen_tags(2, 8, 3, 2, 3, 0, 3), CertificationFailure);
}

TEST_CASE("evaluate examples") {
  CodedGroup c = coded_group(2, {full_lattice(2)}, tags3());
  auto z = evaluate(c, FormalSum{});
  CHECK(z.size() == 2);
  CHECK(z[0].is_zero());
  CHECK(z[1].is_zero());

  auto v = evaluate(c, FormalSum{{Term{0, 0, make_vec({3, -2})}}});
  CHECK(v[0] == PadicTrunc::from_int(2, 64, 3));
  CHECK(v[1] == PadicTrunc::from_int(2, 64, -2));

  // gamma_1 is a unit, so gamma_1 b / 2 is integral only when 2 | b.
  for (const Vec& b : box(2, 3)) {
    if (is_zero(b)) continue;
    FormalSum s{{Term{1, -1, b}}};
    bool expect = b(0) % 2 == 0 && b(1) % 2 == 0;
    CHECK(admissible(c, s) == expect);
  }
  auto half = evaluate(c, FormalSum{{Term{1, -1, make_vec({2, 0})}}});
  CHECK(half[0] == tags3().gammas[1].truncate(63));
  CHECK_THROWS(evaluate(c, FormalSum{{Term{1, -1, make_vec({1, 0})}}}));
}

TEST_CASE("precision exhaustion is reported") {
  CodedGroup c = coded_group(1, {full_lattice(1)}, tags3());
  CHECK_THROWS_AS(evaluate(c, FormalSum{{Term{0, 64, make_vec({1})}}}), PrecisionExhausted);
  CHECK_NOTHROW(evaluate(c, FormalSum{{Term{0, 63, make_vec({1})}}}));
}

TEST_CASE("represent normalizes") {
  CodedGroup c = coded_group(2, {hnf({make_vec({1, 1})}, 2)}, tags3());
  FormalSum r = represent(c, FormalSum{{Term{0, 1, make_vec({4, 6})}}});
  REQUIRE(r.terms.size() == 1);
  CHECK(r.terms[0].k == 2);
  CHECK(r.terms[0].b == make_vec({2, 3}));
  // Division inside G_2 only: (2,2)/2 = (1,1) is in G_2.
  FormalSum s = represent(c, FormalSum{{Term{2, 0, make_vec({2, 2})}}});
  CHECK(s.terms[0].k == 1);
  CHECK(s.terms[0].b == make_vec({1, 1}));
  CHECK(represent(c, FormalSum{{Term{1, 0, make_vec({0, 0})}}}).terms.empty());
  // Terms with the same n merge.
  FormalSum m = represent(c, FormalSum{{Term{0, 0, make_vec({1, 0})}, Term{0, 0, make_vec({1, 0})}}});
  CHECK(m == FormalSum{{Term{0, 1, make_vec({1, 0})}}});

  // s + s against brute-force renormalization of the doubled sum.
  std::mt19937_64 rng(8);
  std::uniform_int_distribution<Int> d(-3, 3), kk(-2, 2);
  for (int trial = 0; trial < 300; ++trial) {
    FormalSum x;
    x.terms.push_back({0, static_cast<int>(kk(rng)), make_vec({d(rng), d(rng)})});
    x.terms.push_back({1, static_cast<int>(kk(rng)), make_vec({d(rng), d(rng)})});
    Int t = d(rng);
    x.terms.push_back({2, static_cast<int>(kk(rng)), make_vec({t, t})});
    FormalSum n = normalize(c, x);
    FormalSum twice = add(c, n, n);
    FormalSum expect;
    for (const Term& term : n.terms) expect.terms.push_back({term.n, term.k + 1, term.b});
    CHECK(twice == expect);
  }
}

TEST_CASE("representations are unique on a small exhaustive range") {
  CodedGroup c = coded_group(1, {full_lattice(1)}, tags3());
  std::vector<std::pair<std::uint64_t, FormalSum>> seen;
  std::vector<std::optional<Term>> options{std::nullopt};
  for (int k = -2; k <= 2; ++k)
    for (Int b : {-3, -1, 1, 3}) options.push_back(Term{0, k, make_vec({b})});
  for (auto& o0 : options)
    for (auto& o1 : options)
      for (auto& o2 : options) {
        FormalSum s;
        int n = 0;
        for (auto* o : {&o0, &o1, &o2}) {
          if (*o) s.terms.push_back({n, (*o)->k, (*o)->b});
          ++n;
        }
        seen.emplace_back(scaled_values(c, s, 2)[0].residue(), s);
      }
  std::sort(seen.begin(), seen.end(), [](auto& a, auto& b) { return a.first < b.first; });
  int collisions = 0;
  for (size_t i = 1; i < seen.size(); ++i) collisions += seen[i].first == seen[i - 1].first;
  CHECK(collisions == 0);
  CHECK(seen.size() == 21u * 21u * 21u);
}

TEST_CASE("recover_subgroup") {
  Lattice g2 = hnf({make_vec({1, 2})}, 2);
  CodedGroup c = coded_group(2, {g2}, tags3());
  CHECK(recover_subgroup(c, 2, FormalSum{}));
  CHECK(recover_subgroup(c, 2, embed_vector(c, make_vec({2, 4}))));
  CHECK_FALSE(recover_subgroup(c, 2, embed_vector(c, make_vec({1, 0}))));
  CHECK(recover_subgroup(c, 1, embed_vector(c, make_vec({1, 0}))));
  // Ground truth on the box.
  for (const Vec& v : box(2, 4)) CHECK(recover_subgroup(c, 2, embed_vector(c, v)) == member(g2, v));
  // Elements off the integer lattice never recover.
  CHECK_FALSE(recover_subgroup(c, 2, FormalSum{{Term{2, 0, make_vec({1, 2})}}}));
  CHECK_FALSE(recover_subgroup(c, 1, FormalSum{{Term{1, 0, make_vec({1, 2})}}}));
  CHECK_THROWS(coded_group(2, {hnf({make_vec({2, 0})}, 2)}, tags3()));
}

TEST_CASE("lift_embedding commutes with evaluation") {
  CodedGroup c = coded_group(2, {hnf({make_vec({1, 0})}, 2)}, tags3());
  CodedGroup c2 = coded_group(2, {hnf({make_vec({1, 1})}, 2)}, tags3());
  Mat m = make_mat({{1, 0}, {1, 3}});
  LiftedEmbedding f = lift_embedding(FrameEmbedding{m, 0}, c, c2);
  LiftedEmbedding id = lift_embedding(FrameEmbedding{Mat::Identity(2, 2), 0}, c, c);
  CHECK_THROWS(lift_embedding(FrameEmbedding{Mat::Identity(2, 2), 0}, c, c2));
  CHECK(f(embed_vector(c, make_vec({1, 2}))) == embed_vector(c2, make_vec({1, 7})));

  std::mt19937_64 rng(21);
  std::uniform_int_distribution<Int> d(-3, 3), kk(-2, 2);
  int tested = 0;
  for (int trial = 0; trial < 500; ++trial) {
    FormalSum s = normalize(c, FormalSum{{Term{0, static_cast<int>(kk(rng)), make_vec({d(rng), d(rng)})},
                                          Term{1, static_cast<int>(kk(rng)), make_vec({d(rng), d(rng)})},
                                          Term{2, static_cast<int>(kk(rng)), make_vec({d(rng), 0})}}});
    CHECK(id(s) == s);
    if (!admissible(c, s)) continue;
    ++tested;
    FormalSum t = f(s);
    REQUIRE(admissible(c2, t));
    auto lhs = evaluate(c2, t);
    auto rhs = evaluate(c, s);
    int prec = std::min(lhs[0].precision(), rhs[0].precision());
    for (int i = 0; i < 2; ++i) {
      PadicTrunc expect = PadicTrunc(2, prec);
      for (int j = 0; j < 2; ++j) expect = expect + PadicTrunc::from_int(2, prec, m(i, j)) * rhs[j].truncate(prec);
      CHECK(lhs[i].truncate(prec) == expect);
    }
    CHECK(f(times_p(c, s)) == times_p(c2, t));
    CHECK(f(add(c, s, s)) == add(c2, t, t));
  }
  CHECK(tested > 50);
}

TEST_CASE("recovered subgroups follow frame automorphisms") {
  Lattice g2 = hnf({make_vec({1, 1})}, 2);
  CodedGroup c = coded_group(2, {g2}, tags3());
  int autos = 0;
  // Search finds the automorphisms with entries in [-1, 1] one at a time by
  // constraining the image of e_1.
  for (const Vec& col : box(2, 1)) {
    if (is_zero(col)) continue;
    FrameStructure pinned = c.source;
    add_subgroup(pinned, "pin", hnf({make_vec({1, 0})}, 2));
    FrameStructure target = c.source;
    add_subgroup(target, "pin", hnf({col}, 2));
    auto r = frame_embed_search(pinned, target, 1, true);
    if (!r.found()) continue;
    ++autos;
    LiftedEmbedding f = lift_embedding(*r.witness, c, c);
    for (const Vec& v : box(2, 3))
      CHECK(recover_subgroup(c, 2, f(embed_vector(c, v))) == member(g2, mat_vec(r.witness->matrix, v)));
  }
  CHECK(autos > 0);
}
