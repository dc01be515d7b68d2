#include "desk/padic/coding.hpp"

#include <algorithm>
#include <functional>
#include <random>
#include <string>

namespace desk {

namespace {

// Number of nonzero tuples in [-h, h]^values with sum c_i v_i = 0 mod m.
std::uint64_t vanishing(const std::vector<u128>& values, u128 m, int h, std::uint64_t& checked) {
  const size_t k = values.size();
  if (k == 0) return 0;
  std::vector<int> c(k, -h);
  std::vector<u128> step(k), wrap(k);
  u128 s = 0;
  for (size_t i = 0; i < k; ++i) {
    step[i] = values[i] % m;
    wrap[i] = (step[i] * static_cast<unsigned>(2 * h)) % m;
    s = (s + m - (step[i] * static_cast<unsigned>(h)) % m) % m;
  }
  std::uint64_t hits = 0;
  for (;;) {
    ++checked;
    if (s == 0) {
      bool all_zero = std::all_of(c.begin(), c.end(), [](int x) { return x == 0; });
      if (!all_zero) ++hits;
    }
    size_t i = k;
    while (i > 0 && c[i - 1] == h) {
      c[i - 1] = -h;
      s = (s + m - wrap[i - 1]) % m;
      --i;
    }
    if (i == 0) return hits;
    ++c[i - 1];
    s = (s + step[i - 1]) % m;
  }
}

void monomials(int vars, int d, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == vars) {
    out.push_back(cur);
    return;
  }
  int used = 0;
  for (int e : cur) used += e;
  for (int e = 0; e + used <= d; ++e) {
    cur.push_back(e);
    monomials(vars, d, cur, out);
    cur.pop_back();
  }
}

double tuple_count(size_t k, int h) {
  double n = 1;
  for (size_t i = 0; i < k; ++i) n *= 2 * h + 1;
  return n;
}

}  // namespace

std::uint64_t count_vanishing_relations(const TagFamily& t, int d, int h,
                                        std::uint64_t* relations_checked) {
  const u128 m = ipow(t.p, t.K);
  const int N = t.size();
  std::uint64_t checked = 0, hits = 0;
  if (N >= 2) {
    // Monomials of degree <= d in gamma_1 .. gamma_{N-1}; the empty one is gamma_0.
    std::vector<std::vector<int>> mons;
    std::vector<int> cur;
    monomials(N - 1, d, cur, mons);
    if (tuple_count(mons.size(), h) > 2e9) throw std::invalid_argument("certificate: relation space too large");
    std::vector<u128> vals;
    for (const auto& e : mons) {
      PadicTrunc x = PadicTrunc::from_int(t.p, t.K, 1);
      for (int v = 0; v < N - 1; ++v)
        for (int j = 0; j < e[v]; ++j) x = x * t.gammas[v + 1];
      vals.push_back(x.residue());
    }
    hits += vanishing(vals, m, h, checked);
    // The family used for subgroup recovery.
    for (int mm = 1; mm < N; ++mm) {
      std::vector<u128> ext;
      for (int n = 0; n < N; ++n) ext.push_back(t.gammas[n].residue());
      for (int n = 1; n < N; ++n) ext.push_back((t.gammas[mm] * t.gammas[n]).residue());
      if (tuple_count(ext.size(), h) > 2e9) throw std::invalid_argument("certificate: relation space too large");
      hits += vanishing(ext, m, h, checked);
    }
  }
  if (relations_checked) *relations_checked = checked;
  return hits;
}

TagFamily gen_tags(std::uint64_t p, int K, int N, int d, int h, std::uint64_t seed, int max_attempts) {
  if (!is_prime(p)) throw std::invalid_argument("gen_tags: p must be prime");
  if (K < 8) throw std::invalid_argument("gen_tags: K must be at least 8");
  if (N < 1) throw std::invalid_argument("gen_tags: N must be at least 1");
  const u128 m = ipow(p, K);
  std::mt19937_64 rng(seed);
  for (int attempt = 1; attempt <= max_attempts; ++attempt) {
    TagFamily t;
    t.p = p;
    t.K = K;
    t.seed = seed;
    t.gammas.push_back(PadicTrunc::from_int(p, K, 1));
    for (int n = 1; n < N; ++n) {
      PadicTrunc g;
      do {
        u128 v = (u128(rng()) % m);
        g = PadicTrunc(p, K, v);
      } while (!g.is_unit());
      t.gammas.push_back(g);
    }
    std::uint64_t checked = 0;
    if (count_vanishing_relations(t, d, h, &checked) == 0) {
      t.certificate = {d, h, true, attempt, checked};
      return t;
    }
  }
  throw CertificationFailure("gen_tags: no certified family within " + std::to_string(max_attempts) +
                             " draws (p=" + std::to_string(p) + ", K=" + std::to_string(K) +
                             ", d=" + std::to_string(d) + ", h=" + std::to_string(h) + ")");
}

CodedGroup coded_group(int rank, const std::vector<Lattice>& tagged, const TagFamily& tags) {
  if (tags.size() != static_cast<int>(tagged.size()) + 2)
    throw std::invalid_argument("coded_group: tag family size must be subgroup count + 2");
  CodedGroup c;
  c.rank = rank;
  c.tags = tags;
  c.G = {full_lattice(rank), full_lattice(rank)};
  for (const Lattice& l : tagged) {
    if (l.ambient_rank != rank) throw std::invalid_argument("coded_group: rank mismatch");
    if (p_purify(l, static_cast<Int>(tags.p)) != l)
      throw std::invalid_argument("coded_group: tagged subgroup is not p-pure");
    c.G.push_back(l);
  }
  c.source = make_frame(rank);
  for (size_t n = 0; n < c.G.size(); ++n) add_subgroup(c.source, std::to_string(n), c.G[n]);
  return c;
}

CodedGroup coded_group(const FrameStructure& f, const TagFamily& tags) {
  std::vector<Lattice> tagged;
  for (const auto& [idx, s] : f.subgroups) {
    if (!s.is_explicit()) throw std::invalid_argument("coded_group: cofamily subgroups unsupported");
    tagged.push_back(s.lattice());
  }
  return coded_group(f.rank, tagged, tags);
}

FormalSum normalize(const CodedGroup& c, const FormalSum& s) {
  const Int p = static_cast<Int>(c.tags.p);
  std::vector<Term> sorted = s.terms;
  std::stable_sort(sorted.begin(), sorted.end(), [](const Term& a, const Term& b) { return a.n < b.n; });
  FormalSum out;
  for (size_t i = 0; i < sorted.size();) {
    const int n = sorted[i].n;
    if (n < 0 || n >= static_cast<int>(c.G.size())) throw std::invalid_argument("normalize: unknown index");
    size_t j = i;
    int kmin = sorted[i].k;
    for (; j < sorted.size() && sorted[j].n == n; ++j) kmin = std::min(kmin, sorted[j].k);
    Vec b = Vec::Zero(c.rank);
    for (size_t t = i; t < j; ++t) {
      if (sorted[t].b.size() != c.rank) throw std::invalid_argument("normalize: dimension mismatch");
      if (!member(c.G[n], sorted[t].b)) throw std::invalid_argument("normalize: b_n not in G_n");
      Vec add = sorted[t].b;
      for (int e = 0; e < sorted[t].k - kmin; ++e)
        for (int q = 0; q < add.size(); ++q) add(q) = checked_mul(add(q), p);
      for (int q = 0; q < b.size(); ++q) b(q) = checked_add(b(q), add(q));
    }
    i = j;
    if (is_zero(b)) continue;
    int k = kmin;
    for (;;) {
      bool div = true;
      for (int q = 0; q < b.size() && div; ++q) div = b(q) % p == 0;
      if (!div) break;
      Vec half = b / p;
      if (!member(c.G[n], half)) break;
      b = half;
      ++k;
    }
    out.terms.push_back({n, k, b});
  }
  return out;
}

FormalSum embed_vector(const CodedGroup& c, const Vec& v) {
  return normalize(c, FormalSum{{Term{0, 0, v}}});
}

FormalSum add(const CodedGroup& c, const FormalSum& a, const FormalSum& b) {
  FormalSum s = a;
  s.terms.insert(s.terms.end(), b.terms.begin(), b.terms.end());
  return normalize(c, s);
}

FormalSum negate(const FormalSum& a) {
  FormalSum s = a;
  for (Term& t : s.terms) t.b = -t.b;
  return s;
}

FormalSum times_p(const CodedGroup& c, const FormalSum& a, int j) {
  FormalSum s = a;
  for (Term& t : s.terms) t.k += j;
  return normalize(c, s);
}

int required_shift(const FormalSum& s) {
  int shift = 0;
  for (const Term& t : s.terms) shift = std::max(shift, -t.k);
  return shift;
}

std::vector<PadicTrunc> scaled_values(const CodedGroup& c, const FormalSum& s, int shift) {
  const auto& tg = c.tags;
  std::vector<PadicTrunc> out(c.rank, PadicTrunc(tg.p, tg.K));
  std::vector<char> symbolic(c.rank, 0);
  for (const Term& t : s.terms) {
    if (t.n >= tg.size()) throw std::invalid_argument("scaled_values: index beyond tag family");
    if (t.k + shift < 0) throw std::invalid_argument("scaled_values: shift too small");
    PadicTrunc g = tg.gammas[t.n].shift_up(t.k + shift);
    for (int i = 0; i < c.rank; ++i) {
      if (t.b(i) == 0) continue;
      symbolic[i] = 1;
      out[i] = out[i] + g * PadicTrunc::from_int(tg.p, tg.K, t.b(i));
    }
  }
  for (int i = 0; i < c.rank; ++i)
    if (symbolic[i] && out[i].is_zero())
      throw PrecisionExhausted("coordinate " + std::to_string(i) + " vanishes at precision " +
                               std::to_string(tg.K));
  return out;
}

bool admissible(const CodedGroup& c, const FormalSum& s) {
  const int shift = required_shift(s);
  if (shift == 0) return true;
  for (const PadicTrunc& x : scaled_values(c, s, shift)) {
    if (x.is_zero()) continue;
    if (*x.valuation() < shift) return false;
  }
  return true;
}

std::vector<PadicTrunc> evaluate(const CodedGroup& c, const FormalSum& s) {
  const int shift = required_shift(s);
  std::vector<PadicTrunc> v = scaled_values(c, s, shift);
  for (PadicTrunc& x : v) {
    if (!x.is_zero() && *x.valuation() < shift) throw std::invalid_argument("evaluate: sum is not admissible");
    x = x.shift_down(shift);
  }
  return v;
}

FormalSum represent(const CodedGroup& c, const FormalSum& s) {
  FormalSum r = normalize(c, s);
  if (!admissible(c, r)) throw std::invalid_argument("represent: sum is not admissible");
  return r;
}

std::optional<FormalSum> times_gamma(const CodedGroup& c, int m, const FormalSum& a0) {
  if (m < 1 || m >= static_cast<int>(c.G.size())) throw std::invalid_argument("times_gamma: index out of range");
  FormalSum a = normalize(c, a0);
  if (a.terms.empty()) return FormalSum{};
  // gamma_m gamma_n for n >= 1 is independent of every gamma: only a pure
  // n = 0 sum can have a representation.
  if (a.terms.size() != 1 || a.terms[0].n != 0) return std::nullopt;
  const Term& t = a.terms[0];
  // gamma_m p^k b has a representation iff p^j b lies in G_m for some j;
  // G_m is p-pure, so j = 0 already decides it.
  if (!member(c.G[m], t.b)) return std::nullopt;
  std::optional<FormalSum> rep = normalize(c, FormalSum{{Term{m, t.k, t.b}}});
  if (!rep) return std::nullopt;
  const int shift = std::max(required_shift(a), required_shift(*rep));
  std::vector<PadicTrunc> lhs = scaled_values(c, a, shift);
  std::vector<PadicTrunc> rhs = scaled_values(c, *rep, shift);
  for (int i = 0; i < c.rank; ++i)
    if (c.tags.gammas[m] * lhs[i] != rhs[i]) throw std::logic_error("times_gamma: evaluation mismatch");
  return rep;
}

bool recover_subgroup(const CodedGroup& c, int m, const FormalSum& a) {
  if (!admissible(c, a)) return false;
  auto prod = times_gamma(c, m, a);
  return prod && admissible(c, *prod);
}

FormalSum LiftedEmbedding::operator()(const FormalSum& s) const {
  FormalSum out;
  for (const Term& t : s.terms) out.terms.push_back({t.n, t.k, mat_vec(matrix, t.b)});
  return normalize(*target, out);
}

LiftedEmbedding lift_embedding(const FrameEmbedding& f, const CodedGroup& c, const CodedGroup& c2) {
  if (c.tags.gammas != c2.tags.gammas) throw std::invalid_argument("lift_embedding: tag families differ");
  std::string why;
  if (!verify_embedding(c.source, c2.source, f.matrix, false, &why))
    throw std::invalid_argument("lift_embedding: not a frame embedding (" + why + ")");
  return LiftedEmbedding{f.matrix, &c2};
}

}  // namespace desk
