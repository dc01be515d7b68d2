#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "desk/abelian/frame.hpp"
#include "desk/padic/padic.hpp"

namespace desk {

struct CertificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct IndependenceCertificate {
  int degree = 0;
  int height = 0;
  bool verified = false;
  int attempts = 0;
  std::uint64_t relations_checked = 0;
};

// gammas[0] = 1; the rest are units drawn from the seed.
struct TagFamily {
  std::uint64_t p = 2;
  int K = 64;
  std::uint64_t seed = 0;
  std::vector<PadicTrunc> gammas;
  IndependenceCertificate certificate;

  int size() const { return static_cast<int>(gammas.size()); }
};

// Draws units until no integer relation of degree <= d and height <= h
// vanishes mod p^K, both over monomials in the family and linearly over
// (gamma_n) followed by (gamma_m gamma_n : n >= 1) for every m >= 1.
TagFamily gen_tags(std::uint64_t p, int K, int N, int d, int h, std::uint64_t seed,
                   int max_attempts = 64);

// Re-runs the certificate check on a given family; returns the number of
// vanishing relations found (0 means certified).
std::uint64_t count_vanishing_relations(const TagFamily& t, int d, int h,
                                        std::uint64_t* relations_checked = nullptr);

// One term gamma_n p^k b.
struct Term {
  int n = 0;
  int k = 0;
  Vec b;
  bool operator==(const Term& o) const { return n == o.n && k == o.k && b == o.b; }
};

// Terms sorted by n with at most one term per n once normalized.
struct FormalSum {
  std::vector<Term> terms;
  bool operator==(const FormalSum& o) const { return terms == o.terms; }
  bool operator!=(const FormalSum& o) const { return !(*this == o); }
};

// The p-pure subgroup of Z_p^r generated by gamma_n G_n. G[0] = G[1] = Z^r.
struct CodedGroup {
  FrameStructure source;
  TagFamily tags;
  int rank = 0;
  std::vector<Lattice> G;
};

// Prepends two copies of the full lattice to the tagged subgroups. Each tagged
// subgroup must be p-pure, and tags.size() must equal tagged.size() + 2.
CodedGroup coded_group(int rank, const std::vector<Lattice>& tagged, const TagFamily& tags);
// Same, taking the explicit subgroups of a frame in index order.
CodedGroup coded_group(const FrameStructure& f, const TagFamily& tags);

// Merge equal n, push division by p into k, drop zero terms.
FormalSum normalize(const CodedGroup& c, const FormalSum& s);
FormalSum embed_vector(const CodedGroup& c, const Vec& v);
FormalSum add(const CodedGroup& c, const FormalSum& a, const FormalSum& b);
FormalSum negate(const FormalSum& a);
FormalSum times_p(const CodedGroup& c, const FormalSum& a, int j = 1);

// p^shift * sum, coordinatewise mod p^K. Throws PrecisionExhausted when a
// coordinate with a nonzero symbolic coefficient truncates to 0.
std::vector<PadicTrunc> scaled_values(const CodedGroup& c, const FormalSum& s, int shift);
int required_shift(const FormalSum& s);

bool admissible(const CodedGroup& c, const FormalSum& s);
// Truncated value; precision K - required_shift(s). Throws if not admissible.
std::vector<PadicTrunc> evaluate(const CodedGroup& c, const FormalSum& s);
// The normalized representation of an admissible sum.
FormalSum represent(const CodedGroup& c, const FormalSum& s);

// The representation of gamma_m a inside the coded group, if it has one.
// The symbolic answer is cross-checked against truncated evaluation.
std::optional<FormalSum> times_gamma(const CodedGroup& c, int m, const FormalSum& a);
// a in G_m iff a and gamma_m a both lie in the coded group.
bool recover_subgroup(const CodedGroup& c, int m, const FormalSum& a);

// f_* on formal sums: apply the matrix to every b_n and renormalize.
struct LiftedEmbedding {
  Mat matrix;
  const CodedGroup* target = nullptr;
  FormalSum operator()(const FormalSum& s) const;
};
LiftedEmbedding lift_embedding(const FrameEmbedding& f, const CodedGroup& c, const CodedGroup& c2);

}  // namespace desk
