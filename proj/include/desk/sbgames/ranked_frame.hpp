#pragma once

#include <string>
#include <variant>
#include <vector>

#include "desk/abelian/frame.hpp"

namespace desk {

// omega * beta + k, or infinity. Only what the ranked frames use.
struct SmallOrdinal {
  bool infinite = false;
  int beta = 0;
  int k = 0;

  static SmallOrdinal fin(int beta, int k) { return {false, beta, k}; }
  static SmallOrdinal omega_times(int alpha) { return {false, alpha, 0}; }
  static SmallOrdinal infinity() { return {true, 0, 0}; }
  static SmallOrdinal natural(int k) { return {false, 0, k}; }

  bool is_finite() const { return !infinite; }
  std::string str() const;  // "inf", "w*b+k", or "k"
  static SmallOrdinal parse(const std::string& s);
};

bool operator==(const SmallOrdinal& a, const SmallOrdinal& b);
bool operator<(const SmallOrdinal& a, const SmallOrdinal& b);
inline bool operator!=(const SmallOrdinal& a, const SmallOrdinal& b) { return !(a == b); }
inline bool operator<=(const SmallOrdinal& a, const SmallOrdinal& b) { return !(b < a); }
inline bool operator>=(const SmallOrdinal& a, const SmallOrdinal& b) { return !(a < b); }
inline bool operator>(const SmallOrdinal& a, const SmallOrdinal& b) { return b < a; }

// A member of Gamma_I on Z^rank with its standard basis as the marked basis.
// phi sends basis vectors to basis vectors or 0 (phi[c] == -1). The subgroup
// family is every pure line except the lines through the X coordinates, so
// X = union of those lines minus 0. rho lives on lines, i.e. on coordinates.
struct RankedFrame {
  std::vector<int> phi;
  std::vector<char> in_x;
  std::vector<SmallOrdinal> rho;  // read only where in_x

  int rank() const { return static_cast<int>(phi.size()); }
  int add_coordinate(int phi_target, bool x, SmallOrdinal r = {});
  std::vector<int> x_coordinates() const;
  // Children under phi: kids[c] = {d : phi[d] == c}.
  std::vector<std::vector<int>> preimages() const;
  // Coordinates below the given count, as a frame.
  RankedFrame prefix(int count) const;
};

bool operator==(const RankedFrame& a, const RankedFrame& b);

// The same data as a subgroup-and-function frame: index "lines" is the
// cofamily with the X coordinates as exceptions, "phi" is total.
FrameStructure to_frame(const RankedFrame& rf);
// The restriction to a phi-closed set of coordinates, in the given order.
FrameStructure restricted_frame(const RankedFrame& rf, const std::vector<int>& coords);

// The order on X: a <= b iff phi^n(a) = b through X. Stored by cover edges
// (a, phi(a)) with both ends in X.
struct XOrder {
  std::vector<int> elements;
  std::vector<std::pair<int, int>> covers;  // (below, above)
  bool leq(int a, int b) const;
};

XOrder x_order(const RankedFrame& rf);

struct RankFunction {
  std::vector<std::pair<int, int>> rank;  // (element, rank), elements in order
};
struct DescendingChainWitness {
  std::vector<int> cycle;
};

std::variant<RankFunction, DescendingChainWitness> wellfounded_check(const XOrder& order);

struct ValidationReport {
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

// The ranked-frame conditions, the rank bound they imply, and
// phi^nilpotency == 0. Along a phi-edge b -> a inside X with rho(a) finite,
// rho(b) < rho(a).
ValidationReport gamma_validate(const RankedFrame& rf, int nilpotency);

// Least k with phi^k == 0: the longest chain c, phi(c), ... of nonzero
// coordinates. INT_MAX when phi has a cycle.
int nilpotency_index(const RankedFrame& rf);

// A partial alpha-embedding: map[c] is the image of coordinate c, or -1 when
// c lies outside the domain. alpha == -1 ignores X and rho.
struct PartialAlphaEmbedding {
  int alpha = -1;
  std::vector<int> map;

  int image(int c) const { return c < static_cast<int>(map.size()) ? map[c] : -1; }
  std::vector<int> domain() const;
  std::vector<int> range() const;
  bool total_on(int rank) const;
};

PartialAlphaEmbedding inverse(const PartialAlphaEmbedding& f, int target_rank);
ValidationReport validate_partial(const RankedFrame& src, const RankedFrame& dst, const PartialAlphaEmbedding& f);
// The map as a matrix on restricted_frame(src, f.domain()).
Mat embedding_matrix(const RankedFrame& dst, const PartialAlphaEmbedding& f);

struct Extension {
  RankedFrame frame;
  PartialAlphaEmbedding h;
};

// rf2 = rf1 plus a fresh summand for the coordinates of rf0 outside dom(f).
// The new coordinates are not in X, so X is unchanged.
Extension extend_minus1(const RankedFrame& rf0, const RankedFrame& rf1, const PartialAlphaEmbedding& f, int n);
// Same summand, but h[X^0] joins X with the three-case ranks. f and its
// inverse must be partial alpha-embeddings with 0 <= beta < alpha.
Extension extend_beta(const RankedFrame& rf0, const RankedFrame& rf1, const PartialAlphaEmbedding& f, int beta,
                      int n);

}  // namespace desk
