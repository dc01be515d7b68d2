#pragma once

#include <map>
#include <string>
#include <vector>

#include "desk/abelian/finite_group.hpp"
#include "desk/abelian/frame.hpp"

namespace desk {

// Frame over Z^|G| whose subgroup "K" is the kernel of a -> sum a(b) b, with
// coordinates indexed by G.elements().
FrameStructure augmentation_reduction(const FiniteAbGroup& g);
Lattice augmentation_kernel(const FiniteAbGroup& g);

// (Z^r, H) |-> Z^r x Z^rank(H) with one total endomorphism "phi": zero on
// the first factor and the basis of H on the fresh copy.
FrameStructure graph_trick(const FrameStructure& f);
// ker(phi) and im(phi), re-expressed in coordinates of ker(phi).
FrameStructure graph_trick_recover(const FrameStructure& e);

struct EliminateOptions {
  // Also tag 0 x G. Without it the coding only sees G x 0 and the diagonal,
  // which lets the two summands move independently and collapses
  // non-conjugate endomorphisms (2I and [[2,-2],[0,2]] on Z^2, for one).
  bool tag_second_axis = true;
};

// Subgroups-only frame over G x G: copies G_i x 0, graphs "graph:j",
// "*0" = G x 0, "*1" = diagonal and (by default) "*2" = 0 x G.
FrameStructure eliminate_functions(const FrameStructure& f, EliminateOptions opt = {});

// Ambient G x (+)_n Z^{S_n}; subgroup n becomes the fresh summand, "*" = G x 0,
// and "phi:n" maps the summand onto the original G_n.
FrameStructure purity_repair(const FrameStructure& f,
                             const std::map<std::string, std::vector<Vec>>& generating_sets);

// Finite rings and modules by tables; elements are 0..size-1.
struct FiniteRing {
  int size = 0;
  std::vector<std::vector<int>> add, mul;
  int zero = 0, one = 0;
};

struct FiniteModule {
  int size = 0;
  std::vector<std::vector<int>> add;
  std::vector<std::vector<int>> act;  // act[r][x] = r * x
  int zero = 0;
};

// (M, +) with one endomorphism per ring element.
struct TaggedFiniteGroup {
  int size = 0;
  std::vector<std::vector<int>> add;
  std::vector<std::vector<int>> endo;
};

TaggedFiniteGroup rmod_view(const FiniteRing& r, const FiniteModule& m);
// Brute force over all bijections; returns the witness permutation if any.
std::optional<std::vector<int>> tagged_isomorphism(const TaggedFiniteGroup& a,
                                                   const TaggedFiniteGroup& b);

FiniteRing ring_zmod(int n);
// F_2[x]/(x^2): element a + b x is encoded as a + 2b.
FiniteRing ring_f2_dual();
// The regular module R_R, and a module over R given additively as F_2^k
// (elements encoded as bit vectors) with each generator acting by a matrix.
FiniteModule regular_module(const FiniteRing& r);
FiniteModule zmod_module(const FiniteRing& r, int n);
FiniteModule f2_dual_module(const std::vector<std::vector<int>>& x_action);

// G' = Z^|G|; "*" is the augmentation kernel and subgroup n is "*" plus the
// coordinates of the elements of subgroup n (given by generators).
FrameStructure omega_minus_reduction(const FiniteAbGroup& g,
                                     const std::vector<std::vector<std::vector<Int>>>& subgroups);

}  // namespace desk
