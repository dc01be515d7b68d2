#pragma once

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "desk/abelian/frame.hpp"
#include "desk/trees/tree.hpp"

namespace desk {

// T (x) Z: the free group on the nodes of T with the predecessor map and the
// graded pieces indexed by color histories.
struct TensorStructure {
  ColoredTree tree;
  Mat pi;  // column s is e_{parent(s)}, column root is 0
  std::vector<std::vector<int>> history;  // color history per node
  std::map<std::vector<int>, Lattice> graded;

  int rank() const { return tree.size(); }
  std::vector<int> nodes_with_history(const std::vector<int>& h) const;
  std::vector<std::vector<int>> histories_at_height(int n) const;
};

// Throws std::logic_error if an invariant of the construction fails.
TensorStructure tensor_z(const ColoredTree& t);
// Same data as a frame: subgroups "n,i" (height n, color i) and total "pi".
FrameStructure tensor_frame(const TensorStructure& ts);

// Nonzero vector supported on nodes sharing one color history.
struct GradedElement {
  Vec a;
  std::vector<int> history;
  int height() const { return static_cast<int>(history.size()) - 1; }
};

// Empty history when a is zero or not graded.
std::vector<int> graded_history(const TensorStructure& ts, const Vec& a);
GradedElement graded(const TensorStructure& ts, const Vec& a);  // throws if not graded
std::vector<int> support(const Vec& a);

struct DerivedBounds {
  int max_support = 3;
  Int max_coeff = 2;
  int node_cap = 100000;
};

// Bounded fragment of T*_a: nodes are vectors b with pi^m(b) = a, support and
// coefficients within bounds; node 0 is a itself.
struct DerivedTree {
  ColoredTree tree;
  std::vector<Vec> vectors;
};

DerivedTree derived_tree(const TensorStructure& ts, const GradedElement& a, const DerivedBounds& b = {});
// Smallest bounds containing Claim 1's reverse image for a.
DerivedBounds covering_bounds(const GradedElement& a, int node_cap = 100000);

// All graded elements with the given history, support <= s and entries in [-c, c].
std::vector<GradedElement> graded_elements(const TensorStructure& ts, const std::vector<int>& history, int s, Int c);

struct Claim1Report {
  bool forward_ok = false;
  bool reverse_ok = false;
  bool search_ok = false;
  TreeEmbedding forward;  // derived tree -> product
  TreeEmbedding reverse;  // product -> derived tree
  bool ok() const { return forward_ok && reverse_ok && search_ok; }
};

Claim1Report claim1_check(const TensorStructure& ts, const GradedElement& a, const DerivedBounds& b = {});

// Goodness through the support criterion.
bool is_good(const TensorStructure& ts, const GradedElement& a, const DerivedBounds& b = {});
bool is_good(const TensorStructure& ts, const Vec& a, const DerivedBounds& b = {});

// The defining condition, by brute force over one history class: a is good iff
// a is not in the span of the class elements c with T*_a < T*_c. Returns the
// verdict for every element of graded_elements(ts, history, s, c).
std::vector<bool> goodness_oracle(const TensorStructure& ts, const std::vector<int>& history, int s, Int c,
                                  const DerivedBounds& b = {});

struct RecoveryBounds {
  int max_support = 0;  // 0: the size of the level
  Int max_coeff = 1;
};

// Biembeddability class keys of T*_a over good a at height n.
std::set<std::string> recover_invariants(const TensorStructure& ts, int n, const RecoveryBounds& b = {});
// The same set read off the tree directly.
std::set<std::string> subtree_classes(const ColoredTree& t, int n);

// Finite analogue of the coding of a pair of subgroup frames into one tree
// tensor structure plus the group.
struct CompositeStructure {
  FrameStructure frame;  // ambient Z^{|T|} + Z^r
  ColoredTree tree;
  int tree_rank = 0;
  int group_rank = 0;
  // One grafted copy of antichain[gamma] per (gamma, slot, rep); slot j
  // means psi sends the copy's root to enumeration[gamma][j].
  struct Copy {
    int gamma, slot, rep, start, size;
  };
  std::vector<Copy> copies;
  std::vector<std::vector<Vec>> enumeration;  // per gamma, length r + 1
  std::vector<std::string> gammas;
};

struct AntichainCheckFailure : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::pair<CompositeStructure, CompositeStructure> code_seq_finite(const FrameStructure& f0, const FrameStructure& f1,
                                                                  const std::vector<ColoredTree>& antichain,
                                                                  int multiplicity);
// Lift of an embedding m : f0 -> f1 whose subgroups have equal ranks (for
// instance an isomorphism). Throws if that rank condition fails.
Mat lift_composite_embedding(const CompositeStructure& c0, const CompositeStructure& c1, const Mat& m);

}  // namespace desk
