#pragma once

#include <string>
#include <vector>

#include "desk/trees/tree.hpp"

namespace desk {

// Hereditarily finite set. Elements are kept sorted and duplicate-free, so
// structural equality is extensional equality.
class HFSet {
 public:
  HFSet() = default;
  explicit HFSet(std::vector<HFSet> elems);

  const std::vector<HFSet>& elements() const { return elems_; }
  bool empty() const { return elems_.empty(); }
  bool contains(const HFSet& x) const;
  int rank() const;
  std::string str() const;  // {} , {{}} , {{},{{}}}

  friend bool operator==(const HFSet& a, const HFSet& b) { return a.elems_ == b.elems_; }
  friend bool operator<(const HFSet& a, const HFSet& b);

 private:
  std::vector<HFSet> elems_;
};

HFSet parse_hfset(const std::string& s);
HFSet singleton(const HFSet& x);
HFSet set_union(const HFSet& a, const HFSet& b);
// tcl(A), sorted, not including A itself.
std::vector<HFSet> transitive_closure(const HFSet& a);
// von Neumann numeral n.
HFSet ordinal(int n);

// T_A: the tree of rank-decreasing sequences through tcl(A u {A}) from A,
// colored 0 when the last entry belongs to the one before it and 1 otherwise,
// with a copy of antichain[rank(last)] (colors + 2) grafted above every node.
ColoredTree tree_of_set(const HFSet& a, const std::vector<ColoredTree>& antichain);
// The preliminary tree without grafts.
ColoredTree tree_of_set_core(const HFSet& a);

}  // namespace desk
