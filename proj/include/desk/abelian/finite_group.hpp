#pragma once

#include <vector>

#include "desk/abelian/integer.hpp"

namespace desk {

// Z/d_1 x ... x Z/d_k with d_1 | d_2 | ... and every d_i >= 2. Elements are
// tuples of residues; the enumeration order is lexicographic with the last
// coordinate varying fastest.
struct FiniteAbGroup {
  std::vector<Int> invariant_factors;

  explicit FiniteAbGroup(std::vector<Int> factors = {});
  Int order() const;
  std::vector<std::vector<Int>> elements() const;
  std::vector<Int> add(const std::vector<Int>& a, const std::vector<Int>& b) const;
  std::vector<Int> scale(Int n, const std::vector<Int>& a) const;
  std::size_t index_of(const std::vector<Int>& a) const;
  bool operator==(const FiniteAbGroup& o) const { return invariant_factors == o.invariant_factors; }
};

// Every group of order m up to isomorphism, via divisibility chains.
std::vector<FiniteAbGroup> groups_of_order(Int m);

// Subgroup generated by a set of elements, as element indices (sorted).
std::vector<std::size_t> generated_subgroup(const FiniteAbGroup& g,
                                            const std::vector<std::vector<Int>>& gens);

}  // namespace desk
