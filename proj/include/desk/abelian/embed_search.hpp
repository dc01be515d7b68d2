#pragma once

#include <optional>
#include <string>

#include "desk/abelian/frame.hpp"

namespace desk {

enum class SearchVerdict { Yes, NotUpToBound, No };

struct EmbedSearchResult {
  SearchVerdict verdict = SearchVerdict::NotUpToBound;
  std::optional<FrameEmbedding> witness;
  Int bound = 0;
  // Why a No was certified (an invariant mismatch), empty otherwise.
  std::string reason;
  std::size_t nodes_visited = 0;

  bool found() const { return verdict == SearchVerdict::Yes; }
};

// Exhaustive search over matrices with entries in [-bound, bound]. A Yes
// carries a verified witness. NotUpToBound says nothing about larger entries;
// No is only returned when an invariant forbids any embedding at all.
EmbedSearchResult frame_embed_search(const FrameStructure& source, const FrameStructure& target,
                                     Int bound, bool iso = false);

// Isomorphism invariants: rank, quotient invariants of every explicit subgroup
// and of pairwise sums and intersections, and for each total function its
// characteristic polynomial and the quotients by images of phi - c for small c.
// Frames with different signatures are certainly not isomorphic.
std::string iso_invariants(const FrameStructure& f);

// Characteristic polynomial det(xI - A), coefficients from x^n down to x^0.
std::vector<Int> char_poly(const Mat& a);

}  // namespace desk
