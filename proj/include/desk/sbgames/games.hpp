#pragma once

#include <functional>
#include <map>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "desk/sbgames/ranked_frame.hpp"
#include "desk/trees/tree.hpp"

namespace desk {

// Pointed structures are a structure plus a tuple of elements (nodes or
// coordinates). Repeated entries are allowed.
using Tuple = std::vector<int>;

// --- trees -----------------------------------------------------------------

// Embedding of t into s with a[i] -> b[i]. Exact.
bool pointed_tree_embeds(const ColoredTree& t, const Tuple& a, const ColoredTree& s, const Tuple& b);
bool sim0(const ColoredTree& t, const Tuple& a, const ColoredTree& s, const Tuple& b);
bool sim_alpha(const ColoredTree& t, const Tuple& a, const ColoredTree& s, const Tuple& b, int alpha);

// No memo, and pointed embeddings found by trying every node map.
bool naive_pointed_embeds(const ColoredTree& t, const Tuple& a, const ColoredTree& s, const Tuple& b);
bool naive_sim_alpha(const ColoredTree& t, const Tuple& a, const ColoredTree& s, const Tuple& b, int alpha);

// --- frames ----------------------------------------------------------------

// Embeddings between ranked frames as structures (rho plays no part): maps
// sending coordinates to coordinates, injective, commuting with phi, keeping
// subgroup coordinates among subgroup coordinates. Only coordinates are
// searched, so a negative answer is relative to that bound.
//
// The engine interns the phi-forests' subtree shapes, so repeated checks
// against the same frames reuse work.
class ForestEngine {
 public:
  // Registers a frame (restricted to coordinates < limit, which must be
  // closed under phi) and returns its handle.
  int add(const RankedFrame& rf, int limit = -1);
  // Is there an embedding of frame p into frame q sending a[i] to b[i]?
  bool embeds(int p, const Tuple& a, int q, const Tuple& b);
  int limit(int handle) const { return frames_[handle].limit; }
  const RankedFrame& frame(int handle) const { return frames_[handle].rf; }
  std::size_t shapes() const { return shapes_.size(); }

 private:
  struct Shape {
    bool non_x;
    int label;  // pin label, -1 unpinned, -2 virtual root
    std::vector<std::pair<int, int>> kids;  // (shape, multiplicity), sorted
  };
  struct Indexed {
    RankedFrame rf;
    int limit;
    std::vector<std::vector<int>> kids;
    std::vector<int> roots;
    std::vector<int> order;  // children before parents
    std::vector<int> shape;  // unpinned shapes
    int root_shape;
  };
  int intern(Shape s);
  bool shape_embeds(int sp, int sq);
  // Root shape of the forest with the pinned nodes relabelled.
  int pinned_root(const Indexed& ix, const std::vector<std::pair<int, int>>& pins);

  std::vector<Indexed> frames_;
  std::vector<Shape> shapes_;
  std::map<std::tuple<bool, int, std::vector<std::pair<int, int>>>, int> ids_;
  std::map<std::pair<int, int>, bool> memo_;
};

bool frame_embeds(const RankedFrame& p, const Tuple& a, const RankedFrame& q, const Tuple& b);
bool sim0(const RankedFrame& m, const Tuple& a, const RankedFrame& n, const Tuple& b);

struct GameStep {
  int depth;
  bool in_first;  // the move is made in the first structure
  int move;
  int response;  // -1: no response survives
};

// Back-and-forth over coordinate moves. When transcript is given, it receives
// the responses chosen at the top level and, on failure, the refuting move.
bool sim_alpha(const RankedFrame& m, const Tuple& a, const RankedFrame& n, const Tuple& b, int alpha,
               std::vector<GameStep>* transcript = nullptr);

}  // namespace desk
