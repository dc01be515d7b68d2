#pragma once

#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace desk {

// Finite rooted tree with natural-number colors. Node 0 is the root and every
// parent index is smaller than its child's, so index order is a topological order.
struct ColoredTree {
  std::vector<int> parent;  // parent[0] == 0
  std::vector<int> color;
  std::vector<std::vector<int>> children;

  explicit ColoredTree(int root_color = 0);
  int add_child(int node, int c);
  int size() const { return static_cast<int>(color.size()); }
  int height(int node) const;
  int tree_height() const;
  bool is_ancestor(int s, int t) const;  // s <= t
  std::vector<int> nodes_at_height(int h) const;
  std::vector<int> color_history(int node) const;  // root first
};

bool operator==(const ColoredTree& a, const ColoredTree& b);

// node(color, child, ...) with children in canonical order (color, then form).
std::string to_term(const ColoredTree& t);
std::string to_term(const ColoredTree& t, int node);
ColoredTree parse_term(const std::string& s);
// Same shape with nodes renumbered in canonical preorder.
ColoredTree canonical(const ColoredTree& t);

// node -> node map: root to root, parents to parents, colors kept.
struct TreeEmbedding {
  std::vector<int> map;
};

bool verify_tree_embedding(const ColoredTree& t, const ColoredTree& s, const TreeEmbedding& f);
// emb[u][v]: the subtree at u maps into the subtree at v.
std::vector<std::vector<char>> embedding_table(const ColoredTree& t, const ColoredTree& s);
// Complete: an empty result means no embedding exists.
std::optional<TreeEmbedding> embed_search(const ColoredTree& t, const ColoredTree& s);
bool embeds(const ColoredTree& t, const ColoredTree& s);
bool biembeddable(const ColoredTree& t, const ColoredTree& s);
TreeEmbedding compose(const TreeEmbedding& f, const TreeEmbedding& g);  // g after f

// All trees with 1..max_nodes nodes and colors < colors, one per isomorphism type,
// in order of size and then term.
std::vector<ColoredTree> enumerate_trees(int max_nodes, int colors);
// Uniform-ish random tree: each new node picks a random earlier parent.
template <class Rng>
ColoredTree random_tree(Rng& rng, int nodes, int colors) {
  ColoredTree t(static_cast<int>(rng() % colors));
  for (int i = 1; i < nodes; ++i) t.add_child(static_cast<int>(rng() % i), static_cast<int>(rng() % colors));
  return t;
}

// to_original, when given, receives the node of t behind each subtree node.
ColoredTree subtree_at(const ColoredTree& t, int node, std::vector<int>* to_original = nullptr);
// Two copies (or n copies) of t glued at the root.
ColoredTree glue_at_root(const std::vector<ColoredTree>& parts);
// Attach a copy of `branch` (colors shifted) as a new child of `node`.
void graft(ColoredTree& t, int node, const ColoredTree& branch, int color_shift = 0);

struct ProductResult {
  bool empty = false;  // root colors disagree
  ColoredTree tree;
  std::vector<std::vector<int>> tuples;  // tuples[node][k] = node of factor k
  TreeEmbedding projection(int k) const;
};

struct NodeBudgetExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ProductResult product(const std::vector<ColoredTree>& trees, int node_cap = 100000);

// Reduced core: children that embed into a sibling are dropped, recursively.
// Its serialization is a complete biembeddability invariant.
ColoredTree reduced_core(const ColoredTree& t);
std::string biembeddability_key(const ColoredTree& t);

using Coloring = std::function<int(const std::vector<int>&)>;
// f*(s) = (sum of entries + length) mod 2.
int parity_coloring(const std::vector<int>& s);

// S_alpha for alpha < kappa: increasing sequences from alpha of length <= depth
// colored by f, with the strictly decreasing sequences below alpha grafted at
// the root in color 2.
std::vector<ColoredTree> silver_antichain(int kappa, int depth, const Coloring& f);
// Number of ordered pairs (i, j), i != j, with S_i embedding into S_j.
int antichain_violations(const std::vector<ColoredTree>& trees);

}  // namespace desk
