#include "desk/trees/tree.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <set>
#include <stdexcept>

namespace desk {

ColoredTree::ColoredTree(int root_color) : parent{0}, color{root_color}, children(1) {
  if (root_color < 0) throw std::invalid_argument("colors are natural numbers");
}

int ColoredTree::add_child(int node, int c) {
  if (node < 0 || node >= size()) throw std::out_of_range("add_child: no such node");
  if (c < 0) throw std::invalid_argument("colors are natural numbers");
  parent.push_back(node);
  color.push_back(c);
  children.emplace_back();
  children[node].push_back(size() - 1);
  return size() - 1;
}

int ColoredTree::height(int node) const {
  int h = 0;
  while (node != 0) {
    node = parent[node];
    ++h;
  }
  return h;
}

int ColoredTree::tree_height() const {
  int h = 0;
  for (int v = 0; v < size(); ++v) h = std::max(h, height(v));
  return h;
}

bool ColoredTree::is_ancestor(int s, int t) const {
  for (;;) {
    if (t == s) return true;
    if (t == 0) return false;
    t = parent[t];
  }
}

std::vector<int> ColoredTree::nodes_at_height(int h) const {
  std::vector<int> out;
  for (int v = 0; v < size(); ++v)
    if (height(v) == h) out.push_back(v);
  return out;
}

std::vector<int> ColoredTree::color_history(int node) const {
  std::vector<int> h;
  for (;;) {
    h.push_back(color[node]);
    if (node == 0) break;
    node = parent[node];
  }
  std::reverse(h.begin(), h.end());
  return h;
}

bool operator==(const ColoredTree& a, const ColoredTree& b) {
  return a.parent == b.parent && a.color == b.color;
}

namespace {

std::vector<std::string> child_terms(const ColoredTree& t, int node,
                                     std::vector<std::pair<int, std::string>>& keyed) {
  keyed.clear();
  for (int c : t.children[node]) keyed.emplace_back(t.color[c], to_term(t, c));
  std::sort(keyed.begin(), keyed.end());
  std::vector<std::string> out;
  for (auto& [col, s] : keyed) out.push_back(s);
  return out;
}

}  // namespace

std::string to_term(const ColoredTree& t, int node) {
  std::vector<std::pair<int, std::string>> keyed;
  std::vector<std::string> kids = child_terms(t, node, keyed);
  std::string s = "node(" + std::to_string(t.color[node]);
  for (const auto& k : kids) s += ", " + k;
  return s + ")";
}

std::string to_term(const ColoredTree& t) { return to_term(t, 0); }

namespace {

struct TermParser {
  const std::string& s;
  size_t i = 0;

  void ws() {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  }
  void expect(char c) {
    ws();
    if (i >= s.size() || s[i] != c)
      throw std::invalid_argument(std::string("tree term: expected '") + c + "' at offset " + std::to_string(i));
    ++i;
  }
  int number() {
    ws();
    size_t start = i;
    while (i < s.size() && std::isdigit(static_cast<unsigned char>(s[i]))) ++i;
    if (start == i) throw std::invalid_argument("tree term: expected a color at offset " + std::to_string(i));
    return std::stoi(s.substr(start, i - start));
  }
  void node(ColoredTree& t, int at) {
    ws();
    if (s.compare(i, 4, "node") != 0) throw std::invalid_argument("tree term: expected 'node' at offset " + std::to_string(i));
    i += 4;
    expect('(');
    int c = number();
    if (at < 0) {
      t = ColoredTree(c);
      at = 0;
    } else {
      at = t.add_child(at, c);
    }
    for (;;) {
      ws();
      if (i < s.size() && s[i] == ',') {
        ++i;
        node(t, at);
        continue;
      }
      expect(')');
      return;
    }
  }
};

void canonical_copy(const ColoredTree& t, int node, ColoredTree& out, int at) {
  std::vector<std::pair<std::pair<int, std::string>, int>> kids;
  for (int c : t.children[node]) kids.push_back({{t.color[c], to_term(t, c)}, c});
  std::sort(kids.begin(), kids.end());
  for (auto& [key, c] : kids) canonical_copy(t, c, out, out.add_child(at, t.color[c]));
}

}  // namespace

ColoredTree parse_term(const std::string& s) {
  TermParser p{s};
  ColoredTree t;
  p.node(t, -1);
  p.ws();
  if (p.i != s.size()) throw std::invalid_argument("tree term: trailing input");
  return t;
}

ColoredTree canonical(const ColoredTree& t) {
  ColoredTree out(t.color[0]);
  canonical_copy(t, 0, out, 0);
  return out;
}

bool verify_tree_embedding(const ColoredTree& t, const ColoredTree& s, const TreeEmbedding& f) {
  if (static_cast<int>(f.map.size()) != t.size()) return false;
  if (f.map[0] != 0) return false;
  for (int v = 0; v < t.size(); ++v) {
    int w = f.map[v];
    if (w < 0 || w >= s.size()) return false;
    if (s.color[w] != t.color[v]) return false;
    if (v != 0 && (w == 0 || s.parent[w] != f.map[t.parent[v]])) return false;
  }
  return true;
}

std::vector<std::vector<char>> embedding_table(const ColoredTree& t, const ColoredTree& s) {
  std::vector<std::vector<char>> emb(t.size(), std::vector<char>(s.size(), 0));
  // Children have larger indices, so a reverse sweep sees them first.
  for (int u = t.size() - 1; u >= 0; --u)
    for (int v = s.size() - 1; v >= 0; --v) {
      if (t.color[u] != s.color[v]) continue;
      bool ok = true;
      for (int cu : t.children[u]) {
        bool any = false;
        for (int cv : s.children[v])
          if (emb[cu][cv]) {
            any = true;
            break;
          }
        if (!any) {
          ok = false;
          break;
        }
      }
      emb[u][v] = ok;
    }
  return emb;
}

std::optional<TreeEmbedding> embed_search(const ColoredTree& t, const ColoredTree& s) {
  auto emb = embedding_table(t, s);
  if (!emb[0][0]) return std::nullopt;
  TreeEmbedding f;
  f.map.assign(t.size(), -1);
  f.map[0] = 0;
  for (int u = 1; u < t.size(); ++u) {
    int pv = f.map[t.parent[u]];
    for (int cv : s.children[pv])
      if (emb[u][cv]) {
        f.map[u] = cv;
        break;
      }
  }
  if (!verify_tree_embedding(t, s, f)) throw std::logic_error("embed_search: witness failed to verify");
  return f;
}

bool embeds(const ColoredTree& t, const ColoredTree& s) { return embedding_table(t, s)[0][0] != 0; }

bool biembeddable(const ColoredTree& t, const ColoredTree& s) { return embeds(t, s) && embeds(s, t); }

TreeEmbedding compose(const TreeEmbedding& f, const TreeEmbedding& g) {
  TreeEmbedding h;
  for (int x : f.map) h.map.push_back(g.map.at(x));
  return h;
}

std::vector<ColoredTree> enumerate_trees(int max_nodes, int colors) {
  std::vector<ColoredTree> out;
  std::set<std::string> seen;
  for (int n = 1; n <= max_nodes; ++n) {
    std::vector<std::pair<std::string, ColoredTree>> level;
    std::vector<int> par(n, 0), col(n, 0);
    // Odometer over parent[i] < i and colors.
    for (;;) {
      ColoredTree t(col[0]);
      for (int i = 1; i < n; ++i) t.add_child(par[i], col[i]);
      std::string key = to_term(t);
      if (seen.insert(key).second) level.emplace_back(key, canonical(t));
      int i = n - 1;
      for (; i >= 0; --i) {
        if (col[i] + 1 < colors) {
          ++col[i];
          break;
        }
        col[i] = 0;
        if (i > 0 && par[i] + 1 < i) {
          ++par[i];
          break;
        }
        par[i] = 0;
      }
      if (i < 0) break;
    }
    std::sort(level.begin(), level.end(), [](auto& a, auto& b) { return a.first < b.first; });
    for (auto& [k, t] : level) out.push_back(std::move(t));
  }
  return out;
}

ColoredTree subtree_at(const ColoredTree& t, int node, std::vector<int>* to_original) {
  ColoredTree out(t.color.at(node));
  if (to_original) *to_original = {node};
  // Descendants of node have larger indices, so one forward sweep suffices.
  std::map<int, int> id{{node, 0}};
  for (int v = node + 1; v < t.size(); ++v) {
    auto it = id.find(t.parent[v]);
    if (it == id.end()) continue;
    id[v] = out.add_child(it->second, t.color[v]);
    if (to_original) to_original->push_back(v);
  }
  return out;
}

ColoredTree glue_at_root(const std::vector<ColoredTree>& parts) {
  if (parts.empty()) throw std::invalid_argument("glue_at_root: nothing to glue");
  ColoredTree out(parts[0].color[0]);
  for (const ColoredTree& p : parts) {
    if (p.color[0] != out.color[0]) throw std::invalid_argument("glue_at_root: root colors differ");
    std::vector<int> id(p.size());
    id[0] = 0;
    for (int v = 1; v < p.size(); ++v) id[v] = out.add_child(id[p.parent[v]], p.color[v]);
  }
  return out;
}

void graft(ColoredTree& t, int node, const ColoredTree& branch, int color_shift) {
  std::vector<int> id(branch.size());
  id[0] = t.add_child(node, branch.color[0] + color_shift);
  for (int v = 1; v < branch.size(); ++v) id[v] = t.add_child(id[branch.parent[v]], branch.color[v] + color_shift);
}

TreeEmbedding ProductResult::projection(int k) const {
  TreeEmbedding f;
  for (const auto& tup : tuples) f.map.push_back(tup[k]);
  return f;
}

ProductResult product(const std::vector<ColoredTree>& trees, int node_cap) {
  if (trees.empty()) throw std::invalid_argument("product: need at least one factor");
  ProductResult r;
  for (const auto& t : trees)
    if (t.color[0] != trees[0].color[0]) {
      r.empty = true;
      return r;
    }
  const size_t k = trees.size();
  r.tree = ColoredTree(trees[0].color[0]);
  r.tuples.push_back(std::vector<int>(k, 0));
  for (size_t at = 0; at < r.tuples.size(); ++at) {
    const std::vector<int> cur = r.tuples[at];
    // All tuples of children sharing one color.
    std::vector<int> pick(k, 0);
    bool any_empty = false;
    for (size_t i = 0; i < k; ++i) any_empty |= trees[i].children[cur[i]].empty();
    if (any_empty) continue;
    for (;;) {
      std::vector<int> tup(k);
      for (size_t i = 0; i < k; ++i) tup[i] = trees[i].children[cur[i]][pick[i]];
      bool same = true;
      for (size_t i = 1; i < k; ++i) same &= trees[i].color[tup[i]] == trees[0].color[tup[0]];
      if (same) {
        if (r.tree.size() >= node_cap) throw NodeBudgetExceeded("product: node cap exceeded");
        r.tree.add_child(static_cast<int>(at), trees[0].color[tup[0]]);
        r.tuples.push_back(tup);
      }
      size_t i = k;
      while (i > 0 && pick[i - 1] + 1 == static_cast<int>(trees[i - 1].children[cur[i - 1]].size())) {
        pick[i - 1] = 0;
        --i;
      }
      if (i == 0) break;
      ++pick[i - 1];
    }
  }
  return r;
}

namespace {

void core_into(const ColoredTree& t, int node, ColoredTree& out, int at);

ColoredTree core_of(const ColoredTree& t, int node) {
  ColoredTree out(t.color[node]);
  core_into(t, node, out, 0);
  return out;
}

void core_into(const ColoredTree& t, int node, ColoredTree& out, int at) {
  std::vector<std::pair<std::string, ColoredTree>> kids;
  for (int c : t.children[node]) {
    ColoredTree k = core_of(t, c);
    kids.emplace_back(std::to_string(k.color[0]) + "|" + to_term(k), std::move(k));
  }
  std::sort(kids.begin(), kids.end(), [](auto& a, auto& b) { return a.first < b.first; });
  std::vector<char> keep(kids.size(), 1);
  for (size_t i = 0; i < kids.size(); ++i)
    for (size_t j = 0; j < kids.size() && keep[i]; ++j) {
      if (i == j || !keep[j]) continue;
      if (!embeds(kids[i].second, kids[j].second)) continue;
      // Mutually embeddable cores are equal; keep the first copy.
      if (embeds(kids[j].second, kids[i].second) && i < j) continue;
      keep[i] = 0;
    }
  for (size_t i = 0; i < kids.size(); ++i)
    if (keep[i]) graft(out, at, kids[i].second);
}

}  // namespace

ColoredTree reduced_core(const ColoredTree& t) { return canonical(core_of(t, 0)); }

std::string biembeddability_key(const ColoredTree& t) { return to_term(reduced_core(t)); }

int parity_coloring(const std::vector<int>& s) {
  int sum = 0;
  for (int x : s) sum += x;
  return (sum + static_cast<int>(s.size())) % 2;
}

namespace {

void grow_increasing(ColoredTree& t, int at, std::vector<int>& seq, int kappa, int depth, const Coloring& f) {
  if (static_cast<int>(seq.size()) == depth) return;
  for (int x = seq.back() + 1; x < kappa; ++x) {
    seq.push_back(x);
    int c = f(seq);
    if (c < 0) throw std::invalid_argument("silver_antichain: coloring must be natural");
    grow_increasing(t, t.add_child(at, c), seq, kappa, depth, f);
    seq.pop_back();
  }
}

void grow_decreasing(ColoredTree& t, int at, int below) {
  for (int x = below - 1; x >= 0; --x) grow_decreasing(t, t.add_child(at, 2), x);
}

}  // namespace

std::vector<ColoredTree> silver_antichain(int kappa, int depth, const Coloring& f) {
  if (kappa < 2 || depth < 2) throw std::invalid_argument("silver_antichain: need kappa >= 2 and depth >= 2");
  std::vector<ColoredTree> out;
  for (int alpha = 0; alpha < kappa; ++alpha) {
    std::vector<int> seq{alpha};
    ColoredTree t(f(seq));
    grow_increasing(t, 0, seq, kappa, depth, f);
    grow_decreasing(t, 0, alpha);
    out.push_back(t);
  }
  return out;
}

int antichain_violations(const std::vector<ColoredTree>& trees) {
  int bad = 0;
  for (size_t i = 0; i < trees.size(); ++i)
    for (size_t j = 0; j < trees.size(); ++j)
      if (i != j && embeds(trees[i], trees[j])) ++bad;
  return bad;
}

}  // namespace desk
