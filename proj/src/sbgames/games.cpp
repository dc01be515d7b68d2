#include "desk/sbgames/games.hpp"

#include <algorithm>
#include <queue>
#include <stdexcept>

namespace desk {

namespace {

// Ancestors of pinned nodes are forced: embeddings keep heights and parents.
bool forced_images(const ColoredTree& t, const Tuple& a, const ColoredTree& s, const Tuple& b,
                   std::vector<int>& forced) {
  if (a.size() != b.size()) return false;
  forced.assign(t.size(), -1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    int u = a[i], v = b[i];
    if (u < 0 || u >= t.size() || v < 0 || v >= s.size()) throw std::out_of_range("pin outside the tree");
    if (t.height(u) != s.height(v)) return false;
    while (true) {
      if (forced[u] >= 0 && forced[u] != v) return false;
      forced[u] = v;
      if (u == 0) break;
      u = t.parent[u];
      v = s.parent[v];
    }
  }
  return true;
}

using Memo = std::map<std::tuple<int, Tuple, Tuple>, bool>;

template <class Base>
bool back_and_forth(int size_m, int size_n, const Tuple& a, const Tuple& b, int alpha, const Base& base, Memo* memo,
                    std::vector<GameStep>* transcript, int depth) {
  if (alpha == 0) return base(a, b);
  std::tuple<int, Tuple, Tuple> key{alpha, a, b};
  if (memo) {
    auto it = memo->find(key);
    if (it != memo->end() && !transcript) return it->second;
  }
  bool ok = true;
  for (int side = 0; side < 2 && ok; ++side) {
    int moves = side == 0 ? size_m : size_n, answers = side == 0 ? size_n : size_m;
    for (int x = 0; x < moves && ok; ++x) {
      int found = -1;
      for (int y = 0; y < answers && found < 0; ++y) {
        Tuple a2 = a, b2 = b;
        a2.push_back(side == 0 ? x : y);
        b2.push_back(side == 0 ? y : x);
        if (back_and_forth(size_m, size_n, a2, b2, alpha - 1, base, memo, nullptr, depth + 1)) found = y;
      }
      if (transcript) transcript->push_back({depth, side == 0, x, found});
      if (found < 0) ok = false;
    }
  }
  if (memo) (*memo)[key] = ok;
  return ok;
}

}  // namespace

bool pointed_tree_embeds(const ColoredTree& t, const Tuple& a, const ColoredTree& s, const Tuple& b) {
  std::vector<int> forced;
  if (!forced_images(t, a, s, b, forced)) return false;
  int n = t.size(), m = s.size();
  std::vector<std::vector<char>> ok(n, std::vector<char>(m, 0));
  for (int u = n - 1; u >= 0; --u)
    for (int v = 0; v < m; ++v) {
      if (t.color[u] != s.color[v] || (forced[u] >= 0 && forced[u] != v)) continue;
      if (t.height(u) != s.height(v)) continue;
      bool all = true;
      for (int c : t.children[u]) {
        bool any = false;
        for (int w : s.children[v])
          if (ok[c][w]) {
            any = true;
            break;
          }
        if (!any) {
          all = false;
          break;
        }
      }
      ok[u][v] = all;
    }
  return ok[0][0];
}

bool sim0(const ColoredTree& t, const Tuple& a, const ColoredTree& s, const Tuple& b) {
  return pointed_tree_embeds(t, a, s, b) && pointed_tree_embeds(s, b, t, a);
}

bool sim_alpha(const ColoredTree& t, const Tuple& a, const ColoredTree& s, const Tuple& b, int alpha) {
  Memo memo;
  auto base = [&](const Tuple& x, const Tuple& y) { return sim0(t, x, s, y); };
  return back_and_forth(t.size(), s.size(), a, b, alpha, base, &memo, nullptr, 0);
}

bool naive_pointed_embeds(const ColoredTree& t, const Tuple& a, const ColoredTree& s, const Tuple& b) {
  if (a.size() != b.size()) return false;
  int n = t.size(), m = s.size();
  std::vector<int> map(n, 0);
  // odometer over every map t -> s; parents precede children, so a prefix
  // that already fails can be skipped
  auto prefix_ok = [&](int upto) {
    for (int u = 0; u <= upto; ++u) {
      if (t.color[u] != s.color[map[u]]) return false;
      if (u == 0 ? map[0] != 0 : s.parent[map[u]] != map[t.parent[u]] || map[u] == 0) return false;
    }
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a[i] <= upto && map[a[i]] != b[i]) return false;
    return true;
  };
  int u = 0;
  while (u >= 0) {
    if (map[u] >= m) {
      map[u] = 0;
      --u;
      if (u >= 0) ++map[u];
      continue;
    }
    if (!prefix_ok(u)) {
      ++map[u];
      continue;
    }
    if (u == n - 1) {
      TreeEmbedding f{map};
      if (verify_tree_embedding(t, s, f)) return true;
      ++map[u];
      continue;
    }
    ++u;
  }
  return false;
}

bool naive_sim_alpha(const ColoredTree& t, const Tuple& a, const ColoredTree& s, const Tuple& b, int alpha) {
  if (alpha == 0) return naive_pointed_embeds(t, a, s, b) && naive_pointed_embeds(s, b, t, a);
  for (int x = 0; x < t.size(); ++x) {
    bool any = false;
    for (int y = 0; y < s.size() && !any; ++y) {
      Tuple a2 = a, b2 = b;
      a2.push_back(x);
      b2.push_back(y);
      any = naive_sim_alpha(t, a2, s, b2, alpha - 1);
    }
    if (!any) return false;
  }
  for (int y = 0; y < s.size(); ++y) {
    bool any = false;
    for (int x = 0; x < t.size() && !any; ++x) {
      Tuple a2 = a, b2 = b;
      a2.push_back(x);
      b2.push_back(y);
      any = naive_sim_alpha(t, a2, s, b2, alpha - 1);
    }
    if (!any) return false;
  }
  return true;
}

// --- frames ----------------------------------------------------------------

int ForestEngine::intern(Shape s) {
  std::sort(s.kids.begin(), s.kids.end());
  auto key = std::make_tuple(s.non_x, s.label, s.kids);
  auto it = ids_.find(key);
  if (it != ids_.end()) return it->second;
  int id = static_cast<int>(shapes_.size());
  shapes_.push_back(std::move(s));
  ids_.emplace(std::move(key), id);
  return id;
}

namespace {

std::vector<std::pair<int, int>> counted(std::vector<int> v) {
  std::sort(v.begin(), v.end());
  std::vector<std::pair<int, int>> out;
  for (int x : v) {
    if (!out.empty() && out.back().first == x) ++out.back().second;
    else out.push_back({x, 1});
  }
  return out;
}

}  // namespace

int ForestEngine::add(const RankedFrame& rf, int limit) {
  Indexed ix;
  ix.limit = limit < 0 ? rf.rank() : limit;
  ix.rf = rf.prefix(ix.limit);
  int r = ix.limit;
  ix.kids.assign(r, {});
  for (int c = 0; c < r; ++c) {
    if (ix.rf.phi[c] >= 0) ix.kids[ix.rf.phi[c]].push_back(c);
    else ix.roots.push_back(c);
  }
  // iterative postorder from the roots
  std::vector<std::pair<int, std::size_t>> stack;
  for (int root : ix.roots) {
    stack.push_back({root, 0});
    while (!stack.empty()) {
      auto& [c, i] = stack.back();
      if (i < ix.kids[c].size()) {
        int k = ix.kids[c][i++];
        stack.push_back({k, 0});
      } else {
        ix.order.push_back(c);
        stack.pop_back();
      }
    }
  }
  if (static_cast<int>(ix.order.size()) != r) throw std::invalid_argument("phi has a cycle");
  ix.shape.assign(r, -1);
  for (int c : ix.order) {
    std::vector<int> ks;
    for (int k : ix.kids[c]) ks.push_back(ix.shape[k]);
    ix.shape[c] = intern({!ix.rf.in_x[c], -1, counted(ks)});
  }
  std::vector<int> rs;
  for (int c : ix.roots) rs.push_back(ix.shape[c]);
  ix.root_shape = intern({false, -2, counted(rs)});
  frames_.push_back(std::move(ix));
  return static_cast<int>(frames_.size()) - 1;
}

int ForestEngine::pinned_root(const Indexed& ix, const std::vector<std::pair<int, int>>& pins) {
  if (pins.empty()) return ix.root_shape;
  std::map<int, int> label;
  for (auto [c, l] : pins) label[c] = l;
  // pinned nodes and their ancestors, deepest first
  std::map<int, int> depth;
  for (auto [c, l] : pins)
    for (int x = c; x >= 0 && !depth.count(x); x = ix.rf.phi[x]) {
      int d = 0;
      for (int y = x; ix.rf.phi[y] >= 0; y = ix.rf.phi[y]) ++d;
      depth[x] = d;
    }
  std::vector<std::pair<int, int>> dirty;
  for (auto [x, d] : depth) dirty.push_back({-d, x});
  std::sort(dirty.begin(), dirty.end());
  auto adjust = [&](std::vector<std::pair<int, int>> kids, const std::vector<std::pair<int, int>>& swaps) {
    std::map<int, int> cnt(kids.begin(), kids.end());
    for (auto [from, to] : swaps) {
      if (--cnt[from] == 0) cnt.erase(from);
      ++cnt[to];
    }
    return std::vector<std::pair<int, int>>(cnt.begin(), cnt.end());
  };
  std::map<int, std::vector<std::pair<int, int>>> swaps;  // parent (-1 root) -> (old, new)
  for (auto [nd, x] : dirty) {
    const Shape& base = shapes_[ix.shape[x]];
    auto it = label.find(x);
    Shape s{base.non_x, it == label.end() ? -1 : it->second, adjust(base.kids, swaps[x])};
    int id = intern(std::move(s));
    swaps[ix.rf.phi[x]].push_back({ix.shape[x], id});
  }
  const Shape& root = shapes_[ix.root_shape];
  return intern({false, -2, adjust(root.kids, swaps[-1])});
}

bool ForestEngine::shape_embeds(int sp, int sq) {
  if (sp == sq) return true;
  auto key = std::make_pair(sp, sq);
  auto it = memo_.find(key);
  if (it != memo_.end()) return it->second;
  // copies: shapes_ may grow during recursion
  Shape p = shapes_[sp], q = shapes_[sq];
  bool ok = p.label == q.label && !(p.non_x && !q.non_x);
  int need = 0, have = 0;
  for (auto [s, c] : p.kids) need += c;
  for (auto [s, c] : q.kids) have += c;
  ok = ok && need <= have;
  if (ok && need > 0) {
    // max flow: source -> p kinds -> q kinds -> sink
    int np = static_cast<int>(p.kids.size()), nq = static_cast<int>(q.kids.size());
    int src = np + nq, snk = src + 1, nodes = snk + 1;
    struct Edge {
      int to, cap, rev;
    };
    std::vector<std::vector<Edge>> g(nodes);
    auto link = [&](int u, int v, int c) {
      g[u].push_back({v, c, static_cast<int>(g[v].size())});
      g[v].push_back({u, 0, static_cast<int>(g[u].size()) - 1});
    };
    for (int i = 0; i < np; ++i) link(src, i, p.kids[i].second);
    for (int j = 0; j < nq; ++j) link(np + j, snk, q.kids[j].second);
    for (int i = 0; i < np; ++i) {
      bool any = false;
      for (int j = 0; j < nq; ++j)
        if (shape_embeds(p.kids[i].first, q.kids[j].first)) {
          link(i, np + j, p.kids[i].second);
          any = true;
        }
      if (!any) {
        ok = false;
        break;
      }
    }
    int flow = 0;
    while (ok && flow < need) {
      std::vector<std::pair<int, int>> prev(nodes, {-1, -1});
      std::queue<int> bfs;
      bfs.push(src);
      prev[src] = {src, -1};
      while (!bfs.empty() && prev[snk].first < 0) {
        int u = bfs.front();
        bfs.pop();
        for (int e = 0; e < static_cast<int>(g[u].size()); ++e)
          if (g[u][e].cap > 0 && prev[g[u][e].to].first < 0) {
            prev[g[u][e].to] = {u, e};
            bfs.push(g[u][e].to);
          }
      }
      if (prev[snk].first < 0) break;
      int push = need - flow;
      for (int v = snk; v != src; v = prev[v].first) push = std::min(push, g[prev[v].first][prev[v].second].cap);
      for (int v = snk; v != src; v = prev[v].first) {
        Edge& e = g[prev[v].first][prev[v].second];
        e.cap -= push;
        g[v][e.rev].cap += push;
      }
      flow += push;
    }
    ok = ok && flow == need;
  }
  memo_[key] = ok;
  return ok;
}

bool ForestEngine::embeds(int p, const Tuple& a, int q, const Tuple& b) {
  if (a.size() != b.size()) return false;
  const Indexed& ip = frames_[p];
  const Indexed& iq = frames_[q];
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] < 0 || a[i] >= ip.limit || b[i] < 0 || b[i] >= iq.limit) throw std::out_of_range("pin outside frame");
    for (std::size_t j = 0; j < i; ++j)
      if ((a[i] == a[j]) != (b[i] == b[j])) return false;
  }
  std::vector<std::pair<int, int>> pa, pb;
  for (std::size_t i = 0; i < a.size(); ++i) {
    bool first = std::find(a.begin(), a.begin() + i, a[i]) == a.begin() + i;
    if (first) {
      pa.push_back({a[i], static_cast<int>(i)});
      pb.push_back({b[i], static_cast<int>(i)});
    }
  }
  int rp = pinned_root(ip, pa);
  int rq = pinned_root(frames_[q], pb);
  return shape_embeds(rp, rq);
}

bool frame_embeds(const RankedFrame& p, const Tuple& a, const RankedFrame& q, const Tuple& b) {
  ForestEngine e;
  int hp = e.add(p), hq = e.add(q);
  return e.embeds(hp, a, hq, b);
}

bool sim0(const RankedFrame& m, const Tuple& a, const RankedFrame& n, const Tuple& b) {
  ForestEngine e;
  int hm = e.add(m), hn = e.add(n);
  return e.embeds(hm, a, hn, b) && e.embeds(hn, b, hm, a);
}

bool sim_alpha(const RankedFrame& m, const Tuple& a, const RankedFrame& n, const Tuple& b, int alpha,
               std::vector<GameStep>* transcript) {
  ForestEngine e;
  int hm = e.add(m), hn = e.add(n);
  Memo memo;
  auto base = [&](const Tuple& x, const Tuple& y) { return e.embeds(hm, x, hn, y) && e.embeds(hn, y, hm, x); };
  return back_and_forth(m.rank(), n.rank(), a, b, alpha, base, &memo, transcript, 0);
}

}  // namespace desk
