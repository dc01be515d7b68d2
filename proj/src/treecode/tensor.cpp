#include "desk/treecode/tensor.hpp"

#include <algorithm>
#include <functional>
#include <stdexcept>
#include <tuple>

#include "desk/abelian/integer.hpp"

namespace desk {

std::vector<int> TensorStructure::nodes_with_history(const std::vector<int>& h) const {
  std::vector<int> out;
  for (int v = 0; v < tree.size(); ++v)
    if (history[v] == h) out.push_back(v);
  return out;
}

std::vector<std::vector<int>> TensorStructure::histories_at_height(int n) const {
  std::set<std::vector<int>> hs;
  for (int v = 0; v < tree.size(); ++v)
    if (static_cast<int>(history[v].size()) == n + 1) hs.insert(history[v]);
  return {hs.begin(), hs.end()};
}

TensorStructure tensor_z(const ColoredTree& t) {
  TensorStructure ts;
  ts.tree = t;
  const int n = t.size();
  ts.pi = Mat::Zero(n, n);
  for (int s = 1; s < n; ++s) ts.pi(t.parent[s], s) = 1;
  for (int s = 0; s < n; ++s) ts.history.push_back(t.color_history(s));

  std::map<std::vector<int>, std::vector<Vec>> gens;
  for (int s = 0; s < n; ++s) {
    Vec e = Vec::Zero(n);
    e(s) = 1;
    gens[ts.history[s]].push_back(e);
  }
  for (auto& [h, g] : gens) ts.graded[h] = hnf(g, n);

  // Predecessor sums on basis vectors, root to zero.
  for (int s = 0; s < n; ++s) {
    Vec col = ts.pi.col(s);
    Vec want = Vec::Zero(n);
    if (s != 0) want(t.parent[s]) = 1;
    if (col != want) throw std::logic_error("tensor_z: pi is not the predecessor map");
  }
  Mat p = Mat::Identity(n, n);
  for (int k = 0; k <= t.tree_height(); ++k) p = mat_mul(ts.pi, p);
  if (!p.isZero()) throw std::logic_error("tensor_z: pi is not nilpotent of the expected order");
  int total = 0;
  Lattice sum = zero_lattice(n);
  for (auto& [h, l] : ts.graded) {
    total += l.rank();
    sum = lattice_sum(sum, l);
    if (h.size() > 1) {
      std::vector<int> up(h.begin(), h.end() - 1);
      if (!contains(ts.graded.at(up), image(l, ts.pi)))
        throw std::logic_error("tensor_z: pi leaves a graded piece");
    }
  }
  if (total != n || sum != full_lattice(n)) throw std::logic_error("tensor_z: graded pieces do not decompose the group");
  return ts;
}

FrameStructure tensor_frame(const TensorStructure& ts) {
  const int n = ts.rank();
  FrameStructure f = make_frame(n);
  std::map<std::string, std::vector<Vec>> gens;
  for (int s = 0; s < n; ++s) {
    Vec e = Vec::Zero(n);
    e(s) = 1;
    gens[std::to_string(ts.tree.height(s)) + "," + std::to_string(ts.tree.color[s])].push_back(e);
  }
  for (auto& [k, g] : gens) add_subgroup(f, k, hnf(g, n));
  add_function(f, "pi", ts.pi);
  return f;
}

std::vector<int> support(const Vec& a) {
  std::vector<int> s;
  for (int i = 0; i < a.size(); ++i)
    if (a(i) != 0) s.push_back(i);
  return s;
}

std::vector<int> graded_history(const TensorStructure& ts, const Vec& a) {
  if (a.size() != ts.rank()) throw std::invalid_argument("graded_history: wrong dimension");
  std::vector<int> h;
  bool first = true;
  for (int s : support(a)) {
    if (first) {
      h = ts.history[s];
      first = false;
    } else if (ts.history[s] != h) {
      return {};
    }
  }
  return h;
}

GradedElement graded(const TensorStructure& ts, const Vec& a) {
  std::vector<int> h = graded_history(ts, a);
  if (h.empty()) throw std::invalid_argument("graded: zero or mixed color histories");
  return {a, h};
}

namespace {

// Calls emit(c) for every c supported on `cand` (grouped by parent) with
// support <= budget, entries in [-cmax, cmax], and parent sums equal to b.
void children_of(const ColoredTree& t, const std::vector<int>& cand, const Vec& b, int budget, Int cmax,
                 const std::function<void(const Vec&)>& emit) {
  if (cand.empty()) return;
  Vec c = Vec::Zero(b.size());
  // Each candidate's parent; candidates arrive grouped by increasing parent.
  std::vector<int> order = cand;
  std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return t.parent[x] < t.parent[y]; });
  // Parents with no candidate must already have b(p) == 0.
  std::set<int> parents;
  for (int x : order) parents.insert(t.parent[x]);
  for (int p = 0; p < b.size(); ++p)
    if (b(p) != 0 && !parents.count(p)) return;
  std::function<void(size_t, int, Int)> rec = [&](size_t i, int used, Int run) {
    bool group_end = i == order.size() || (i > 0 && t.parent[order[i]] != t.parent[order[i - 1]]);
    if (i > 0 && group_end && run != b(t.parent[order[i - 1]])) return;
    if (group_end) run = 0;
    if (i == order.size()) {
      if (used > 0) emit(c);
      return;
    }
    for (Int v = -cmax; v <= cmax; ++v) {
      if (v != 0 && used == budget) continue;
      c(order[i]) = v;
      rec(i + 1, used + (v != 0), run + v);
    }
    c(order[i]) = 0;
  };
  rec(0, 0, 0);
}

}  // namespace

DerivedTree derived_tree(const TensorStructure& ts, const GradedElement& a, const DerivedBounds& bd) {
  if (support(a.a).empty()) throw std::invalid_argument("derived_tree: a must be nonzero");
  const ColoredTree& t = ts.tree;
  DerivedTree d;
  d.tree = ColoredTree(a.history.back());
  d.vectors.push_back(a.a);
  std::vector<std::vector<int>> hist{a.history};
  std::set<int> colors(t.color.begin(), t.color.end());
  for (size_t at = 0; at < d.vectors.size(); ++at) {
    const Vec b = d.vectors[at];
    const std::vector<int> h = hist[at];
    for (int i : colors) {
      std::vector<int> next = h;
      next.push_back(i);
      std::vector<int> cand = ts.nodes_with_history(next);
      children_of(t, cand, b, bd.max_support, bd.max_coeff, [&](const Vec& c) {
        if (d.tree.size() >= bd.node_cap) throw NodeBudgetExceeded("derived_tree: node cap exceeded");
        d.tree.add_child(static_cast<int>(at), i);
        d.vectors.push_back(c);
        hist.push_back(next);
      });
    }
  }
  return d;
}

DerivedBounds covering_bounds(const GradedElement& a, int node_cap) {
  DerivedBounds b;
  b.max_support = static_cast<int>(support(a.a).size());
  b.max_coeff = a.a.cwiseAbs().maxCoeff();
  b.node_cap = node_cap;
  return b;
}

std::vector<GradedElement> graded_elements(const TensorStructure& ts, const std::vector<int>& history, int s, Int c) {
  std::vector<int> nodes = ts.nodes_with_history(history);
  std::vector<GradedElement> out;
  Vec v = Vec::Zero(ts.rank());
  std::function<void(size_t, int)> rec = [&](size_t i, int used) {
    if (i == nodes.size()) {
      if (used > 0) out.push_back({v, history});
      return;
    }
    for (Int x = -c; x <= c; ++x) {
      if (x != 0 && used == s) continue;
      v(nodes[i]) = x;
      rec(i + 1, used + (x != 0));
    }
    v(nodes[i]) = 0;
  };
  rec(0, 0);
  return out;
}

namespace {

std::vector<Int> key_of(const Vec& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

Claim1Report claim1_check(const TensorStructure& ts, const GradedElement& a, const DerivedBounds& bd) {
  const ColoredTree& t = ts.tree;
  Claim1Report r;
  DerivedTree d = derived_tree(ts, a, bd);
  std::vector<int> supp = support(a.a);
  std::vector<ColoredTree> subs;
  std::vector<std::vector<int>> orig(supp.size());
  for (size_t k = 0; k < supp.size(); ++k) subs.push_back(subtree_at(t, supp[k], &orig[k]));
  ProductResult p = product(subs, bd.node_cap);
  if (p.empty) return r;

  std::map<std::vector<int>, int> prod_node;
  std::vector<std::vector<int>> tuple(p.tree.size());
  for (int u = 0; u < p.tree.size(); ++u) {
    for (size_t k = 0; k < supp.size(); ++k) tuple[u].push_back(orig[k][p.tuples[u][k]]);
    prod_node[tuple[u]] = u;
  }

  // Forward: each coordinate follows the least support node above it.
  r.forward.map.assign(d.tree.size(), -1);
  r.forward.map[0] = 0;
  bool built = true;
  for (int u = 1; u < d.tree.size() && built; ++u) {
    const std::vector<int>& up = tuple[r.forward.map[d.tree.parent[u]]];
    std::vector<int> here;
    std::vector<int> su = support(d.vectors[u]);
    for (int tk : up) {
      auto it = std::find_if(su.begin(), su.end(), [&](int s) { return t.parent[s] == tk; });
      if (it == su.end()) {
        built = false;
        break;
      }
      here.push_back(*it);
    }
    auto f = built ? prod_node.find(here) : prod_node.end();
    if (f == prod_node.end()) {
      built = false;
      break;
    }
    r.forward.map[u] = f->second;
  }
  r.forward_ok = built && verify_tree_embedding(d.tree, p.tree, r.forward);

  // Reverse: (s_k) goes to sum of lambda_k s_k.
  std::map<std::vector<Int>, int> derived_node;
  for (int u = 0; u < d.tree.size(); ++u) derived_node[key_of(d.vectors[u])] = u;
  bool rev = true;
  for (int u = 0; u < p.tree.size() && rev; ++u) {
    Vec v = Vec::Zero(ts.rank());
    for (size_t k = 0; k < supp.size(); ++k) v(tuple[u][k]) = a.a(supp[k]);
    auto it = derived_node.find(key_of(v));
    if (it == derived_node.end()) {
      rev = false;
      break;
    }
    r.reverse.map.push_back(it->second);
  }
  r.reverse_ok = rev && verify_tree_embedding(p.tree, d.tree, r.reverse);
  r.search_ok = biembeddable(d.tree, p.tree);
  return r;
}

bool is_good(const TensorStructure& ts, const GradedElement& a, const DerivedBounds& bd) {
  if (support(a.a).empty()) return false;
  DerivedTree d = derived_tree(ts, a, bd);
  for (int t : support(a.a))
    if (biembeddable(d.tree, subtree_at(ts.tree, t))) return true;
  return false;
}

bool is_good(const TensorStructure& ts, const Vec& a, const DerivedBounds& bd) {
  std::vector<int> h = graded_history(ts, a);
  if (h.empty()) return false;
  return is_good(ts, GradedElement{a, h}, bd);
}

std::vector<bool> goodness_oracle(const TensorStructure& ts, const std::vector<int>& history, int s, Int c,
                                  const DerivedBounds& bd) {
  std::vector<GradedElement> els = graded_elements(ts, history, s, c);
  std::vector<std::string> key(els.size());
  std::map<std::string, ColoredTree> core;
  for (size_t i = 0; i < els.size(); ++i) {
    ColoredTree d = derived_tree(ts, els[i], bd).tree;
    key[i] = biembeddability_key(d);
    core.emplace(key[i], reduced_core(d));
  }
  // G_{>S}: span of the class elements whose derived tree lies strictly above S.
  std::map<std::string, Lattice> above;
  for (auto& [k, tk] : core) {
    std::vector<Vec> gens;
    for (size_t j = 0; j < els.size(); ++j) {
      const ColoredTree& tj = core.at(key[j]);
      if (embeds(tk, tj) && !embeds(tj, tk)) gens.push_back(els[j].a);
    }
    above.emplace(k, hnf(gens, ts.rank()));
  }
  std::vector<bool> good;
  for (size_t i = 0; i < els.size(); ++i) good.push_back(!member(above.at(key[i]), els[i].a));
  return good;
}

std::set<std::string> recover_invariants(const TensorStructure& ts, int n, const RecoveryBounds& rb) {
  std::set<std::string> out;
  for (const auto& h : ts.histories_at_height(n)) {
    int level = static_cast<int>(ts.nodes_with_history(h).size());
    int s = rb.max_support > 0 ? std::min(rb.max_support, level) : level;
    for (const GradedElement& a : graded_elements(ts, h, s, rb.max_coeff)) {
      DerivedTree d = derived_tree(ts, a, covering_bounds(a));
      bool good = false;
      for (int t : support(a.a))
        if (biembeddable(d.tree, subtree_at(ts.tree, t))) {
          good = true;
          break;
        }
      if (good) out.insert(biembeddability_key(d.tree));
    }
  }
  return out;
}

std::set<std::string> subtree_classes(const ColoredTree& t, int n) {
  std::set<std::string> out;
  for (int v : t.nodes_at_height(n)) out.insert(biembeddability_key(subtree_at(t, v)));
  return out;
}

namespace {

void require_subgroup_frame(const FrameStructure& f) {
  f.validate();
  if (!f.functions.empty()) throw std::invalid_argument("code_seq_finite: frames must carry subgroups only");
  for (auto& [k, s] : f.subgroups)
    if (!s.is_explicit()) throw std::invalid_argument("code_seq_finite: cofamily subgroups are not supported");
}

}  // namespace

std::pair<CompositeStructure, CompositeStructure> code_seq_finite(const FrameStructure& f0, const FrameStructure& f1,
                                                                  const std::vector<ColoredTree>& antichain,
                                                                  int multiplicity) {
  require_subgroup_frame(f0);
  require_subgroup_frame(f1);
  if (f0.rank != f1.rank) throw std::invalid_argument("code_seq_finite: frames of different rank");
  if (multiplicity < 1) throw std::invalid_argument("code_seq_finite: multiplicity must be positive");
  std::vector<std::string> gammas;
  for (auto& [k, s] : f0.subgroups) {
    if (!f1.subgroups.count(k)) throw std::invalid_argument("code_seq_finite: index sets differ");
    gammas.push_back(k);
  }
  if (f1.subgroups.size() != gammas.size()) throw std::invalid_argument("code_seq_finite: index sets differ");
  if (antichain.size() < gammas.size()) throw AntichainCheckFailure("code_seq_finite: antichain too short");
  std::vector<ColoredTree> used(antichain.begin(), antichain.begin() + gammas.size());
  if (antichain_violations(used) != 0) throw AntichainCheckFailure("code_seq_finite: antichain members embed");

  const int r = f0.rank;
  const int slots = r + 1;
  ColoredTree t(0);
  std::vector<CompositeStructure::Copy> copies;
  for (int g = 0; g < static_cast<int>(gammas.size()); ++g)
    for (int j = 0; j < slots; ++j)
      for (int q = 0; q < multiplicity; ++q) {
        int start = t.size();
        graft(t, 0, used[g]);
        copies.push_back({g, j, q, start, used[g].size()});
      }
  TensorStructure ts = tensor_z(t);
  const int nt = t.size();
  const int dim = nt + r;

  auto build = [&](const FrameStructure& f) {
    CompositeStructure c;
    c.tree = t;
    c.tree_rank = nt;
    c.group_rank = r;
    c.copies = copies;
    c.gammas = gammas;
    c.frame = make_frame(dim);
    for (const std::string& g : gammas) {
      std::vector<Vec> e = f.subgroups.at(g).lattice().rows();
      while (static_cast<int>(e.size()) < slots) e.push_back(Vec::Zero(r));
      c.enumeration.push_back(e);
    }
    auto lift = [&](const Lattice& l, int offset) {
      std::vector<Vec> rows;
      for (const Vec& v : l.rows()) {
        Vec w = Vec::Zero(dim);
        w.segment(offset, v.size()) = v;
        rows.push_back(w);
      }
      return hnf(rows, dim);
    };
    FrameStructure tf = tensor_frame(ts);
    for (auto& [k, s] : tf.subgroups) add_subgroup(c.frame, "g:" + k, lift(s.lattice(), 0));
    add_subgroup(c.frame, "H0", lift(full_lattice(nt), 0));
    add_subgroup(c.frame, "H1", lift(full_lattice(r), nt));
    Mat pi = Mat::Zero(dim, dim);
    pi.topLeftCorner(nt, nt) = ts.pi;
    add_function(c.frame, "pi", pi, "H0");
    Mat psi = Mat::Zero(dim, dim);
    for (const auto& cp : copies) psi.block(nt, cp.start, r, 1) = c.enumeration[cp.gamma][cp.slot];
    add_function(c.frame, "psi", psi, "H0");
    return c;
  };
  return {build(f0), build(f1)};
}

Mat lift_composite_embedding(const CompositeStructure& c0, const CompositeStructure& c1, const Mat& m) {
  if (c0.tree_rank != c1.tree_rank || c0.group_rank != c1.group_rank || c0.gammas != c1.gammas)
    throw std::invalid_argument("lift_composite_embedding: composites of different shape");
  const int nt = c0.tree_rank, r = c0.group_rank, dim = nt + r;
  if (m.rows() != r || m.cols() != r) throw std::invalid_argument("lift_composite_embedding: matrix shape");
  std::vector<int> rank(c0.gammas.size());
  std::vector<Mat> mu(c0.gammas.size());
  for (size_t g = 0; g < c0.gammas.size(); ++g) {
    auto nonzero = [&](const std::vector<Vec>& e) {
      int k = 0;
      while (k < static_cast<int>(e.size()) && !is_zero(e[k])) ++k;
      return k;
    };
    int r0 = nonzero(c0.enumeration[g]), r1 = nonzero(c1.enumeration[g]);
    if (r0 != r1) throw std::invalid_argument("lift_composite_embedding: subgroup ranks differ at " + c0.gammas[g]);
    rank[g] = r0;
    std::vector<Vec> basis1(c1.enumeration[g].begin(), c1.enumeration[g].begin() + r1);
    Lattice l1 = hnf(basis1, r);
    mu[g] = Mat::Zero(r0, r1);
    for (int j = 0; j < r0; ++j) {
      auto x = coordinates(l1, mat_vec(m, c0.enumeration[g][j]));
      if (!x) throw std::invalid_argument("lift_composite_embedding: m does not map subgroup " + c0.gammas[g]);
      mu[g].row(j) = x->transpose();
    }
  }
  std::map<std::tuple<int, int, int>, const CompositeStructure::Copy*> at;
  for (const auto& cp : c1.copies) at[{cp.gamma, cp.slot, cp.rep}] = &cp;
  Mat l = Mat::Zero(dim, dim);
  l(0, 0) = 1;
  auto add_block = [&](const CompositeStructure::Copy& src, int slot, Int coef) {
    const auto* dst = at.at({src.gamma, slot, src.rep});
    for (int o = 0; o < src.size; ++o) l(dst->start + o, src.start + o) = checked_add(l(dst->start + o, src.start + o), coef);
  };
  for (const auto& cp : c0.copies) {
    int g = cp.gamma;
    if (cp.slot < rank[g]) {
      Int total = 0;
      for (int k = 0; k < rank[g]; ++k) {
        add_block(cp, k, mu[g](cp.slot, k));
        total = checked_add(total, mu[g](cp.slot, k));
      }
      // The last slot always carries 0 and absorbs the coefficient sum.
      add_block(cp, r, checked_sub(Int(1), total));
    } else {
      add_block(cp, cp.slot, 1);
    }
  }
  l.bottomRightCorner(r, r) = m;
  return l;
}

}  // namespace desk
