#include "desk/abelian/embed_search.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <sstream>

namespace desk {

namespace {

struct Constraint {
  std::vector<int> support;
  std::function<bool(const Mat&)> check;
};

std::vector<int> support_of(const Vec& v) {
  std::vector<int> s;
  for (int i = 0; i < v.size(); ++i)
    if (v(i) != 0) s.push_back(i);
  return s;
}

std::vector<Constraint> build_constraints(const FrameStructure& s, const FrameStructure& t) {
  std::vector<Constraint> out;
  for (const auto& [idx, ss] : s.subgroups) {
    const SubgroupSpec& ts = t.subgroups.at(idx);
    if (!ss.is_explicit()) continue;
    for (const Vec& u : ss.lattice().rows()) {
      if (ts.is_explicit()) {
        const Lattice* tl = &ts.lattice();
        out.push_back({support_of(u), [tl, u](const Mat& m) { return member(*tl, mat_vec(m, u)); }});
      } else {
        const Cofamily* tc = &ts.cofamily();
        out.push_back({support_of(u), [tc, u](const Mat& m) { return cofamily_member(*tc, mat_vec(m, u)); }});
      }
    }
  }
  for (const auto& [idx, sf] : s.functions) {
    const FrameFunction& tf = t.functions.at(idx);
    Lattice sd = s.domain_of(idx);
    Lattice td = t.domain_of(idx);
    for (const Vec& u : sd.rows()) {
      Vec fu = mat_vec(sf.matrix, u);
      std::vector<int> sup = support_of(u);
      for (int i : support_of(fu)) sup.push_back(i);
      std::sort(sup.begin(), sup.end());
      sup.erase(std::unique(sup.begin(), sup.end()), sup.end());
      const Mat* tm = &tf.matrix;
      out.push_back({sup, [td, tm, u, fu](const Mat& m) {
                       Vec mu = mat_vec(m, u);
                       return member(td, mu) && mat_vec(m, fu) == mat_vec(*tm, mu);
                     }});
    }
  }
  return out;
}

// Greedy: next column completes the most constraints, then touches the most.
std::vector<int> column_order(int r, const std::vector<Constraint>& cs) {
  std::vector<int> order;
  std::vector<char> placed(r, 0);
  for (int step = 0; step < r; ++step) {
    int best = -1;
    std::pair<int, int> best_score{-1, -1};
    for (int c = 0; c < r; ++c) {
      if (placed[c]) continue;
      int done = 0, touch = 0;
      for (const auto& k : cs) {
        bool has = std::find(k.support.begin(), k.support.end(), c) != k.support.end();
        if (!has) continue;
        ++touch;
        bool all = true;
        for (int j : k.support)
          if (j != c && !placed[j]) all = false;
        done += all;
      }
      std::pair<int, int> score{done, touch};
      if (score > best_score) {
        best_score = score;
        best = c;
      }
    }
    placed[best] = 1;
    order.push_back(best);
  }
  return order;
}

std::vector<Vec> box_vectors(int dim, Int bound) {
  std::vector<Vec> out;
  Vec cur = Vec::Constant(dim, -bound);
  for (;;) {
    if (!is_zero(cur)) out.push_back(cur);
    int k = dim - 1;
    while (k >= 0 && cur(k) == bound) {
      cur(k) = -bound;
      --k;
    }
    if (k < 0) break;
    ++cur(k);
  }
  auto key = [](const Vec& v) {
    Int mx = 0, l1 = 0;
    for (int i = 0; i < v.size(); ++i) {
      mx = std::max(mx, v(i) < 0 ? -v(i) : v(i));
      l1 += v(i) < 0 ? -v(i) : v(i);
    }
    return std::pair{mx, l1};
  };
  std::stable_sort(out.begin(), out.end(), [&](const Vec& a, const Vec& b) { return key(a) < key(b); });
  return out;
}

}  // namespace

EmbedSearchResult frame_embed_search(const FrameStructure& s, const FrameStructure& t, Int bound,
                                     bool iso) {
  if (bound < 1) throw std::invalid_argument("frame_embed_search: bound must be >= 1");
  EmbedSearchResult res;
  res.bound = bound;
  auto no = [&](const std::string& why) {
    res.verdict = SearchVerdict::No;
    res.reason = why;
    return res;
  };
  if (s.rank > t.rank) return no("source rank exceeds target rank");
  for (const auto& [idx, ss] : s.subgroups)
    if (!t.subgroups.count(idx)) return no("target lacks subgroup " + idx);
  for (const auto& [idx, sf] : s.functions)
    if (!t.functions.count(idx)) return no("target lacks function " + idx);
  if (iso) {
    if (s.rank != t.rank) return no("ranks differ");
    if (s.subgroups.size() != t.subgroups.size() || s.functions.size() != t.functions.size())
      return no("index sets differ");
    if (iso_invariants(s) != iso_invariants(t)) return no("isomorphism invariants differ");
  }
  const int r = s.rank, rt = t.rank;
  if (r == 0) {
    Mat m(rt, 0);
    if (verify_embedding(s, t, m, iso)) {
      res.verdict = SearchVerdict::Yes;
      res.witness = FrameEmbedding{m, bound};
    }
    return res;
  }

  std::vector<Constraint> cs = build_constraints(s, t);
  std::vector<int> order = column_order(r, cs);
  std::vector<int> pos(r);
  for (int i = 0; i < r; ++i) pos[order[i]] = i;
  // Constraints are checked at the depth where their support is complete.
  std::vector<std::vector<const Constraint*>> at_depth(r);
  std::vector<std::vector<const Constraint*>> unary(r);
  for (const auto& k : cs) {
    if (k.support.empty()) continue;
    if (k.support.size() == 1) {
      unary[k.support[0]].push_back(&k);
      continue;
    }
    int d = 0;
    for (int j : k.support) d = std::max(d, pos[j]);
    at_depth[d].push_back(&k);
  }

  const std::vector<Vec> box = box_vectors(rt, bound);
  std::vector<std::vector<Vec>> cands(r);
  for (int c = 0; c < r; ++c) {
    Mat probe = Mat::Zero(rt, r);
    // Standard basis vector first, so identity-like witnesses come out first.
    std::vector<Vec> ordered;
    if (c < rt) {
      Vec e = Vec::Zero(rt);
      e(c) = 1;
      ordered.push_back(e);
    }
    for (const Vec& v : box)
      if (ordered.empty() || v != ordered[0]) ordered.push_back(v);
    for (const Vec& v : ordered) {
      probe.col(c) = v;
      bool ok = true;
      for (const Constraint* k : unary[c])
        if (!k->check(probe)) {
          ok = false;
          break;
        }
      if (ok) cands[c].push_back(v);
    }
  }

  Mat m = Mat::Zero(rt, r);
  std::function<bool(int)> dfs = [&](int depth) -> bool {
    if (depth == r) return verify_embedding(s, t, m, iso);
    const int c = order[depth];
    for (const Vec& v : cands[c]) {
      ++res.nodes_visited;
      m.col(c) = v;
      bool ok = true;
      for (const Constraint* k : at_depth[depth])
        if (!k->check(m)) {
          ok = false;
          break;
        }
      if (ok) {
        Mat cols(rt, depth + 1);
        for (int i = 0; i <= depth; ++i) cols.col(i) = m.col(order[i]);
        if (matrix_rank(cols) != depth + 1) ok = false;
        // A unimodular matrix has columns spanning a pure sublattice at every stage.
        if (ok && iso && !is_pure(hnf(Mat(cols.transpose())))) ok = false;
      }
      if (ok && dfs(depth + 1)) return true;
    }
    m.col(c).setZero();
    return false;
  };
  if (dfs(0)) {
    res.verdict = SearchVerdict::Yes;
    res.witness = FrameEmbedding{m, bound};
  }
  return res;
}

std::vector<Int> char_poly(const Mat& a) {
  // Faddeev-LeVerrier; every division is exact for integer matrices.
  const int n = static_cast<int>(a.rows());
  std::vector<Int> c(n + 1, 0);
  c[0] = 1;
  Mat mk = Mat::Zero(n, n);
  for (int k = 1; k <= n; ++k) {
    Mat next = mat_mul(a, mk);
    for (int i = 0; i < n; ++i) next(i, i) = checked_add(next(i, i), c[k - 1]);
    mk = next;
    Mat amk = mat_mul(a, mk);
    Int tr = 0;
    for (int i = 0; i < n; ++i) tr = checked_add(tr, amk(i, i));
    c[k] = -tr / k;
  }
  return c;
}

namespace {

std::string qi_string(const Lattice& l) {
  QuotientInvariants q = quotient_invariants(l);
  std::ostringstream os;
  os << l.rank() << "/" << q.free_rank << "[";
  for (size_t i = 0; i < q.torsion.size(); ++i) os << (i ? "," : "") << q.torsion[i];
  os << "]";
  return os.str();
}

}  // namespace

std::string iso_invariants(const FrameStructure& f) {
  std::ostringstream os;
  os << "rank " << f.rank << ";";
  std::vector<std::pair<std::string, Lattice>> expl;
  for (const auto& [idx, s] : f.subgroups) {
    if (s.is_explicit()) {
      expl.emplace_back(idx, s.lattice());
      os << "sub " << idx << " " << qi_string(s.lattice()) << ";";
    } else {
      os << "cof " << idx << " " << s.cofamily().exceptions.size() << ";";
    }
  }
  for (size_t i = 0; i < expl.size(); ++i)
    for (size_t j = i + 1; j < expl.size(); ++j)
      os << "pair " << expl[i].first << "," << expl[j].first << " "
         << qi_string(lattice_sum(expl[i].second, expl[j].second)) << " "
         << qi_string(intersect(expl[i].second, expl[j].second)) << ";";
  for (const auto& [idx, fn] : f.functions) {
    Lattice dom = f.domain_of(idx);
    os << "fn " << idx << " dom " << qi_string(dom) << " img " << qi_string(image(dom, fn.matrix));
    if (!fn.domain) {
      os << " cp";
      for (Int c : char_poly(fn.matrix)) os << " " << c;
      for (Int c = -3; c <= 3; ++c) {
        Mat shifted = fn.matrix;
        for (int i = 0; i < f.rank; ++i) shifted(i, i) -= c;
        os << " " << qi_string(image(full_lattice(f.rank), shifted));
      }
      for (const auto& [sidx, l] : expl) os << " on " << sidx << " " << qi_string(lattice_sum(l, image(l, fn.matrix)));
    }
    os << ";";
  }
  return os.str();
}

}  // namespace desk
