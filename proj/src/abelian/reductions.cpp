#include "desk/abelian/reductions.hpp"

#include <functional>
#include <stdexcept>

namespace desk {

Lattice augmentation_kernel(const FiniteAbGroup& g) {
  const auto elems = g.elements();
  const int m = static_cast<int>(elems.size());
  const int k = static_cast<int>(g.invariant_factors.size());
  if (k == 0) return full_lattice(m);
  // Solve P a + D y = 0 and keep the a part.
  Mat pd = Mat::Zero(k, m + k);
  for (int b = 0; b < m; ++b)
    for (int i = 0; i < k; ++i) pd(i, b) = elems[b][i];
  for (int i = 0; i < k; ++i) pd(i, m + i) = g.invariant_factors[i];
  Lattice ker = right_kernel(pd);
  std::vector<Vec> gens;
  for (int i = 0; i < ker.rank(); ++i) gens.push_back(ker.row(i).head(m));
  return hnf(gens, m);
}

FrameStructure augmentation_reduction(const FiniteAbGroup& g) {
  Lattice k = augmentation_kernel(g);
  FrameStructure f = make_frame(k.ambient_rank);
  add_subgroup(f, "K", k);
  return f;
}

FrameStructure graph_trick(const FrameStructure& f) {
  if (f.subgroups.size() != 1 || !f.functions.empty())
    throw std::invalid_argument("graph_trick: need exactly one subgroup and no functions");
  const auto& [idx, spec] = *f.subgroups.begin();
  if (!spec.is_explicit()) throw std::invalid_argument("graph_trick: subgroup must be explicit");
  const Lattice& h = spec.lattice();
  const int r = f.rank, s = h.rank();
  Mat phi = Mat::Zero(r + s, r + s);
  for (int j = 0; j < s; ++j) phi.block(0, r + j, r, 1) = h.row(j);
  // The function keeps the subgroup's index so the recovery can restore it.
  FrameStructure e = make_frame(r + s);
  add_function(e, idx, phi);
  return e;
}

FrameStructure graph_trick_recover(const FrameStructure& e) {
  if (e.functions.size() != 1 || !e.subgroups.empty())
    throw std::invalid_argument("graph_trick_recover: need exactly one total function");
  const auto& [idx, fn] = *e.functions.begin();
  if (fn.domain) throw std::invalid_argument("graph_trick_recover: function must be total");
  Lattice ker = right_kernel(fn.matrix);
  Lattice im = image(full_lattice(e.rank), fn.matrix);
  std::vector<Vec> gens;
  for (int i = 0; i < im.rank(); ++i) {
    auto c = coordinates(ker, im.row(i));
    if (!c) throw std::invalid_argument("graph_trick_recover: image not inside kernel");
    gens.push_back(*c);
  }
  FrameStructure f = make_frame(ker.rank());
  add_subgroup(f, idx, hnf(gens, ker.rank()));
  return f;
}

FrameStructure eliminate_functions(const FrameStructure& f, EliminateOptions opt) {
  const int r = f.rank;
  FrameStructure e = make_frame(2 * r);
  auto first_factor = [&](const Lattice& l) {
    std::vector<Vec> gens;
    for (const Vec& v : l.rows()) {
      Vec w = Vec::Zero(2 * r);
      w.head(r) = v;
      gens.push_back(w);
    }
    return hnf(gens, 2 * r);
  };
  auto put = [&](const std::string& idx, const Lattice& l, bool pure) {
    if (e.subgroups.count(idx)) throw std::invalid_argument("eliminate_functions: index clash at " + idx);
    add_subgroup(e, idx, l, pure);
  };
  for (const auto& [idx, s] : f.subgroups) {
    if (!s.is_explicit()) throw std::invalid_argument("eliminate_functions: cofamily subgroups unsupported");
    put(idx, first_factor(s.lattice()), s.purity_required);
  }
  for (const auto& [idx, fn] : f.functions) {
    Lattice dom = f.domain_of(idx);
    std::vector<Vec> gens;
    for (const Vec& v : dom.rows()) {
      Vec w(2 * r);
      w.head(r) = v;
      w.tail(r) = mat_vec(fn.matrix, v);
      gens.push_back(w);
    }
    bool pure = fn.domain ? f.subgroups.at(*fn.domain).purity_required : true;
    put("graph:" + idx, hnf(gens, 2 * r), pure);
  }
  std::vector<Vec> diag, second;
  for (int i = 0; i < r; ++i) {
    Vec d = Vec::Zero(2 * r);
    d(i) = 1;
    d(r + i) = 1;
    diag.push_back(d);
    Vec s = Vec::Zero(2 * r);
    s(r + i) = 1;
    second.push_back(s);
  }
  put("*0", first_factor(full_lattice(r)), true);
  put("*1", hnf(diag, 2 * r), true);
  if (opt.tag_second_axis) put("*2", hnf(second, 2 * r), true);
  return e;
}

FrameStructure purity_repair(const FrameStructure& f,
                             const std::map<std::string, std::vector<Vec>>& generating_sets) {
  if (!f.functions.empty()) throw std::invalid_argument("purity_repair: frame must be subgroups-only");
  const int r = f.rank;
  int total = r;
  for (const auto& [idx, s] : f.subgroups) {
    if (!s.is_explicit()) throw std::invalid_argument("purity_repair: cofamily subgroups unsupported");
    auto it = generating_sets.find(idx);
    if (it == generating_sets.end()) throw std::invalid_argument("purity_repair: no generating set for " + idx);
    if (hnf(it->second, r) != s.lattice())
      throw std::invalid_argument("purity_repair: generating set does not generate subgroup " + idx);
    total += static_cast<int>(it->second.size());
  }
  FrameStructure e = make_frame(total);
  std::vector<Vec> star;
  for (int i = 0; i < r; ++i) {
    Vec v = Vec::Zero(total);
    v(i) = 1;
    star.push_back(v);
  }
  add_subgroup(e, "*", hnf(star, total), true);
  int offset = r;
  for (const auto& [idx, s] : f.subgroups) {
    const auto& gens = generating_sets.at(idx);
    std::vector<Vec> summand;
    Mat phi = Mat::Zero(total, total);
    for (size_t j = 0; j < gens.size(); ++j) {
      Vec v = Vec::Zero(total);
      v(offset + static_cast<int>(j)) = 1;
      summand.push_back(v);
      phi.block(0, offset + static_cast<int>(j), r, 1) = gens[j];
    }
    add_subgroup(e, idx, hnf(summand, total), true);
    add_function(e, "phi:" + idx, phi, idx);
    offset += static_cast<int>(gens.size());
  }
  return e;
}

namespace {

void check_table(const std::vector<std::vector<int>>& t, int rows, int cols, const char* what) {
  if (static_cast<int>(t.size()) != rows) throw std::invalid_argument(std::string(what) + ": bad shape");
  for (const auto& row : t) {
    if (static_cast<int>(row.size()) != cols) throw std::invalid_argument(std::string(what) + ": bad shape");
    for (int x : row)
      if (x < 0 || x >= cols) throw std::invalid_argument(std::string(what) + ": entry out of range");
  }
}

void check_abelian(const std::vector<std::vector<int>>& add, int n, int zero, const char* what) {
  for (int a = 0; a < n; ++a) {
    if (add[a][zero] != a) throw std::invalid_argument(std::string(what) + ": zero is not neutral");
    bool has_inv = false;
    for (int b = 0; b < n; ++b) {
      if (add[a][b] != add[b][a]) throw std::invalid_argument(std::string(what) + ": addition not commutative");
      has_inv |= add[a][b] == zero;
      for (int c = 0; c < n; ++c)
        if (add[add[a][b]][c] != add[a][add[b][c]])
          throw std::invalid_argument(std::string(what) + ": addition not associative");
    }
    if (!has_inv) throw std::invalid_argument(std::string(what) + ": missing inverse");
  }
}

}  // namespace

TaggedFiniteGroup rmod_view(const FiniteRing& r, const FiniteModule& m) {
  check_table(r.add, r.size, r.size, "ring addition");
  check_table(r.mul, r.size, r.size, "ring multiplication");
  check_table(m.add, m.size, m.size, "module addition");
  check_table(m.act, r.size, m.size, "module action");
  check_abelian(r.add, r.size, r.zero, "ring");
  check_abelian(m.add, m.size, m.zero, "module");
  for (int a = 0; a < r.size; ++a)
    for (int b = 0; b < r.size; ++b)
      for (int x = 0; x < m.size; ++x) {
        if (m.act[r.add[a][b]][x] != m.add[m.act[a][x]][m.act[b][x]])
          throw std::invalid_argument("module: (r+s)x != rx+sx");
        if (m.act[r.mul[a][b]][x] != m.act[a][m.act[b][x]])
          throw std::invalid_argument("module: (rs)x != r(sx)");
      }
  for (int a = 0; a < r.size; ++a)
    for (int x = 0; x < m.size; ++x)
      for (int y = 0; y < m.size; ++y)
        if (m.act[a][m.add[x][y]] != m.add[m.act[a][x]][m.act[a][y]])
          throw std::invalid_argument("module: r(x+y) != rx+ry");
  for (int x = 0; x < m.size; ++x)
    if (m.act[r.one][x] != x) throw std::invalid_argument("module: 1x != x");
  TaggedFiniteGroup t;
  t.size = m.size;
  t.add = m.add;
  t.endo = m.act;
  return t;
}

std::optional<std::vector<int>> tagged_isomorphism(const TaggedFiniteGroup& a,
                                                   const TaggedFiniteGroup& b) {
  if (a.size != b.size || a.endo.size() != b.endo.size()) return std::nullopt;
  const int n = a.size;
  std::vector<int> f(n, -1), used(n, 0);
  // Every pair of assigned points must respect addition and each tag.
  auto consistent = [&](int x) {
    for (int y = 0; y < n; ++y) {
      if (f[y] < 0) continue;
      for (auto [p, q] : {std::pair{x, y}, std::pair{y, x}}) {
        int s = a.add[p][q];
        if (f[s] >= 0 && f[s] != b.add[f[p]][f[q]]) return false;
      }
    }
    for (size_t e = 0; e < a.endo.size(); ++e) {
      int y = a.endo[e][x];
      if (f[y] >= 0 && f[y] != b.endo[e][f[x]]) return false;
      for (int z = 0; z < n; ++z)
        if (f[z] >= 0 && a.endo[e][z] == x && b.endo[e][f[z]] != f[x]) return false;
    }
    return true;
  };
  std::function<bool(int)> go = [&](int x) {
    if (x == n) return true;
    for (int y = 0; y < n; ++y) {
      if (used[y]) continue;
      f[x] = y;
      used[y] = 1;
      if (consistent(x) && go(x + 1)) return true;
      used[y] = 0;
      f[x] = -1;
    }
    return false;
  };
  if (!go(0)) return std::nullopt;
  return f;
}

FiniteRing ring_zmod(int n) {
  FiniteRing r;
  r.size = n;
  r.add.assign(n, std::vector<int>(n));
  r.mul.assign(n, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      r.add[a][b] = (a + b) % n;
      r.mul[a][b] = (a * b) % n;
    }
  r.one = n > 1 ? 1 : 0;
  return r;
}

FiniteRing ring_f2_dual() {
  FiniteRing r;
  r.size = 4;
  r.add.assign(4, std::vector<int>(4));
  r.mul.assign(4, std::vector<int>(4));
  for (int u = 0; u < 4; ++u)
    for (int v = 0; v < 4; ++v) {
      int a = u & 1, b = u >> 1, c = v & 1, d = v >> 1;
      r.add[u][v] = u ^ v;
      // (a + bx)(c + dx) = ac + (ad + bc)x
      r.mul[u][v] = (a & c) | (((a & d) ^ (b & c)) << 1);
    }
  r.one = 1;
  return r;
}

FiniteModule regular_module(const FiniteRing& r) {
  FiniteModule m;
  m.size = r.size;
  m.add = r.add;
  m.act = r.mul;
  m.zero = r.zero;
  return m;
}

FiniteModule zmod_module(const FiniteRing& r, int n) {
  if (r.size % n != 0) throw std::invalid_argument("zmod_module: n must divide the ring order");
  FiniteModule m;
  m.size = n;
  m.add.assign(n, std::vector<int>(n));
  m.act.assign(r.size, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m.add[a][b] = (a + b) % n;
  for (int s = 0; s < r.size; ++s)
    for (int x = 0; x < n; ++x) m.act[s][x] = (s * x) % n;
  return m;
}

FiniteModule f2_dual_module(const std::vector<std::vector<int>>& x_action) {
  const int k = static_cast<int>(x_action.size());
  const int n = 1 << k;
  auto apply = [&](int v) {
    int out = 0;
    for (int i = 0; i < k; ++i) {
      int bit = 0;
      for (int j = 0; j < k; ++j) bit ^= (x_action[i][j] & 1) & ((v >> j) & 1);
      out |= bit << i;
    }
    return out;
  };
  FiniteModule m;
  m.size = n;
  m.add.assign(n, std::vector<int>(n));
  m.act.assign(4, std::vector<int>(n));
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) m.add[a][b] = a ^ b;
  for (int v = 0; v < n; ++v) {
    m.act[0][v] = 0;
    m.act[1][v] = v;
    m.act[2][v] = apply(v);
    m.act[3][v] = v ^ apply(v);
  }
  return m;
}

FrameStructure omega_minus_reduction(const FiniteAbGroup& g,
                                     const std::vector<std::vector<std::vector<Int>>>& subgroups) {
  Lattice star = augmentation_kernel(g);
  const int m = star.ambient_rank;
  FrameStructure f = make_frame(m);
  add_subgroup(f, "*", star);
  for (size_t n = 0; n < subgroups.size(); ++n) {
    std::vector<Vec> gens = star.rows();
    for (std::size_t idx : generated_subgroup(g, subgroups[n])) {
      Vec e = Vec::Zero(m);
      e(static_cast<int>(idx)) = 1;
      gens.push_back(e);
    }
    add_subgroup(f, std::to_string(n), hnf(gens, m));
  }
  return f;
}

}  // namespace desk
