#include "desk/abelian/lattice.hpp"

#include <sstream>

#include "desk/abelian/normal_form.hpp"

namespace desk {

std::vector<Vec> Lattice::rows() const { return mat_to_rows(basis); }

Lattice hnf(const Mat& generator_rows) {
  Lattice l;
  l.ambient_rank = static_cast<int>(generator_rows.cols());
  l.basis = hermite_rows<Int>(generator_rows);
  return l;
}

Lattice hnf(const std::vector<Vec>& generators, int ambient_rank) {
  return hnf(rows_to_mat(generators, ambient_rank));
}

Lattice zero_lattice(int ambient_rank) { return hnf(Mat(0, ambient_rank)); }

Lattice full_lattice(int ambient_rank) {
  return hnf(Mat::Identity(ambient_rank, ambient_rank));
}

std::optional<Vec> coordinates(const Lattice& l, const Vec& v) {
  if (v.size() != l.ambient_rank) throw std::invalid_argument("coordinates: dimension mismatch");
  Vec w = v;
  Vec x = Vec::Zero(l.rank());
  int i = 0;
  for (int c = 0; c < l.ambient_rank; ++c) {
    if (i < l.rank() && l.basis(i, c) != 0) {
      Int piv = l.basis(i, c);
      if (w(c) % piv != 0) return std::nullopt;
      Int q = w(c) / piv;
      x(i) = q;
      for (int k = c; k < l.ambient_rank; ++k)
        w(k) = checked_sub(w(k), checked_mul(q, l.basis(i, k)));
      ++i;
    } else if (w(c) != 0) {
      return std::nullopt;
    }
  }
  return x;
}

bool member(const Lattice& l, const Vec& v) { return coordinates(l, v).has_value(); }

bool contains(const Lattice& big, const Lattice& small) {
  for (int i = 0; i < small.rank(); ++i)
    if (!member(big, small.row(i))) return false;
  return true;
}

Lattice left_kernel(const Mat& m) {
  const Eigen::Index k = m.rows(), c = m.cols();
  Mat aug(k, c + k);
  aug.leftCols(c) = m;
  aug.rightCols(k) = Mat::Identity(k, k);
  Mat h = hermite_rows<Int>(aug);
  std::vector<Vec> ker;
  for (Eigen::Index i = 0; i < h.rows(); ++i) {
    bool zero = true;
    for (Eigen::Index j = 0; j < c; ++j)
      if (h(i, j) != 0) zero = false;
    if (zero) ker.push_back(h.row(i).rightCols(k).transpose());
  }
  return hnf(ker, static_cast<int>(k));
}

Lattice right_kernel(const Mat& m) { return left_kernel(m.transpose()); }

Lattice purify(const Lattice& l) {
  if (l.rank() == 0) return l;
  if (l.rank() == l.ambient_rank) return full_lattice(l.ambient_rank);
  Lattice normal = right_kernel(l.basis);
  return right_kernel(normal.basis);
}

bool is_pure(const Lattice& l) { return purify(l) == l; }

Lattice p_purify(const Lattice& l, Int p) {
  if (p < 2) throw std::invalid_argument("p_purify: p must be prime");
  Lattice cur = l;
  for (;;) {
    // Find x != 0 mod p with x * B = 0 mod p; then x*B/p joins the lattice.
    const int k = cur.rank(), r = cur.ambient_rank;
    if (k == 0) return cur;
    std::vector<std::vector<Int>> a(r, std::vector<Int>(k));
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < r; ++j) a[j][i] = mod_floor(cur.basis(i, j), p);
    // Gaussian elimination over F_p on the r x k system a * x = 0.
    std::vector<int> pivcol;
    int row = 0;
    for (int col = 0; col < k && row < r; ++col) {
      int pr = -1;
      for (int i = row; i < r; ++i)
        if (a[i][col] != 0) {
          pr = i;
          break;
        }
      if (pr < 0) continue;
      std::swap(a[pr], a[row]);
      Int inv = 1;
      for (Int t = 1; t < p; ++t)
        if ((a[row][col] * t) % p == 1) inv = t;
      for (int j = 0; j < k; ++j) a[row][j] = (a[row][j] * inv) % p;
      for (int i = 0; i < r; ++i) {
        if (i == row || a[i][col] == 0) continue;
        Int f = a[i][col];
        for (int j = 0; j < k; ++j) a[i][j] = mod_floor(a[i][j] - f * a[row][j], p);
      }
      pivcol.push_back(col);
      ++row;
    }
    int free_col = -1;
    for (int col = 0; col < k && free_col < 0; ++col) {
      bool is_piv = false;
      for (int pc : pivcol) is_piv |= (pc == col);
      if (!is_piv) free_col = col;
    }
    if (free_col < 0) return cur;
    std::vector<Int> x(k, 0);
    x[free_col] = 1;
    for (size_t i = 0; i < pivcol.size(); ++i) x[pivcol[i]] = mod_floor(-a[i][free_col], p);
    Vec w = Vec::Zero(r);
    for (int i = 0; i < k; ++i)
      for (int j = 0; j < r; ++j) w(j) = checked_add(w(j), checked_mul(x[i], cur.basis(i, j)));
    for (int j = 0; j < r; ++j) w(j) /= p;
    std::vector<Vec> gens = cur.rows();
    gens.push_back(w);
    cur = hnf(gens, r);
  }
}

Lattice lattice_sum(const Lattice& a, const Lattice& b) {
  if (a.ambient_rank != b.ambient_rank) throw std::invalid_argument("lattice_sum: rank mismatch");
  std::vector<Vec> gens = a.rows();
  for (const Vec& v : b.rows()) gens.push_back(v);
  return hnf(gens, a.ambient_rank);
}

Lattice intersect(const Lattice& a, const Lattice& b) {
  if (a.ambient_rank != b.ambient_rank) throw std::invalid_argument("intersect: rank mismatch");
  if (a.rank() == 0 || b.rank() == 0) return zero_lattice(a.ambient_rank);
  Mat stacked(a.rank() + b.rank(), a.ambient_rank);
  stacked.topRows(a.rank()) = a.basis;
  stacked.bottomRows(b.rank()) = b.basis;
  Lattice ker = left_kernel(stacked);
  std::vector<Vec> gens;
  for (int i = 0; i < ker.rank(); ++i) {
    Vec x = ker.row(i).head(a.rank());
    gens.push_back(mat_vec(a.basis.transpose(), x));
  }
  return hnf(gens, a.ambient_rank);
}

Lattice image(const Lattice& l, const Mat& m) {
  if (m.cols() != l.ambient_rank) throw std::invalid_argument("image: dimension mismatch");
  std::vector<Vec> gens;
  for (int i = 0; i < l.rank(); ++i) gens.push_back(mat_vec(m, l.row(i)));
  return hnf(gens, static_cast<int>(m.rows()));
}

QuotientInvariants quotient_invariants(const Lattice& l) {
  QuotientInvariants q;
  std::vector<Int> d = smith_diagonal<Int>(l.basis);
  for (Int x : d)
    if (x > 1) q.torsion.push_back(x);
  q.free_rank = l.ambient_rank - static_cast<int>(d.size());
  return q;
}

Int lattice_index(const Lattice& l) {
  QuotientInvariants q = quotient_invariants(l);
  if (q.free_rank > 0) return 0;
  Int idx = 1;
  for (Int x : q.torsion) idx = checked_mul(idx, x);
  return idx;
}

std::string to_string(const Lattice& l) {
  std::ostringstream os;
  os << "span{";
  for (int i = 0; i < l.rank(); ++i) os << (i ? "," : "") << to_string(l.row(i));
  os << "} in Z^" << l.ambient_rank;
  return os.str();
}

}  // namespace desk
