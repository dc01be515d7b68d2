#include "desk/abelian/integer.hpp"

#include <sstream>

namespace desk {

Vec mat_vec(const Mat& m, const Vec& v) {
  if (m.cols() != v.size()) throw std::invalid_argument("mat_vec: dimension mismatch");
  Vec out = Vec::Zero(m.rows());
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    Int s = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
      if (m(i, j) != 0 && v(j) != 0) s = checked_add(s, checked_mul(m(i, j), v(j)));
    out(i) = s;
  }
  return out;
}

Mat mat_mul(const Mat& a, const Mat& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("mat_mul: dimension mismatch");
  Mat out = Mat::Zero(a.rows(), b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index k = 0; k < a.cols(); ++k) {
      if (a(i, k) == 0) continue;
      for (Eigen::Index j = 0; j < b.cols(); ++j)
        if (b(k, j) != 0) out(i, j) = checked_add(out(i, j), checked_mul(a(i, k), b(k, j)));
    }
  return out;
}

bool is_zero(const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (v(i) != 0) return false;
  return true;
}

Vec make_vec(std::initializer_list<Int> xs) {
  Vec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (Int x : xs) v(i++) = x;
  return v;
}

Mat make_mat(std::initializer_list<std::initializer_list<Int>> rows) {
  Eigen::Index r = static_cast<Eigen::Index>(rows.size());
  Eigen::Index c = r == 0 ? 0 : static_cast<Eigen::Index>(rows.begin()->size());
  Mat m(r, c);
  Eigen::Index i = 0;
  for (const auto& row : rows) {
    if (static_cast<Eigen::Index>(row.size()) != c) throw std::invalid_argument("make_mat: ragged rows");
    Eigen::Index j = 0;
    for (Int x : row) m(i, j++) = x;
    ++i;
  }
  return m;
}

Mat rows_to_mat(const std::vector<Vec>& rows, int cols) {
  Mat m(static_cast<Eigen::Index>(rows.size()), cols);
  for (size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != cols) throw std::invalid_argument("rows_to_mat: dimension mismatch");
    m.row(static_cast<Eigen::Index>(i)) = rows[i].transpose();
  }
  return m;
}

std::vector<Vec> mat_to_rows(const Mat& m) {
  std::vector<Vec> out;
  for (Eigen::Index i = 0; i < m.rows(); ++i) out.push_back(m.row(i).transpose());
  return out;
}

std::string to_string(const Vec& v) {
  std::ostringstream os;
  os << '(';
  for (Eigen::Index i = 0; i < v.size(); ++i) os << (i ? "," : "") << v(i);
  os << ')';
  return os.str();
}

Vec primitive(const Vec& v) {
  Int g = vec_gcd(v);
  if (g == 0) return v;
  Vec p = v / g;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    if (p(i) == 0) continue;
    if (p(i) < 0) p = -p;
    break;
  }
  return p;
}

namespace {

// Fraction-free elimination with 128-bit intermediates; returns rank and
// the signed last pivot (the determinant for square full-rank input).
std::pair<int, __int128> bareiss(const Mat& m) {
  const Eigen::Index rows = m.rows(), cols = m.cols();
  std::vector<std::vector<__int128>> a(rows, std::vector<__int128>(cols));
  for (Eigen::Index i = 0; i < rows; ++i)
    for (Eigen::Index j = 0; j < cols; ++j) a[i][j] = m(i, j);
  __int128 prev = 1;
  int sign = 1;
  int rank = 0;
  const __int128 limit = static_cast<__int128>(1) << 100;
  for (Eigen::Index c = 0; c < cols && rank < rows; ++c) {
    Eigen::Index p = -1;
    for (Eigen::Index r = rank; r < rows; ++r)
      if (a[r][c] != 0) {
        p = r;
        break;
      }
    if (p < 0) continue;
    if (p != rank) {
      std::swap(a[p], a[rank]);
      sign = -sign;
    }
    for (Eigen::Index r = rank + 1; r < rows; ++r) {
      for (Eigen::Index k = c + 1; k < cols; ++k) {
        a[r][k] = (a[rank][c] * a[r][k] - a[r][c] * a[rank][k]) / prev;
        if (a[r][k] > limit || a[r][k] < -limit) throw OverflowError("bareiss overflow");
      }
      a[r][c] = 0;
    }
    prev = a[rank][c];
    ++rank;
  }
  return {rank, prev * sign};
}

}  // namespace

int matrix_rank(const Mat& m) { return bareiss(m).first; }

Int determinant(const Mat& m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("determinant: non-square matrix");
  if (m.rows() == 0) return 1;
  auto [rank, d] = bareiss(m);
  if (rank < m.rows()) return 0;
  if (d > INT64_MAX || d < INT64_MIN) throw OverflowError("determinant overflow");
  return static_cast<Int>(d);
}

}  // namespace desk
