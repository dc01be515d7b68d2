#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace desk {

// Entries are 64-bit with every arithmetic step overflow-checked; desk
// instances never come close, and an overflow aborts instead of wrapping.
using Int = std::int64_t;
using Vec = Eigen::Matrix<Int, Eigen::Dynamic, 1>;
using Mat = Eigen::Matrix<Int, Eigen::Dynamic, Eigen::Dynamic>;

struct OverflowError : std::overflow_error {
  using std::overflow_error::overflow_error;
};

template <class S>
inline S checked_add(S a, S b) {
  S r;
  if (__builtin_add_overflow(a, b, &r)) throw OverflowError("integer overflow in add");
  return r;
}

template <class S>
inline S checked_sub(S a, S b) {
  S r;
  if (__builtin_sub_overflow(a, b, &r)) throw OverflowError("integer overflow in sub");
  return r;
}

template <class S>
inline S checked_mul(S a, S b) {
  S r;
  if (__builtin_mul_overflow(a, b, &r)) throw OverflowError("integer overflow in mul");
  return r;
}

// Floor division and the matching non-negative remainder.
template <class S>
inline S floor_div(S a, S b) {
  S q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

template <class S>
inline S mod_floor(S a, S b) {
  S r = a % b;
  if (r != 0 && ((r < 0) != (b < 0))) r += b;
  return r;
}

inline Int gcd(Int a, Int b) {
  a = a < 0 ? -a : a;
  b = b < 0 ? -b : b;
  while (b != 0) {
    Int t = a % b;
    a = b;
    b = t;
  }
  return a;
}

inline Int vec_gcd(const Vec& v) {
  Int g = 0;
  for (Eigen::Index i = 0; i < v.size(); ++i) g = gcd(g, v(i));
  return g;
}

Vec mat_vec(const Mat& m, const Vec& v);
Mat mat_mul(const Mat& a, const Mat& b);
bool is_zero(const Vec& v);

Vec make_vec(std::initializer_list<Int> xs);
Mat make_mat(std::initializer_list<std::initializer_list<Int>> rows);
Mat rows_to_mat(const std::vector<Vec>& rows, int cols);
std::vector<Vec> mat_to_rows(const Mat& m);

std::string to_string(const Vec& v);

// Primitive representative of the line through v: divide by the gcd and make
// the first nonzero entry positive.
Vec primitive(const Vec& v);

// Rank over the rationals and determinant (Bareiss, exact).
int matrix_rank(const Mat& m);
Int determinant(const Mat& m);

}  // namespace desk
