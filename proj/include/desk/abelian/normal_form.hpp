#pragma once

#include <utility>
#include <vector>

#include <Eigen/Core>

#include "desk/abelian/integer.hpp"

namespace desk {

// Row-style Hermite normal form, in place. Rows are generators; the result
// is upper echelon with positive pivots, entries above each pivot reduced
// into [0, pivot), and zero rows removed. Pivot columns increase downwards.
template <class S>
Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> hermite_rows(
    Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> a) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  Eigen::Index piv = 0;
  auto row_axpy = [&](Eigen::Index dst, Eigen::Index src, S q) {
    // row[dst] -= q * row[src]
    for (Eigen::Index c = 0; c < cols; ++c)
      a(dst, c) = checked_sub(a(dst, c), checked_mul(q, a(src, c)));
  };
  for (Eigen::Index c = 0; c < cols && piv < rows; ++c) {
    // Euclid down column c until only row piv is nonzero there.
    for (;;) {
      Eigen::Index best = -1;
      for (Eigen::Index r = piv; r < rows; ++r) {
        if (a(r, c) == 0) continue;
        if (best < 0 || (a(r, c) < 0 ? -a(r, c) : a(r, c)) <
                            (a(best, c) < 0 ? -a(best, c) : a(best, c)))
          best = r;
      }
      if (best < 0) break;
      if (best != piv) a.row(best).swap(a.row(piv));
      bool done = true;
      for (Eigen::Index r = piv + 1; r < rows; ++r) {
        if (a(r, c) == 0) continue;
        row_axpy(r, piv, a(r, c) / a(piv, c));
        if (a(r, c) != 0) done = false;
      }
      if (done) break;
    }
    if (a(piv, c) == 0) continue;
    if (a(piv, c) < 0)
      for (Eigen::Index k = 0; k < cols; ++k) a(piv, k) = checked_sub(S(0), a(piv, k));
    for (Eigen::Index r = 0; r < piv; ++r) {
      S q = floor_div(a(r, c), a(piv, c));
      if (q != 0) row_axpy(r, piv, q);
    }
    ++piv;
  }
  return a.topRows(piv);
}

// Diagonal of the Smith normal form: the nonzero invariant factors
// d_1 | d_2 | ... (units included). Works on a copy.
template <class S>
std::vector<S> smith_diagonal(Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic> a) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  std::vector<S> diag;
  auto absval = [](S x) { return x < 0 ? checked_sub(S(0), x) : x; };
  Eigen::Index t = 0;
  while (t < rows && t < cols) {
    // Pick the smallest nonzero entry in the remaining block as pivot.
    Eigen::Index pr = -1, pc = -1;
    for (Eigen::Index r = t; r < rows; ++r)
      for (Eigen::Index c = t; c < cols; ++c)
        if (a(r, c) != 0 && (pr < 0 || absval(a(r, c)) < absval(a(pr, pc)))) {
          pr = r;
          pc = c;
        }
    if (pr < 0) break;
    a.row(pr).swap(a.row(t));
    a.col(pc).swap(a.col(t));
    bool clean = false;
    while (!clean) {
      clean = true;
      for (Eigen::Index r = t + 1; r < rows; ++r) {
        if (a(r, t) == 0) continue;
        S q = floor_div(a(r, t), a(t, t));
        for (Eigen::Index c = t; c < cols; ++c)
          a(r, c) = checked_sub(a(r, c), checked_mul(q, a(t, c)));
        if (a(r, t) != 0) {
          a.row(r).swap(a.row(t));
          clean = false;
        }
      }
      for (Eigen::Index c = t + 1; c < cols; ++c) {
        if (a(t, c) == 0) continue;
        S q = floor_div(a(t, c), a(t, t));
        for (Eigen::Index r = t; r < rows; ++r)
          a(r, c) = checked_sub(a(r, c), checked_mul(q, a(r, t)));
        if (a(t, c) != 0) {
          a.col(c).swap(a.col(t));
          clean = false;
        }
      }
      if (!clean) continue;
      // Divisibility: the pivot must divide the rest of the block.
      for (Eigen::Index r = t + 1; r < rows && clean; ++r)
        for (Eigen::Index c = t + 1; c < cols && clean; ++c)
          if (a(r, c) % a(t, t) != 0) {
            for (Eigen::Index k = t; k < cols; ++k)
              a(t, k) = checked_add(a(t, k), a(r, k));
            clean = false;
          }
    }
    diag.push_back(absval(a(t, t)));
    ++t;
  }
  return diag;
}

}  // namespace desk
