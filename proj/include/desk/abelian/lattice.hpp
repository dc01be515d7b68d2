#pragma once

#include <optional>
#include <string>
#include <vector>

#include "desk/abelian/integer.hpp"

namespace desk {

// A subgroup of Z^r, stored by its Hermite normal form (rows are basis
// vectors). Two equal lattices have identical fields.
struct Lattice {
  int ambient_rank = 0;
  Mat basis;  // rank x ambient_rank

  int rank() const { return static_cast<int>(basis.rows()); }
  Vec row(int i) const { return basis.row(i).transpose(); }
  std::vector<Vec> rows() const;
  bool operator==(const Lattice& o) const {
    return ambient_rank == o.ambient_rank && basis.rows() == o.basis.rows() &&
           basis == o.basis;
  }
  bool operator!=(const Lattice& o) const { return !(*this == o); }
};

Lattice hnf(const std::vector<Vec>& generators, int ambient_rank);
Lattice hnf(const Mat& generator_rows);
Lattice zero_lattice(int ambient_rank);
Lattice full_lattice(int ambient_rank);

bool member(const Lattice& l, const Vec& v);
bool contains(const Lattice& big, const Lattice& small);

Lattice purify(const Lattice& l);
Lattice p_purify(const Lattice& l, Int p);
bool is_pure(const Lattice& l);

Lattice lattice_sum(const Lattice& a, const Lattice& b);
Lattice intersect(const Lattice& a, const Lattice& b);
// Image {M v : v in l} for an r' x r matrix M.
Lattice image(const Lattice& l, const Mat& m);
// {v : M v = 0}.
Lattice right_kernel(const Mat& m);
// {x : x^T M = 0}, i.e. the left kernel of M, as a lattice in Z^{rows(M)}.
Lattice left_kernel(const Mat& m);

// Integer coefficients x with x^T basis = v, if v is a member.
std::optional<Vec> coordinates(const Lattice& l, const Vec& v);

// Invariant factors (each >= 2) and free rank of Z^r / l.
struct QuotientInvariants {
  std::vector<Int> torsion;
  int free_rank = 0;
  bool operator==(const QuotientInvariants& o) const {
    return torsion == o.torsion && free_rank == o.free_rank;
  }
};
QuotientInvariants quotient_invariants(const Lattice& l);
// Index [Z^r : l]; 0 when the quotient is infinite.
Int lattice_index(const Lattice& l);

std::string to_string(const Lattice& l);

}  // namespace desk
