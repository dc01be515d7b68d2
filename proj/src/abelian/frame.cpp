#include "desk/abelian/frame.hpp"

#include <set>
#include <sstream>

namespace desk {

FrameStructure make_frame(int rank) {
  FrameStructure f;
  f.rank = rank;
  return f;
}

void add_subgroup(FrameStructure& f, const std::string& index, const Lattice& l,
                  bool purity_required) {
  if (l.ambient_rank != f.rank) throw std::invalid_argument("add_subgroup: rank mismatch");
  f.subgroups[index] = SubgroupSpec{l, purity_required};
}

void add_function(FrameStructure& f, const std::string& index, const Mat& m,
                  std::optional<std::string> domain) {
  f.functions[index] = FrameFunction{std::move(domain), m};
}

Lattice FrameStructure::domain_of(const std::string& function_index) const {
  const FrameFunction& fn = functions.at(function_index);
  if (!fn.domain) return full_lattice(rank);
  const SubgroupSpec& s = subgroups.at(*fn.domain);
  if (!s.is_explicit()) throw std::invalid_argument("function domain must be an explicit subgroup");
  return s.lattice();
}

void FrameStructure::validate() const {
  for (const auto& [idx, s] : subgroups) {
    if (s.is_explicit()) {
      if (s.lattice().ambient_rank != rank)
        throw std::invalid_argument("subgroup " + idx + ": rank mismatch");
      if (s.purity_required && !is_pure(s.lattice()))
        throw std::invalid_argument("subgroup " + idx + ": not pure");
    } else {
      const auto& ex = s.cofamily().exceptions;
      std::set<std::vector<Int>> seen;
      for (const Vec& v : ex) {
        if (v.size() != rank) throw std::invalid_argument("cofamily " + idx + ": rank mismatch");
        if (vec_gcd(v) != 1) throw std::invalid_argument("cofamily " + idx + ": exception not primitive");
        Vec p = primitive(v);
        if (!seen.insert(std::vector<Int>(p.data(), p.data() + p.size())).second)
          throw std::invalid_argument("cofamily " + idx + ": proportional exceptions");
      }
    }
  }
  for (const auto& [idx, fn] : functions) {
    if (fn.matrix.rows() != rank || fn.matrix.cols() != rank)
      throw std::invalid_argument("function " + idx + ": matrix must be rank x rank");
    if (fn.domain && !subgroups.count(*fn.domain))
      throw std::invalid_argument("function " + idx + ": unknown domain " + *fn.domain);
  }
}

bool cofamily_member(const Cofamily& c, const Vec& v) {
  if (is_zero(v)) return true;
  Vec p = primitive(v);
  for (const Vec& x : c.exceptions)
    if (primitive(x) == p) return false;
  return true;
}

namespace {

// Primitive direction w with M w on the line through x, if any.
std::optional<Vec> preimage_direction(const Mat& m, const Vec& x) {
  Mat aug(m.rows(), m.cols() + 1);
  aug.leftCols(m.cols()) = m;
  aug.col(m.cols()) = -x;
  Lattice ker = right_kernel(aug);
  for (int i = 0; i < ker.rank(); ++i) {
    Vec k = ker.row(i);
    if (k(m.cols()) != 0) return primitive(k.head(m.cols()));
  }
  return std::nullopt;
}

bool in_rational_span(const Lattice& l, const Vec& x) {
  std::vector<Vec> g = l.rows();
  g.push_back(x);
  return hnf(g, l.ambient_rank).rank() == l.rank();
}

bool fail(std::string* why, const std::string& msg) {
  if (why) *why = msg;
  return false;
}

bool has_free_line(const Cofamily& c, int rank) {
  if (rank == 0) return false;
  if (rank >= 2) return true;
  return c.exceptions.empty();
}

}  // namespace

bool verify_embedding(const FrameStructure& s, const FrameStructure& t, const Mat& m, bool iso,
                      std::string* why) {
  if (m.rows() != t.rank || m.cols() != s.rank) return fail(why, "matrix shape");
  if (matrix_rank(m) != s.rank) return fail(why, "not injective");
  if (iso) {
    if (s.rank != t.rank) return fail(why, "ranks differ");
    Int d = determinant(m);
    if (d != 1 && d != -1) return fail(why, "not unimodular");
    if (s.subgroups.size() != t.subgroups.size() || s.functions.size() != t.functions.size())
      return fail(why, "index sets differ");
  }
  for (const auto& [idx, ss] : s.subgroups) {
    auto it = t.subgroups.find(idx);
    if (it == t.subgroups.end()) return fail(why, "missing subgroup " + idx);
    const SubgroupSpec& ts = it->second;
    if (ss.is_explicit()) {
      Lattice img = image(ss.lattice(), m);
      if (ts.is_explicit()) {
        if (!contains(ts.lattice(), img)) return fail(why, "subgroup " + idx + " not preserved");
        if (iso && img != ts.lattice()) return fail(why, "subgroup " + idx + " not onto");
      } else {
        for (const Vec& x : ts.cofamily().exceptions)
          if (in_rational_span(img, x)) return fail(why, "subgroup " + idx + " meets an exception line");
        if (iso) return fail(why, "subgroup kinds differ at " + idx);
      }
    } else {
      const Cofamily& sc = ss.cofamily();
      if (ts.is_explicit()) {
        if (iso) return fail(why, "subgroup kinds differ at " + idx);
        if (has_free_line(sc, s.rank) &&
            !contains(ts.lattice(), image(full_lattice(s.rank), m)))
          return fail(why, "cofamily " + idx + " not preserved");
      } else {
        const Cofamily& tc = ts.cofamily();
        for (const Vec& x : tc.exceptions) {
          auto w = preimage_direction(m, x);
          if (w && cofamily_member(sc, *w)) return fail(why, "cofamily " + idx + " hits an exception");
        }
        if (iso) {
          if (sc.exceptions.size() != tc.exceptions.size())
            return fail(why, "cofamily " + idx + " exception counts differ");
          for (const Vec& x : sc.exceptions)
            if (cofamily_member(tc, mat_vec(m, x))) return fail(why, "cofamily " + idx + " not onto");
        }
      }
    }
  }
  for (const auto& [idx, sf] : s.functions) {
    auto it = t.functions.find(idx);
    if (it == t.functions.end()) return fail(why, "missing function " + idx);
    const FrameFunction& tf = it->second;
    Lattice sd = s.domain_of(idx);
    Lattice td = t.domain_of(idx);
    Lattice img = image(sd, m);
    if (!contains(td, img)) return fail(why, "function " + idx + " domain not preserved");
    if (iso && img != td) return fail(why, "function " + idx + " domain not onto");
    for (int i = 0; i < sd.rank(); ++i) {
      Vec v = sd.row(i);
      if (mat_vec(m, mat_vec(sf.matrix, v)) != mat_vec(tf.matrix, mat_vec(m, v)))
        return fail(why, "function " + idx + " does not commute");
    }
  }
  if (iso) {
    for (const auto& [idx, ts] : t.subgroups)
      if (!s.subgroups.count(idx)) return fail(why, "extra subgroup " + idx);
    for (const auto& [idx, tf] : t.functions)
      if (!s.functions.count(idx)) return fail(why, "extra function " + idx);
  }
  return true;
}

}  // namespace desk
