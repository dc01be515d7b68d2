#pragma once

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "desk/abelian/lattice.hpp"

namespace desk {

// All pure rank-one subgroups of the ambient group except the lines through
// the listed exceptions (primitive, pairwise non-proportional).
struct Cofamily {
  std::vector<Vec> exceptions;
};

struct SubgroupSpec {
  std::variant<Lattice, Cofamily> kind;
  bool purity_required = false;

  bool is_explicit() const { return std::holds_alternative<Lattice>(kind); }
  const Lattice& lattice() const { return std::get<Lattice>(kind); }
  const Cofamily& cofamily() const { return std::get<Cofamily>(kind); }
};

// A (partial) endomorphism: an r x r matrix read on the named domain
// subgroup, or on the whole ambient group when domain is empty.
struct FrameFunction {
  std::optional<std::string> domain;
  Mat matrix;
};

struct FrameStructure {
  int rank = 0;  // ambient group is Z^rank
  std::map<std::string, SubgroupSpec> subgroups;
  std::map<std::string, FrameFunction> functions;

  Lattice domain_of(const std::string& function_index) const;
  // Throws std::invalid_argument describing the first violated invariant.
  void validate() const;
};

FrameStructure make_frame(int rank);
void add_subgroup(FrameStructure& f, const std::string& index, const Lattice& l,
                  bool purity_required = false);
void add_function(FrameStructure& f, const std::string& index, const Mat& m,
                  std::optional<std::string> domain = std::nullopt);

// Is v a member of the union of the cofamily's lines?
bool cofamily_member(const Cofamily& c, const Vec& v);

struct FrameEmbedding {
  Mat matrix;  // target.rank x source.rank
  Int bound_used = 0;
};

// Checks injectivity, same-index subgroup containment and commutation with
// same-index functions. When iso is set, also demands a unimodular square
// matrix carrying each explicit subgroup onto its counterpart.
bool verify_embedding(const FrameStructure& source, const FrameStructure& target,
                      const Mat& m, bool iso = false, std::string* why = nullptr);

}  // namespace desk
