#include "desk/abelian/finite_group.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace desk {

FiniteAbGroup::FiniteAbGroup(std::vector<Int> factors) : invariant_factors(std::move(factors)) {
  for (size_t i = 0; i < invariant_factors.size(); ++i) {
    if (invariant_factors[i] < 2) throw std::invalid_argument("invariant factor below 2");
    if (i > 0 && invariant_factors[i] % invariant_factors[i - 1] != 0)
      throw std::invalid_argument("invariant factors must form a divisibility chain");
  }
}

Int FiniteAbGroup::order() const {
  Int n = 1;
  for (Int d : invariant_factors) n = checked_mul(n, d);
  return n;
}

std::vector<std::vector<Int>> FiniteAbGroup::elements() const {
  std::vector<std::vector<Int>> out;
  std::vector<Int> cur(invariant_factors.size(), 0);
  const Int n = order();
  for (Int idx = 0; idx < n; ++idx) {
    out.push_back(cur);
    for (size_t k = cur.size(); k-- > 0;) {
      if (++cur[k] < invariant_factors[k]) break;
      cur[k] = 0;
    }
  }
  return out;
}

std::vector<Int> FiniteAbGroup::add(const std::vector<Int>& a, const std::vector<Int>& b) const {
  std::vector<Int> r(a.size());
  for (size_t i = 0; i < a.size(); ++i) r[i] = mod_floor(a[i] + b[i], invariant_factors[i]);
  return r;
}

std::vector<Int> FiniteAbGroup::scale(Int n, const std::vector<Int>& a) const {
  std::vector<Int> r(a.size());
  for (size_t i = 0; i < a.size(); ++i)
    r[i] = mod_floor(checked_mul(mod_floor(n, invariant_factors[i]), a[i]), invariant_factors[i]);
  return r;
}

std::size_t FiniteAbGroup::index_of(const std::vector<Int>& a) const {
  std::size_t idx = 0;
  for (size_t i = 0; i < a.size(); ++i)
    idx = idx * static_cast<std::size_t>(invariant_factors[i]) +
          static_cast<std::size_t>(mod_floor(a[i], invariant_factors[i]));
  return idx;
}

namespace {

void chains(Int remaining, Int last, std::vector<Int>& cur, std::vector<std::vector<Int>>& out) {
  if (remaining == 1) {
    std::vector<Int> rev(cur.rbegin(), cur.rend());
    out.push_back(rev);
    return;
  }
  // Build from the largest factor down: each next factor divides the previous.
  for (Int d = 2; d <= remaining; ++d) {
    if (remaining % d != 0) continue;
    if (last != 0 && last % d != 0) continue;
    cur.push_back(d);
    chains(remaining / d, d, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<FiniteAbGroup> groups_of_order(Int m) {
  if (m < 1) throw std::invalid_argument("groups_of_order: m >= 1");
  std::vector<std::vector<Int>> raw;
  std::vector<Int> cur;
  chains(m, 0, cur, raw);
  std::sort(raw.begin(), raw.end());
  std::vector<FiniteAbGroup> out;
  for (const auto& f : raw) out.emplace_back(f);
  return out;
}

std::vector<std::size_t> generated_subgroup(const FiniteAbGroup& g,
                                            const std::vector<std::vector<Int>>& gens) {
  std::set<std::size_t> seen;
  std::vector<std::vector<Int>> frontier;
  std::vector<Int> zero(g.invariant_factors.size(), 0);
  seen.insert(g.index_of(zero));
  frontier.push_back(zero);
  while (!frontier.empty()) {
    auto x = frontier.back();
    frontier.pop_back();
    for (const auto& s : gens) {
      auto y = g.add(x, s);
      if (seen.insert(g.index_of(y)).second) frontier.push_back(y);
    }
  }
  return {seen.begin(), seen.end()};
}

}  // namespace desk
