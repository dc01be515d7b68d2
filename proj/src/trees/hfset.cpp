#include "desk/trees/hfset.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <set>
#include <stdexcept>

namespace desk {

HFSet::HFSet(std::vector<HFSet> elems) : elems_(std::move(elems)) {
  std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
}

bool operator<(const HFSet& a, const HFSet& b) {
  int ra = a.rank(), rb = b.rank();
  if (ra != rb) return ra < rb;
  return std::lexicographical_compare(a.elems_.begin(), a.elems_.end(), b.elems_.begin(), b.elems_.end());
}

bool HFSet::contains(const HFSet& x) const { return std::binary_search(elems_.begin(), elems_.end(), x); }

int HFSet::rank() const {
  int r = 0;
  for (const auto& e : elems_) r = std::max(r, e.rank() + 1);
  return r;
}

std::string HFSet::str() const {
  std::string s = "{";
  for (size_t i = 0; i < elems_.size(); ++i) {
    if (i) s += ",";
    s += elems_[i].str();
  }
  return s + "}";
}

namespace {

HFSet parse_at(const std::string& s, size_t& i) {
  auto ws = [&] {
    while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  };
  ws();
  if (i >= s.size() || s[i] != '{') throw std::invalid_argument("hfset: expected '{' at offset " + std::to_string(i));
  ++i;
  std::vector<HFSet> elems;
  ws();
  if (i < s.size() && s[i] == '}') {
    ++i;
    return HFSet();
  }
  for (;;) {
    elems.push_back(parse_at(s, i));
    ws();
    if (i < s.size() && s[i] == ',') {
      ++i;
      continue;
    }
    if (i < s.size() && s[i] == '}') {
      ++i;
      return HFSet(std::move(elems));
    }
    throw std::invalid_argument("hfset: expected ',' or '}' at offset " + std::to_string(i));
  }
}

}  // namespace

HFSet parse_hfset(const std::string& s) {
  size_t i = 0;
  HFSet a = parse_at(s, i);
  while (i < s.size() && std::isspace(static_cast<unsigned char>(s[i]))) ++i;
  if (i != s.size()) throw std::invalid_argument("hfset: trailing input");
  return a;
}

HFSet singleton(const HFSet& x) { return HFSet(std::vector<HFSet>{x}); }

HFSet set_union(const HFSet& a, const HFSet& b) {
  std::vector<HFSet> e = a.elements();
  e.insert(e.end(), b.elements().begin(), b.elements().end());
  return HFSet(std::move(e));
}

std::vector<HFSet> transitive_closure(const HFSet& a) {
  std::set<HFSet> seen;
  std::vector<HFSet> todo = a.elements();
  while (!todo.empty()) {
    HFSet x = todo.back();
    todo.pop_back();
    if (!seen.insert(x).second) continue;
    for (const auto& e : x.elements()) todo.push_back(e);
  }
  return {seen.begin(), seen.end()};
}

HFSet ordinal(int n) {
  std::vector<HFSet> below;
  for (int i = 0; i < n; ++i) below.push_back(HFSet(below));
  return HFSet(below);
}

namespace {

// Calls visit(node, last entry) for every node of the preliminary tree.
ColoredTree build_core(const HFSet& a, const std::function<void(ColoredTree&, int, const HFSet&)>& visit) {
  std::vector<HFSet> pool = transitive_closure(a);
  pool.push_back(a);
  std::sort(pool.begin(), pool.end());
  ColoredTree t(0);
  std::vector<std::pair<int, HFSet>> frontier{{0, a}};
  for (size_t at = 0; at < frontier.size(); ++at) {
    auto [node, last] = frontier[at];
    int r = last.rank();
    for (const HFSet& x : pool) {
      if (x.rank() >= r) continue;
      int child = t.add_child(node, last.contains(x) ? 0 : 1);
      frontier.push_back({child, x});
    }
  }
  // Grafts go after the whole preliminary tree so its node numbering is stable.
  for (auto& [node, last] : frontier) visit(t, node, last);
  return t;
}

}  // namespace

ColoredTree tree_of_set_core(const HFSet& a) {
  return build_core(a, [](ColoredTree&, int, const HFSet&) {});
}

ColoredTree tree_of_set(const HFSet& a, const std::vector<ColoredTree>& antichain) {
  if (static_cast<int>(antichain.size()) < a.rank() + 1)
    throw std::invalid_argument("tree_of_set: antichain shorter than rank(A) + 1");
  return build_core(a, [&](ColoredTree& t, int node, const HFSet& last) { graft(t, node, antichain[last.rank()], 2); });
}

}  // namespace desk
