#include "desk/sbgames/ranked_frame.hpp"

#include <algorithm>
#include <climits>
#include <functional>
#include <stdexcept>

namespace desk {

std::string SmallOrdinal::str() const {
  if (infinite) return "inf";
  if (beta == 0) return std::to_string(k);
  return "w*" + std::to_string(beta) + "+" + std::to_string(k);
}

SmallOrdinal SmallOrdinal::parse(const std::string& s) {
  if (s == "inf") return infinity();
  try {
    if (s.rfind("w*", 0) == 0) {
      auto plus = s.find('+');
      if (plus == std::string::npos) return fin(std::stoi(s.substr(2)), 0);
      return fin(std::stoi(s.substr(2, plus - 2)), std::stoi(s.substr(plus + 1)));
    }
    return natural(std::stoi(s));
  } catch (const std::logic_error&) {
    throw std::invalid_argument("bad ordinal: " + s);
  }
}

bool operator==(const SmallOrdinal& a, const SmallOrdinal& b) {
  if (a.infinite || b.infinite) return a.infinite == b.infinite;
  return a.beta == b.beta && a.k == b.k;
}

bool operator<(const SmallOrdinal& a, const SmallOrdinal& b) {
  if (a.infinite) return false;
  if (b.infinite) return true;
  return a.beta != b.beta ? a.beta < b.beta : a.k < b.k;
}

int RankedFrame::add_coordinate(int phi_target, bool x, SmallOrdinal r) {
  phi.push_back(phi_target);
  in_x.push_back(x ? 1 : 0);
  rho.push_back(x ? r : SmallOrdinal{});
  return rank() - 1;
}

std::vector<int> RankedFrame::x_coordinates() const {
  std::vector<int> out;
  for (int c = 0; c < rank(); ++c)
    if (in_x[c]) out.push_back(c);
  return out;
}

std::vector<std::vector<int>> RankedFrame::preimages() const {
  std::vector<std::vector<int>> kids(rank());
  for (int c = 0; c < rank(); ++c)
    if (phi[c] >= 0) kids[phi[c]].push_back(c);
  return kids;
}

RankedFrame RankedFrame::prefix(int count) const {
  if (count < 0 || count > rank()) throw std::out_of_range("prefix beyond rank");
  RankedFrame out;
  out.phi.assign(phi.begin(), phi.begin() + count);
  out.in_x.assign(in_x.begin(), in_x.begin() + count);
  out.rho.assign(rho.begin(), rho.begin() + count);
  for (int t : out.phi)
    if (t >= count) throw std::invalid_argument("prefix is not closed under phi");
  return out;
}

bool operator==(const RankedFrame& a, const RankedFrame& b) {
  if (a.phi != b.phi || a.in_x != b.in_x) return false;
  for (int c = 0; c < a.rank(); ++c)
    if (a.in_x[c] && a.rho[c] != b.rho[c]) return false;
  return true;
}

FrameStructure restricted_frame(const RankedFrame& rf, const std::vector<int>& coords) {
  int r = static_cast<int>(coords.size());
  std::vector<int> pos(rf.rank(), -1);
  for (int j = 0; j < r; ++j) pos[coords[j]] = j;
  FrameStructure f = make_frame(r);
  Cofamily lines;
  Mat m = Mat::Zero(r, r);
  for (int j = 0; j < r; ++j) {
    int c = coords[j];
    if (rf.in_x[c]) lines.exceptions.push_back(Vec::Unit(r, j));
    if (rf.phi[c] >= 0) {
      if (pos[rf.phi[c]] < 0) throw std::invalid_argument("coordinate set is not closed under phi");
      m(pos[rf.phi[c]], j) = 1;
    }
  }
  f.subgroups["lines"] = SubgroupSpec{lines, true};
  add_function(f, "phi", m);
  return f;
}

FrameStructure to_frame(const RankedFrame& rf) {
  std::vector<int> all(rf.rank());
  for (int c = 0; c < rf.rank(); ++c) all[c] = c;
  return restricted_frame(rf, all);
}

bool XOrder::leq(int a, int b) const {
  // covers are (c, phi(c)), at most one per c
  for (int guard = 0; guard <= static_cast<int>(elements.size()); ++guard) {
    if (a == b) return true;
    auto it = std::find_if(covers.begin(), covers.end(), [&](const auto& e) { return e.first == a; });
    if (it == covers.end()) return false;
    a = it->second;
  }
  return false;
}

XOrder x_order(const RankedFrame& rf) {
  XOrder o;
  o.elements = rf.x_coordinates();
  for (int c : o.elements)
    if (rf.phi[c] >= 0 && rf.in_x[rf.phi[c]]) o.covers.push_back({c, rf.phi[c]});
  return o;
}

std::variant<RankFunction, DescendingChainWitness> wellfounded_check(const XOrder& order) {
  std::map<int, std::vector<int>> below;
  for (int e : order.elements) below[e];
  for (auto [lo, hi] : order.covers) below[hi].push_back(lo);
  std::map<int, int> rank, state;  // state 1 = on stack, 2 = done
  std::vector<int> stack;
  DescendingChainWitness witness;
  std::function<bool(int)> visit = [&](int x) -> bool {
    state[x] = 1;
    stack.push_back(x);
    int r = 0;
    for (int y : below[x]) {
      if (state[y] == 1) {
        auto from = std::find(stack.begin(), stack.end(), y);
        witness.cycle.assign(from, stack.end());
        return false;
      }
      if (state[y] == 0 && !visit(y)) return false;
      r = std::max(r, rank[y] + 1);
    }
    rank[x] = r;
    state[x] = 2;
    stack.pop_back();
    return true;
  };
  RankFunction out;
  for (int e : order.elements)
    if (state[e] == 0 && !visit(e)) return witness;
  for (int e : order.elements) out.rank.push_back({e, rank[e]});
  return out;
}

int nilpotency_index(const RankedFrame& rf) {
  // length of the chain c, phi(c), ... before 0; INT_MAX on a cycle
  std::vector<int> len(rf.rank(), 0), state(rf.rank(), 0);
  int best = 0;
  for (int s = 0; s < rf.rank(); ++s) {
    std::vector<int> path;
    int c = s;
    while (c >= 0 && state[c] == 0) {
      state[c] = 1;
      path.push_back(c);
      c = rf.phi[c];
    }
    if (c >= 0 && state[c] == 1) return INT_MAX;
    int l = c >= 0 ? len[c] : 0;
    for (auto it = path.rbegin(); it != path.rend(); ++it) {
      len[*it] = ++l;
      state[*it] = 2;
    }
    best = std::max(best, len[s]);
  }
  return best;
}

ValidationReport gamma_validate(const RankedFrame& rf, int nilpotency) {
  ValidationReport rep;
  int r = rf.rank();
  if (static_cast<int>(rf.in_x.size()) != r || static_cast<int>(rf.rho.size()) != r) {
    rep.violations.push_back("field sizes disagree");
    return rep;
  }
  for (int c = 0; c < r; ++c)
    if (rf.phi[c] < -1 || rf.phi[c] >= r) {
      rep.violations.push_back("phi of " + std::to_string(c) + " leaves the group");
      return rep;
    }
  for (int b = 0; b < r; ++b) {
    int a = rf.phi[b];
    if (!rf.in_x[b] || a < 0 || !rf.in_x[a] || rf.rho[a].infinite) continue;
    if (!(rf.rho[b] < rf.rho[a]))
      rep.violations.push_back("rho does not drop along " + std::to_string(b) + " -> " + std::to_string(a) + " (" +
                               rf.rho[b].str() + " vs " + rf.rho[a].str() + ")");
  }
  auto wf = wellfounded_check(x_order(rf));
  if (auto* rk = std::get_if<RankFunction>(&wf)) {
    for (auto [e, k] : rk->rank)
      if (rf.rho[e] < SmallOrdinal::natural(k))
        rep.violations.push_back("rho(" + std::to_string(e) + ") = " + rf.rho[e].str() + " below rank " +
                                 std::to_string(k));
  } else {
    rep.violations.push_back("order on X has a cycle");
  }
  int nil = nilpotency_index(rf);
  if (nil > nilpotency)
    rep.violations.push_back("phi^" + std::to_string(nilpotency) + " is not zero (chain length " +
                             (nil == INT_MAX ? std::string("infinite") : std::to_string(nil)) + ")");
  return rep;
}

std::vector<int> PartialAlphaEmbedding::domain() const {
  std::vector<int> d;
  for (int c = 0; c < static_cast<int>(map.size()); ++c)
    if (map[c] >= 0) d.push_back(c);
  return d;
}

std::vector<int> PartialAlphaEmbedding::range() const {
  std::vector<int> r;
  for (int v : map)
    if (v >= 0) r.push_back(v);
  std::sort(r.begin(), r.end());
  return r;
}

bool PartialAlphaEmbedding::total_on(int rank) const {
  for (int c = 0; c < rank; ++c)
    if (image(c) < 0) return false;
  return true;
}

PartialAlphaEmbedding inverse(const PartialAlphaEmbedding& f, int target_rank) {
  PartialAlphaEmbedding g{f.alpha, std::vector<int>(target_rank, -1)};
  for (int c = 0; c < static_cast<int>(f.map.size()); ++c)
    if (f.map[c] >= 0) {
      if (f.map[c] >= target_rank) throw std::out_of_range("image beyond target rank");
      g.map[f.map[c]] = c;
    }
  return g;
}

ValidationReport validate_partial(const RankedFrame& src, const RankedFrame& dst, const PartialAlphaEmbedding& f) {
  ValidationReport rep;
  auto bad = [&](const std::string& s) { rep.violations.push_back(s); };
  if (static_cast<int>(f.map.size()) > src.rank()) bad("map longer than the source rank");
  std::vector<int> hit(dst.rank(), -1);
  SmallOrdinal cap = SmallOrdinal::omega_times(std::max(f.alpha, 0));
  for (int c = 0; c < std::min<int>(f.map.size(), src.rank()); ++c) {
    int v = f.map[c];
    if (v < 0) continue;
    std::string at = " at " + std::to_string(c);
    if (v >= dst.rank()) {
      bad("image out of range" + at);
      continue;
    }
    if (hit[v] >= 0) bad("not injective" + at);
    hit[v] = c;
    int p = src.phi[c];
    if (p >= 0 && f.image(p) < 0) bad("domain not closed under phi" + at);
    int want = p < 0 ? -1 : f.image(p);
    if (p < 0 || want >= 0)
      if (dst.phi[v] != want) bad("does not commute with phi" + at);
    if (!src.in_x[c] && dst.in_x[v]) bad("subgroup element leaves the subgroups" + at);
    if (f.alpha >= 0 && src.in_x[c]) {
      if (!dst.in_x[v]) bad("X element leaves X" + at);
      else if (src.rho[c] < cap && dst.rho[v] != src.rho[c])
        bad("rank " + src.rho[c].str() + " not kept" + at);
    }
  }
  return rep;
}

Mat embedding_matrix(const RankedFrame& dst, const PartialAlphaEmbedding& f) {
  auto d = f.domain();
  Mat m = Mat::Zero(dst.rank(), static_cast<int>(d.size()));
  for (int j = 0; j < static_cast<int>(d.size()); ++j) m(f.map[d[j]], j) = 1;
  return m;
}

namespace {

void require_nilpotent(const RankedFrame& rf, int n, const char* what) {
  if (nilpotency_index(rf) > n + 1) throw std::invalid_argument(std::string(what) + ": phi^(n+1) is not zero");
}

// The fresh summand: coordinates of rf0 outside dom(f) get new coordinates
// after rf1's, with phi transported. X flags and ranks are set by the caller.
Extension fresh_summand(const RankedFrame& rf0, const RankedFrame& rf1, const PartialAlphaEmbedding& f,
                        std::vector<int>& fresh) {
  Extension e{rf1, f};
  e.h.map.resize(rf0.rank(), -1);
  fresh.clear();
  for (int a = 0; a < rf0.rank(); ++a)
    if (e.h.map[a] < 0) {
      e.h.map[a] = rf1.rank() + static_cast<int>(fresh.size());
      fresh.push_back(a);
    }
  for (int a : fresh) {
    int p = rf0.phi[a];
    e.frame.add_coordinate(p < 0 ? -1 : e.h.map[p], false);
  }
  return e;
}

}  // namespace

Extension extend_minus1(const RankedFrame& rf0, const RankedFrame& rf1, const PartialAlphaEmbedding& f, int n) {
  PartialAlphaEmbedding g = f;
  g.alpha = -1;
  auto rep = validate_partial(rf0, rf1, g);
  if (!rep.ok()) throw std::invalid_argument("extend_minus1: " + rep.violations.front());
  require_nilpotent(rf0, n, "extend_minus1");
  require_nilpotent(rf1, n, "extend_minus1");
  std::vector<int> fresh;
  Extension e = fresh_summand(rf0, rf1, g, fresh);
  if (nilpotency_index(e.frame) > n + 1) throw std::logic_error("extend_minus1: nilpotence lost");
  auto check = validate_partial(rf0, e.frame, e.h);
  if (!check.ok() || !e.h.total_on(rf0.rank())) throw std::logic_error("extend_minus1: h is not an embedding");
  return e;
}

Extension extend_beta(const RankedFrame& rf0, const RankedFrame& rf1, const PartialAlphaEmbedding& f, int beta,
                      int n) {
  int alpha = f.alpha;
  if (beta < 0 || beta >= alpha) throw std::invalid_argument("extend_beta: need 0 <= beta < alpha");
  auto rep = validate_partial(rf0, rf1, f);
  if (!rep.ok()) throw std::invalid_argument("extend_beta: f: " + rep.violations.front());
  auto rep_inv = validate_partial(rf1, rf0, inverse(f, rf1.rank()));
  if (!rep_inv.ok()) throw std::invalid_argument("extend_beta: f^-1: " + rep_inv.violations.front());
  require_nilpotent(rf0, n, "extend_beta");
  require_nilpotent(rf1, n, "extend_beta");

  std::vector<int> fresh;
  Extension e = fresh_summand(rf0, rf1, f, fresh);
  e.h.alpha = beta;
  SmallOrdinal wb = SmallOrdinal::omega_times(beta);

  // longest chain c' -> ... -> a' inside X^0 starting at rho >= w*beta; -1 when none
  auto kids = rf0.preimages();
  std::vector<int> longest(rf0.rank(), -2);
  std::function<int(int)> chain = [&](int a) -> int {
    if (longest[a] != -2) return longest[a];
    int best = rf0.rho[a] >= wb ? 0 : -1;
    for (int c : kids[a])
      if (rf0.in_x[c]) {
        int k = chain(c);
        if (k >= 0) best = std::max(best, k + 1);
      }
    return longest[a] = best;
  };

  for (int a : fresh) {
    if (!rf0.in_x[a]) continue;
    int v = e.h.map[a];
    e.frame.in_x[v] = 1;
    SmallOrdinal r;
    if (rf0.rho[a] < wb) {
      r = rf0.rho[a];
    } else {
      int k = chain(a);
      if (k < 0 || k > n) throw std::logic_error("extend_beta: chain length out of range");
      r = SmallOrdinal::fin(beta, k);
    }
    if (!(r < SmallOrdinal::omega_times(alpha))) throw std::logic_error("extend_beta: new rank reaches w*alpha");
    if (rf0.rho[a] < r) throw std::logic_error("extend_beta: new rank exceeds the old one");
    e.frame.rho[v] = r;
  }

  if (nilpotency_index(e.frame) > n + 1) throw std::logic_error("extend_beta: nilpotence lost");
  auto g = gamma_validate(e.frame, n + 1);
  if (!g.ok()) throw std::logic_error("extend_beta: result is not ranked: " + g.violations.front());
  auto hv = validate_partial(rf0, e.frame, e.h);
  if (!hv.ok() || !e.h.total_on(rf0.rank())) throw std::logic_error("extend_beta: h is not a beta-embedding");
  auto hi = validate_partial(e.frame, rf0, inverse(e.h, e.frame.rank()));
  if (!hi.ok()) throw std::logic_error("extend_beta: h^-1 is not a partial beta-embedding");
  return e;
}

}  // namespace desk
