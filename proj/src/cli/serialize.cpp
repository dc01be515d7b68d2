#include "desk/cli/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace desk {

json to_json(const Vec& v) {
  json j = json::array();
  for (int i = 0; i < v.size(); ++i) j.push_back(v[i]);
  return j;
}

json to_json(const Mat& m) {
  json j = json::array();
  for (int r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    j.push_back(row);
  }
  return j;
}

Vec vec_from_json(const json& j) {
  Vec v(static_cast<int>(j.size()));
  for (size_t i = 0; i < j.size(); ++i) v[static_cast<int>(i)] = j[i].get<Int>();
  return v;
}

Mat mat_from_json(const json& j, int cols) {
  Mat m(static_cast<int>(j.size()), cols);
  for (size_t r = 0; r < j.size(); ++r) {
    if (static_cast<int>(j[r].size()) != cols) throw std::invalid_argument("matrix row of wrong length");
    for (int c = 0; c < cols; ++c) m(static_cast<int>(r), c) = j[r][c].get<Int>();
  }
  return m;
}

json to_json(const Lattice& l) { return json{{"ambient_rank", l.ambient_rank}, {"basis", to_json(l.basis)}}; }

Lattice lattice_from_json(const json& j) {
  int r = j.at("ambient_rank").get<int>();
  // Re-normalize: documents written by hand need not be in HNF.
  return hnf(mat_to_rows(mat_from_json(j.at("basis"), r)), r);
}

json to_json(const FrameStructure& f) {
  json subs = json::object();
  for (const auto& [k, s] : f.subgroups) {
    json e{{"pure", s.purity_required}};
    if (s.is_explicit()) {
      e["basis"] = to_json(s.lattice().basis);
    } else {
      json ex = json::array();
      for (const Vec& v : s.cofamily().exceptions) ex.push_back(to_json(v));
      e["cofamily"] = ex;
    }
    subs[k] = e;
  }
  json fns = json::object();
  for (const auto& [k, fn] : f.functions)
    fns[k] = json{{"matrix", to_json(fn.matrix)}, {"domain", fn.domain ? json(*fn.domain) : json(nullptr)}};
  return json{{"format", "desk-frame/1"}, {"rank", f.rank}, {"subgroups", subs}, {"functions", fns}};
}

FrameStructure frame_structure_from_json(const json& j) {
  if (j.contains("format") && j.at("format") != "desk-frame/1")
    throw std::invalid_argument("not a frame document: " + j.at("format").dump());
  FrameStructure f = make_frame(j.at("rank").get<int>());
  if (j.contains("subgroups"))
    for (const auto& [k, e] : j.at("subgroups").items()) {
      bool pure = e.value("pure", false);
      if (e.contains("cofamily")) {
        Cofamily c;
        for (const json& v : e.at("cofamily")) c.exceptions.push_back(vec_from_json(v));
        f.subgroups[k] = SubgroupSpec{c, pure};
      } else {
        add_subgroup(f, k, hnf(mat_to_rows(mat_from_json(e.at("basis"), f.rank)), f.rank), pure);
      }
    }
  if (j.contains("functions"))
    for (const auto& [k, e] : j.at("functions").items()) {
      std::optional<std::string> dom;
      if (e.contains("domain") && !e.at("domain").is_null()) dom = e.at("domain").get<std::string>();
      add_function(f, k, mat_from_json(e.at("matrix"), f.rank), dom);
    }
  f.validate();
  return f;
}

json to_json(const FormalSum& s) {
  json j = json::array();
  for (const Term& t : s.terms) j.push_back(json{{"n", t.n}, {"k", t.k}, {"b", to_json(t.b)}});
  return j;
}

FormalSum formal_sum_from_json(const json& j) {
  FormalSum s;
  for (const json& t : j) s.terms.push_back(Term{t.at("n").get<int>(), t.at("k").get<int>(), vec_from_json(t.at("b"))});
  return s;
}

json to_json(const TagFamily& t) {
  json g = json::array();
  for (const auto& x : t.gammas) g.push_back(x.residue());
  const auto& c = t.certificate;
  return json{{"p", t.p},
              {"K", t.K},
              {"seed", t.seed},
              {"gammas", g},
              {"certificate",
               {{"degree", c.degree},
                {"height", c.height},
                {"verified", c.verified},
                {"attempts", c.attempts},
                {"relations_checked", c.relations_checked}}}};
}

TagFamily tag_family_from_json(const json& j) {
  TagFamily t;
  t.p = j.at("p").get<std::uint64_t>();
  t.K = j.at("K").get<int>();
  t.seed = j.at("seed").get<std::uint64_t>();
  for (const json& g : j.at("gammas")) t.gammas.emplace_back(t.p, t.K, g.get<std::uint64_t>());
  const json& c = j.at("certificate");
  t.certificate.degree = c.at("degree").get<int>();
  t.certificate.height = c.at("height").get<int>();
  t.certificate.verified = c.at("verified").get<bool>();
  t.certificate.attempts = c.at("attempts").get<int>();
  t.certificate.relations_checked = c.at("relations_checked").get<std::uint64_t>();
  return t;
}

json to_json(const TreeEmbedding& e) { return json(e.map); }

json to_json(const CompositeStructure& c) {
  json copies = json::array();
  for (const auto& k : c.copies)
    copies.push_back(json{{"gamma", k.gamma}, {"slot", k.slot}, {"rep", k.rep}, {"start", k.start}, {"size", k.size}});
  json enumeration = json::array();
  for (const auto& row : c.enumeration) {
    json r = json::array();
    for (const Vec& v : row) r.push_back(to_json(v));
    enumeration.push_back(r);
  }
  return json{{"frame", to_json(c.frame)},   {"tree", to_term(c.tree)},      {"tree_rank", c.tree_rank},
              {"group_rank", c.group_rank}, {"copies", copies},              {"enumeration", enumeration},
              {"gammas", c.gammas}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
  if (!out) throw std::runtime_error("write failed: " + path);
}

ColoredTree read_tree(const std::string& path) { return parse_term(read_file(path)); }

FrameStructure read_frame(const std::string& path) { return frame_structure_from_json(json::parse(read_file(path))); }

std::string fingerprint(const std::string& text) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace desk
