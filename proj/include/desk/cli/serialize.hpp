#pragma once

#include <string>

#include <json.hpp>

#include "desk/abelian/frame.hpp"
#include "desk/padic/coding.hpp"
#include "desk/sbgames/ranked_frame.hpp"
#include "desk/treecode/tensor.hpp"
#include "desk/trees/tree.hpp"

namespace desk {

using nlohmann::json;

// Integers go out as JSON numbers (decimal, optional sign). Keys come out
// sorted, which fixes the field order.
json to_json(const Vec& v);
json to_json(const Mat& m);
Vec vec_from_json(const json& j);
// cols is needed for matrices with no rows.
Mat mat_from_json(const json& j, int cols);

json to_json(const Lattice& l);
Lattice lattice_from_json(const json& j);

// {"format": "desk-frame/1", "rank", "subgroups": {index: {"basis" | "cofamily",
// "pure"}}, "functions": {index: {"matrix", "domain"}}}
json to_json(const FrameStructure& f);
FrameStructure frame_structure_from_json(const json& j);

json to_json(const FormalSum& s);
FormalSum formal_sum_from_json(const json& j);
json to_json(const TagFamily& t);
TagFamily tag_family_from_json(const json& j);

json to_json(const TreeEmbedding& e);
json to_json(const CompositeStructure& c);

// Documents on disk: tree terms, frame documents and ranked frames.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);
ColoredTree read_tree(const std::string& path);
FrameStructure read_frame(const std::string& path);

// FNV-1a, for fingerprints in reports.
std::string fingerprint(const std::string& text);

}  // namespace desk
