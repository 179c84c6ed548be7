#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "json.hpp"

#include "heis/curvature.hpp"
#include "heis/curves.hpp"
#include "heis/geodesic.hpp"
#include "heis/group.hpp"
#include "heis/seqvec.hpp"

namespace heis {

using Json = nlohmann::json;

// Sparse vectors are arrays of [index, value] pairs with 1-based, strictly
// increasing indices: [[1, 0.5], [4, -2.0]].
Json to_json(const SeqVec& v);
// Throws ValidationError on malformed input.
SeqVec seqvec_from_json(const Json& j);

// {"h1": pairs, "h2": pairs, "t": real}
Json to_json(const GroupPoint& p);
GroupPoint group_point_from_json(const Json& j);

// {"x1": pairs, "x2": pairs, "x3": real}
Json to_json(const LieVector& x);
LieVector lie_vector_from_json(const Json& j);

Json to_json(const CurvatureBreakdown& b);
Json to_json(const AdjointResult& r);
Json to_json(const OptimizationReport& r);

GroupPoint read_group_point(const std::string& path);

// "1:0.5 4:-2" with 17 significant digits; empty string for zero.
std::string sparse_string(const SeqVec& v);
SeqVec parse_sparse_string(const std::string& s);

// 17 significant digits.
std::string format_double(double v);

// Columns t,h1,h2,tau,residual.
void write_curve_csv(std::ostream& out, const std::vector<CurveSample>& samples);

}  // namespace heis
