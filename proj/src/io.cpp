#include "heis/io.hpp"

#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>

#include "heis/errors.hpp"

namespace heis {

Json to_json(const SeqVec& v) {
  Json out = Json::array();
  for (const auto& [k, x] : v.entries()) out.push_back(Json::array({k, x}));
  return out;
}

SeqVec seqvec_from_json(const Json& j) {
  if (!j.is_array()) throw ValidationError("sparse vector must be an array of [index, value] pairs");
  std::vector<SeqVec::Entry> entries;
  Index previous = 0;
  for (const auto& pair : j) {
    if (!pair.is_array() || pair.size() != 2 || !pair[0].is_number_integer() || !pair[1].is_number())
      throw ValidationError("sparse vector entry must be [integer index, number]");
    const Index k = pair[0].get<Index>();
    if (k < 1) throw ValidationError("sparse vector indices are 1-based");
    if (k <= previous) throw ValidationError("sparse vector indices must be strictly increasing");
    previous = k;
    entries.emplace_back(k, pair[1].get<double>());
  }
  return SeqVec::from_entries(std::move(entries));
}

Json to_json(const GroupPoint& p) { return {{"h1", to_json(p.h1)}, {"h2", to_json(p.h2)}, {"t", p.t}}; }

GroupPoint group_point_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("group point must be an object with h1, h2, t");
  GroupPoint p;
  if (j.contains("h1")) p.h1 = seqvec_from_json(j.at("h1"));
  if (j.contains("h2")) p.h2 = seqvec_from_json(j.at("h2"));
  if (j.contains("t")) {
    if (!j.at("t").is_number()) throw ValidationError("group point t must be a number");
    p.t = j.at("t").get<double>();
  }
  return p;
}

Json to_json(const LieVector& x) { return {{"x1", to_json(x.x1)}, {"x2", to_json(x.x2)}, {"x3", x.x3}}; }

LieVector lie_vector_from_json(const Json& j) {
  if (!j.is_object()) throw ValidationError("Lie vector must be an object with x1, x2, x3");
  LieVector x;
  if (j.contains("x1")) x.x1 = seqvec_from_json(j.at("x1"));
  if (j.contains("x2")) x.x2 = seqvec_from_json(j.at("x2"));
  if (j.contains("x3")) x.x3 = j.at("x3").get<double>();
  return x;
}

Json to_json(const CurvatureBreakdown& b) {
  return {{"x", to_json(b.x)},
          {"y", to_json(b.y)},
          {"delta", to_json(b.delta)},
          {"arnold_beta", to_json(b.arnold_beta)},
          {"arnold_alpha", to_json(b.arnold_alpha)},
          {"B_X", to_json(b.b_x)},
          {"B_Y", to_json(b.b_y)},
          {"K", b.k}};
}

Json to_json(const AdjointResult& r) {
  Json partial = Json::array();
  for (const auto& [m, s] : r.partial_norms_sq) partial.push_back(Json::array({m, s}));
  Json out{{"divergent", r.divergent()}, {"symbolic", r.symbolic}, {"partial_norms_sq", partial}};
  if (r.divergent()) {
    out["criterion"] = r.evidence().criterion;
  } else {
    out["norm_sq"] = r.norm_sq;
    out["cauchy_estimate"] = r.cauchy_estimate;
    out["support_size"] = r.value().x1.nnz() + r.value().x2.nnz();
  }
  return out;
}

Json to_json(const OptimizationReport& r) {
  Json path = Json::array();
  for (const auto& p : r.nodes) path.push_back(to_json(p));
  return {{"upper_bound", r.upper_bound}, {"lower_bound", r.lower_bound},
          {"iterations", r.iterations},   {"converged", r.converged},
          {"rounds", r.rounds},           {"endpoint_error", r.endpoint_error},
          {"final_path", path}};
}

GroupPoint read_group_point(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::parse_error& e) {
    throw ValidationError("invalid JSON in " + path + ": " + e.what());
  }
  return group_point_from_json(j);
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(std::numeric_limits<double>::max_digits10) << v;
  return os.str();
}

std::string sparse_string(const SeqVec& v) {
  std::string out;
  for (const auto& [k, x] : v.entries()) {
    if (!out.empty()) out += ' ';
    out += std::to_string(k) + ':' + format_double(x);
  }
  return out;
}

SeqVec parse_sparse_string(const std::string& s) {
  std::istringstream in(s);
  std::string token;
  std::vector<SeqVec::Entry> entries;
  while (in >> token) {
    auto colon = token.find(':');
    if (colon == std::string::npos) throw ValidationError("sparse entry must be index:value, got " + token);
    try {
      entries.emplace_back(std::stoll(token.substr(0, colon)), std::stod(token.substr(colon + 1)));
    } catch (const std::exception&) {
      throw ValidationError("malformed sparse entry " + token);
    }
  }
  return SeqVec::from_entries(std::move(entries));
}

void write_curve_csv(std::ostream& out, const std::vector<CurveSample>& samples) {
  out << "t,h1,h2,tau,residual\n";
  for (const auto& s : samples)
    out << format_double(s.t) << ',' << sparse_string(s.point.h1) << ',' << sparse_string(s.point.h2) << ','
        << format_double(s.point.t) << ',' << format_double(s.residual) << '\n';
}

}  // namespace heis
