#include "heis/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <random>
#include <stdexcept>

#include "heis/curvature.hpp"
#include "heis/curves.hpp"
#include "heis/errors.hpp"
#include "heis/fd_oracle.hpp"

namespace heis {

namespace {

Json cell_json(const Cell& c) {
  return std::visit(
      [](const auto& v) -> Json {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>)
          return nullptr;
        else
          return v;
      },
      c);
}

std::string csv_field(const Cell& c) {
  std::string s = std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, std::monostate>)
          return "";
        else if constexpr (std::is_same_v<T, double>)
          return format_double(v);
        else if constexpr (std::is_same_v<T, bool>)
          return v ? "true" : "false";
        else if constexpr (std::is_same_v<T, long long>)
          return std::to_string(v);
        else
          return v;
      },
      c);
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string quoted = "\"";
  for (char ch : s) {
    if (ch == '"') quoted += '"';
    quoted += ch;
  }
  return quoted + '"';
}

Json options_json(const RunOptions& o) {
  return {{"nodes", o.nodes},
          {"seed", o.seed},
          {"max_iterations", o.optimizer.max_iterations},
          {"max_rounds", o.optimizer.max_rounds},
          {"endpoint_tolerance", o.optimizer.endpoint_tolerance},
          {"initial_penalty", o.optimizer.initial_penalty},
          {"perturbation", o.optimizer.perturbation}};
}

PathProblem make_problem(const GroupPoint& from, const GroupPoint& to, MetricKind kind, Index modes,
                         const RunOptions& o) {
  PathProblem pr;
  pr.start = from;
  pr.end = to;
  pr.metric = kind == MetricKind::riemannian ? MetricSpec::riemannian() : MetricSpec::subriemannian();
  pr.mode_budget = modes;
  pr.nodes = o.nodes;
  pr.seed = o.seed;
  pr.options = o.optimizer;
  return pr;
}

long long ll(Index v) { return static_cast<long long>(v); }

Table node_table(const std::vector<GroupPoint>& nodes) {
  Table t{{"t", "h1", "h2", "tau"}, {}};
  const double last = nodes.size() > 1 ? static_cast<double>(nodes.size() - 1) : 1.0;
  for (std::size_t k = 0; k < nodes.size(); ++k)
    t.rows.push_back({static_cast<double>(k) / last, sparse_string(nodes[k].h1), sparse_string(nodes[k].h2),
                      nodes[k].t});
  return t;
}

}  // namespace

std::size_t Table::column(const std::string& name) const {
  auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::out_of_range("no column " + name);
  return static_cast<std::size_t>(it - columns.begin());
}

const Cell& Table::at(std::size_t row, const std::string& name) const { return rows.at(row).at(column(name)); }

double Table::number(std::size_t row, const std::string& name) const {
  const Cell& c = at(row, name);
  if (auto d = std::get_if<double>(&c)) return *d;
  if (auto i = std::get_if<long long>(&c)) return static_cast<double>(*i);
  throw std::invalid_argument("column " + name + " is not numeric");
}

Json Report::to_json() const {
  Json rows = Json::array();
  for (const auto& r : table.rows) {
    Json obj = Json::object();
    for (std::size_t i = 0; i < table.columns.size(); ++i) obj[table.columns[i]] = cell_json(r[i]);
    rows.push_back(std::move(obj));
  }
  Json out = extra;
  out["command"] = command;
  out["config"] = config;
  out["columns"] = table.columns;
  out["rows"] = std::move(rows);
  return out;
}

void Report::write_csv(std::ostream& out) const {
  out << "# command=" << command << " config=" << config.dump() << '\n';
  for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << table.columns[i];
  out << '\n';
  for (const auto& r : table.rows) {
    for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_field(r[i]);
    out << '\n';
  }
}

MetricKind parse_metric_kind(const std::string& name) {
  if (name == "riem") return MetricKind::riemannian;
  if (name == "subriem") return MetricKind::subriemannian;
  throw ValidationError("metric must be riem or subriem, got " + name);
}

std::string metric_kind_name(MetricKind kind) { return kind == MetricKind::riemannian ? "riem" : "subriem"; }

Report run_vanish(double s, const std::vector<Index>& modes, MetricKind kind, const RunOptions& options) {
  if (!(s > 0.0) || !std::isfinite(s)) throw ValidationError("vertical shift s must be positive");
  if (modes.empty()) throw ValidationError("at least one mode budget is required");
  for (Index n : modes)
    if (n < 1) throw ValidationError("mode budgets must be >= 1");

  Report r;
  r.command = "vanish";
  r.config = {{"s", s}, {"modes", modes}, {"metric", metric_kind_name(kind)}, {"optimizer", options_json(options)}};
  r.table.columns = {"n", "analytic_bound", "upper_bound", "lower_bound", "iterations", "rounds", "endpoint_error",
                     "converged"};
  const GroupPoint target{{}, {}, s};
  for (Index n : modes) {
    OptimizationReport o = estimate_distance(make_problem(GroupPoint::identity(), target, kind, n, options));
    r.table.rows.push_back({ll(n), vertical_shift_upper_bound(n, s), o.upper_bound, o.lower_bound,
                            static_cast<long long>(o.iterations), static_cast<long long>(o.rounds),
                            o.endpoint_error, o.converged});
  }
  return r;
}

std::vector<EndpointPair> default_positivity_pairs() {
  return {{GroupPoint::identity(), GroupPoint{SeqVec::basis(1, 1.0), {}, 0.0}},
          {GroupPoint::identity(), GroupPoint{SeqVec::basis(3, 1.0), {}, 7.0}}};
}

Report run_positivity(const std::vector<EndpointPair>& pairs, MetricKind kind, Index modes,
                      const RunOptions& options) {
  if (pairs.empty()) throw ValidationError("at least one endpoint pair is required");
  if (modes < 1) throw ValidationError("mode budget must be >= 1");
  for (const auto& p : pairs)
    if (p.from.h1 == p.to.h1 && p.from.h2 == p.to.h2)
      throw ValidationError("positivity pairs must differ in their horizontal parts");

  Report r;
  r.command = "positivity";
  Json echo = Json::array();
  for (const auto& p : pairs) echo.push_back({{"from", to_json(p.from)}, {"to", to_json(p.to)}});
  r.config = {{"pairs", echo}, {"modes", modes}, {"metric", metric_kind_name(kind)},
              {"optimizer", options_json(options)}};
  r.table.columns = {"pair", "modes", "lower_bound", "upper_bound", "sandwich", "converged"};
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const Index budget = std::max({modes, pairs[i].from.max_index(), pairs[i].to.max_index()});
    OptimizationReport o = estimate_distance(make_problem(pairs[i].from, pairs[i].to, kind, budget, options));
    const bool sandwich = o.lower_bound > 0.0 && o.upper_bound >= o.lower_bound - 1e-9 * (1.0 + o.lower_bound);
    r.table.rows.push_back({static_cast<long long>(i), ll(budget), o.lower_bound, o.upper_bound, sandwich,
                            o.converged});
  }
  return r;
}

Report run_curvature_sweep(Index j_max, Index oracle_truncation, double step) {
  if (j_max < 1) throw ValidationError("j_max must be >= 1");
  if (oracle_truncation < 0) throw ValidationError("oracle truncation must be >= 0");
  if (!(step > 0.0)) throw ValidationError("oracle step must be positive");
  Report r;
  r.command = "curvature-sweep";
  r.config = {{"j_max", j_max}, {"oracle_truncation", oracle_truncation}, {"step", step}};
  r.table.columns = {"j",           "K_a1_a2",        "K_a1_e3",        "K_a2_e3",       "formula_a1_a2",
                     "formula_e3", "oracle_a1_a2", "oracle_a1_e3", "oracle_a2_e3", "oracle_rel_error"};
  for (Index j = 1; j <= j_max; ++j) {
    const double jd = static_cast<double>(j);
    const LieVector a1 = LieVector::e1(j, std::sqrt(jd));
    const LieVector a2 = LieVector::e2(j, std::sqrt(jd));
    const LieVector e3 = LieVector::e3();
    std::vector<Cell> row{ll(j),
                          arnold_curvature(a1, a2).k,
                          arnold_curvature(a1, e3).k,
                          arnold_curvature(a2, e3).k,
                          -3.0 * jd * jd,
                          jd * jd};
    if (j <= oracle_truncation) {
      const double o12 = fd_levi_civita_oracle(oracle_truncation, a1, a2, step);
      const double o13 = fd_levi_civita_oracle(oracle_truncation, a1, e3, step);
      const double o23 = fd_levi_civita_oracle(oracle_truncation, a2, e3, step);
      const double rel = std::max({std::abs(o12 + 3.0 * jd * jd) / (3.0 * jd * jd),
                                   std::abs(o13 - jd * jd) / (jd * jd), std::abs(o23 - jd * jd) / (jd * jd)});
      row.insert(row.end(), {o12, o13, o23, rel});
    } else {
      row.insert(row.end(), {std::monostate{}, std::monostate{}, std::monostate{}, std::monostate{}});
    }
    r.table.rows.push_back(std::move(row));
  }
  return r;
}

Report run_discontinuity(const std::vector<Index>& k_list, Index tail, int depth) {
  if (k_list.empty()) throw ValidationError("k list must not be empty");
  for (std::size_t i = 0; i < k_list.size(); ++i) {
    if (k_list[i] < 1) throw ValidationError("k values must be >= 1");
    if (i > 0 && k_list[i] <= k_list[i - 1]) throw ValidationError("k list must be increasing");
  }
  if (tail <= k_list.back()) throw ValidationError("tail must exceed every k");
  if (depth < 2 || depth > 40) throw ValidationError("probe depth must be in 2..40");

  Report r;
  r.command = "discontinuity";
  r.config = {{"k", k_list}, {"tail", tail}, {"depth", depth}};
  r.table.columns = {"k", "K_Wk_e3", "closed_form", "angle", "verdict"};
  for (Index k : k_list)
    r.table.rows.push_back({std::to_string(k), curvature_Wk_e3(k), curvature_Wk_e3_closed_form(k),
                            plane_convergence(k, tail), std::monostate{}});

  const AdjointResult probe =
      divergence_probe(CoefficientRule::vertical_unit(), CoefficientRule::power_law(1, 1.0, 1.0), depth);
  const std::string verdict = probe.divergent() ? "divergent" : "convergent";
  r.table.rows.push_back({std::string("W"), std::monostate{}, std::monostate{}, std::monostate{}, verdict});
  r.extra["limit_probe"] = to_json(probe);
  return r;
}

Report run_distance(const GroupPoint& from, const GroupPoint& to, MetricKind kind, Index modes,
                    const RunOptions& options) {
  PathProblem pr = make_problem(from, to, kind, modes, options);
  pr.validate();
  OptimizationReport o = estimate_distance(pr);
  Report r;
  r.command = "distance";
  r.config = {{"from", to_json(from)}, {"to", to_json(to)}, {"metric", metric_kind_name(kind)},
              {"modes", modes}, {"optimizer", options_json(options)}};
  r.table = node_table(o.nodes);
  Json rep = to_json(o);
  for (auto it = rep.begin(); it != rep.end(); ++it) r.extra[it.key()] = it.value();
  return r;
}

Report run_length(const std::string& family, Index n, double c, MetricKind kind, const QuadratureSpec& q,
                  int samples) {
  if (n < 1) throw ValidationError("mode index n must be >= 1");
  if (!std::isfinite(c)) throw ValidationError("c must be finite");
  if (samples < 2) throw ValidationError("at least two samples are required");
  try {
    q.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(e.what());
  }
  std::optional<Curve> curve;
  double pieces = 1.0;
  if (family == "gamma") {
    curve = gamma_family(n, c);
  } else if (family == "alpha") {
    curve = alpha_family(n, c);
  } else if (family == "glued") {
    curve = glue(gamma_family(n, c), alpha_family(n, c));
    pieces = 2.0;
  } else {
    throw ValidationError("family must be gamma, alpha or glued");
  }
  const MetricSpec m = kind == MetricKind::riemannian ? MetricSpec::riemannian() : MetricSpec::subriemannian();
  const LengthEstimate est = length_estimate(m, *curve, q);
  const double closed = pieces * std::abs(c) / std::sqrt(static_cast<double>(n)) *
                        (std::sqrt(2.0) + std::asinh(1.0)) / 2.0;

  Report r;
  r.command = "length";
  r.config = {{"family", family}, {"n", n},           {"c", c},
              {"metric", metric_kind_name(kind)},    {"order", q.order},
              {"panels", q.panels},                  {"tolerance", q.tolerance},
              {"samples", samples}};
  r.table.columns = {"t", "h1", "h2", "tau", "residual"};
  for (const auto& s : sample(*curve, samples))
    r.table.rows.push_back({s.t, sparse_string(s.point.h1), sparse_string(s.point.h2), s.point.t, s.residual});
  r.extra["length"] = est.value;
  r.extra["quadrature_error"] = est.error;
  r.extra["panels_used"] = est.panels;
  r.extra["converged"] = est.converged;
  r.extra["closed_form"] = closed;
  r.extra["max_residual"] = max_horizontality_residual(*curve);
  return r;
}

Report run_curvature_plane(const std::string& plane, Index j) {
  if (j < 1) throw ValidationError("j must be >= 1");
  const double sj = std::sqrt(static_cast<double>(j));
  LieVector x, y;
  if (plane == "a1j,a2j") {
    x = LieVector::e1(j, sj);
    y = LieVector::e2(j, sj);
  } else if (plane == "a1j,e3") {
    x = LieVector::e1(j, sj);
    y = LieVector::e3();
  } else if (plane == "a2j,e3") {
    x = LieVector::e2(j, sj);
    y = LieVector::e3();
  } else {
    throw ValidationError("plane must be a1j,a2j or a1j,e3 or a2j,e3");
  }
  const CurvatureBreakdown b = arnold_curvature(x, y);
  Report r;
  r.command = "curvature";
  r.config = {{"plane", plane}, {"j", j}};
  r.table.columns = {"j", "K"};
  r.table.rows.push_back({ll(j), b.k});
  r.extra["breakdown"] = to_json(b);
  return r;
}

Report run_curvature_wk(Index k) {
  if (k < 1) throw ValidationError("k must be >= 1");
  const LieVector w = w_k(k);
  const CurvatureBreakdown b = arnold_curvature(w, LieVector::e3());
  Report r;
  r.command = "curvature";
  r.config = {{"wk", k}};
  r.table.columns = {"k", "K", "closed_form"};
  r.table.rows.push_back({ll(k), b.k, curvature_Wk_e3_closed_form(k)});
  Json summary = {{"K", b.k}, {"sigma_norm_Wk", sigma_norm(w)}};
  // the full breakdown of a long W_k is large; inline it only for small k
  if (k <= 1000) summary["breakdown"] = to_json(b);
  r.extra["result"] = summary;
  return r;
}

Report run_curvature_probe(const std::string& rule, int depth) {
  if (depth < 2 || depth > 40) throw ValidationError("depth must be in 2..40");
  double exponent = 1.0;
  if (rule == "W") {
    exponent = 1.0;
  } else if (rule.rfind("power:", 0) == 0) {
    try {
      exponent = std::stod(rule.substr(6));
    } catch (const std::exception&) {
      throw ValidationError("power rule needs a numeric exponent, got " + rule);
    }
  } else {
    throw ValidationError("probe rule must be W or power:P");
  }
  ProbeOptions opts;
  opts.symbolic = false;
  AdjointResult res;
  std::string method = "heuristic";
  try {
    res = divergence_probe(CoefficientRule::vertical_unit(), CoefficientRule::power_law(1, 1.0, exponent), depth,
                           opts);
  } catch (const InconclusiveProbe&) {
    opts.symbolic = true;
    method = "symbolic";
    res = divergence_probe(CoefficientRule::vertical_unit(), CoefficientRule::power_law(1, 1.0, exponent), depth,
                           opts);
  }
  Report r;
  r.command = "curvature";
  r.config = {{"probe", rule}, {"exponent", exponent}, {"depth", depth}};
  r.table.columns = {"m", "S_m"};
  for (const auto& [m, s] : res.partial_norms_sq) r.table.rows.push_back({ll(m), s});
  r.extra["method"] = method;
  r.extra["verdict"] = res.divergent() ? "divergent" : "convergent";
  r.extra["probe"] = to_json(res);
  return r;
}

Report run_curvature_oracle(Index truncation, std::uint64_t seed, int planes, double step) {
  if (truncation < 1) throw ValidationError("truncation must be >= 1");
  if (planes < 1) throw ValidationError("plane count must be >= 1");
  if (!(step > 0.0)) throw ValidationError("step must be positive");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  auto random_vector = [&] {
    std::vector<double> a(static_cast<std::size_t>(truncation)), b(a.size());
    for (auto& v : a) v = normal(rng);
    for (auto& v : b) v = normal(rng);
    return LieVector{SeqVec::from_dense(a), SeqVec::from_dense(b), normal(rng)};
  };
  Report r;
  r.command = "curvature";
  r.config = {{"oracle", true}, {"truncation", truncation}, {"seed", seed}, {"planes", planes}, {"step", step}};
  r.table.columns = {"plane", "K_arnold", "K_oracle", "rel_error"};
  Json breakdowns = Json::array();
  for (int i = 0; i < planes; ++i) {
    const LieVector x = random_vector();
    const LieVector y = random_vector();
    const CurvatureBreakdown b = arnold_curvature(x, y);
    const double fd = fd_levi_civita_oracle(truncation, b.x, b.y, step);
    r.table.rows.push_back({static_cast<long long>(i), b.k, fd, std::abs(b.k - fd) / std::max(1.0, std::abs(fd))});
    breakdowns.push_back(to_json(b));
  }
  r.extra["breakdowns"] = breakdowns;
  return r;
}

}  // namespace heis
