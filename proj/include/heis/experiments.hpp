#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <variant>
#include <vector>

#include "heis/geodesic.hpp"
#include "heis/io.hpp"
#include "heis/metric.hpp"

namespace heis {

using Cell = std::variant<std::monostate, double, long long, bool, std::string>;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<Cell>> rows;

  // Throws std::out_of_range for an unknown column.
  std::size_t column(const std::string& name) const;
  const Cell& at(std::size_t row, const std::string& name) const;
  double number(std::size_t row, const std::string& name) const;
};

// What every command emits: the configuration it ran with, a tidy table and
// command-specific extras.
struct Report {
  std::string command;
  Json config = Json::object();
  Table table;
  Json extra = Json::object();

  Json to_json() const;
  void write_csv(std::ostream& out) const;
};

struct RunOptions {
  int nodes = 64;
  std::uint64_t seed = 0;
  OptimizerOptions optimizer;
};

struct EndpointPair {
  GroupPoint from;
  GroupPoint to;
};

MetricKind parse_metric_kind(const std::string& name);  // "riem" | "subriem"
std::string metric_kind_name(MetricKind kind);

// Vertical shift (0,0,0) -> (0,0,s) at each mode budget.
Report run_vanish(double s, const std::vector<Index>& modes, MetricKind kind, const RunOptions& options = {});

// (identity, (e_1,0,0)) and (identity, (e_3,0,7)).
std::vector<EndpointPair> default_positivity_pairs();
// Lower and upper bounds per pair; the mode budget is raised to cover each
// pair's support. Throws ValidationError for pairs with equal horizontal parts.
Report run_positivity(const std::vector<EndpointPair>& pairs, MetricKind kind, Index modes,
                      const RunOptions& options = {});

// Blow-up planes for j = 1..j_max, with finite-difference columns for j within
// the oracle truncation.
Report run_curvature_sweep(Index j_max, Index oracle_truncation = 3, double step = 1e-4);

// K(W_k, e3) and the principal angle to the tail plane per k, then the
// divergence verdict for W itself.
Report run_discontinuity(const std::vector<Index>& k_list, Index tail, int depth = 20);

// Table of path nodes; extras carry the OptimizationReport.
Report run_distance(const GroupPoint& from, const GroupPoint& to, MetricKind kind, Index modes,
                    const RunOptions& options = {});

// family: gamma | alpha | glued. Table of curve samples; extras carry the
// length estimate and the closed form.
Report run_length(const std::string& family, Index n, double c, MetricKind kind, const QuadratureSpec& q,
                  int samples = 101);

// plane: a1j,a2j | a1j,e3 | a2j,e3
Report run_curvature_plane(const std::string& plane, Index j);
Report run_curvature_wk(Index k);
// rule: W (sum e1_j / j) or power:P (sum e1_j / j^P), probed against e3.
Report run_curvature_probe(const std::string& rule, int depth);
// Random planes in the n-truncation, Arnold formula against the oracle.
Report run_curvature_oracle(Index truncation, std::uint64_t seed, int planes = 1, double step = 1e-4);

}  // namespace heis
