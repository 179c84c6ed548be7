#pragma once

#include <Eigen/Dense>

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "heis/group.hpp"
#include "heis/seqvec.hpp"

namespace heis {

// Partial squared sigma-norms S_m of a truncated series, m = 2, 4, ..., 2^depth.
using PartialNorms = std::vector<std::pair<Index, double>>;

struct DivergenceEvidence {
  PartialNorms partial_norms_sq;
  std::string criterion;
};

// B(X, Y) = ad(Y)^*(X), or evidence that its defining series diverges.
struct AdjointResult {
  std::variant<LieVector, DivergenceEvidence> outcome;
  // Probe diagnostics; empty for a direct evaluation.
  PartialNorms partial_norms_sq;
  double norm_sq = 0.0;          // squared sigma-norm of the value (or limit)
  double cauchy_estimate = 0.0;  // estimated |limit - last partial sum| of S_m
  bool symbolic = false;         // answered by the closed-form power-law path

  bool divergent() const { return std::holds_alternative<DivergenceEvidence>(outcome); }
  const LieVector& value() const { return std::get<LieVector>(outcome); }
  const DivergenceEvidence& evidence() const { return std::get<DivergenceEvidence>(outcome); }
};

struct CurvatureBreakdown {
  LieVector x;  // sigma-orthonormalized basis of the plane
  LieVector y;
  LieVector delta;         // (B(X,Y) + B(Y,X)) / 2
  LieVector arnold_beta;   // (B(X,Y) - B(Y,X)) / 2
  LieVector arnold_alpha;  // [X,Y] / 2
  LieVector b_x;           // B(X,X) / 2
  LieVector b_y;           // B(Y,Y) / 2
  double k = 0.0;
};

// Symbolic vector sum_j (c1(j) e^1_j + c2(j) e^2_j) + vertical e3, possibly
// with infinite support.
class CoefficientRule {
 public:
  using Fn = std::function<std::pair<double, double>(Index)>;

  struct PowerLaw {
    int component;  // 1 or 2
    double scale;
    double exponent;  // coefficient scale / j^exponent
  };

  CoefficientRule(Fn rule, double vertical, std::string description);

  // j -> scale / j^exponent on e^component_j.
  static CoefficientRule power_law(int component, double scale, double exponent, double vertical = 0.0);
  static CoefficientRule finite(const LieVector& v);
  static CoefficientRule vertical_unit() { return finite(LieVector::e3()); }

  // Coefficients vanish past index m.
  CoefficientRule truncated_at(Index m) const;

  std::pair<double, double> operator()(Index j) const;
  double vertical() const { return vertical_; }
  const std::string& description() const { return description_; }
  std::optional<Index> last_index() const { return last_index_; }
  const std::optional<PowerLaw>& power() const { return power_; }

  // Materialized truncation to indices <= m.
  LieVector truncation(Index m) const;

 private:
  Fn rule_;
  double vertical_;
  std::string description_;
  std::optional<Index> last_index_;
  std::optional<PowerLaw> power_;
};

double sigma_inner(const LieVector& x, const LieVector& y,
                   const WeightRule& w = WeightRule::inverse_index());
double sigma_norm(const LieVector& x, const WeightRule& w = WeightRule::inverse_index());

// x3 * 2 sum_j (Y^1_j e^2_j - Y^2_j e^1_j) / a_j. The horizontal part of X
// contributes nothing; always a value for finitely supported Y.
AdjointResult adjoint_B(const LieVector& x, const LieVector& y,
                        const WeightRule& w = WeightRule::inverse_index());
LieVector adjoint_value(const LieVector& x, const LieVector& y,
                        const WeightRule& w = WeightRule::inverse_index());

// Sectional curvature of span{X, Y} from K = <d,d> + 2<a,b> - 3<a,a> - 4<Bx,By>,
// after sigma-orthonormalizing (X, Y). Throws DegeneratePlane.
CurvatureBreakdown arnold_curvature(const LieVector& x, const LieVector& y,
                                    const WeightRule& w = WeightRule::inverse_index());
// K recomputed from the stored terms.
double curvature_from_terms(const CurvatureBreakdown& b, const WeightRule& w = WeightRule::inverse_index());

// W_k = (sum_{j<=k} j^-3)^{-1/2} sum_{j<=k} e^1_j / j
LieVector w_k(Index k);
// K(W_k, e3) through arnold_curvature.
double curvature_Wk_e3(Index k);
// Closed form (sum_{j<=k} j^-3)^{-1} sum_{j<=k} j^-1.
double curvature_Wk_e3_closed_form(Index k);

struct ProbeOptions {
  bool symbolic = true;  // exact answer for power-law rules
  double blowup = 1e12;
  double cauchy_tolerance = 1e-6;  // relative tail estimate accepted as converged
  WeightRule weight = WeightRule::inverse_index();
};

// Decides whether the series for B(X, Y) converges by watching the dyadic
// increments S_{2m} - S_m of its partial squared norms. Heuristic unless the
// symbolic path applies. Throws InconclusiveProbe.
AdjointResult divergence_probe(const CoefficientRule& x, const CoefficientRule& y, int depth,
                               const ProbeOptions& options = {});

// Largest principal angle between span{x1, y1} and span{x2, y2} given the
// Gram blocks of an inner product. Throws DegeneratePlane for rank-deficient
// spanning pairs.
double largest_principal_angle(const Eigen::Matrix2d& g11, const Eigen::Matrix2d& g12,
                               const Eigen::Matrix2d& g22);
double largest_principal_angle(const LieVector& x1, const LieVector& y1, const LieVector& x2,
                               const LieVector& y2, const WeightRule& w = WeightRule::inverse_index());

// sigma-Gram matrix of symbolic vectors, streamed over indices <= upto.
Eigen::MatrixXd sigma_gram(const std::vector<CoefficientRule>& vectors, Index upto,
                           const WeightRule& w = WeightRule::inverse_index());

// Largest principal angle between span{W_k, e3} and span{W_inf truncated at
// `tail`, e3}. Requires tail > k.
double plane_convergence(Index k, Index tail);

}  // namespace heis
