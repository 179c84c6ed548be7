#pragma once

#include "heis/curves.hpp"
#include "heis/group.hpp"
#include "heis/seqvec.hpp"

namespace heis {

enum class MetricKind { riemannian, subriemannian };

// Left-invariant metric determined by its value at the identity:
// g0 = eta(v1,w1) + eta(v2,w2) on horizontal vectors, extended to
// sigma0 = g0 + v3 w3 on the whole tangent space.
struct MetricSpec {
  WeightRule weight = WeightRule::inverse_index();
  MetricKind kind = MetricKind::riemannian;

  static MetricSpec riemannian(WeightRule w = WeightRule::inverse_index()) {
    return {std::move(w), MetricKind::riemannian};
  }
  static MetricSpec subriemannian(WeightRule w = WeightRule::inverse_index()) {
    return {std::move(w), MetricKind::subriemannian};
  }
};

// Composite Gauss-Legendre rule; panels double until two successive
// estimates differ by less than `tolerance`.
struct QuadratureSpec {
  int order = 16;
  int panels = 8;
  double tolerance = 1e-10;
  int max_doublings = 12;

  void validate() const;
};

// Gate for the NotHorizontal error.
inline constexpr double kHorizontalTolerance = 1e-9;

double g0_inner(const WeightRule& w, const HorizontalPart& v, const HorizontalPart& u);
double sigma0_inner(const WeightRule& w, const LieVector& x, const LieVector& y);
double sigma0_norm(const WeightRule& w, const LieVector& x);

// sigma_p(v, w) = sigma0(dL_{-p} v, dL_{-p} w). Requires a riemannian MetricSpec
// and both vectors based at p.
double sigma_inner_at(const MetricSpec& m, const GroupPoint& p, const TangentVector& v,
                      const TangentVector& w);
double sigma_norm_at(const MetricSpec& m, const GroupPoint& p, const TangentVector& v);

// sqrt(|v1|_eta^2 + |v2|_eta^2); throws NotHorizontal outside H_p.
double g_norm_at(const MetricSpec& m, const GroupPoint& p, const TangentVector& v);

// Norm of v at its own base point under the metric kind.
double speed(const MetricSpec& m, const TangentVector& v);

struct LengthEstimate {
  double value = 0.0;
  double error = 0.0;   // difference between the last two refinements
  int panels = 0;       // panels per curve piece in the accepted estimate
  bool converged = false;
};

LengthEstimate length_estimate(const MetricSpec& m, const Curve& curve, const QuadratureSpec& q = {});
double length(const MetricSpec& m, const Curve& curve, const QuadratureSpec& q = {});
// Single composite rule with a fixed panel count per piece, no refinement.
double length_fixed(const MetricSpec& m, const Curve& curve, int order, int panels);

}  // namespace heis
