#include "heis/metric.hpp"

#include <gsl/gsl_integration.h>

#include <cmath>
#include <memory>
#include <stdexcept>
#include <string>

#include "heis/errors.hpp"

namespace heis {

namespace {

struct TableDeleter {
  void operator()(gsl_integration_glfixed_table* t) const { gsl_integration_glfixed_table_free(t); }
};
using GaussTable = std::unique_ptr<gsl_integration_glfixed_table, TableDeleter>;

GaussTable make_table(int order) {
  GaussTable table(gsl_integration_glfixed_table_alloc(static_cast<std::size_t>(order)));
  if (!table) throw std::runtime_error("cannot allocate Gauss-Legendre table");
  return table;
}

double integrate_piece(const MetricSpec& m, const CurvePiece& piece, const gsl_integration_glfixed_table* table,
                       int order, int panels) {
  const double width = (piece.t1 - piece.t0) / panels;
  double total = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double a = piece.t0 + p * width;
    const double b = p + 1 == panels ? piece.t1 : a + width;
    double panel = 0.0;
    for (int i = 0; i < order; ++i) {
      double x = 0.0;
      double w = 0.0;
      gsl_integration_glfixed_point(a, b, static_cast<std::size_t>(i), &x, &w, table);
      panel += w * speed(m, piece.derivative(x));
    }
    total += panel;
  }
  return total;
}

double integrate(const MetricSpec& m, const Curve& curve, const gsl_integration_glfixed_table* table,
                 int order, int panels) {
  double total = 0.0;
  for (const auto& piece : curve.pieces()) total += integrate_piece(m, piece, table, order, panels);
  return total;
}

}  // namespace

void QuadratureSpec::validate() const {
  if (order < 2) throw std::invalid_argument("quadrature order must be >= 2");
  if (panels < 1) throw std::invalid_argument("quadrature panels must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("quadrature tolerance must be positive");
  if (max_doublings < 1) throw std::invalid_argument("quadrature max_doublings must be >= 1");
}

double g0_inner(const WeightRule& w, const HorizontalPart& v, const HorizontalPart& u) {
  return eta_inner(w, v.h1, u.h1) + eta_inner(w, v.h2, u.h2);
}

double sigma0_inner(const WeightRule& w, const LieVector& x, const LieVector& y) {
  return g0_inner(w, x.horizontal(), y.horizontal()) + x.x3 * y.x3;
}

double sigma0_norm(const WeightRule& w, const LieVector& x) { return std::sqrt(sigma0_inner(w, x, x)); }

double sigma_inner_at(const MetricSpec& m, const GroupPoint& p, const TangentVector& v,
                      const TangentVector& w) {
  if (m.kind != MetricKind::riemannian)
    throw std::invalid_argument("sigma_inner_at needs a riemannian metric");
  require_based_at(p, v);
  require_based_at(p, w);
  return sigma0_inner(m.weight, pullback_to_identity(v), pullback_to_identity(w));
}

double sigma_norm_at(const MetricSpec& m, const GroupPoint& p, const TangentVector& v) {
  return std::sqrt(sigma_inner_at(m, p, v, v));
}

double g_norm_at(const MetricSpec& m, const GroupPoint& p, const TangentVector& v) {
  double r = horizontality_residual(p, v);
  if (std::abs(r) > kHorizontalTolerance) throw NotHorizontal(r, kHorizontalTolerance);
  return std::sqrt(g0_inner(m.weight, {v.v1, v.v2}, {v.v1, v.v2}));
}

double speed(const MetricSpec& m, const TangentVector& v) {
  if (m.kind == MetricKind::riemannian)
    return sigma0_norm(m.weight, pullback_to_identity(v));
  return g_norm_at(m, v.base, v);
}

double length_fixed(const MetricSpec& m, const Curve& curve, int order, int panels) {
  QuadratureSpec{order, panels, 1.0, 1}.validate();
  GaussTable table = make_table(order);
  return integrate(m, curve, table.get(), order, panels);
}

LengthEstimate length_estimate(const MetricSpec& m, const Curve& curve, const QuadratureSpec& q) {
  q.validate();
  GaussTable table = make_table(q.order);
  int panels = q.panels;
  double previous = integrate(m, curve, table.get(), q.order, panels);
  LengthEstimate est{previous, 0.0, panels, false};
  for (int round = 0; round < q.max_doublings; ++round) {
    panels *= 2;
    double current = integrate(m, curve, table.get(), q.order, panels);
    est = {current, std::abs(current - previous), panels, false};
    if (est.error < q.tolerance) {
      est.converged = true;
      break;
    }
    previous = current;
  }
  return est;
}

double length(const MetricSpec& m, const Curve& curve, const QuadratureSpec& q) {
  return length_estimate(m, curve, q).value;
}

}  // namespace heis
