#pragma once

#include <functional>
#include <vector>

#include "heis/group.hpp"

namespace heis {

// One smooth piece of a curve, defined on [t0, t1] in the curve's global
// parameter. Position and derivative are closed forms, not samples.
struct CurvePiece {
  double t0 = 0.0;
  double t1 = 1.0;
  std::function<GroupPoint(double)> position;
  std::function<TangentVector(double)> derivative;
};

// Piecewise smooth path [0,1] -> H. Pieces partition [0,1] and agree at
// shared endpoints; immutable after construction.
class Curve {
 public:
  // Throws std::invalid_argument if the pieces do not partition [0,1] and
  // EndpointMismatch if adjacent pieces do not meet.
  explicit Curve(std::vector<CurvePiece> pieces);

  GroupPoint evaluate(double t) const;
  // At an interior breakpoint the right-hand piece is used.
  TangentVector derivative(double t) const;

  GroupPoint start() const { return evaluate(0.0); }
  GroupPoint end() const { return evaluate(1.0); }
  const std::vector<CurvePiece>& pieces() const { return pieces_; }

 private:
  const CurvePiece& piece_at(double t) const;

  std::vector<CurvePiece> pieces_;
};

struct CurveSample {
  double t;
  GroupPoint point;
  double residual;  // horizontality residual of the derivative
};

Curve constant_curve(const GroupPoint& p);
// Coordinatewise linear interpolation p + t (q - p).
Curve straight_segment(const GroupPoint& p, const GroupPoint& q);
// Piecewise linear interpolation of nodes at t = k / (nodes.size() - 1).
Curve polyline(const std::vector<GroupPoint>& nodes);

// gamma^n(t) = (t^2 c/2 e_n, -t c e_n, t^3 c^2 / 6)
Curve gamma_family(Index n, double c);
// alpha^n(t) = (c(1/2 - t^2/2) e_n, c(t - 1) e_n, c^2 (1/6 + t^3/6 - t^2/2 + t/2))
Curve alpha_family(Index n, double c);

// first on [0, 1/2], second on [1/2, 1]. Throws EndpointMismatch when
// first(1) and second(0) differ by more than 1e-12 in any coordinate.
Curve glue(const Curve& first, const Curve& second);

// t -> p * curve(t)
Curve left_translated(const GroupPoint& p, const Curve& curve);

// t -> curve(phi(t)) for an increasing bijection phi of [0,1].
Curve reparameterized(const Curve& curve, std::function<double(double)> phi,
                      std::function<double(double)> dphi, std::function<double(double)> phi_inverse);

std::vector<CurveSample> sample(const Curve& curve, int count);

// Largest horizontality residual over a uniform grid of `count` points.
double max_horizontality_residual(const Curve& curve, int count = 1001);

// Largest coordinate deviation between the stored derivative and a central
// difference of the position with the given step, over `count` interior
// points of every piece.
double derivative_consistency_error(const Curve& curve, int count = 17, double step = 1e-6);

}  // namespace heis
