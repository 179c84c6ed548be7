#include "heis/group.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace heis {

Index GroupPoint::max_index() const { return std::max(h1.max_index(), h2.max_index()); }

double coordinate_gap(const GroupPoint& p, const GroupPoint& q) {
  return std::max({(p.h1 - q.h1).max_abs(), (p.h2 - q.h2).max_abs(), std::abs(p.t - q.t)});
}

Index LieVector::max_index() const { return std::max(x1.max_index(), x2.max_index()); }

LieVector& LieVector::operator+=(const LieVector& o) {
  x1 += o.x1;
  x2 += o.x2;
  x3 += o.x3;
  return *this;
}

LieVector& LieVector::operator-=(const LieVector& o) {
  x1 -= o.x1;
  x2 -= o.x2;
  x3 -= o.x3;
  return *this;
}

LieVector& LieVector::operator*=(double c) {
  x1 *= c;
  x2 *= c;
  x3 *= c;
  return *this;
}

double cocycle_beta(const HorizontalPart& a, const HorizontalPart& b) {
  return inner(a.h1, b.h2) - inner(a.h2, b.h1);
}

GroupPoint multiply(const GroupPoint& p, const GroupPoint& q) {
  return {p.h1 + q.h1, p.h2 + q.h2, p.t + q.t + cocycle_beta(p.horizontal(), q.horizontal())};
}

GroupPoint inverse(const GroupPoint& p) { return {-p.h1, -p.h2, -p.t}; }

TangentVector left_translate_diff(const GroupPoint& p, const TangentVector& v) {
  return {multiply(p, v.base), v.v1, v.v2, v.v3 + inner(p.h1, v.v2) - inner(p.h2, v.v1)};
}

LieVector pullback_to_identity(const TangentVector& v) {
  const GroupPoint& p = v.base;
  return {v.v1, v.v2, v.v3 - inner(p.h1, v.v2) + inner(p.h2, v.v1)};
}

LieVector bracket(const LieVector& x, const LieVector& y) {
  return LieVector::e3(2.0 * cocycle_beta(x.horizontal(), y.horizontal()));
}

double horizontality_residual(const TangentVector& v) { return pullback_to_identity(v).x3; }

void require_based_at(const GroupPoint& p, const TangentVector& v) {
  double scale = 1.0 + std::max({p.h1.max_abs(), p.h2.max_abs(), std::abs(p.t)});
  if (coordinate_gap(p, v.base) > 1e-12 * scale)
    throw std::invalid_argument("tangent vector is not based at the given point");
}

double horizontality_residual(const GroupPoint& p, const TangentVector& v) {
  require_based_at(p, v);
  return v.v3 - inner(p.h1, v.v2) + inner(p.h2, v.v1);
}

}  // namespace heis
