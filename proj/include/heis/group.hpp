#pragma once

#include "heis/seqvec.hpp"

namespace heis {

// Horizontal projection (h1, h2) in l2 x l2.
struct HorizontalPart {
  SeqVec h1;
  SeqVec h2;
};

// Point (h1, h2, t) of the Heisenberg group l2 x l2 x R.
struct GroupPoint {
  SeqVec h1;
  SeqVec h2;
  double t = 0.0;

  static GroupPoint identity() { return {}; }
  HorizontalPart horizontal() const { return {h1, h2}; }
  Index max_index() const;

  friend bool operator==(const GroupPoint&, const GroupPoint&) = default;
};

// Coordinate difference used for endpoint gaps: max |p_i - q_i|.
double coordinate_gap(const GroupPoint& p, const GroupPoint& q);

// Tangent vector (v1, v2, v3) anchored at an explicit base point.
struct TangentVector {
  GroupPoint base;
  SeqVec v1;
  SeqVec v2;
  double v3 = 0.0;
};

// Element of the Lie algebra (tangent space at the identity),
// X = (pi(X), 0) + x3 e3.
struct LieVector {
  SeqVec x1;
  SeqVec x2;
  double x3 = 0.0;

  static LieVector e1(Index j, double c = 1.0) { return {SeqVec::basis(j, c), {}, 0.0}; }
  static LieVector e2(Index j, double c = 1.0) { return {{}, SeqVec::basis(j, c), 0.0}; }
  static LieVector e3(double c = 1.0) { return {{}, {}, c}; }

  HorizontalPart horizontal() const { return {x1, x2}; }
  // (pi(X), 0)
  LieVector horizontal_component() const { return {x1, x2, 0.0}; }
  bool is_zero() const { return x1.is_zero() && x2.is_zero() && x3 == 0.0; }
  Index max_index() const;

  LieVector& operator+=(const LieVector& o);
  LieVector& operator-=(const LieVector& o);
  LieVector& operator*=(double c);
  friend LieVector operator+(LieVector a, const LieVector& b) { return a += b; }
  friend LieVector operator-(LieVector a, const LieVector& b) { return a -= b; }
  friend LieVector operator*(double c, LieVector a) { return a *= c; }
  friend bool operator==(const LieVector&, const LieVector&) = default;
};

// beta((h1,h2),(h1',h2')) = <h1,h2'> - <h2,h1'>
double cocycle_beta(const HorizontalPart& a, const HorizontalPart& b);

GroupPoint multiply(const GroupPoint& p, const GroupPoint& q);
GroupPoint inverse(const GroupPoint& p);

// (dL_p)_q v; the result is based at p*q. The formula does not depend on q.
TangentVector left_translate_diff(const GroupPoint& p, const TangentVector& v);

// (dL_{-p})_p v for v based at p.
LieVector pullback_to_identity(const TangentVector& v);

// [X, Y] = 2 beta(pi(X), pi(Y)) e3
LieVector bracket(const LieVector& x, const LieVector& y);

// v3 - <p1,v2> + <p2,v1>; zero iff v lies in the horizontal fiber at p.
// Throws std::invalid_argument when v is not based at p.
double horizontality_residual(const GroupPoint& p, const TangentVector& v);
double horizontality_residual(const TangentVector& v);

// Throws std::invalid_argument unless v is based at p (up to 1e-12 relative).
void require_based_at(const GroupPoint& p, const TangentVector& v);

}  // namespace heis
