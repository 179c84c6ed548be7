#include "heis/curves.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "heis/errors.hpp"

namespace heis {

namespace {

constexpr double kMeetTolerance = 1e-12;

TangentVector scaled(TangentVector v, double c) {
  v.v1 *= c;
  v.v2 *= c;
  v.v3 *= c;
  return v;
}

GroupPoint lerp(const GroupPoint& p, const GroupPoint& q, double s) {
  return {p.h1 + s * (q.h1 - p.h1), p.h2 + s * (q.h2 - p.h2), p.t + s * (q.t - p.t)};
}

}  // namespace

Curve::Curve(std::vector<CurvePiece> pieces) : pieces_(std::move(pieces)) {
  if (pieces_.empty()) throw std::invalid_argument("curve needs at least one piece");
  if (pieces_.front().t0 != 0.0 || pieces_.back().t1 != 1.0)
    throw std::invalid_argument("curve pieces must cover [0,1]");
  for (std::size_t i = 0; i < pieces_.size(); ++i) {
    const auto& p = pieces_[i];
    if (!p.position || !p.derivative) throw std::invalid_argument("curve piece without closed form");
    if (!(p.t1 > p.t0)) throw std::invalid_argument("curve piece with empty domain");
    if (i + 1 < pieces_.size()) {
      const auto& next = pieces_[i + 1];
      if (next.t0 != p.t1) throw std::invalid_argument("curve pieces are not contiguous");
      double gap = coordinate_gap(p.position(p.t1), next.position(next.t0));
      if (gap > kMeetTolerance) throw EndpointMismatch(gap);
    }
  }
}

const CurvePiece& Curve::piece_at(double t) const {
  if (!(t >= 0.0 && t <= 1.0)) throw std::out_of_range("curve parameter outside [0,1]");
  auto it = std::upper_bound(pieces_.begin(), pieces_.end(), t,
                             [](double value, const CurvePiece& p) { return value < p.t1; });
  return it == pieces_.end() ? pieces_.back() : *it;
}

GroupPoint Curve::evaluate(double t) const { return piece_at(t).position(t); }

TangentVector Curve::derivative(double t) const { return piece_at(t).derivative(t); }

Curve constant_curve(const GroupPoint& p) {
  return Curve({{0.0, 1.0, [p](double) { return p; },
                 [p](double) { return TangentVector{p, {}, {}, 0.0}; }}});
}

Curve straight_segment(const GroupPoint& p, const GroupPoint& q) {
  return polyline({p, q});
}

Curve polyline(const std::vector<GroupPoint>& nodes) {
  if (nodes.size() < 2) throw std::invalid_argument("polyline needs at least two nodes");
  const std::size_t m = nodes.size() - 1;
  const double steps = static_cast<double>(m);
  std::vector<CurvePiece> pieces;
  pieces.reserve(m);
  for (std::size_t k = 0; k < m; ++k) {
    const double t0 = static_cast<double>(k) / steps;
    const double t1 = k + 1 == m ? 1.0 : static_cast<double>(k + 1) / steps;
    const GroupPoint a = nodes[k];
    const GroupPoint b = nodes[k + 1];
    const GroupPoint delta{b.h1 - a.h1, b.h2 - a.h2, b.t - a.t};
    auto position = [a, b, t0, t1](double t) { return lerp(a, b, (t - t0) / (t1 - t0)); };
    pieces.push_back(
        {t0, t1, position, [position, delta, t0, t1](double t) {
           const double rate = 1.0 / (t1 - t0);
           return TangentVector{position(t), rate * delta.h1, rate * delta.h2, rate * delta.t};
         }});
  }
  return Curve(std::move(pieces));
}

Curve gamma_family(Index n, double c) {
  if (n < 1) throw std::invalid_argument("gamma_family: n must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("gamma_family: c must be positive");
  auto position = [n, c](double t) {
    return GroupPoint{SeqVec::basis(n, t * t * c / 2.0), SeqVec::basis(n, -t * c),
                      t * t * t * c * c / 6.0};
  };
  auto derivative = [n, c, position](double t) {
    return TangentVector{position(t), SeqVec::basis(n, t * c), SeqVec::basis(n, -c),
                         t * t * c * c / 2.0};
  };
  return Curve({{0.0, 1.0, position, derivative}});
}

Curve alpha_family(Index n, double c) {
  if (n < 1) throw std::invalid_argument("alpha_family: n must be >= 1");
  if (!(c > 0.0)) throw std::invalid_argument("alpha_family: c must be positive");
  auto position = [n, c](double t) {
    return GroupPoint{SeqVec::basis(n, c * (0.5 - t * t / 2.0)), SeqVec::basis(n, c * (t - 1.0)),
                      c * c * (1.0 / 6.0 + t * t * t / 6.0 - t * t / 2.0 + t / 2.0)};
  };
  auto derivative = [n, c, position](double t) {
    return TangentVector{position(t), SeqVec::basis(n, -c * t), SeqVec::basis(n, c),
                         c * c * (t * t / 2.0 - t + 0.5)};
  };
  return Curve({{0.0, 1.0, position, derivative}});
}

Curve glue(const Curve& first, const Curve& second) {
  double gap = coordinate_gap(first.end(), second.start());
  if (gap > kMeetTolerance) throw EndpointMismatch(gap);

  std::vector<CurvePiece> pieces;
  pieces.reserve(first.pieces().size() + second.pieces().size());
  for (const auto& p : first.pieces()) {
    pieces.push_back({p.t0 / 2.0, p.t1 / 2.0, [f = p.position](double t) { return f(2.0 * t); },
                      [d = p.derivative](double t) { return scaled(d(2.0 * t), 2.0); }});
  }
  for (const auto& p : second.pieces()) {
    pieces.push_back({(1.0 + p.t0) / 2.0, (1.0 + p.t1) / 2.0,
                      [f = p.position](double t) { return f(std::min(1.0, 2.0 * t - 1.0)); },
                      [d = p.derivative](double t) {
                        return scaled(d(std::min(1.0, 2.0 * t - 1.0)), 2.0);
                      }});
  }
  return Curve(std::move(pieces));
}

Curve left_translated(const GroupPoint& p, const Curve& curve) {
  std::vector<CurvePiece> pieces;
  for (const auto& piece : curve.pieces()) {
    pieces.push_back({piece.t0, piece.t1,
                      [p, f = piece.position](double t) { return multiply(p, f(t)); },
                      [p, d = piece.derivative](double t) { return left_translate_diff(p, d(t)); }});
  }
  return Curve(std::move(pieces));
}

Curve reparameterized(const Curve& curve, std::function<double(double)> phi,
                      std::function<double(double)> dphi, std::function<double(double)> phi_inverse) {
  std::vector<CurvePiece> pieces;
  for (const auto& piece : curve.pieces()) {
    double t0 = piece.t0 == 0.0 ? 0.0 : phi_inverse(piece.t0);
    double t1 = piece.t1 == 1.0 ? 1.0 : phi_inverse(piece.t1);
    pieces.push_back({t0, t1,
                      [phi, f = piece.position](double t) { return f(std::clamp(phi(t), 0.0, 1.0)); },
                      [phi, dphi, d = piece.derivative](double t) {
                        return scaled(d(std::clamp(phi(t), 0.0, 1.0)), dphi(t));
                      }});
  }
  // inverse images of shared breakpoints must coincide exactly
  for (std::size_t i = 1; i < pieces.size(); ++i) pieces[i].t0 = pieces[i - 1].t1;
  return Curve(std::move(pieces));
}

std::vector<CurveSample> sample(const Curve& curve, int count) {
  if (count < 2) throw std::invalid_argument("sample needs at least two points");
  std::vector<CurveSample> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    double t = i + 1 == count ? 1.0 : static_cast<double>(i) / (count - 1);
    out.push_back({t, curve.evaluate(t), horizontality_residual(curve.derivative(t))});
  }
  return out;
}

double max_horizontality_residual(const Curve& curve, int count) {
  double worst = 0.0;
  for (const auto& s : sample(curve, count)) worst = std::max(worst, std::abs(s.residual));
  // one-sided derivatives at breakpoints
  for (const auto& piece : curve.pieces())
    worst = std::max(worst, std::abs(horizontality_residual(piece.derivative(piece.t1))));
  return worst;
}

double derivative_consistency_error(const Curve& curve, int count, double step) {
  double worst = 0.0;
  for (const auto& piece : curve.pieces()) {
    const double width = piece.t1 - piece.t0;
    const double h = std::min(step, width / (4.0 * (count + 1)));
    for (int i = 1; i <= count; ++i) {
      double t = piece.t0 + width * i / (count + 1);
      GroupPoint plus = piece.position(t + h);
      GroupPoint minus = piece.position(t - h);
      TangentVector d = piece.derivative(t);
      const double inv = 1.0 / (2.0 * h);
      worst = std::max({worst, ((plus.h1 - minus.h1) * inv - d.v1).max_abs(),
                        ((plus.h2 - minus.h2) * inv - d.v2).max_abs(),
                        std::abs((plus.t - minus.t) * inv - d.v3)});
    }
  }
  return worst;
}

}  // namespace heis
