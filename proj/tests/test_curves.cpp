#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "heis/curves.hpp"
#include "heis/errors.hpp"
#include "heis/metric.hpp"

using namespace heis;

namespace {
const double kSpeedIntegral = (std::sqrt(2.0) + std::asinh(1.0)) / 2.0;
}

TEST_CASE("gamma family") {
  const Curve g = gamma_family(3, 1.0);
  CHECK(g.start() == GroupPoint::identity());
  const GroupPoint end = g.end();
  CHECK(coordinate_gap(end, {SeqVec::basis(3, 0.5), SeqVec::basis(3, -1.0), 1.0 / 6.0}) < 1e-15);
  const TangentVector d = g.derivative(0.4);
  CHECK(d.v1 == SeqVec::basis(3, 0.4));
  CHECK(d.v2 == SeqVec::basis(3, -1.0));
  CHECK(std::abs(d.v3 - 0.08) < 1e-15);
  CHECK(horizontality_residual(d) == 0.0);
}

TEST_CASE("alpha family") {
  const double c = std::sqrt(3.0);
  const Curve a = alpha_family(5, c);
  CHECK(coordinate_gap(a.end(), {{}, {}, 1.0}) < 1e-15);
  CHECK(coordinate_gap(a.start(), gamma_family(5, c).end()) < 1e-15);
  const MetricSpec g = MetricSpec::subriemannian();
  const Curve a25 = alpha_family(25, 5.0);
  for (double t : {0.0, 0.25, 0.5, 1.0}) {
    const TangentVector v = a25.derivative(t);
    CHECK(std::abs(eta_norm(g.weight, v.v2) - 1.0) < 1e-15);
    CHECK(std::abs(eta_norm(g.weight, v.v1) - t) < 1e-15);
  }
}

TEST_CASE("gluing") {
  const double c = 1.2;
  const Curve glued = glue(gamma_family(4, c), alpha_family(4, c));
  CHECK(glued.start() == GroupPoint::identity());
  CHECK(std::abs(glued.end().t - c * c / 3.0) < 1e-15);
  CHECK(glued.end().h1.is_zero());
  CHECK(glued.end().h2.is_zero());
  CHECK(glued.pieces().size() == 2);

  const GroupPoint p{SeqVec::basis(2), {}, 3.0};
  const Curve cc = glue(constant_curve(p), constant_curve(p));
  for (double t : {0.0, 0.3, 0.5, 1.0}) CHECK(cc.evaluate(t) == p);

  CHECK_THROWS_AS(glue(gamma_family(3, 1.0), alpha_family(4, 1.0)), EndpointMismatch);
  try {
    glue(gamma_family(3, 1.0), alpha_family(4, 1.0));
  } catch (const EndpointMismatch& e) {
    CHECK(e.gap() == doctest::Approx(1.0));
  }
  const MetricSpec g = MetricSpec::subriemannian();
  CHECK(std::abs(length(g, glued) - (length(g, gamma_family(4, c)) + length(g, alpha_family(4, c)))) < 1e-12);
}

TEST_CASE("property: families are horizontal with consistent derivatives") {
  const MetricSpec g = MetricSpec::subriemannian();
  for (Index n = 1; n <= 10; ++n) {
    for (double c : {0.5, 1.0, std::sqrt(3.0), 4.0}) {
      const Curve gamma = gamma_family(n, c), alpha = alpha_family(n, c);
      const Curve glued = glue(gamma, alpha);
      CHECK(max_horizontality_residual(gamma) <= 1e-12);
      CHECK(max_horizontality_residual(alpha) <= 1e-12);
      CHECK(max_horizontality_residual(glued) <= 1e-12);
      CHECK(derivative_consistency_error(gamma) <= 1e-5);
      CHECK(derivative_consistency_error(alpha) <= 1e-5);
      CHECK(derivative_consistency_error(glued) <= 1e-5);
      const double len = length(g, glued);
      CHECK(std::abs(len - 2.0 * c / std::sqrt(static_cast<double>(n)) * kSpeedIntegral) < 1e-8);
      // positions and velocities stay inside span{e1_n, e2_n, e3}
      for (double t : {0.1, 0.6, 0.9}) {
        const GroupPoint q = glued.evaluate(t);
        const TangentVector v = glued.derivative(t);
        for (const auto& s : {q.h1, q.h2, v.v1, v.v2})
          for (Index k : s.support()) CHECK(k == n);
      }
    }
  }
}

TEST_CASE("property: length scales like n^-1/2") {
  const MetricSpec g = MetricSpec::subriemannian();
  const double ref = length(g, glue(gamma_family(1, 1.0), alpha_family(1, 1.0)));
  for (Index n : {2, 7, 30, 400}) {
    const double l = length(g, glue(gamma_family(n, 1.0), alpha_family(n, 1.0)));
    CHECK(std::abs(l * std::sqrt(static_cast<double>(n)) - ref) < 1e-8);
  }
}

TEST_CASE("polyline and segments") {
  const GroupPoint p{SeqVec::basis(1), {}, 0.0}, q{{}, SeqVec::basis(2), 1.0};
  const Curve s = straight_segment(p, q);
  CHECK(s.start() == p);
  CHECK(coordinate_gap(s.end(), q) == 0.0);
  const GroupPoint mid = s.evaluate(0.5);
  CHECK(mid.h1[1] == 0.5);
  CHECK(mid.h2[2] == 0.5);
  CHECK(mid.t == 0.5);
  const Curve poly = polyline({p, q, p});
  CHECK(poly.pieces().size() == 2);
  CHECK(coordinate_gap(poly.evaluate(0.5), q) == 0.0);
  CHECK(derivative_consistency_error(poly) < 1e-8);
  CHECK_THROWS_AS(polyline({p}), std::invalid_argument);
}

TEST_CASE("piece validation") {
  auto pos = [](double) { return GroupPoint::identity(); };
  auto der = [](double t) { return TangentVector{GroupPoint::identity(), {}, {}, t * 0.0}; };
  CHECK_THROWS_AS(Curve({{0.0, 0.4, pos, der}, {0.5, 1.0, pos, der}}), std::invalid_argument);
  CHECK_THROWS_AS(Curve({}), std::invalid_argument);
  auto shifted = [](double) { return GroupPoint{{}, {}, 1.0}; };
  CHECK_THROWS_AS(Curve({{0.0, 0.5, pos, der}, {0.5, 1.0, shifted, der}}), EndpointMismatch);
}

TEST_CASE("sampling") {
  const Curve g = gamma_family(2, 1.0);
  const auto samples = sample(g, 11);
  REQUIRE(samples.size() == 11);
  CHECK(samples.front().t == 0.0);
  CHECK(samples.back().t == 1.0);
  for (const auto& s : samples) CHECK(std::abs(s.residual) <= 1e-12);
}
