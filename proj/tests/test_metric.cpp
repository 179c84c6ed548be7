#include "doctest.h"

#include <cmath>
#include <stdexcept>

#include "generators.hpp"
#include "heis/curves.hpp"
#include "heis/errors.hpp"
#include "heis/metric.hpp"

using namespace heis;

namespace {
// closed form of int_0^1 sqrt(1 + t^2) dt
const double kSpeedIntegral = (std::sqrt(2.0) + std::asinh(1.0)) / 2.0;
}

TEST_CASE("speed integral constant") { CHECK(std::abs(kSpeedIntegral - 1.1477935747) < 1e-10); }

TEST_CASE("sigma at the identity") {
  const MetricSpec m = MetricSpec::riemannian();
  const GroupPoint o = GroupPoint::identity();
  TangentVector e3{o, {}, {}, 1.0};
  TangentVector e14{o, SeqVec::basis(4), {}, 0.0};
  CHECK(sigma_inner_at(m, o, e3, e3) == 1.0);
  CHECK(sigma_inner_at(m, o, e14, e14) == 0.25);
  CHECK(sigma_inner_at(m, o, e14, e3) == 0.0);
  CHECK_THROWS_AS(sigma_inner_at(MetricSpec::subriemannian(), o, e3, e3), std::invalid_argument);
}

TEST_CASE("property: sigma is left invariant") {
  Gen g(21);
  const MetricSpec m = MetricSpec::riemannian();
  for (int i = 0; i < 300; ++i) {
    GroupPoint p = g.point();
    TangentVector v = g.tangent(GroupPoint::identity()), w = g.tangent(GroupPoint::identity());
    const double at_identity = sigma_inner_at(m, GroupPoint::identity(), v, w);
    const GroupPoint base = multiply(p, GroupPoint::identity());
    const double moved = sigma_inner_at(m, base, left_translate_diff(p, v), left_translate_diff(p, w));
    CHECK(std::abs(at_identity - moved) < 1e-11 * (1.0 + std::abs(at_identity)));
  }
}

TEST_CASE("g norm") {
  const MetricSpec m = MetricSpec::subriemannian();
  const double c = 1.7;
  const Index n = 3;
  const Curve gamma = gamma_family(n, c);
  for (double t : {0.0, 0.3, 0.8, 1.0}) {
    const TangentVector v = gamma.derivative(t);
    CHECK(std::abs(g_norm_at(m, v.base, v) - std::sqrt((t * t * c * c + c * c) / n)) < 1e-13);
  }
  CHECK(g_norm_at(m, GroupPoint::identity(), {GroupPoint::identity(), {}, {}, 0.0}) == 0.0);
  CHECK_THROWS_AS(g_norm_at(m, GroupPoint::identity(), {GroupPoint::identity(), {}, {}, 1.0}), NotHorizontal);
  try {
    g_norm_at(m, GroupPoint::identity(), {GroupPoint::identity(), {}, {}, 0.5});
  } catch (const NotHorizontal& e) {
    CHECK(e.residual() == 0.5);
  }
}

TEST_CASE("lengths of the curve families") {
  const MetricSpec g = MetricSpec::subriemannian();
  const MetricSpec s = MetricSpec::riemannian();
  CHECK(std::abs(length(g, gamma_family(4, 1.0)) - 0.5738967873) < 1e-10);
  CHECK(length(s, constant_curve({SeqVec::basis(2), {}, 1.0})) == 0.0);
  for (Index n : {1, 5, 9}) {
    const Curve a = alpha_family(n, 2.0);
    CHECK(std::abs(length(s, a) - length(g, a)) < 1e-10);
  }
  CHECK_THROWS_AS(length(g, straight_segment(GroupPoint::identity(), {{}, {}, 1.0})), NotHorizontal);
  // riemannian length of the vertical segment is |s|
  CHECK(std::abs(length(s, straight_segment(GroupPoint::identity(), {{}, {}, 2.0})) - 2.0) < 1e-12);
}

TEST_CASE("property: length is left invariant and reparameterization invariant") {
  Gen gen(22);
  const MetricSpec g = MetricSpec::subriemannian();
  const MetricSpec s = MetricSpec::riemannian();
  for (int i = 0; i < 20; ++i) {
    const Index n = gen.index(1, 6);
    const double c = gen.real(0.2, 3.0);
    const Curve curve = glue(gamma_family(n, c), alpha_family(n, c));
    const GroupPoint p = gen.point(8);
    CHECK(std::abs(length(g, left_translated(p, curve)) - length(g, curve)) < 1e-10);
    const Curve seg = straight_segment(gen.point(5), gen.point(5));
    CHECK(std::abs(length(s, left_translated(p, seg)) - length(s, seg)) < 1e-10);

    const Curve squared = reparameterized(
        curve, [](double t) { return t * t; }, [](double t) { return 2.0 * t; },
        [](double t) { return std::sqrt(t); });
    CHECK(std::abs(length(g, squared) - length(g, curve)) < 1e-9);
  }
}

TEST_CASE("refinement error estimate") {
  const MetricSpec g = MetricSpec::subriemannian();
  const Curve curve = glue(gamma_family(2, 1.3), alpha_family(2, 1.3));
  QuadratureSpec q;
  q.order = 4;
  q.panels = 1;
  q.tolerance = 1e-12;
  const LengthEstimate e = length_estimate(g, curve, q);
  CHECK(e.converged);
  const double refined = length_fixed(g, curve, 4, e.panels * 2);
  CHECK(std::abs(refined - e.value) <= std::max(e.error, 1e-15));
  const double exact = 2.0 * 1.3 / std::sqrt(2.0) * kSpeedIntegral;
  CHECK(std::abs(e.value - exact) < 1e-10);
}

TEST_CASE("quadrature validation") {
  QuadratureSpec q;
  q.order = 1;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = {};
  q.panels = 0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
  q = {};
  q.tolerance = -1.0;
  CHECK_THROWS_AS(q.validate(), std::invalid_argument);
}
