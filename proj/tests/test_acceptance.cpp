// Acceptance checks; prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Tolerances and time budgets are pinned here.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <string>

#include "heis/curvature.hpp"
#include "heis/curves.hpp"
#include "heis/errors.hpp"
#include "heis/fd_oracle.hpp"
#include "heis/geodesic.hpp"
#include "heis/metric.hpp"

using namespace heis;
using Eigen::VectorXd;

namespace {

const double kSpeedIntegral = (std::sqrt(2.0) + std::asinh(1.0)) / 2.0;  // int_0^1 sqrt(1+t^2) dt
const double kZeta3 = 1.2020569031595942;

struct Outcome {
  bool pass = true;
  std::ostringstream detail;
  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

int failures = 0;

void criterion(int id, const std::string& name, double budget_s, const std::function<void(Outcome&)>& body) {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(o);
  } catch (const std::exception& e) {
    o.pass = false;
    o.detail << " [exception: " << e.what() << "]";
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (secs > budget_s) {
    o.pass = false;
    o.detail << " [over time budget " << budget_s << " s]";
  }
  if (!o.pass) ++failures;
  std::printf("AC%d %s: %s (%.2f s)%s\n", id, o.pass ? "PASS" : "FAIL", name.c_str(), secs, o.detail.str().c_str());
  std::fflush(stdout);
}

PathProblem problem(const GroupPoint& from, const GroupPoint& to, MetricSpec m, Index modes, int nodes,
                    std::uint64_t seed = 0) {
  PathProblem p;
  p.start = from;
  p.end = to;
  p.metric = std::move(m);
  p.mode_budget = modes;
  p.nodes = nodes;
  p.seed = seed;
  return p;
}

GroupPoint random_point(std::mt19937_64& rng, Index n) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> a(static_cast<std::size_t>(n)), b(a.size());
  for (auto& x : a) x = u(rng);
  for (auto& x : b) x = u(rng);
  return {SeqVec::from_dense(a), SeqVec::from_dense(b), u(rng)};
}

LieVector random_lie(std::mt19937_64& rng, Index n) {
  const GroupPoint p = random_point(rng, n);
  return {p.h1, p.h2, p.t};
}

template <class Objective>
double gradient_error(const Objective& obj, const VectorXd& x, double h) {
  VectorXd g;
  obj.evaluate(x, &g);
  const double scale = std::max(1.0, g.cwiseAbs().maxCoeff());
  double worst = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    VectorXd a = x, b = x;
    a(i) += h;
    b(i) -= h;
    worst = std::max(worst, std::abs((obj.evaluate(a, nullptr) - obj.evaluate(b, nullptr)) / (2 * h) - g(i)) / scale);
  }
  return worst;
}

}  // namespace

int main() {
  const MetricSpec g = MetricSpec::subriemannian();
  const MetricSpec sigma = MetricSpec::riemannian();
  const std::vector<double> amplitudes{0.5, 1.0, std::sqrt(3.0)};

  criterion(1, "curve-family lengths match the closed form within 1e-8", 1.0, [&](Outcome& o) {
    double worst = 0.0;
    for (Index n = 1; n <= 10; ++n)
      for (double c : amplitudes) {
        const double expected = c / std::sqrt(static_cast<double>(n)) * kSpeedIntegral;
        const Curve gamma = gamma_family(n, c), alpha = alpha_family(n, c);
        const double lg = length(g, gamma), la = length(g, alpha), lglued = length(g, glue(gamma, alpha));
        worst = std::max({worst, std::abs(lg - expected), std::abs(la - expected), std::abs(lglued - (lg + la))});
      }
    o.detail << " worst deviation " << worst;
    o.require(worst <= 1e-8, "deviation above 1e-8");
  });

  criterion(2, "vanishing-distance trend for (0,0,0) -> (0,0,1)", 60.0, [&](Outcome& o) {
    double previous = std::numeric_limits<double>::infinity();
    for (Index n : {1, 4, 16, 64, 100}) {
      const OptimizationReport r =
          estimate_distance(problem(GroupPoint::identity(), {{}, {}, 1.0}, g, n, 64));
      const double bound = 3.9760823 / std::sqrt(static_cast<double>(n));
      o.detail << " n=" << n << ":" << r.upper_bound;
      o.require(r.upper_bound <= bound + 1e-6, "above analytic bound at n=" + std::to_string(n));
      // the pinned constant rounds 2 sqrt(3) int sqrt(1+t^2) = 3.97607358 upwards; check the exact one too
      o.require(r.upper_bound <= vertical_shift_upper_bound(n, 1.0) + 1e-6,
                "above the exact glued-curve length at n=" + std::to_string(n));
      o.require(r.upper_bound <= previous, "not monotone at n=" + std::to_string(n));
      previous = r.upper_bound;
    }
    o.require(previous < 0.4, "not below 0.4 at n=100");
  });

  criterion(3, "glued curve endpoints exact and horizontal to 1e-12", 10.0, [&](Outcome& o) {
    double worst_residual = 0.0, worst_end = 0.0;
    for (Index n = 1; n <= 10; ++n)
      for (double c : amplitudes) {
        const Curve glued = glue(gamma_family(n, c), alpha_family(n, c));
        o.require(glued.evaluate(0.0) == GroupPoint::identity(), "start is not the identity");
        const GroupPoint end = glued.evaluate(1.0);
        o.require(end.h1.is_zero() && end.h2.is_zero(), "horizontal part of the end is not zero");
        // c^2 (1/6 + 1/6 - 1/2 + 1/2) and c^2/3 may differ in the last bit
        worst_end = std::max(worst_end, std::abs(end.t - c * c / 3.0) / (c * c / 3.0));
        worst_residual = std::max(worst_residual, max_horizontality_residual(glued, 1001));
      }
    o.detail << " worst residual " << worst_residual << ", worst relative end gap " << worst_end;
    o.require(worst_end <= 4 * std::numeric_limits<double>::epsilon(), "end gap above 4 ulp");
    o.require(worst_residual <= 1e-12, "residual above 1e-12");
  });

  criterion(4, "positivity lower bound and pinned distance", 30.0, [&](Outcome& o) {
    const OptimizationReport r =
        estimate_distance(problem(GroupPoint::identity(), {SeqVec::basis(1), {}, 0.0}, g, 8, 64));
    o.detail << " e1: lower " << r.lower_bound << " upper " << r.upper_bound;
    o.require(r.lower_bound == 1.0, "lower bound is not 1");
    o.require(r.upper_bound <= 1.0 + 1e-3, "upper bound above 1 + 1e-3");
    double worst = 0.0;
    for (double s : {-50.0, 0.0, 1.0, 7.0, 1e6})
      worst = std::max(worst, std::abs(lower_bound_horizontal(GroupPoint::identity(), {SeqVec::basis(3), {}, s},
                                                              g.weight) -
                                       1.0 / std::sqrt(3.0)));
    o.detail << "; e3 lower-bound deviation " << worst;
    o.require(worst <= 1e-15, "e3 lower bound off by more than 1e-15");
  });

  criterion(5, "blow-up plane curvatures -3j^2 and j^2 for j <= 50", 1.0, [&](Outcome& o) {
    double worst = 0.0;
    for (Index j = 1; j <= 50; ++j) {
      const double jd = static_cast<double>(j), sj = std::sqrt(jd);
      worst = std::max({worst, std::abs(arnold_curvature(LieVector::e1(j, sj), LieVector::e2(j, sj)).k + 3 * jd * jd),
                        std::abs(arnold_curvature(LieVector::e1(j, sj), LieVector::e3()).k - jd * jd),
                        std::abs(arnold_curvature(LieVector::e2(j, sj), LieVector::e3()).k - jd * jd)});
    }
    o.detail << " worst deviation " << worst;
    o.require(worst <= 1e-9, "deviation above 1e-9");
  });

  criterion(6, "discontinuity sequence K(W_k, e3) and plane convergence", 30.0, [&](Outcome& o) {
    double worst = 0.0, at_million = 0.0;
    for (Index k : {1, 2, 10, 1000, 1000000}) {
      const double v = curvature_Wk_e3(k);
      worst = std::max(worst, std::abs(v - curvature_Wk_e3_closed_form(k)));
      if (k == 1) o.require(std::abs(v - 1.0) <= 1e-9, "k=1 is not 1");
      if (k == 2) o.require(std::abs(v - 4.0 / 3.0) <= 1e-9, "k=2 is not 4/3");
      if (k == 1000000) at_million = v;
    }
    const double angle = plane_convergence(1000000, 10000000);
    o.detail << " worst deviation " << worst << ", K(10^6) = " << at_million << ", angle " << angle;
    o.require(worst <= 1e-9, "deviation above 1e-9");
    o.require(at_million > 11.9, "K(10^6) not above 11.9");
    o.require(angle < 1e-3, "angle not below 1e-3");
  });

  criterion(7, "divergence probe on sum e1_j/j and sum e1_j/j^2", 5.0, [&](Outcome& o) {
    ProbeOptions heuristic;
    heuristic.symbolic = false;
    const auto e3 = CoefficientRule::vertical_unit();
    const AdjointResult w = divergence_probe(e3, CoefficientRule::power_law(1, 1.0, 1.0), 20, heuristic);
    o.require(w.divergent(), "harmonic rule not flagged divergent");
    const AdjointResult sq = divergence_probe(e3, CoefficientRule::power_law(1, 1.0, 2.0), 20, heuristic);
    o.require(!sq.divergent(), "square rule flagged divergent");
    if (!sq.divergent()) {
      o.detail << " |S - 4 zeta(3)| = " << std::abs(sq.norm_sq - 4 * kZeta3);
      o.require(std::abs(sq.norm_sq - 4 * kZeta3) <= 1e-3, "limit off by more than 1e-3");
    }
  });

  criterion(8, "Arnold formula agrees with the finite-difference oracle", 120.0, [&](Outcome& o) {
    std::mt19937_64 rng(2024);
    double worst = 0.0;
    int planes = 0;
    while (planes < 50) {
      CurvatureBreakdown b;
      try {
        b = arnold_curvature(random_lie(rng, 3), random_lie(rng, 3));
      } catch (const DegeneratePlane&) {
        continue;
      }
      // the breakdown holds the sigma-orthonormalized pair
      const double fd = fd_levi_civita_oracle(3, b.x, b.y);
      worst = std::max(worst, std::abs(fd - b.k) / std::abs(b.k));
      ++planes;
    }
    for (Index j = 1; j <= 3; ++j) {
      const double jd = static_cast<double>(j), sj = std::sqrt(jd);
      const LieVector a1 = LieVector::e1(j, sj), a2 = LieVector::e2(j, sj), e3 = LieVector::e3();
      worst = std::max({worst, std::abs(fd_levi_civita_oracle(3, a1, a2) + 3 * jd * jd) / (3 * jd * jd),
                        std::abs(fd_levi_civita_oracle(3, a1, e3) - jd * jd) / (jd * jd),
                        std::abs(fd_levi_civita_oracle(3, a2, e3) - jd * jd) / (jd * jd)});
    }
    o.detail << " worst relative deviation " << worst;
    o.require(worst <= 1e-3, "relative deviation above 1e-3");
  });

  criterion(9, "property suites", 120.0, [&](Outcome& o) {
    std::mt19937_64 rng(77);
    std::uniform_int_distribution<int> pick(1, 6);
    // adjoint defining identity on sparse random triples
    double adjoint = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const LieVector x = random_lie(rng, pick(rng)), y = random_lie(rng, pick(rng)), z = random_lie(rng, pick(rng));
      adjoint = std::max(adjoint, std::abs(sigma_inner(bracket(y, z), x) - sigma_inner(z, adjoint_value(x, y))));
    }
    o.detail << " adjoint " << adjoint;
    o.require(adjoint <= 1e-10, "adjoint identity");

    // d <= rho, with the sandwich on both
    double excess = -std::numeric_limits<double>::infinity();
    for (int i = 0; i < 20; ++i) {
      const GroupPoint a = random_point(rng, 3), b = random_point(rng, 3);
      const OptimizationReport rho = estimate_distance(problem(a, b, g, 3, 16, i));
      PathProblem pr = problem(a, b, sigma, 3, 16, i);
      pr.warm_start = rho.nodes;
      const OptimizationReport d = estimate_distance(pr);
      o.require(rho.lower_bound <= rho.upper_bound && d.lower_bound <= d.upper_bound, "sandwich");
      excess = std::max(excess, d.upper_bound - rho.upper_bound);
    }
    o.detail << "; max(d - rho) " << excess;
    o.require(excess <= 1e-6, "d above rho");

    // left invariance of lengths and distance estimates
    double invariance = 0.0;
    for (int i = 0; i < 5; ++i) {
      const GroupPoint p = random_point(rng, 4);
      const Curve curve = glue(gamma_family(3, 1.5), alpha_family(3, 1.5));
      invariance = std::max(invariance, std::abs(length(g, left_translated(p, curve)) - length(g, curve)));
      const GroupPoint a = random_point(rng, 2), b = random_point(rng, 2);
      const auto [o1, r1] = left_reduce(a, b);
      for (const MetricSpec& m : {g, sigma})
        invariance = std::max(invariance, std::abs(estimate_distance(problem(a, b, m, 2, 16)).upper_bound -
                                                   estimate_distance(problem(o1, r1, m, 2, 16)).upper_bound));
    }
    o.detail << "; left invariance " << invariance;
    o.require(invariance <= 1e-4, "left invariance");

    // analytic gradients against central differences
    double grad = 0.0;
    std::normal_distribution<double> normal;
    for (int i = 0; i < 5; ++i) {
      const GroupPoint a = random_point(rng, 3), b = random_point(rng, 3);
      ControlObjective control(a, b, g.weight, 3, 6);
      VectorXd lambda(7), x(control.size());
      for (auto& v : lambda) v = normal(rng);
      for (auto& v : x) v = normal(rng);
      control.set_multipliers(lambda, 10.0);
      grad = std::max(grad, gradient_error(control, x, 1e-6));
      PolylineObjective poly(a, b, sigma.weight, 3, 6);
      VectorXd y = poly.straight_line();
      for (auto& v : y) v += normal(rng);
      grad = std::max(grad, gradient_error(poly, y, 1e-6));
    }
    o.detail << "; gradient " << grad;
    o.require(grad <= 1e-4, "gradient check");
  });

  std::printf("%d of 9 acceptance criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
