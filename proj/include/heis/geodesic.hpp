#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "heis/curves.hpp"
#include "heis/group.hpp"
#include "heis/metric.hpp"

namespace heis {

using RowMatrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct OptimizerOptions {
  long max_iterations = 100000;   // total descent steps over all rounds
  int max_rounds = 30;            // penalty rounds, multiplier doubles each round
  double endpoint_tolerance = 1e-8;
  double initial_penalty = 10.0;
  double perturbation = 0.05;     // seed noise, relative to 1 + |end - start|
  double stationarity = 1e-13;    // stop when g . P g <= stationarity * (1 + f)
};

struct PathProblem {
  GroupPoint start;
  GroupPoint end;
  MetricSpec metric;
  Index mode_budget = 1;  // paths live in span{e_1..e_n} x span{e_1..e_n} x R
  int nodes = 64;         // number of uniform steps M
  std::uint64_t seed = 0;
  OptimizerOptions options;
  // Extra seed for the riemannian search: M + 1 nodes from start to end.
  std::optional<std::vector<GroupPoint>> warm_start;

  // Throws ValidationError.
  void validate() const;
};

struct OptimizationReport {
  double upper_bound = 0.0;
  double lower_bound = 0.0;
  long iterations = 0;
  bool converged = false;
  int rounds = 0;
  double endpoint_error = 0.0;
  std::vector<GroupPoint> nodes;  // the final path, uniform in t
  Curve final_path = constant_curve(GroupPoint::identity());
};

// Horizontal path encoded by piecewise constant controls (u1, u2) on a uniform
// grid of M steps. The vertical coordinate is integrated from
// d tau = <h1, dh2> - <h2, dh1>, which is exact for piecewise linear h1, h2,
// so the reconstructed polyline is horizontal up to roundoff.
class HorizontalControlPath {
 public:
  HorizontalControlPath(GroupPoint start, Eigen::MatrixXd u1, Eigen::MatrixXd u2);

  int steps() const { return static_cast<int>(u1_.rows()); }
  Index modes() const { return static_cast<Index>(u1_.cols()); }
  const Eigen::MatrixXd& u1() const { return u1_; }
  const Eigen::MatrixXd& u2() const { return u2_; }
  const GroupPoint& start() const { return start_; }

  std::vector<GroupPoint> nodes() const;
  GroupPoint end() const;
  double length(const WeightRule& w) const;
  Curve to_curve() const { return polyline(nodes()); }

 private:
  GroupPoint start_;
  Eigen::MatrixXd u1_;
  Eigen::MatrixXd u2_;
};

// Augmented-Lagrangian objective over controls, x = M rows of [u1 | u2]:
//   E(u) + lambda . c(u) + mu/2 |c(u)|^2
// with E the discrete energy and c the endpoint residual in all 2n+1
// coordinates.
class ControlObjective {
 public:
  ControlObjective(const GroupPoint& start, const GroupPoint& end, const WeightRule& w, Index modes,
                   int steps);

  Eigen::Index size() const { return steps_ * 2 * modes_; }
  double evaluate(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const;
  Eigen::VectorXd endpoint_residual(const Eigen::VectorXd& x) const;
  double energy(const Eigen::VectorXd& x) const;
  double length(const Eigen::VectorXd& x) const;
  // Diagonal change of variables x = s .* y under which the energy Hessian
  // is the identity.
  Eigen::VectorXd scaling() const;

  void set_multipliers(Eigen::VectorXd lambda, double mu) {
    lambda_ = std::move(lambda);
    mu_ = mu;
  }
  HorizontalControlPath path(const Eigen::VectorXd& x) const;

 private:
  Eigen::VectorXd start_;   // [h1 | h2 | t]
  Eigen::VectorXd target_;
  Eigen::VectorXd weights_;
  Index modes_;
  int steps_;
  Eigen::VectorXd lambda_;
  double mu_ = 0.0;
};

// Discrete sigma-energy of a polyline with fixed endpoints and M - 1 free
// interior nodes, x = node rows of [h1 | h2 | t]. Along a coordinate segment
// the pulled-back velocity is constant, so segment lengths are exact.
class PolylineObjective {
 public:
  PolylineObjective(const GroupPoint& start, const GroupPoint& end, const WeightRule& w, Index modes,
                    int steps);

  Eigen::Index size() const { return (steps_ - 1) * (2 * modes_ + 1); }
  double evaluate(const Eigen::VectorXd& x, Eigen::VectorXd* grad) const;
  double length(const Eigen::VectorXd& x) const;
  // Diagonal change of variables x = s .* y from the flat-metric energy Hessian.
  Eigen::VectorXd scaling() const;

  Eigen::VectorXd straight_line() const;
  Eigen::VectorXd encode(const std::vector<GroupPoint>& nodes) const;
  std::vector<GroupPoint> nodes(const Eigen::VectorXd& x) const;

 private:
  RowMatrix full_nodes(const Eigen::VectorXd& x) const;

  Eigen::VectorXd start_;
  Eigen::VectorXd end_;
  Eigen::VectorXd weights_;
  Index modes_;
  int steps_;
};

// max over i in {1,2} and k of |p_ik - q_ik| sqrt(a_k); a lower bound for both
// the riemannian and the sub-riemannian distance.
double lower_bound_horizontal(const GroupPoint& p, const GroupPoint& q,
                              const WeightRule& w = WeightRule::inverse_index());

// g-length of glue(gamma^n, alpha^n) with c = sqrt(3 s), an upper bound for
// rho((0,0,0), (0,0,s)).
double vertical_shift_upper_bound(Index n, double s);

// (identity, p^{-1} q)
std::pair<GroupPoint, GroupPoint> left_reduce(const GroupPoint& p, const GroupPoint& q);

// Upper bound on d (riemannian kind) or rho (sub-riemannian kind) at the
// problem's mode budget. Throws NonConvergence or Inconsistent.
OptimizationReport estimate_distance(const PathProblem& problem);

}  // namespace heis
