#include "heis/geodesic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>
#include <stdexcept>
#include <string>

#include <gsl/gsl_blas.h>
#include <gsl/gsl_errno.h>
#include <gsl/gsl_multimin.h>

#include "heis/errors.hpp"

namespace heis {

namespace {

using Eigen::VectorXd;

VectorXd to_dense(const GroupPoint& p, Index n) {
  VectorXd out(2 * n + 1);
  auto h1 = p.h1.to_dense(n);
  auto h2 = p.h2.to_dense(n);
  for (Index i = 0; i < n; ++i) {
    out(i) = h1[static_cast<std::size_t>(i)];
    out(n + i) = h2[static_cast<std::size_t>(i)];
  }
  out(2 * n) = p.t;
  return out;
}

template <class Row>
GroupPoint from_dense(const Row& v, Index n) {
  std::vector<double> h1(static_cast<std::size_t>(n));
  std::vector<double> h2(static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    h1[static_cast<std::size_t>(i)] = v(i);
    h2[static_cast<std::size_t>(i)] = v(n + i);
  }
  return {SeqVec::from_dense(h1), SeqVec::from_dense(h2), v(2 * n)};
}

VectorXd weight_vector(const WeightRule& w, Index n) {
  VectorXd out(n);
  for (Index i = 0; i < n; ++i) out(i) = w(i + 1);
  return out;
}

// Quasi-Newton minimization (GSL's BFGS variant) in the rescaled variables
// x = s .* y, where s is the objective's diagonal scaling. Returns the number
// of iterations; `stationary` reports whether |grad_y|^2 <= tol (1 + |f|) was
// met or the line search could make no further progress.
template <class Objective>
long descend(const Objective& obj, VectorXd& x, long budget, double tol, bool& stationary) {
  stationary = false;
  struct Context {
    const Objective* obj;
    VectorXd scale;
    VectorXd buffer;
    VectorXd grad;
  } ctx{&obj, obj.scaling(), VectorXd(x.size()), VectorXd(x.size())};
  const Eigen::Index size = x.size();

  gsl_multimin_function_fdf fn;
  fn.n = static_cast<std::size_t>(size);
  fn.params = &ctx;
  fn.f = [](const gsl_vector* y, void* params) {
    auto& c = *static_cast<Context*>(params);
    for (Eigen::Index i = 0; i < c.buffer.size(); ++i) c.buffer(i) = c.scale(i) * gsl_vector_get(y, i);
    return c.obj->evaluate(c.buffer, nullptr);
  };
  fn.df = [](const gsl_vector* y, void* params, gsl_vector* g) {
    auto& c = *static_cast<Context*>(params);
    for (Eigen::Index i = 0; i < c.buffer.size(); ++i) c.buffer(i) = c.scale(i) * gsl_vector_get(y, i);
    c.obj->evaluate(c.buffer, &c.grad);
    for (Eigen::Index i = 0; i < c.grad.size(); ++i) gsl_vector_set(g, i, c.scale(i) * c.grad(i));
  };
  fn.fdf = [](const gsl_vector* y, void* params, double* f, gsl_vector* g) {
    auto& c = *static_cast<Context*>(params);
    for (Eigen::Index i = 0; i < c.buffer.size(); ++i) c.buffer(i) = c.scale(i) * gsl_vector_get(y, i);
    *f = c.obj->evaluate(c.buffer, &c.grad);
    for (Eigen::Index i = 0; i < c.grad.size(); ++i) gsl_vector_set(g, i, c.scale(i) * c.grad(i));
  };

  // report failures through status codes instead of GSL's aborting handler
  struct HandlerGuard {
    gsl_error_handler_t* previous = gsl_set_error_handler_off();
    ~HandlerGuard() { gsl_set_error_handler(previous); }
  } guard;

  std::unique_ptr<gsl_vector, decltype(&gsl_vector_free)> y(gsl_vector_alloc(fn.n), &gsl_vector_free);
  for (Eigen::Index i = 0; i < size; ++i) gsl_vector_set(y.get(), i, x(i) / ctx.scale(i));
  std::unique_ptr<gsl_multimin_fdfminimizer, decltype(&gsl_multimin_fdfminimizer_free)> solver(
      gsl_multimin_fdfminimizer_alloc(gsl_multimin_fdfminimizer_vector_bfgs2, fn.n),
      &gsl_multimin_fdfminimizer_free);
  gsl_multimin_fdfminimizer_set(solver.get(), &fn, y.get(), 0.1, 0.1);

  long it = 0;
  for (; it < budget; ++it) {
    const double f = solver->f;
    double gg = 0.0;
    gsl_blas_ddot(solver->gradient, solver->gradient, &gg);
    if (gg <= tol * (1.0 + std::abs(f))) {
      stationary = true;
      break;
    }
    const int status = gsl_multimin_fdfminimizer_iterate(solver.get());
    if (status == GSL_ENOPROG) {
      // no decrease representable in double precision
      stationary = true;
      ++it;
      break;
    }
    if (status != GSL_SUCCESS) break;
  }
  for (Eigen::Index i = 0; i < size; ++i) x(i) = ctx.scale(i) * gsl_vector_get(solver->x, i);
  return it;
}

OptimizationReport finish(std::vector<GroupPoint> nodes, double upper, double lower) {
  OptimizationReport r;
  r.upper_bound = upper;
  r.lower_bound = lower;
  r.final_path = polyline(nodes);
  r.nodes = std::move(nodes);
  return r;
}

}  // namespace

void PathProblem::validate() const {
  if (mode_budget < 1) throw ValidationError("mode budget must be >= 1");
  if (nodes < 2) throw ValidationError("path needs at least 2 steps");
  Index needed = std::max(start.max_index(), end.max_index());
  if (mode_budget < needed)
    throw ValidationError("mode budget " + std::to_string(mode_budget) +
                          " is smaller than the largest endpoint index " + std::to_string(needed));
  if (options.max_iterations < 1 || options.max_rounds < 1)
    throw ValidationError("optimizer budgets must be positive");
  if (!(options.endpoint_tolerance > 0.0) || !(options.initial_penalty > 0.0))
    throw ValidationError("optimizer tolerances must be positive");
  if (warm_start) {
    if (warm_start->size() != static_cast<std::size_t>(nodes) + 1)
      throw ValidationError("warm start must have nodes + 1 points");
    if (coordinate_gap(warm_start->front(), start) > options.endpoint_tolerance ||
        coordinate_gap(warm_start->back(), end) > options.endpoint_tolerance)
      throw ValidationError("warm start must join start to end");
    for (const auto& p : *warm_start)
      if (p.max_index() > mode_budget) throw ValidationError("warm start leaves the mode budget");
  }
}

// --- HorizontalControlPath -------------------------------------------------

HorizontalControlPath::HorizontalControlPath(GroupPoint start, Eigen::MatrixXd u1, Eigen::MatrixXd u2)
    : start_(std::move(start)), u1_(std::move(u1)), u2_(std::move(u2)) {
  if (u1_.rows() != u2_.rows() || u1_.cols() != u2_.cols() || u1_.rows() < 1)
    throw std::invalid_argument("control matrices must have matching nonempty shapes");
  if (start_.max_index() > modes()) throw std::invalid_argument("start point outside the mode budget");
}

std::vector<GroupPoint> HorizontalControlPath::nodes() const {
  const Index n = modes();
  const double dt = 1.0 / steps();
  VectorXd a = to_dense(start_, n);
  std::vector<GroupPoint> out{start_};
  for (int k = 0; k < steps(); ++k) {
    VectorXd u1 = u1_.row(k).transpose();
    VectorXd u2 = u2_.row(k).transpose();
    a(2 * n) += dt * (a.head(n).dot(u2) - a.segment(n, n).dot(u1));
    a.head(n) += dt * u1;
    a.segment(n, n) += dt * u2;
    out.push_back(from_dense(a, n));
  }
  return out;
}

GroupPoint HorizontalControlPath::end() const { return nodes().back(); }

double HorizontalControlPath::length(const WeightRule& w) const {
  VectorXd wv = weight_vector(w, modes());
  double total = 0.0;
  for (int k = 0; k < steps(); ++k) {
    double sq = (wv.array() * (u1_.row(k).transpose().array().square() +
                               u2_.row(k).transpose().array().square()))
                    .sum();
    total += std::sqrt(sq);
  }
  return total / steps();
}

// --- ControlObjective ------------------------------------------------------

ControlObjective::ControlObjective(const GroupPoint& start, const GroupPoint& end, const WeightRule& w,
                                   Index modes, int steps)
    : start_(to_dense(start, modes)),
      target_(to_dense(end, modes)),
      weights_(weight_vector(w, modes)),
      modes_(modes),
      steps_(steps),
      lambda_(VectorXd::Zero(2 * modes + 1)) {}

double ControlObjective::evaluate(const VectorXd& x, VectorXd* grad) const {
  const Index n = modes_;
  const double dt = 1.0 / steps_;
  Eigen::Map<const RowMatrix> u(x.data(), steps_, 2 * n);
  VectorXd a = start_;
  RowMatrix anchors(steps_, 2 * n);
  double energy = 0.0;
  for (int k = 0; k < steps_; ++k) {
    anchors.row(k) = a.head(2 * n).transpose();
    auto u1 = u.row(k).head(n);
    auto u2 = u.row(k).tail(n);
    a(2 * n) += dt * (u2.dot(a.head(n)) - u1.dot(a.segment(n, n)));
    a.head(n) += dt * u1.transpose();
    a.segment(n, n) += dt * u2.transpose();
    energy += dt * (weights_.transpose().array() * (u1.array().square() + u2.array().square())).sum();
  }
  const VectorXd c = a - target_;
  const double f = energy + lambda_.dot(c) + 0.5 * mu_ * c.squaredNorm();
  if (grad) {
    const VectorXd gc = lambda_ + mu_ * c;
    const double g3 = gc(2 * n);
    grad->resize(x.size());
    Eigen::Map<RowMatrix> gu(grad->data(), steps_, 2 * n);
    Eigen::RowVectorXd tail1 = Eigen::RowVectorXd::Zero(n);  // sum_{m>k} u1_m
    Eigen::RowVectorXd tail2 = Eigen::RowVectorXd::Zero(n);
    const Eigen::RowVectorXd w = weights_.transpose();
    for (int k = steps_ - 1; k >= 0; --k) {
      auto u1 = u.row(k).head(n);
      auto u2 = u.row(k).tail(n);
      auto a1 = anchors.row(k).head(n);
      auto a2 = anchors.row(k).tail(n);
      gu.row(k).head(n) = 2.0 * dt * w.cwiseProduct(u1) + dt * gc.head(n).transpose() +
                          g3 * (-dt * a2 + dt * dt * tail2);
      gu.row(k).tail(n) = 2.0 * dt * w.cwiseProduct(u2) + dt * gc.segment(n, n).transpose() +
                          g3 * (dt * a1 - dt * dt * tail1);
      tail1 += u1;
      tail2 += u2;
    }
  }
  return f;
}

VectorXd ControlObjective::endpoint_residual(const VectorXd& x) const {
  return to_dense(path(x).end(), modes_) - target_;
}

double ControlObjective::energy(const VectorXd& x) const {
  const double dt = 1.0 / steps_;
  Eigen::Map<const RowMatrix> u(x.data(), steps_, 2 * modes_);
  double e = 0.0;
  for (int k = 0; k < steps_; ++k)
    e += dt * (weights_.transpose().array() *
               (u.row(k).head(modes_).array().square() + u.row(k).tail(modes_).array().square()))
                  .sum();
  return e;
}

double ControlObjective::length(const VectorXd& x) const {
  return path(x).length(WeightRule([w = weights_](Index k) { return w(k - 1); }, "dense"));
}

VectorXd ControlObjective::scaling() const {
  const double dt = 1.0 / steps_;
  VectorXd s(size());
  Eigen::Map<RowMatrix> sm(s.data(), steps_, 2 * modes_);
  const Eigen::RowVectorXd row = (2.0 * dt * weights_.transpose().array()).rsqrt();
  for (int k = 0; k < steps_; ++k) {
    sm.row(k).head(modes_) = row;
    sm.row(k).tail(modes_) = row;
  }
  return s;
}

HorizontalControlPath ControlObjective::path(const VectorXd& x) const {
  Eigen::Map<const RowMatrix> u(x.data(), steps_, 2 * modes_);
  return HorizontalControlPath(from_dense(start_, modes_), u.leftCols(modes_), u.rightCols(modes_));
}

// --- PolylineObjective -----------------------------------------------------

PolylineObjective::PolylineObjective(const GroupPoint& start, const GroupPoint& end, const WeightRule& w,
                                     Index modes, int steps)
    : start_(to_dense(start, modes)),
      end_(to_dense(end, modes)),
      weights_(weight_vector(w, modes)),
      modes_(modes),
      steps_(steps) {}

RowMatrix PolylineObjective::full_nodes(const VectorXd& x) const {
  const Index dim = 2 * modes_ + 1;
  RowMatrix p(steps_ + 1, dim);
  p.row(0) = start_.transpose();
  p.row(steps_) = end_.transpose();
  if (steps_ > 1) p.middleRows(1, steps_ - 1) = Eigen::Map<const RowMatrix>(x.data(), steps_ - 1, dim);
  return p;
}

double PolylineObjective::evaluate(const VectorXd& x, VectorXd* grad) const {
  const Index n = modes_;
  const double dt = 1.0 / steps_;
  const RowMatrix p = full_nodes(x);
  const Eigen::RowVectorXd w = weights_.transpose();
  RowMatrix g;
  if (grad) g = RowMatrix::Zero(steps_ + 1, 2 * n + 1);
  double energy = 0.0;
  for (int k = 0; k < steps_; ++k) {
    auto a1 = p.row(k).head(n);
    auto a2 = p.row(k).segment(n, n);
    auto b1 = p.row(k + 1).head(n);
    auto b2 = p.row(k + 1).segment(n, n);
    const Eigen::RowVectorXd d1 = b1 - a1;
    const Eigen::RowVectorXd d2 = b2 - a2;
    const double r = p(k + 1, 2 * n) - p(k, 2 * n) - a1.dot(b2) + a2.dot(b1);
    const double e = (w.array() * (d1.array().square() + d2.array().square())).sum() + r * r;
    energy += e / dt;
    if (grad) {
      const double s = 2.0 / dt;
      const Eigen::RowVectorXd wd1 = w.cwiseProduct(d1);
      const Eigen::RowVectorXd wd2 = w.cwiseProduct(d2);
      g.row(k).head(n) += s * (-wd1 - r * b2);
      g.row(k + 1).head(n) += s * (wd1 + r * a2);
      g.row(k).segment(n, n) += s * (-wd2 + r * b1);
      g.row(k + 1).segment(n, n) += s * (wd2 - r * a1);
      g(k, 2 * n) -= s * r;
      g(k + 1, 2 * n) += s * r;
    }
  }
  if (grad) {
    grad->resize(x.size());
    if (steps_ > 1)
      Eigen::Map<RowMatrix>(grad->data(), steps_ - 1, 2 * n + 1) = g.middleRows(1, steps_ - 1);
  }
  return energy;
}

double PolylineObjective::length(const VectorXd& x) const {
  const Index n = modes_;
  const RowMatrix p = full_nodes(x);
  double total = 0.0;
  for (int k = 0; k < steps_; ++k) {
    const Eigen::RowVectorXd d1 = p.row(k + 1).head(n) - p.row(k).head(n);
    const Eigen::RowVectorXd d2 = p.row(k + 1).segment(n, n) - p.row(k).segment(n, n);
    const double r = p(k + 1, 2 * n) - p(k, 2 * n) - p.row(k).head(n).dot(p.row(k + 1).segment(n, n)) +
                     p.row(k).segment(n, n).dot(p.row(k + 1).head(n));
    total += std::sqrt((weights_.transpose().array() * (d1.array().square() + d2.array().square())).sum() +
                       r * r);
  }
  return total;
}

VectorXd PolylineObjective::scaling() const {
  const Index dim = 2 * modes_ + 1;
  const double dt = 1.0 / steps_;
  VectorXd s(size());
  Eigen::Map<RowMatrix> sm(s.data(), steps_ - 1, dim);
  for (Index j = 0; j < dim; ++j) {
    const double stiffness = 4.0 * (j < 2 * modes_ ? weights_(j % modes_) : 1.0) / dt;
    sm.col(j).setConstant(1.0 / std::sqrt(stiffness));
  }
  return s;
}

VectorXd PolylineObjective::straight_line() const {
  const Index dim = 2 * modes_ + 1;
  VectorXd x(size());
  for (int k = 1; k < steps_; ++k)
    x.segment((k - 1) * dim, dim) = start_ + (static_cast<double>(k) / steps_) * (end_ - start_);
  return x;
}

VectorXd PolylineObjective::encode(const std::vector<GroupPoint>& nodes) const {
  const Index dim = 2 * modes_ + 1;
  VectorXd x(size());
  for (int k = 1; k < steps_; ++k) x.segment((k - 1) * dim, dim) = to_dense(nodes[static_cast<std::size_t>(k)], modes_);
  return x;
}

std::vector<GroupPoint> PolylineObjective::nodes(const VectorXd& x) const {
  const RowMatrix p = full_nodes(x);
  std::vector<GroupPoint> out;
  for (Eigen::Index k = 0; k < p.rows(); ++k) out.push_back(from_dense(p.row(k), modes_));
  return out;
}

// --- distance bounds -------------------------------------------------------

double lower_bound_horizontal(const GroupPoint& p, const GroupPoint& q, const WeightRule& w) {
  double best = 0.0;
  for (const SeqVec& diff : {q.h1 - p.h1, q.h2 - p.h2})
    for (const auto& [k, v] : diff.entries()) best = std::max(best, std::abs(v) * std::sqrt(w(k)));
  return best;
}

double vertical_shift_upper_bound(Index n, double s) {
  if (n < 1) throw std::invalid_argument("vertical_shift_upper_bound: n must be >= 1");
  if (!(s > 0.0)) throw std::invalid_argument("vertical_shift_upper_bound: s must be positive");
  const double c = std::sqrt(3.0 * s);
  return length(MetricSpec::subriemannian(), glue(gamma_family(n, c), alpha_family(n, c)));
}

std::pair<GroupPoint, GroupPoint> left_reduce(const GroupPoint& p, const GroupPoint& q) {
  return {GroupPoint::identity(), multiply(inverse(p), q)};
}

namespace {

VectorXd seed_noise(Eigen::Index size, double sigma, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, sigma);
  VectorXd out(size);
  for (Eigen::Index i = 0; i < size; ++i) out(i) = normal(rng);
  return out;
}

double seed_scale(const PathProblem& pr) { return 1.0 + coordinate_gap(pr.start, pr.end); }

OptimizationReport run_subriemannian(const PathProblem& pr, double lower) {
  const Index n = pr.mode_budget;
  const int m = pr.nodes;
  const auto& opt = pr.options;
  ControlObjective obj(pr.start, pr.end, pr.metric.weight, n, m);

  // straight segment in control form: constant controls equal to the horizontal displacement
  const VectorXd delta = to_dense(pr.end, n) - to_dense(pr.start, n);
  VectorXd x(obj.size());
  for (int k = 0; k < m; ++k) x.segment(2 * n * k, 2 * n) = delta.head(2 * n);
  x += seed_noise(x.size(), opt.perturbation * seed_scale(pr), pr.seed);

  VectorXd lambda = VectorXd::Zero(2 * n + 1);
  double mu = opt.initial_penalty;
  long iterations = 0;
  int rounds = 0;
  double residual = std::numeric_limits<double>::infinity();
  while (rounds < opt.max_rounds && iterations < opt.max_iterations) {
    obj.set_multipliers(lambda, mu);
    bool stationary = false;
    iterations += descend(obj, x, opt.max_iterations - iterations, opt.stationarity, stationary);
    ++rounds;
    const VectorXd c = obj.endpoint_residual(x);
    residual = c.norm();
    if (residual < opt.endpoint_tolerance) break;
    lambda += mu * c;
    mu *= 2.0;
  }
  if (!(residual < opt.endpoint_tolerance))
    throw NonConvergence("endpoint residual " + std::to_string(residual) + " above " +
                         std::to_string(opt.endpoint_tolerance) + " after " + std::to_string(iterations) +
                         " iterations and " + std::to_string(rounds) + " rounds");

  // A uniform control shift closes the horizontal gap exactly, so the
  // horizontal lower bound applies to the reported path without slack.
  VectorXd corrected = x;
  const VectorXd c = obj.endpoint_residual(x);
  for (int k = 0; k < m; ++k) corrected.segment(2 * n * k, 2 * n) -= c.head(2 * n);
  const double corrected_residual = obj.endpoint_residual(corrected).norm();
  if (corrected_residual < opt.endpoint_tolerance) {
    x = corrected;
    residual = corrected_residual;
  }

  HorizontalControlPath path = obj.path(x);
  OptimizationReport r = finish(path.nodes(), path.length(pr.metric.weight), lower);
  r.iterations = iterations;
  r.rounds = rounds;
  r.converged = true;
  r.endpoint_error = residual;
  return r;
}

OptimizationReport run_riemannian(const PathProblem& pr, double lower) {
  const Index n = pr.mode_budget;
  const auto& opt = pr.options;
  PolylineObjective obj(pr.start, pr.end, pr.metric.weight, n, pr.nodes);

  std::vector<VectorXd> seeds;
  seeds.push_back(obj.straight_line() + seed_noise(obj.size(), opt.perturbation * seed_scale(pr), pr.seed));
  if (pr.warm_start) seeds.push_back(obj.encode(*pr.warm_start));

  VectorXd best;
  double best_length = std::numeric_limits<double>::infinity();
  long iterations = 0;
  bool all_stationary = true;
  for (const VectorXd& seed : seeds) {
    // the seeds themselves are admissible paths
    double seed_length = obj.length(seed);
    if (seed_length < best_length) {
      best_length = seed_length;
      best = seed;
    }
    VectorXd x = seed;
    bool stationary = false;
    iterations += descend(obj, x, opt.max_iterations - iterations, opt.stationarity, stationary);
    all_stationary = all_stationary && stationary;
    double len = obj.length(x);
    if (len < best_length) {
      best_length = len;
      best = x;
    }
    if (iterations >= opt.max_iterations) break;
  }

  OptimizationReport r = finish(obj.nodes(best), best_length, lower);
  r.iterations = iterations;
  r.rounds = 1;
  r.converged = all_stationary;
  r.endpoint_error = 0.0;
  return r;
}

}  // namespace

OptimizationReport estimate_distance(const PathProblem& problem) {
  problem.validate();
  const double lower = lower_bound_horizontal(problem.start, problem.end, problem.metric.weight);
  if (coordinate_gap(problem.start, problem.end) == 0.0) {
    OptimizationReport r = finish({problem.start, problem.end}, 0.0, lower);
    r.converged = true;
    return r;
  }
  OptimizationReport r = problem.metric.kind == MetricKind::subriemannian ? run_subriemannian(problem, lower)
                                                                          : run_riemannian(problem, lower);
  if (r.upper_bound < r.lower_bound - 1e-9 * (1.0 + r.lower_bound))
    throw Inconsistent("upper bound " + std::to_string(r.upper_bound) + " below lower bound " +
                       std::to_string(r.lower_bound));
  return r;
}

}  // namespace heis
