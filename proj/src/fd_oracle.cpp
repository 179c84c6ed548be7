#include "heis/fd_oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "heis/errors.hpp"

namespace heis {

namespace fd {

namespace {

// Central difference of f along coordinate k, Richardson-extrapolated:
// (4 D(h/2) - D(h)) / 3.
template <class F>
auto richardson(const F& f, const Eigen::VectorXd& point, Eigen::Index k, double h) {
  auto central = [&](double step) {
    Eigen::VectorXd plus = point;
    Eigen::VectorXd minus = point;
    plus(k) += step;
    minus(k) -= step;
    auto fp = f(plus);
    auto fm = f(minus);
    for (std::size_t i = 0; i < fp.size(); ++i) fp[i] = (fp[i] - fm[i]) / (2.0 * step);
    return fp;
  };
  auto coarse = central(h);
  auto fine = central(h / 2.0);
  for (std::size_t i = 0; i < fine.size(); ++i) fine[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
  return fine;
}

}  // namespace

std::vector<Eigen::MatrixXd> christoffel(const MetricField& g, const Eigen::VectorXd& point, double step) {
  const Eigen::Index d = point.size();
  auto metric_as_list = [&g](const Eigen::VectorXd& p) { return std::vector<Eigen::MatrixXd>{g(p)}; };
  // dg[m] = d g / d x^m
  std::vector<Eigen::MatrixXd> dg(static_cast<std::size_t>(d));
  for (Eigen::Index m = 0; m < d; ++m) dg[static_cast<std::size_t>(m)] = richardson(metric_as_list, point, m, step)[0];

  const Eigen::MatrixXd ginv = g(point).inverse();
  std::vector<Eigen::MatrixXd> gamma(static_cast<std::size_t>(d), Eigen::MatrixXd::Zero(d, d));
  for (Eigen::Index i = 0; i < d; ++i)
    for (Eigen::Index j = 0; j < d; ++j) {
      // first-kind symbols Gamma_{m i j}
      Eigen::VectorXd first(d);
      for (Eigen::Index m = 0; m < d; ++m)
        first(m) = 0.5 * (dg[static_cast<std::size_t>(i)](m, j) + dg[static_cast<std::size_t>(j)](m, i) -
                          dg[static_cast<std::size_t>(m)](i, j));
      const Eigen::VectorXd second = ginv * first;
      for (Eigen::Index l = 0; l < d; ++l) gamma[static_cast<std::size_t>(l)](i, j) = second(l);
    }
  return gamma;
}

double sectional_curvature(const MetricField& g, const Eigen::VectorXd& point, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& v, double step) {
  const Eigen::Index d = point.size();
  if (u.size() != d || v.size() != d) throw std::invalid_argument("vector dimension mismatch");
  const auto gamma = christoffel(g, point, step);
  auto gamma_at = [&](const Eigen::VectorXd& p) { return christoffel(g, p, step); };
  // dgamma[mu][l](i, j) = d Gamma^l_{ij} / d x^mu
  std::vector<std::vector<Eigen::MatrixXd>> dgamma;
  for (Eigen::Index mu = 0; mu < d; ++mu) dgamma.push_back(richardson(gamma_at, point, mu, step));

  auto G = [&](Eigen::Index l, Eigen::Index i, Eigen::Index j) { return gamma[static_cast<std::size_t>(l)](i, j); };
  auto dG = [&](Eigen::Index mu, Eigen::Index l, Eigen::Index i, Eigen::Index j) {
    return dgamma[static_cast<std::size_t>(mu)][static_cast<std::size_t>(l)](i, j);
  };

  // w^rho = R^rho_{sigma mu nu} v^sigma u^mu v^nu, i.e. R(u,v)v, with
  // R^r_{s m n} = d_m G^r_{n s} - d_n G^r_{m s} + G^r_{m l} G^l_{n s} - G^r_{n l} G^l_{m s}
  Eigen::VectorXd rv = Eigen::VectorXd::Zero(d);
  for (Eigen::Index r = 0; r < d; ++r)
    for (Eigen::Index s = 0; s < d; ++s)
      for (Eigen::Index m = 0; m < d; ++m)
        for (Eigen::Index n = 0; n < d; ++n) {
          const double coeff = v(s) * u(m) * v(n);
          if (coeff == 0.0) continue;
          double value = dG(m, r, n, s) - dG(n, r, m, s);
          for (Eigen::Index l = 0; l < d; ++l) value += G(r, m, l) * G(l, n, s) - G(r, n, l) * G(l, m, s);
          rv(r) += value * coeff;
        }

  const Eigen::MatrixXd g0 = g(point);
  const double uu = u.dot(g0 * u);
  const double vv = v.dot(g0 * v);
  const double uv = u.dot(g0 * v);
  const double area = uu * vv - uv * uv;
  if (!(area > 1e-24 * uu * vv)) throw DegeneratePlane("vectors span no plane");
  return u.dot(g0 * rv) / area;
}

}  // namespace fd

Eigen::MatrixXd truncated_metric_tensor(Index n, const Eigen::VectorXd& point, const WeightRule& w) {
  const Eigen::Index d = 2 * n + 1;
  if (point.size() != d) throw std::invalid_argument("point dimension does not match truncation");
  // pulled-back vertical component: v3 - <p1, v2> + <p2, v1>
  Eigen::MatrixXd jac = Eigen::MatrixXd::Identity(d, d);
  for (Index i = 0; i < n; ++i) {
    jac(2 * n, i) = point(n + i);
    jac(2 * n, n + i) = -point(i);
  }
  Eigen::VectorXd base(d);
  for (Index i = 0; i < n; ++i) base(i) = base(n + i) = w(i + 1);
  base(2 * n) = 1.0;
  return jac.transpose() * base.asDiagonal() * jac;
}

Eigen::VectorXd truncated_coordinates(const LieVector& x, Index n) {
  if (x.max_index() > n) throw std::invalid_argument("vector support exceeds the truncation");
  Eigen::VectorXd out(2 * n + 1);
  auto a = x.x1.to_dense(n);
  auto b = x.x2.to_dense(n);
  for (Index i = 0; i < n; ++i) {
    out(i) = a[static_cast<std::size_t>(i)];
    out(n + i) = b[static_cast<std::size_t>(i)];
  }
  out(2 * n) = x.x3;
  return out;
}

double fd_levi_civita_oracle(Index truncation, const LieVector& x, const LieVector& y, double step,
                             const WeightRule& w) {
  if (truncation < 1) throw std::invalid_argument("truncation must be >= 1");
  if (!(step > 0.0)) throw std::invalid_argument("step must be positive");
  fd::MetricField metric = [truncation, &w](const Eigen::VectorXd& p) {
    return truncated_metric_tensor(truncation, p, w);
  };
  const Eigen::VectorXd origin = Eigen::VectorXd::Zero(2 * truncation + 1);
  return fd::sectional_curvature(metric, origin, truncated_coordinates(x, truncation),
                                 truncated_coordinates(y, truncation), step);
}

}  // namespace heis
