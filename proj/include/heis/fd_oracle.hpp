#pragma once

#include <Eigen/Dense>

#include <functional>

#include "heis/group.hpp"
#include "heis/seqvec.hpp"

namespace heis {

namespace fd {

// Coordinate expression of a Riemannian metric: point -> symmetric matrix g_ij.
using MetricField = std::function<Eigen::MatrixXd(const Eigen::VectorXd&)>;

// Christoffel symbols Gamma^l_{ij} at a point from central differences of the
// metric, Richardson-extrapolated over steps h and h/2. Entry [l](i, j).
std::vector<Eigen::MatrixXd> christoffel(const MetricField& g, const Eigen::VectorXd& point, double step);

// <R(u,v)v, u> / (|u|^2 |v|^2 - <u,v>^2) with derivatives of the Christoffel
// symbols taken by Richardson-extrapolated central differences.
double sectional_curvature(const MetricField& g, const Eigen::VectorXd& point, const Eigen::VectorXd& u,
                           const Eigen::VectorXd& v, double step);

}  // namespace fd

// Metric tensor of sigma on the truncation l2_n x l2_n x R in coordinates
// (h1_1..h1_n, h2_1..h2_n, t): the pullback of sigma0 through dL_{-p}.
Eigen::MatrixXd truncated_metric_tensor(Index n, const Eigen::VectorXd& point,
                                        const WeightRule& w = WeightRule::inverse_index());

// Coordinates of a Lie algebra vector in the n-truncation (dL at the identity
// is the identity map). Throws std::invalid_argument if the support exceeds n.
Eigen::VectorXd truncated_coordinates(const LieVector& x, Index n);

// Sectional curvature of span{X, Y} at the identity of the n-truncation,
// computed from the metric tensor alone. Throws DegeneratePlane.
double fd_levi_civita_oracle(Index truncation, const LieVector& x, const LieVector& y, double step = 1e-4,
                             const WeightRule& w = WeightRule::inverse_index());

}  // namespace heis
