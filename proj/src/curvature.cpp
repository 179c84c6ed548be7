#include "heis/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "compensated_sum.hpp"
#include "heis/errors.hpp"
#include "heis/metric.hpp"

namespace heis {

namespace {

double inverse_power_sum(Index k, double p) {
  // smallest terms first
  CompensatedSum s;
  for (Index j = k; j >= 1; --j) s.add(std::pow(static_cast<double>(j), -p));
  return s.value();
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

}  // namespace

// --- CoefficientRule -------------------------------------------------------

CoefficientRule::CoefficientRule(Fn rule, double vertical, std::string description)
    : rule_(std::move(rule)), vertical_(vertical), description_(std::move(description)) {
  if (!rule_) throw std::invalid_argument("coefficient rule must be callable");
}

CoefficientRule CoefficientRule::power_law(int component, double scale, double exponent, double vertical) {
  if (component != 1 && component != 2) throw std::invalid_argument("component must be 1 or 2");
  Fn fn = [component, scale, exponent](Index j) {
    double c = scale * std::pow(static_cast<double>(j), -exponent);
    return component == 1 ? std::pair{c, 0.0} : std::pair{0.0, c};
  };
  CoefficientRule r(std::move(fn), vertical,
                    "sum_j " + format_double(scale) + " e^" + std::to_string(component) + "_j / j^" +
                        format_double(exponent));
  r.power_ = PowerLaw{component, scale, exponent};
  return r;
}

CoefficientRule CoefficientRule::finite(const LieVector& v) {
  CoefficientRule r([x1 = v.x1, x2 = v.x2](Index j) { return std::pair{x1[j], x2[j]}; }, v.x3,
                    "finitely supported vector");
  r.last_index_ = v.max_index();
  return r;
}

CoefficientRule CoefficientRule::truncated_at(Index m) const {
  CoefficientRule r = *this;
  Index last = last_index_ ? std::min(*last_index_, m) : m;
  r.last_index_ = last;
  r.power_.reset();
  r.description_ = description_ + " (j <= " + std::to_string(m) + ")";
  return r;
}

std::pair<double, double> CoefficientRule::operator()(Index j) const {
  if (last_index_ && j > *last_index_) return {0.0, 0.0};
  return rule_(j);
}

LieVector CoefficientRule::truncation(Index m) const {
  const Index last = last_index_ ? std::min(*last_index_, m) : m;
  std::vector<SeqVec::Entry> c1;
  std::vector<SeqVec::Entry> c2;
  for (Index j = 1; j <= last; ++j) {
    auto [a, b] = rule_(j);
    if (a != 0.0) c1.emplace_back(j, a);
    if (b != 0.0) c2.emplace_back(j, b);
  }
  return {SeqVec::from_entries(std::move(c1)), SeqVec::from_entries(std::move(c2)), vertical_};
}

// --- adjoint ---------------------------------------------------------------

double sigma_inner(const LieVector& x, const LieVector& y, const WeightRule& w) {
  return sigma0_inner(w, x, y);
}

double sigma_norm(const LieVector& x, const WeightRule& w) { return sigma0_norm(w, x); }

LieVector adjoint_value(const LieVector& x, const LieVector& y, const WeightRule& w) {
  if (x.x3 == 0.0) return {};
  std::vector<SeqVec::Entry> out1;
  std::vector<SeqVec::Entry> out2;
  out1.reserve(y.x2.nnz());
  out2.reserve(y.x1.nnz());
  for (const auto& [j, c] : y.x2.entries()) out1.emplace_back(j, -2.0 * x.x3 * c / w(j));
  for (const auto& [j, c] : y.x1.entries()) out2.emplace_back(j, 2.0 * x.x3 * c / w(j));
  return {SeqVec::from_entries(std::move(out1)), SeqVec::from_entries(std::move(out2)), 0.0};
}

AdjointResult adjoint_B(const LieVector& x, const LieVector& y, const WeightRule& w) {
  AdjointResult r;
  r.outcome = adjoint_value(x, y, w);
  r.norm_sq = sigma_inner(r.value(), r.value(), w);
  return r;
}

// --- Arnold formula --------------------------------------------------------

CurvatureBreakdown arnold_curvature(const LieVector& x, const LieVector& y, const WeightRule& w) {
  const double nx = sigma_norm(x, w);
  const double ny_in = sigma_norm(y, w);
  if (!(nx > 0.0) || !(ny_in > 0.0)) throw DegeneratePlane("plane spanned with a zero vector");
  CurvatureBreakdown b;
  b.x = (1.0 / nx) * x;
  LieVector yp = y - sigma_inner(y, b.x, w) * b.x;
  const double ny = sigma_norm(yp, w);
  if (!(ny > 1e-12 * ny_in)) throw DegeneratePlane("vectors are sigma-linearly dependent");
  b.y = (1.0 / ny) * yp;

  const LieVector bxy = adjoint_value(b.x, b.y, w);
  const LieVector byx = adjoint_value(b.y, b.x, w);
  b.delta = 0.5 * (bxy + byx);
  b.arnold_beta = 0.5 * (bxy - byx);
  b.arnold_alpha = 0.5 * bracket(b.x, b.y);
  b.b_x = 0.5 * adjoint_value(b.x, b.x, w);
  b.b_y = 0.5 * adjoint_value(b.y, b.y, w);
  b.k = curvature_from_terms(b, w);
  return b;
}

double curvature_from_terms(const CurvatureBreakdown& b, const WeightRule& w) {
  return sigma_inner(b.delta, b.delta, w) + 2.0 * sigma_inner(b.arnold_alpha, b.arnold_beta, w) -
         3.0 * sigma_inner(b.arnold_alpha, b.arnold_alpha, w) - 4.0 * sigma_inner(b.b_x, b.b_y, w);
}

LieVector w_k(Index k) {
  if (k < 1) throw std::invalid_argument("W_k needs k >= 1");
  const double scale = 1.0 / std::sqrt(inverse_power_sum(k, 3.0));
  std::vector<SeqVec::Entry> entries;
  entries.reserve(static_cast<std::size_t>(k));
  for (Index j = 1; j <= k; ++j) entries.emplace_back(j, scale / static_cast<double>(j));
  return {SeqVec::from_entries(std::move(entries)), {}, 0.0};
}

double curvature_Wk_e3(Index k) {
  const LieVector wk = w_k(k);
  const double norm = sigma_norm(wk);
  if (std::abs(norm - 1.0) > 1e-12)
    throw std::logic_error("W_k is not sigma-normalized: norm " + std::to_string(norm));
  return arnold_curvature(wk, LieVector::e3()).k;
}

double curvature_Wk_e3_closed_form(Index k) {
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  return inverse_power_sum(k, 1.0) / inverse_power_sum(k, 3.0);
}

// --- divergence probe ------------------------------------------------------

AdjointResult divergence_probe(const CoefficientRule& x, const CoefficientRule& y, int depth,
                               const ProbeOptions& options) {
  if (depth < 2) throw std::invalid_argument("probe depth must be >= 2");
  if (depth > 40) throw std::invalid_argument("probe depth must be <= 40");
  const WeightRule& w = options.weight;
  const double x3 = x.vertical();
  const Index last = Index{1} << depth;

  // squared sigma-norm of the j-th series term: a_j (2 x3 Y_j / a_j)^2
  PartialNorms partial;
  {
    CompensatedSum s;
    const Index stop = y.last_index() ? std::min(last, *y.last_index()) : last;
    Index j = 1;
    for (Index m = 2; m <= last; m *= 2) {
      for (; j <= std::min(m, stop); ++j) {
        auto [c1, c2] = y(j);
        if (c1 != 0.0 || c2 != 0.0) s.add(4.0 * x3 * x3 * (c1 * c1 + c2 * c2) / w(j));
      }
      partial.emplace_back(m, s.value());
    }
  }

  auto converged = [&](Index upto, double norm_sq, double cauchy, bool symbolic) {
    AdjointResult r;
    r.outcome = adjoint_value(LieVector::e3(x3), y.truncation(upto), w);
    r.partial_norms_sq = partial;
    r.norm_sq = norm_sq;
    r.cauchy_estimate = cauchy;
    r.symbolic = symbolic;
    return r;
  };
  auto divergent = [&](std::string why, bool symbolic) {
    AdjointResult r;
    r.outcome = DivergenceEvidence{partial, std::move(why)};
    r.partial_norms_sq = partial;
    r.norm_sq = std::numeric_limits<double>::infinity();
    r.symbolic = symbolic;
    return r;
  };

  if (x3 == 0.0) return converged(0, 0.0, 0.0, true);
  if (y.last_index() && *y.last_index() <= last) {
    AdjointResult r = converged(*y.last_index(), 0.0, 0.0, false);
    r.norm_sq = sigma_inner(r.value(), r.value(), w);
    return r;
  }

  if (options.symbolic && y.power() && w.power_exponent()) {
    // terms decay like j^{-s}, s = 2p - q, for weights a_j = j^{-q}
    const auto& law = *y.power();
    const double s = 2.0 * law.exponent - *w.power_exponent();
    if (s <= 1.0)
      return divergent("power law: squared-norm increments ~ j^-" + format_double(s) + ", not summable", true);
    const double limit = 4.0 * x3 * x3 * law.scale * law.scale * std::riemann_zeta(s);
    return converged(last, limit, std::abs(limit - partial.back().second), true);
  }

  const double final_sum = partial.back().second;
  if (final_sum > options.blowup) return divergent("partial norms exceed " + format_double(options.blowup), false);

  std::vector<double> increments;
  for (std::size_t i = 1; i < partial.size(); ++i) increments.push_back(partial[i].second - partial[i - 1].second);
  if (increments.size() < 5) throw InconclusiveProbe("probe depth too small to judge dyadic increments");

  std::vector<double> ratios;
  for (std::size_t i = increments.size() - 4; i < increments.size(); ++i) {
    const double prev = increments[i - 1];
    ratios.push_back(prev > 0.0 ? increments[i] / prev : (increments[i] > 0.0 ? 1.0 : 0.0));
  }
  if (std::all_of(ratios.begin(), ratios.end(), [](double r) { return r >= 0.5; }))
    return divergent("dyadic increments fail to decay over the last 4 doublings", false);
  if (std::all_of(ratios.begin(), ratios.end(), [](double r) { return r < 0.5; })) {
    const double r = *std::max_element(ratios.begin(), ratios.end());
    const double tail = increments.back() * r / (1.0 - r);
    if (tail <= options.cauchy_tolerance * std::max(1.0, final_sum))
      return converged(last, final_sum, tail, false);
  }
  throw InconclusiveProbe("neither divergence nor convergence detected at depth " + std::to_string(depth));
}

// --- principal angles ------------------------------------------------------

double largest_principal_angle(const Eigen::Matrix2d& g11, const Eigen::Matrix2d& g12,
                               const Eigen::Matrix2d& g22) {
  Eigen::LLT<Eigen::Matrix2d> l1(g11);
  Eigen::LLT<Eigen::Matrix2d> l2(g22);
  auto degenerate = [](const Eigen::Matrix2d& g) { return g.determinant() <= 1e-24 * g.trace() * g.trace(); };
  if (l1.info() != Eigen::Success || l2.info() != Eigen::Success || degenerate(g11) || degenerate(g22))
    throw DegeneratePlane("spanning pair is linearly dependent");
  // cosines of the principal angles are the singular values of L1^{-1} G12 L2^{-T}
  const Eigen::Matrix2d a = l1.matrixL().solve(g12);
  const Eigen::Matrix2d c = l2.matrixL().solve(a.transpose()).transpose();
  Eigen::JacobiSVD<Eigen::Matrix2d> svd(c);
  const double smallest = std::min(1.0, svd.singularValues().minCoeff());
  return std::asin(std::sqrt(std::max(0.0, 1.0 - smallest * smallest)));
}

double largest_principal_angle(const LieVector& x1, const LieVector& y1, const LieVector& x2,
                               const LieVector& y2, const WeightRule& w) {
  auto gram = [&w](const LieVector& a, const LieVector& b, const LieVector& c, const LieVector& d) {
    Eigen::Matrix2d g;
    g << sigma_inner(a, c, w), sigma_inner(a, d, w), sigma_inner(b, c, w), sigma_inner(b, d, w);
    return g;
  };
  return largest_principal_angle(gram(x1, y1, x1, y1), gram(x1, y1, x2, y2), gram(x2, y2, x2, y2));
}

Eigen::MatrixXd sigma_gram(const std::vector<CoefficientRule>& vectors, Index upto, const WeightRule& w) {
  const std::size_t n = vectors.size();
  Index stop = 0;
  for (const auto& v : vectors) stop = std::max(stop, v.last_index() ? std::min(*v.last_index(), upto) : upto);

  std::vector<CompensatedSum> sums(n * n);
  std::vector<std::pair<double, double>> coeff(n);
  for (Index j = 1; j <= stop; ++j) {
    const double a = w(j);
    for (std::size_t i = 0; i < n; ++i) coeff[i] = vectors[i](j);
    for (std::size_t p = 0; p < n; ++p) {
      if (coeff[p].first == 0.0 && coeff[p].second == 0.0) continue;
      for (std::size_t q = p; q < n; ++q)
        sums[p * n + q].add(a * (coeff[p].first * coeff[q].first + coeff[p].second * coeff[q].second));
    }
  }
  Eigen::MatrixXd g(n, n);
  for (std::size_t p = 0; p < n; ++p)
    for (std::size_t q = p; q < n; ++q) {
      g(p, q) = sums[p * n + q].value() + vectors[p].vertical() * vectors[q].vertical();
      g(q, p) = g(p, q);
    }
  return g;
}

double plane_convergence(Index k, Index tail) {
  if (k < 1) throw std::invalid_argument("plane_convergence: k must be >= 1");
  if (tail <= k) throw std::invalid_argument("plane_convergence: tail must exceed k");
  // spans do not depend on the normalization of W_k or W_inf
  const CoefficientRule harmonic = CoefficientRule::power_law(1, 1.0, 1.0);
  const Eigen::MatrixXd g = sigma_gram(
      {harmonic.truncated_at(k), CoefficientRule::vertical_unit(), harmonic.truncated_at(tail),
       CoefficientRule::vertical_unit()},
      tail);
  return largest_principal_angle(g.block<2, 2>(0, 0), g.block<2, 2>(0, 2), g.block<2, 2>(2, 2));
}

}  // namespace heis
