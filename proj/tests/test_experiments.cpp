#include "doctest.h"

#include <cmath>
#include <sstream>

#include "heis/errors.hpp"
#include "heis/experiments.hpp"

using namespace heis;

namespace {
RunOptions quick() {
  RunOptions o;
  o.nodes = 16;
  return o;
}
}  // namespace

TEST_CASE("vanish table") {
  const Report r = run_vanish(1.0, {1, 4, 16}, MetricKind::subriemannian, quick());
  REQUIRE(r.table.rows.size() == 3);
  for (std::size_t i = 0; i < 3; ++i) {
    const double n = r.table.number(i, "n");
    // 2 sqrt(3) int_0^1 sqrt(1 + t^2) dt / sqrt(n)
    const double closed = std::sqrt(3.0) * (std::sqrt(2.0) + std::asinh(1.0)) / std::sqrt(n);
    CHECK(std::abs(r.table.number(i, "analytic_bound") - closed) < 1e-12);
    CHECK(r.table.number(i, "upper_bound") <= r.table.number(i, "analytic_bound") + 1e-6);
    CHECK(r.table.number(i, "lower_bound") == 0.0);
  }
  CHECK(r.config.at("s") == 1.0);
  CHECK_THROWS_AS(run_vanish(0.0, {1}, MetricKind::subriemannian), ValidationError);
  CHECK_THROWS_AS(run_vanish(1.0, {0}, MetricKind::subriemannian), ValidationError);
}

TEST_CASE("positivity table") {
  const Report r = run_positivity(default_positivity_pairs(), MetricKind::subriemannian, 1, quick());
  REQUIRE(r.table.rows.size() == 2);
  CHECK(r.table.number(0, "lower_bound") == 1.0);
  CHECK(r.table.number(0, "upper_bound") <= 1.0 + 1e-3);
  CHECK(std::abs(r.table.number(1, "lower_bound") - 1.0 / std::sqrt(3.0)) < 1e-15);
  CHECK(r.table.number(1, "modes") == 3.0);
  for (std::size_t i = 0; i < 2; ++i) CHECK(std::get<bool>(r.table.at(i, "sandwich")));
  CHECK_THROWS_AS(run_positivity({{GroupPoint::identity(), {{}, {}, 3.0}}}, MetricKind::riemannian, 1),
                  ValidationError);
}

TEST_CASE("curvature sweep") {
  const Report r = run_curvature_sweep(10);
  REQUIRE(r.table.rows.size() == 10);
  CHECK(r.table.number(0, "K_a1_a2") == doctest::Approx(-3.0));
  CHECK(r.table.number(0, "K_a1_e3") == doctest::Approx(1.0));
  CHECK(r.table.number(9, "K_a1_a2") == doctest::Approx(-300.0));
  CHECK(r.table.number(9, "K_a2_e3") == doctest::Approx(100.0));
  for (std::size_t i = 0; i < 3; ++i) CHECK(r.table.number(i, "oracle_rel_error") < 1e-3);
  CHECK(std::holds_alternative<std::monostate>(r.table.at(3, "oracle_a1_a2")));
}

TEST_CASE("discontinuity table") {
  const Report r = run_discontinuity({1, 2, 10, 100}, 10000, 20);
  REQUIRE(r.table.rows.size() == 5);
  CHECK(r.table.number(0, "K_Wk_e3") == doctest::Approx(1.0));
  CHECK(r.table.number(1, "K_Wk_e3") == doctest::Approx(4.0 / 3.0));
  CHECK(r.table.number(3, "angle") < r.table.number(2, "angle"));
  CHECK(std::get<std::string>(r.table.at(4, "verdict")) == "divergent");
  CHECK_THROWS_AS(run_discontinuity({2, 1}, 100), ValidationError);
  CHECK_THROWS_AS(run_discontinuity({1, 200}, 100), ValidationError);
}

TEST_CASE("length report") {
  QuadratureSpec q;
  const Report r = run_length("glued", 4, 1.0, MetricKind::subriemannian, q, 11);
  CHECK(std::abs(r.extra.at("length").get<double>() - r.extra.at("closed_form").get<double>()) < 1e-10);
  CHECK(r.table.rows.size() == 11);
  CHECK_THROWS_AS(run_length("beta", 4, 1.0, MetricKind::subriemannian, q), ValidationError);
}

TEST_CASE("distance report and CSV output") {
  const Report r = run_distance(GroupPoint::identity(), {SeqVec::basis(1), {}, 0.0}, MetricKind::riemannian, 2,
                                quick());
  CHECK(r.extra.at("upper_bound").get<double>() <= 1.0 + 1e-3);
  CHECK(r.extra.at("lower_bound").get<double>() == 1.0);
  CHECK(r.table.rows.size() == 17);
  std::ostringstream csv;
  r.write_csv(csv);
  CHECK(csv.str().rfind("# command=distance config=", 0) == 0);
  CHECK(csv.str().find("t,h1,h2,tau\n0,,,0\n") != std::string::npos);
  const Json j = r.to_json();
  CHECK(j.at("config").at("metric") == "riem");
  CHECK(j.at("rows").size() == 17);
}

TEST_CASE("runs are deterministic") {
  const Report a = run_vanish(1.0, {4}, MetricKind::subriemannian, quick());
  const Report b = run_vanish(1.0, {4}, MetricKind::subriemannian, quick());
  CHECK(a.to_json().dump() == b.to_json().dump());
}

TEST_CASE("curvature commands") {
  CHECK(run_curvature_plane("a1j,a2j", 5).extra.at("breakdown").at("K") == doctest::Approx(-75.0));
  CHECK(run_curvature_plane("a2j,e3", 3).table.number(0, "K") == doctest::Approx(9.0));
  CHECK_THROWS_AS(run_curvature_plane("a1j,a1j", 3), ValidationError);
  CHECK(run_curvature_wk(2).table.number(0, "K") == doctest::Approx(4.0 / 3.0));
  CHECK(run_curvature_probe("W", 20).extra.at("verdict") == "divergent");
  CHECK(run_curvature_probe("power:2", 20).extra.at("verdict") == "convergent");
  const Report o = run_curvature_oracle(3, 9, 3);
  for (std::size_t i = 0; i < 3; ++i) CHECK(o.table.number(i, "rel_error") < 1e-3);
}
