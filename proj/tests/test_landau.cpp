#include <doctest.h>

#include <cmath>
#include <random>

#include "corrlab/errors.hpp"
#include "corrlab/landau.hpp"
#include "corrlab/least_squares.hpp"
#include "kinematics_oracle.hpp"

using namespace corrlab;

TEST_SUITE("landau") {
  TEST_CASE("least squares finds the root of a small nonlinear system") {
    ResidualFn f = [](const Eigen::VectorXd& x) {
      Eigen::VectorXd r(2);
      r << x(0) * x(0) + x(1) * x(1) - 4.0, x(0) - x(1);
      return r;
    };
    Eigen::VectorXd x0(2);
    x0 << 1.0, 0.5;
    auto res = levenberg_marquardt(f, x0);
    CHECK(res.converged);
    CHECK(res.residual_norm < 1e-10);
    CHECK(std::abs(res.x(0) - std::sqrt(2.0)) < 1e-8);
  }

  TEST_CASE("pole configurations on the surface are feasible, off it infeasible") {
    std::mt19937_64 rng(5);
    Diagram d = fixtures::pole();
    for (int i = 0; i < 5; ++i) {
      auto on = solve_landau(d, oracle::pole_configuration(6.25, rng));
      CHECK(on.status == Feasibility::feasible);
      CHECK(on.residual < 1e-8);
      for (double delta : {0.1, -0.1}) {
        double m = 2.5 + delta;
        auto off = solve_landau(d, oracle::pole_configuration(m * m, rng));
        CHECK(off.status == Feasibility::infeasible);
      }
    }
  }

  TEST_CASE("realization lines are parallel to their momenta with positive alpha") {
    std::mt19937_64 rng(8);
    Diagram d = fixtures::pole();
    auto k = oracle::pole_configuration(6.25, rng);
    auto r = solve_landau(d, k);
    REQUIRE(r.realization);
    const auto& re = *r.realization;
    REQUIRE(re.alphas.size() == 1);
    CHECK(re.alphas[0] > 0.0);
    FourVector q = k.momenta[0] + k.momenta[1];
    CHECK(euclidean_norm(re.internal_momenta[0] - q) < 1e-7);
    const auto& line = d.internal_lines[0];
    FourVector dx = re.vertex_positions.at(line.to) - re.vertex_positions.at(line.from);
    CHECK(euclidean_norm(dx - re.alphas[0] * re.internal_momenta[0]) < 1e-7);
    CHECK(dx.t > 0.0);

    auto pos = realize_spacetime(d, re.internal_momenta, re.alphas);
    FourVector dx2 = pos.at(line.to) - pos.at(line.from);
    CHECK(euclidean_norm(dx2 - re.alphas[0] * re.internal_momenta[0]) < 1e-12);
    CHECK_THROWS_AS(realize_spacetime(d, re.internal_momenta, {-1.0}), ComputeError);
  }

  TEST_CASE("lines forced backward in time are infeasible") {
    std::mt19937_64 rng(9);
    SolverOptions o;
    o.time_reversed = true;
    auto r = solve_landau(fixtures::pole(), oracle::pole_configuration(6.25, rng), o);
    CHECK(r.status == Feasibility::infeasible);
  }

  TEST_CASE("surface sampling of loop diagrams") {
    for (const auto& d : {fixtures::pole(), fixtures::triangle(), fixtures::threshold()}) {
      auto s = sample_surface(d, 4, 21);
      CHECK(s.points.size() == 4);
      for (size_t i = 0; i < s.points.size(); ++i) {
        CHECK(validate_k(d, s.points[i], 1e-8, 1e-8).empty());
        for (int l = 0; l < d.num_lines(); ++l) {
          double m = d.internal_lines[l].particle.mass;
          CHECK(std::abs(lorentz_square(s.states[i].q[l]) - m * m) < 1e-8);
        }
        CHECK(solve_landau(d, s.points[i]).feasible());
      }
    }
  }

  TEST_CASE("sampling is deterministic under a fixed seed") {
    auto a = sample_surface(fixtures::triangle(), 3, 4);
    auto b = sample_surface(fixtures::triangle(), 3, 4);
    REQUIRE(a.points.size() == b.points.size());
    for (size_t i = 0; i < a.points.size(); ++i) CHECK(a.points[i] == b.points[i]);
    CHECK(sub_seed(1, 2) == sub_seed(1, 2));
    CHECK(sub_seed(1, 2) != sub_seed(1, 3));
  }

  TEST_CASE("classification against a catalog") {
    std::mt19937_64 rng(12);
    std::vector<Diagram> catalog = {fixtures::pole()};
    auto on = classify_point(catalog, oracle::pole_configuration(6.25, rng));
    CHECK(on.kind == PointKind::singular);
    CHECK(on.feasible == std::vector<int>{0});
    auto off = classify_point(catalog, oracle::pole_configuration(2.7 * 2.7, rng));
    CHECK(off.kind == PointKind::trivial);
    CHECK(to_string(PointKind::trivial) == "Trivial");
  }
}
