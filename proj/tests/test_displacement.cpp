#include <doctest.h>

#include <random>

#include "corrlab/displacement.hpp"
#include "corrlab/errors.hpp"
#include "corrlab/landau.hpp"
#include "kinematics_oracle.hpp"

using namespace corrlab;

namespace {

FourVector block(const Eigen::VectorXd& v, int i) { return {v(4 * i), v(4 * i + 1), v(4 * i + 2), v(4 * i + 3)}; }

}  // namespace

TEST_SUITE("displacement") {
  TEST_CASE("U places each external line at its vertex") {
    std::mt19937_64 rng(2);
    Diagram d = fixtures::pole();
    auto k = oracle::pole_configuration(6.25, rng);
    auto r = solve_landau(d, k);
    REQUIRE(r.realization);
    auto U = compute_U(*r.realization, d, k);
    REQUIRE(U.components.size() == 5);
    for (size_t i = 0; i < 5; ++i)
      CHECK(euclidean_norm(U.components[i] - r.realization->vertex_positions.at(d.external_lines[i].vertex)) < 1e-12);
    auto back = DisplacementVector::from_flat(U.flat());
    CHECK(back.components == U.components);
  }

  TEST_CASE("gauge reduction removes translations and slides") {
    std::mt19937_64 rng(4);
    auto k = oracle::pole_configuration(6.25, rng);
    auto basis = gauge_basis(k);
    CHECK(basis.generators.size() == 4 + k.momenta.size());
    for (const auto& g : basis.generators) {
      auto red = reduce_mod_gauge(g, basis);
      CHECK(red.projected.norm() < 1e-10);
    }
    DisplacementVector shift;
    for (size_t i = 0; i < k.momenta.size(); ++i) shift.components.push_back({1.0, 2.0, -1.0, 0.5});
    CHECK(reduce_mod_gauge(shift, basis).projected.norm() < 1e-10);

    std::normal_distribution<double> n;
    Eigen::VectorXd x(20);
    for (auto& v : x) v = n(rng);
    auto red = reduce_mod_gauge(DisplacementVector::from_flat(x), basis);
    CHECK(red.gauge_rank == 9);
    CHECK(red.coords.size() == 3 * 5 - 4);
    CHECK(red.basis_fingerprint == reduce_mod_gauge(DisplacementVector::from_flat(x), basis).basis_fingerprint);
  }

  TEST_CASE("tangents keep the pole invariant fixed") {
    // d(k_a + k_b)^2 = 2 (k_a + k_b).(dk_a + dk_b) vanishes along the surface.
    Diagram d = fixtures::pole();
    auto s = sample_surface(d, 2, 13);
    REQUIRE(s.states.size() == 2);
    for (const auto& st : s.states) {
      auto tans = surface_tangents(d, st, 10, 5);
      CHECK(tans.size() == 10);
      FourVector P = st.k.momenta[0] + st.k.momenta[1];
      for (const auto& t : tans) {
        double ds = 2.0 * lorentz_dot(P, block(t, 0) + block(t, 1));
        CHECK(std::abs(ds) < 1e-6 * t.norm() * euclidean_norm(P));
      }
    }
  }

  TEST_CASE("reduced U is normal to the surface") {
    Diagram d = fixtures::pole();
    auto s = sample_surface(d, 2, 17);
    for (const auto& st : s.states) {
      auto r = solve_landau(d, st.k);
      REQUIRE(r.realization);
      auto red = reduce_mod_gauge(compute_U(*r.realization, d, st.k), gauge_basis(st.k));
      auto tans = surface_tangents(d, st, 20, 3);
      CHECK(normality_check(red.projected, tans) < 1e-5);
    }
    CHECK_THROWS_AS(normality_check(Eigen::VectorXd::Ones(4), {}), ComputeError);
  }

  TEST_CASE("cone ray is reproducible and its opposite is not realizable") {
    std::mt19937_64 rng(6);
    auto k = oracle::pole_configuration(6.25, rng);
    auto a = cone_ray({fixtures::pole()}, k);
    SolverOptions o;
    o.seed = 77;
    auto b = cone_ray({fixtures::pole()}, k, o);
    double dot = 0.0;
    for (size_t i = 0; i < a.direction.size(); ++i) dot += a.direction[i] * b.direction[i];
    CHECK(dot > 1.0 - 1e-8);
    CHECK(a.opposite_infeasible);
    CHECK(a.basis_fingerprint == b.basis_fingerprint);

    auto off = oracle::pole_configuration(2.8 * 2.8, rng);
    CHECK_THROWS_AS(cone_ray({fixtures::pole()}, off), NoRayError);
  }
}
