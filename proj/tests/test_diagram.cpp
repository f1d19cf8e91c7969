#include <doctest.h>

#include <random>

#include "corrlab/diagram.hpp"
#include "corrlab/errors.hpp"
#include "kinematics_oracle.hpp"

using namespace corrlab;

TEST_SUITE("diagram") {
  TEST_CASE("fixtures are valid with the expected loop counts") {
    CHECK(validate_diagram(fixtures::single_vertex_2to2()).valid());
    CHECK(validate_diagram(fixtures::pole()).valid());
    CHECK(validate_diagram(fixtures::triangle()).valid());
    CHECK(validate_diagram(fixtures::threshold()).valid());
    CHECK(loop_count(fixtures::single_vertex_2to2()) == 0);
    CHECK(loop_count(fixtures::pole()) == 0);
    CHECK(loop_count(fixtures::triangle()) == 1);
    CHECK(loop_count(fixtures::threshold()) == 1);
    auto r = validate_diagram(fixtures::triangle());
    CHECK(r.num_lines == 3);
    CHECK(r.num_vertices == 3);
    CHECK(r.num_external == 6);
  }

  TEST_CASE("structural violations are reported") {
    Diagram d = fixtures::pole();
    d.vertices.push_back(d.vertices.front());
    CHECK_FALSE(validate_diagram(d).valid());

    d = fixtures::pole();
    d.internal_lines.push_back({0, 0, {1.0, ""}});
    auto r = validate_diagram(d);
    REQUIRE_FALSE(r.valid());
    CHECK(r.violations.front().find("self-loop") != std::string::npos);

    d = fixtures::pole();
    d.internal_lines[0].particle.mass = 0.0;
    CHECK_FALSE(validate_diagram(d).valid());

    d = fixtures::pole();
    d.internal_lines.clear();
    r = validate_diagram(d);
    CHECK_FALSE(r.valid());
    bool disconnected = false;
    for (const auto& v : r.violations) disconnected = disconnected || v == "disconnected";
    CHECK(disconnected);
    CHECK_THROWS_AS(loop_count(d), ComputeError);

    d = Diagram{};
    d.vertices = {0};
    d.external_lines = {{0, {1.0, ""}, Orientation::initial}};
    CHECK_FALSE(validate_diagram(d).valid());
    d.allow_low_degree = true;
    CHECK(validate_diagram(d).valid());
  }

  TEST_CASE("json round trip and malformed documents") {
    for (const auto& d : {fixtures::pole(), fixtures::triangle(), fixtures::threshold()}) {
      CHECK(load_diagram(save_diagram(d)) == d);
    }
    CHECK_THROWS_AS(load_diagram("{\"vertices\":[0],\"colour\":1}"), ParseError);
    CHECK_THROWS_AS(load_diagram("{\"vertices\":[0,1],\"internal\":[{\"from\":0,\"to\":1}]}"), ParseError);
    CHECK_THROWS_AS(load_diagram("{\"vertices\":[0,1],\"internal\":[{\"from\":0,\"to\":1,\"mass\":-1}]}"),
                    ParseError);
    CHECK_THROWS_AS(load_diagram("not json"), ParseError);
    CHECK_THROWS_AS(
        load_diagram("{\"vertices\":[0],\"external\":[{\"vertex\":0,\"mass\":1,\"orientation\":\"sideways\"}]}"),
        ParseError);

    KConfiguration k;
    k.momenta = {{1, 0.5, 0, 0}, {2, 0, -0.25, 1}};
    CHECK(load_k(save_k(k)) == k);
    CHECK_THROWS_AS(load_k("{\"momenta\":[[1,2,3]]}"), ParseError);
  }

  TEST_CASE("k configurations from two-body kinematics satisfy shell and conservation") {
    std::mt19937_64 rng(11);
    Diagram d = fixtures::pole();
    for (int i = 0; i < 20; ++i) {
      auto k = oracle::pole_configuration(6.25, rng);
      CHECK(validate_k(d, k).empty());
    }
    auto k = oracle::pole_configuration(6.25, rng);
    k.momenta[0].t += 1e-3;
    CHECK_FALSE(validate_k(d, k).empty());
    k.momenta.pop_back();
    CHECK_FALSE(validate_k(d, k).empty());
  }

  TEST_CASE("conservation residual vanishes for the pole assignment") {
    std::mt19937_64 rng(3);
    Diagram d = fixtures::pole();
    auto k = oracle::pole_configuration(6.25, rng);
    LineMomenta q = {k.momenta[0] + k.momenta[1]};
    for (const auto& [v, r] : conservation_residual(d, k, q)) CHECK(euclidean_norm(r) < 1e-12);
    CHECK_THROWS_AS(conservation_residual(d, k, LineMomenta{}), ComputeError);
  }

  TEST_CASE("cycle basis has one cycle per loop") {
    auto b = cycle_basis(fixtures::triangle());
    CHECK(b.cycles.size() == 1);
    CHECK(b.cycles[0].size() == 3);
    auto t = cycle_basis(fixtures::threshold());
    CHECK(t.cycles.size() == 1);
    CHECK(cycle_basis(fixtures::pole()).cycles.empty());
  }
}
