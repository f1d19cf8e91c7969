#include <doctest.h>

#include <complex>

#include "corrlab/diagram.hpp"
#include "corrlab/errors.hpp"
#include "corrlab/singularity.hpp"

using namespace corrlab;

TEST_SUITE("singularity") {
  TEST_CASE("named cases of the degree formula") {
    CHECK(degree(1, 2).d == Rational(-1));
    CHECK(degree(3, 3).d == Rational(0));
    CHECK(degree(2, 2).d == Rational(1, 2));
    CHECK(to_string(degree(2, 2).d) == "1/2");
    CHECK(to_string(degree(1, 2).d) == "-1");
  }

  TEST_CASE("counting by hand agrees with the closed form") {
    // +3/2 per line, -2 per vertex beyond the first, -1/2 overall.
    for (int nl = 1; nl <= 8; ++nl)
      for (int nv = 2; nv <= 6; ++nv) {
        Rational by_hand = Rational(3, 2) * nl - Rational(2) * (nv - 1) - Rational(1, 2);
        CHECK(degree(nl, nv).d == by_hand);
        CHECK(degree_from_counts(nl, nv) == by_hand);
      }
  }

  TEST_CASE("invalid counts are rejected") {
    CHECK_THROWS_AS(degree(-1, 2), ComputeError);
    CHECK_THROWS_AS(degree(1, 0), ComputeError);
  }

  TEST_CASE("local model kinds") {
    CHECK(local_model(degree(1, 2)).kind == ModelKind::pole);
    CHECK(local_model(degree(3, 3)).kind == ModelKind::log);
    CHECK(local_model(degree(2, 2)).kind == ModelKind::sqrt);
    CHECK(local_model(degree(4, 3)).kind == ModelKind::power);

    const std::complex<double> I(0.0, 1.0);
    double eps = 1e-3;
    for (double E : {-0.5, -0.01, 0.02, 0.7}) {
      CHECK(std::abs(local_model(degree(1, 2)).evaluate(E, eps) - I / (E + I * eps)) < 1e-12);
      CHECK(std::abs(local_model(degree(3, 3)).evaluate(E, eps) - std::log(E + I * eps)) < 1e-12);
      CHECK(std::abs(local_model(degree(2, 2)).evaluate(E, eps) - std::sqrt(E + I * eps)) < 1e-12);
    }
    CHECK(std::abs(local_model(degree(1, 2)).evaluate(0.0, eps) - 1.0 / eps) < 1e-9);
  }

  TEST_CASE("accounting over fixtures sums to the degree") {
    for (const auto& d : {fixtures::pole(), fixtures::triangle(), fixtures::threshold()}) {
      auto acc = degree_accounting(d);
      Rational sum = 0;
      for (const auto& it : acc.items) {
        CHECK(it.contribution == it.per_item * it.count);
        sum += it.contribution;
      }
      CHECK(sum == acc.total);
      CHECK(acc.total == degree(d.num_lines(), d.num_vertices()).d);
    }
    CHECK(degree_accounting(fixtures::pole()).total == Rational(-1));
    CHECK(degree_accounting(fixtures::threshold()).total == Rational(1, 2));
  }
}
