#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "fpo/model.hpp"

using namespace fpo;

TEST_CASE("accelerations at the hand-checked points") {
  const PhaseState s{2.0, 1.0, 0.0, 0.0};
  const MeanPair m{2.0, 1.0};

  const AccelPair a0 = vector_field(s, m, HomotopyParam(0.0));
  CHECK(a0.a1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(a0.a2 == doctest::Approx(-3.0).epsilon(1e-15));

  // Instantaneous and mean gaps coincide here, so r drops out.
  const AccelPair a1 = vector_field(s, m, HomotopyParam(1.0));
  CHECK(a1.a1 == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(a1.a2 == doctest::Approx(-3.0).epsilon(1e-15));

  const AccelPair mid = vector_field({3.0, 1.0, 0.0, 0.0}, {2.5, 0.8}, HomotopyParam(0.5));
  const double expect_a1 = -2.0 / 9.0 + 0.5 / 2.89 + 0.5 / 4.0;
  const double expect_a2 = -2.0 - 0.5 / 2.89 - 0.5 / 4.0;
  CHECK(mid.a1 == doctest::Approx(expect_a1).epsilon(1e-15));
  CHECK(mid.a2 == doctest::Approx(expect_a2).epsilon(1e-15));
  CHECK(mid.a1 == doctest::Approx(0.07578815840061515).epsilon(1e-13));
  CHECK(mid.a2 == doctest::Approx(-2.2980103806228374).epsilon(1e-13));
}

TEST_CASE("energy at the hand-checked points") {
  const PhaseState s{2.0, 1.0, 0.0, 0.0};
  const MeanPair m{2.0, 1.0};
  // -2/2 - 2/1 + (1-r)/1 - r·1/1 evaluated at the two homotopy ends.
  CHECK(energy(s, m, HomotopyParam(0.0)) == doctest::Approx(-2.0).epsilon(1e-15));
  CHECK(energy(s, m, HomotopyParam(1.0)) == doctest::Approx(-4.0).epsilon(1e-15));
}

TEST_CASE("energy directional derivative along the flow vanishes") {
  const MeanPair m{2.6, 0.9};
  const HomotopyParam r(0.37);
  const PhaseState s{2.9, 1.2, 0.15, -0.4};
  const AccelPair a = vector_field(s, m, r);
  const double h = 1e-5;
  const PhaseState plus{s.q1 + h * s.v1, s.q2 + h * s.v2, s.v1 + h * a.a1, s.v2 + h * a.a2};
  const PhaseState minus{s.q1 - h * s.v1, s.q2 - h * s.v2, s.v1 - h * a.a1, s.v2 - h * a.a2};
  const double deriv = (energy(plus, m, r) - energy(minus, m, r)) / (2.0 * h);
  CHECK(std::abs(deriv) < 1e-6);
}

TEST_CASE("jerk identity") {
  CHECK(jerk1({2.0, 1.0, 0.0, 0.0}, HomotopyParam(0.3)) == 0.0);

  const PhaseState s{2.4, 0.9, 0.31, -0.82};
  const double expect_r1 = 4.0 * s.v1 / (s.q1 * s.q1 * s.q1);
  CHECK(jerk1(s, HomotopyParam(1.0)) == doctest::Approx(expect_r1).epsilon(1e-15));

  CHECK(jerk1({2.0, 1.0, 0.1, -0.2}, HomotopyParam(0.0)) ==
        doctest::Approx(-0.55).epsilon(1e-14));
}

TEST_CASE("jerk matches the finite difference of a1 along the flow") {
  const MeanPair m{3.0, 1.0};
  const HomotopyParam r(0.25);
  PhaseState s{2.5, 1.1, 0.2, -0.5};
  const double h = 1e-5;
  auto advance = [&](const PhaseState& st, double dt) {
    const AccelPair a = vector_field(st, m, r);
    return PhaseState{st.q1 + dt * st.v1, st.q2 + dt * st.v2, st.v1 + dt * a.a1,
                      st.v2 + dt * a.a2};
  };
  const double a1_plus = vector_field(advance(s, h), m, r).a1;
  const double a1_minus = vector_field(advance(s, -h), m, r).a1;
  const double fd = (a1_plus - a1_minus) / (2.0 * h);
  CHECK(fd == doctest::Approx(jerk1(s, r)).epsilon(1e-6));
}

TEST_CASE("sign invariants over random admissible states") {
  std::mt19937 rng(20260808);
  std::uniform_real_distribution<double> pos(0.05, 5.0);
  std::uniform_real_distribution<double> rdist(0.0, 1.0);
  for (int i = 0; i < 2000; ++i) {
    const double q2 = pos(rng);
    const double q1 = q2 + pos(rng);
    const double m2 = pos(rng);
    const double m1 = m2 + pos(rng);
    const PhaseState s{q1, q2, 0.0, 0.0};
    const MeanPair m{m1, m2};
    const AccelPair a = vector_field(s, m, HomotopyParam(rdist(rng)));
    CHECK(a.a2 < 0.0);
    CHECK(a.a1 - a.a2 > 0.0);
  }
}

TEST_CASE("r drops out whenever the instantaneous and mean gaps coincide") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> pos(0.2, 4.0);
  for (int i = 0; i < 200; ++i) {
    const double q2 = pos(rng);
    const double gap = pos(rng);
    const double m2 = pos(rng);
    const PhaseState s{q2 + gap, q2, 0.0, 0.0};
    const MeanPair m{m2 + gap, m2};
    const AccelPair base = vector_field(s, m, HomotopyParam(0.0));
    for (double r : {0.25, 0.5, 1.0}) {
      const AccelPair a = vector_field(s, m, HomotopyParam(r));
      CHECK(a.a1 == doctest::Approx(base.a1).epsilon(1e-14));
      CHECK(a.a2 == doctest::Approx(base.a2).epsilon(1e-14));
    }
  }
}

TEST_CASE("domain errors") {
  const MeanPair m{2.0, 1.0};
  CHECK_THROWS_AS(vector_field({2.0, 0.0, 0, 0}, m, HomotopyParam(0.5)), DomainError);
  CHECK_THROWS_AS(vector_field({1.0, 1.0, 0, 0}, m, HomotopyParam(0.5)), DomainError);
  CHECK_THROWS_AS(vector_field({2.0, 1.0, 0, 0}, {1.0, 1.0}, HomotopyParam(0.5)), DomainError);
  CHECK_THROWS_AS(energy({2.0, -1.0, 0, 0}, m, HomotopyParam(0.5)), DomainError);
  CHECK_THROWS_AS(jerk1({1.0, 1.5, 0, 0}, HomotopyParam(0.5)), DomainError);
  CHECK_THROWS_AS(HomotopyParam(-0.1), DomainError);
  CHECK_THROWS_AS(HomotopyParam(1.1), DomainError);
}
