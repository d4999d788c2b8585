#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "bdg/law.hpp"

#include <cmath>

using namespace bdg;

namespace
{
State s1(Real a)
{
   State u(1);
   u[0] = a;
   return u;
}
} // namespace

TEST_CASE("advection")
{
   const ConservationLaw law = make_advection(Vec2(2.0, -0.5), 2);
   const Flux f = law.flux(s1(3.0));
   CHECK(f(0, 0) == doctest::Approx(6.0));
   CHECK(f(0, 1) == doctest::Approx(-1.5));
   CHECK(law.wave_speed(s1(1), s1(2), Vec2(0, 1)) == doctest::Approx(0.5));
   CHECK(law.wave_speed(s1(1), s1(2), Vec2(1, 0)) == doctest::Approx(2.0));
   CHECK(law.in_invariant_set(s1(-7.0)));
}

TEST_CASE("burgers")
{
   const ConservationLaw b1 = make_burgers(1);
   CHECK(b1.flux(s1(-2.0))(0, 0) == doctest::Approx(2.0));
   CHECK(b1.flux(s1(-2.0))(0, 1) == doctest::Approx(0.0));
   CHECK(b1.wave_speed(s1(-2.0), s1(0.5), Vec2(-1, 0)) == doctest::Approx(2.0));

   const ConservationLaw b2 = make_burgers(2);
   CHECK(b2.flux(s1(3.0))(0, 1) == doctest::Approx(4.5));
   // speed vanishes when the normal is orthogonal to the flux direction
   const Real s = 1.0 / std::sqrt(2.0);
   CHECK(b2.wave_speed(s1(5), s1(-1), Vec2(s, -s)) == doctest::Approx(0.0));
   CHECK(b2.wave_speed(s1(5), s1(-1), Vec2(s, s)) ==
         doctest::Approx(5.0 * std::sqrt(2.0)));
}

TEST_CASE("euler flux, pressure, wave speed")
{
   const ConservationLaw law = make_euler(2);
   // rho = 2, v = (3, -1), p = 5
   const State u = euler_state(2.0, Vec2(3.0, -1.0), 5.0);
   CHECK(u[0] == doctest::Approx(2.0));
   CHECK(u[1] == doctest::Approx(6.0));
   CHECK(u[2] == doctest::Approx(-2.0));
   CHECK(u[3] == doctest::Approx(5.0 / 0.4 + 10.0)); // = 22.5
   CHECK(law.pressure(u) == doctest::Approx(5.0));
   const Flux f = law.flux(u);
   CHECK(f(0, 0) == doctest::Approx(6.0));
   CHECK(f(1, 0) == doctest::Approx(6.0 * 3.0 + 5.0));
   CHECK(f(2, 0) == doctest::Approx(-2.0 * 3.0));
   CHECK(f(3, 0) == doctest::Approx((22.5 + 5.0) * 3.0));
   CHECK(f(0, 1) == doctest::Approx(-2.0));
   CHECK(f(1, 1) == doctest::Approx(6.0 * -1.0));
   CHECK(f(2, 1) == doctest::Approx(-2.0 * -1.0 + 5.0));
   CHECK(f(3, 1) == doctest::Approx((22.5 + 5.0) * -1.0));

   const Real c = std::sqrt(1.4 * 5.0 / 2.0);
   CHECK(law.sound_speed(u) == doctest::Approx(c));
   CHECK(law.wave_speed(u, u, Vec2(1, 0)) == doctest::Approx(3.0 + c));
   CHECK(law.wave_speed(u, u, Vec2(0, 1)) == doctest::Approx(1.0 + c));

   CHECK(law.in_invariant_set(u));
   State bad = u;
   bad[3] = 0.5 * (u[1] * u[1] + u[2] * u[2]) / u[0]; // zero internal energy
   CHECK(!law.in_invariant_set(bad));
   bad = u;
   bad[0] = -1.0;
   CHECK(!law.in_invariant_set(bad));
}

TEST_CASE("1D euler")
{
   const ConservationLaw law = make_euler(1);
   REQUIRE(law.ncomp == 3);
   const State u = euler_state(1.0, Vec2(2.0, 0.0), 1.0, 1);
   CHECK(u.size() == 3);
   CHECK(u[2] == doctest::Approx(1.0 / 0.4 + 2.0));
   const Flux f = law.flux(u);
   CHECK(f(0, 0) == doctest::Approx(2.0));
   CHECK(f(1, 0) == doctest::Approx(4.0 + 1.0));
   CHECK(f(2, 0) == doctest::Approx((u[2] + 1.0) * 2.0));
   CHECK(f.col(1).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
   // a wall on the right flips the momentum
   const State r = law.reflect(u, Vec2(1, 0));
   CHECK(r[0] == doctest::Approx(1.0));
   CHECK(r[1] == doctest::Approx(-2.0));
   CHECK(r[2] == doctest::Approx(u[2]));
}

TEST_CASE("shallow water")
{
   const ConservationLaw law = make_shallow_water(9.81);
   State u(3);
   u << 2.0, 2.0, -4.0; // H = 2, v = (1, -2)
   const Flux f = law.flux(u);
   CHECK(f(0, 0) == doctest::Approx(2.0));
   CHECK(f(1, 0) == doctest::Approx(2.0 * 1.0 + 0.5 * 9.81 * 4.0));
   CHECK(f(2, 0) == doctest::Approx(-4.0 * 1.0));
   CHECK(f(0, 1) == doctest::Approx(-4.0));
   CHECK(f(1, 1) == doctest::Approx(2.0 * -2.0));
   CHECK(f(2, 1) == doctest::Approx(-4.0 * -2.0 + 0.5 * 9.81 * 4.0));
   const Real c = std::sqrt(9.81 * 2.0);
   CHECK(law.wave_speed(u, u, Vec2(0, -1)) == doctest::Approx(2.0 + c));
   CHECK(law.in_invariant_set(u));
   u[0] = 0.0;
   CHECK(!law.in_invariant_set(u));
}

TEST_CASE("wall reflection preserves tangential momentum")
{
   const ConservationLaw law = make_euler(2);
   const Vec2 n = Vec2(3.0, 4.0).normalized();
   const State u = euler_state(1.2, Vec2(2.0, -1.0), 3.0);
   const State r = law.reflect(u, n);
   const Vec2 mu(u[1], u[2]), mr(r[1], r[2]);
   CHECK(mr.dot(n) == doctest::Approx(-mu.dot(n)));
   const Vec2 t(-n[1], n[0]);
   CHECK(mr.dot(t) == doctest::Approx(mu.dot(t)));
   CHECK(r[0] == doctest::Approx(u[0]));
   CHECK(r[3] == doctest::Approx(u[3]));
   CHECK(law.pressure(r) == doctest::Approx(law.pressure(u)));
}
