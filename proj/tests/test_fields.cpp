#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "graddiv/fields.hpp"

using namespace graddiv;

TEST_CASE("manufactured solution satisfies the quad-div equation exactly")
{
  auto mp = manufactured_problem();

  // structural identities
  CHECK(div(mp.u) == mp.div_u);
  CHECK(grad(mp.div_u) == mp.grad_div_u);

  // (grad div)^2 u + u = f, all exact
  VectorPolynomial lhs = grad(div(grad(div(mp.u)))) + mp.u;
  CHECK(lhs == mp.f);

  // u is a gradient, so curl u = 0
  CHECK(curl(mp.u).is_zero());
}

TEST_CASE("manufactured data vanishes on the boundary of the unit cube")
{
  auto mp = manufactured_problem();
  for (int var = 0; var < 3; ++var) {
    for (int side = 0; side <= 1; ++side) {
      const Rational v(side);
      for (int i = 0; i < 3; ++i) CHECK(mp.u.c[i].substitute(var, v).is_zero());
      CHECK(mp.div_u.substitute(var, v).is_zero());
    }
  }
}

TEST_CASE("manufactured data degrees and nondegeneracy")
{
  auto mp = manufactured_problem();
  CHECK(mp.phi.degree() == 18);
  CHECK(mp.u.degree() == 17);
  CHECK(mp.f.degree() == 17);
  CHECK(!mp.f.is_zero());

  // interior values are nonzero: phi peaks at the center
  const Vec3Q c{Rational(1, 2), Rational(1, 2), Rational(1, 2)};
  const Rational phi_c = mp.phi.eval(c);
  CHECK(phi_c == Rational(-1, 262144)); // (-1/64)^3
  CHECK(mp.div_u.eval(Vec3Q{Rational(1, 4), Rational(1, 2), Rational(1, 2)}) != 0);
}
