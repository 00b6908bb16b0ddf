#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polybound/dynsystem.hpp"
#include "polybound/poly.hpp"

#include <map>
#include <random>
#include <vector>

using namespace polybound;

namespace {

Polynomial x1() { return Polynomial::variable(var("x1")); }
Polynomial x2() { return Polynomial::variable(var("x2")); }
Polynomial x3() { return Polynomial::variable(var("x3")); }

// Deterministic random polynomial over the given variables.
Polynomial random_poly(std::mt19937_64& gen, const std::vector<VarId>& vars) {
    std::uniform_int_distribution<int> coef(-9, 9), expo(0, 3), nterms(1, 5);
    Polynomial p;
    int n = nterms(gen);
    for (int t = 0; t < n; ++t) {
        Monomial m;
        for (VarId v : vars) {
            int e = expo(gen);
            if (e > 0) m = m * Monomial::variable(v, e);
        }
        p = p + Polynomial::term(Rational(coef(gen)), m);
    }
    return p;
}

}  // namespace

TEST_CASE("arithmetic basics") {
    Polynomial one(1);
    CHECK((x1() + one) * (x1() - one) == x1() * x1() - one);
    Polynomial p = 3 * Rational(1) * x1() * x2() - Rational(16, 3) * x3() * x3();
    CHECK(p + Polynomial() == p);
    Polynomial sq = (x1() + x2()).pow(2);
    CHECK(sq == x1() * x1() + 2 * Rational(1) * x1() * x2() + x2() * x2());
}

TEST_CASE("partial derivatives") {
    Polynomial p = x1() * x1() * x2();
    CHECK(p.derivative(var("x1")) == 2 * Rational(1) * x1() * x2());
    CHECK(Polynomial(Rational(7, 2)).derivative(var("x1")).is_zero());
    Polynomial q = (x3() - Polynomial::variable(var("x30"))).pow(2);
    CHECK(q.derivative(var("x3")) ==
          2 * Rational(1) * x3() - 2 * Rational(1) * Polynomial::variable(var("x30")));
}

TEST_CASE("univariate view") {
    VarId x = var("x");
    Polynomial a0 = Polynomial::variable(var("a0"));
    Polynomial a1 = Polynomial::variable(var("a1"));
    Polynomial a2 = Polynomial::variable(var("a2"));
    Polynomial px = Polynomial::variable(x);
    Polynomial g = a2 * px * px + a1 * px + a0;
    auto cs = g.univariate_coeffs(x);
    REQUIRE(cs.size() == 3);
    CHECK(cs[0] == a0);
    CHECK(cs[1] == a1);
    CHECK(cs[2] == a2);

    auto cs2 = x2().univariate_coeffs(var("x1"));
    REQUIRE(cs2.size() == 1);
    CHECK(cs2[0] == x2());

    // Round-trip: re-expansion equals the original.
    Polynomial back;
    for (std::size_t i = 0; i < cs.size(); ++i) back = back + cs[i] * px.pow(static_cast<int>(i));
    CHECK(back == g);
}

TEST_CASE("exact evaluation") {
    std::map<VarId, Rational> at{{var("x1"), 3}, {var("x2"), 4}};
    CHECK((x1() * x1() + x2() * x2()).evaluate(at) == 25);
    CHECK_THROWS_AS(x3().evaluate(at), std::invalid_argument);
}

TEST_CASE("lie derivative of the fixed-sphere candidate") {
    DynSystem sys = lorenz_symbolic();
    Polynomial r = Polynomial::variable(var("r")), s = Polynomial::variable(var("s"));
    Polynomial b = Polynomial::variable(var("b"));
    Polynomial V1 = x1() * x1() + x2() * x2() + (x3() - r - s).pow(2);
    Polynomial expect = 2 * Rational(1) * x1() * s * (x2() - x1()) +
                        2 * Rational(1) * x2() * (r * x1() - x2() - x1() * x3()) +
                        2 * Rational(1) * (x3() - r - s) * (x1() * x2() - b * x3());
    CHECK(lie_derivative(V1, sys) == expect);
    CHECK(lie_derivative(Polynomial(5), sys).is_zero());
}

TEST_CASE("lie derivative of the general ellipsoid candidate") {
    DynSystem sys = lorenz_classic();
    Polynomial p1 = Polynomial::variable(var("p1")), p2 = Polynomial::variable(var("p2"));
    Polynomial p3 = Polynomial::variable(var("p3")), x30 = Polynomial::variable(var("x30"));
    Polynomial V5 = p1 * x1().pow(2) + p2 * x2().pow(2) + p3 * (x3() - x30).pow(2);

    DynSystem aug = sys;
    aug.params.push_back(var("p1"));
    aug.params.push_back(var("p2"));
    aug.params.push_back(var("p3"));
    aug.params.push_back(var("x30"));

    Polynomial expect = 2 * Rational(1) * (p3 - p2) * x1() * x2() * x3() +
                        (56 * Rational(1) * p2 + 20 * Rational(1) * p1 - 2 * Rational(1) * p3 * x30) *
                            x1() * x2() -
                        Rational(16, 3) * p3 * x3() * (x3() - x30) - 20 * Rational(1) * p1 * x1().pow(2) -
                        2 * Rational(1) * p2 * x2().pow(2);
    Polynomial vdot = lie_derivative(V5, aug);
    CHECK(vdot == expect);

    // Viewed in x3: degree 2 with leading coefficient -16/3 * p3.
    auto cs = vdot.univariate_coeffs(var("x3"));
    REQUIRE(cs.size() == 3);
    CHECK(cs[2] == Rational(-16, 3) * p3);

    // Value at x = (1,1,1) with unit weights and center 0.
    std::map<VarId, Rational> at{{var("x1"), 1},  {var("x2"), 1},  {var("x3"), 1},
                                 {var("p1"), 1},  {var("p2"), 1},  {var("p3"), 1},
                                 {var("x30"), 0}};
    CHECK(vdot.evaluate(at) == Rational(146, 3));

    CHECK_THROWS_AS(lie_derivative(V5, sys), std::invalid_argument);
}

TEST_CASE("candidate value at the sphere center") {
    Polynomial r = Polynomial::variable(var("r")), s = Polynomial::variable(var("s"));
    Polynomial V1 = x1() * x1() + x2() * x2() + (x3() - r - s).pow(2);
    std::map<VarId, Rational> at{
        {var("x1"), 0}, {var("x2"), 0}, {var("x3"), Rational(38)}, {var("r"), 28}, {var("s"), 10}};
    CHECK(V1.evaluate(at) == 0);
}

TEST_CASE("ring axioms on random polynomials") {
    std::mt19937_64 gen(11);
    std::vector<VarId> vars{var("x1"), var("x2"), var("x3")};
    for (int i = 0; i < 50; ++i) {
        Polynomial p = random_poly(gen, vars), q = random_poly(gen, vars),
                   r = random_poly(gen, vars);
        CHECK((p + q) + r == p + (q + r));
        CHECK(p * (q + r) == p * q + p * r);
        CHECK(p * q == q * p);
        CHECK((p * q).derivative(vars[0]) ==
              p.derivative(vars[0]) * q + p * q.derivative(vars[0]));
    }
}

TEST_CASE("evaluation is a ring homomorphism") {
    std::mt19937_64 gen(12);
    std::vector<VarId> vars{var("x1"), var("x2")};
    std::uniform_int_distribution<int> val(-5, 5);
    for (int i = 0; i < 50; ++i) {
        Polynomial p = random_poly(gen, vars), q = random_poly(gen, vars);
        std::map<VarId, Rational> at{{vars[0], val(gen)}, {vars[1], val(gen)}};
        CHECK((p * q).evaluate(at) == p.evaluate(at) * q.evaluate(at));
        CHECK((p + q).evaluate(at) == p.evaluate(at) + q.evaluate(at));
    }
}

TEST_CASE("lie derivative is linear in V") {
    std::mt19937_64 gen(13);
    DynSystem sys = lorenz_classic();
    std::vector<VarId> vars{var("x1"), var("x2"), var("x3")};
    for (int i = 0; i < 20; ++i) {
        Polynomial p = random_poly(gen, vars), q = random_poly(gen, vars);
        CHECK(lie_derivative(p + q, sys) == lie_derivative(p, sys) + lie_derivative(q, sys));
        CHECK(lie_derivative(Rational(3) * p, sys) == Rational(3) * lie_derivative(p, sys));
    }
}

TEST_CASE("system parsing round trip") {
    DynSystem sys = parse_system(
        "# comment\n"
        "vars x1 x2 x3\n"
        "params s r b\n"
        "ode x1 = s*(x2-x1)\n"
        "ode x2 = r*x1 - x2 - x1*x3\n"
        "ode x3 = x1*x2 - b*x3\n");
    DynSystem ref = lorenz_symbolic();
    REQUIRE(sys.rhs.size() == 3);
    for (int i = 0; i < 3; ++i) CHECK(sys.rhs[i] == ref.rhs[i]);
    DynSystem again = parse_system(system_to_string(sys));
    for (int i = 0; i < 3; ++i) CHECK(again.rhs[i] == sys.rhs[i]);
}
