#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polybound/dynsystem.hpp"
#include "polybound/numeric.hpp"

#include <cmath>

using namespace polybound;

TEST_CASE("fixed-step integration of a linear decay") {
    DynSystem sys = parse_system("vars x\node x = -x\n");
    Trajectory tr = integrate_rk4(sys, {1.0}, 1e-3, 1.0);
    CHECK(tr.states.back()[0] == doctest::Approx(std::exp(-1.0)).epsilon(1e-6));
    CHECK(tr.times.front() == 0.0);
    CHECK(tr.times.back() == doctest::Approx(1.0));
    for (std::size_t i = 1; i < tr.times.size(); ++i) CHECK(tr.times[i] > tr.times[i - 1]);
}

TEST_CASE("integration preconditions") {
    DynSystem sys = parse_system("vars x\node x = -x\n");
    CHECK_THROWS_AS(integrate_rk4(sys, {1.0}, 2.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_rk4(sys, {1.0}, 0.0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_rk4(sys, {1.0, 2.0}, 1e-3, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(integrate_rk4(lorenz_symbolic(), {1, 1, 1}, 1e-3, 1.0),
                    std::invalid_argument);
}

TEST_CASE("finite-escape blow-up is reported with its time") {
    // xdot = x^2 from x(0)=1 escapes at t = 1.
    DynSystem sys = parse_system("vars x\node x = x^2\n");
    CHECK_THROWS_WITH_AS(integrate_rk4(sys, {1.0}, 1e-3, 2.0),
                         doctest::Contains("state left floating range"), std::runtime_error);
}

TEST_CASE("fourth-order convergence") {
    DynSystem sys = parse_system("vars x\node x = -x\n");
    auto err = [&](double h) {
        return std::abs(integrate_rk4(sys, {1.0}, h, 1.0).states.back()[0] - std::exp(-1.0));
    };
    double ratio = err(0.02) / err(0.01);
    CHECK(ratio >= 12.0);
    CHECK(ratio <= 20.0);
}

TEST_CASE("chaotic trajectory stays inside the certified sphere") {
    DynSystem sys = lorenz_classic();
    Trajectory tr = integrate_rk4(sys, {1, 1, 1}, 1e-3, 50);
    double max_x3 = 0;
    for (const auto& s : tr.states) max_x3 = std::max(max_x3, std::abs(s[2]));
    CHECK(max_x3 < 60.0);
}

TEST_CASE("positive invariance of the certified sphere") {
    DynSystem sys = lorenz_classic();
    EllipsoidBound e{1, 1, 1, 38, 39.246};
    InvarianceReport rep = check_positive_invariance(e, sys, 100, 50, 1e-4);
    CHECK(rep.invariant);
    CHECK_FALSE(rep.blow_up);
}

TEST_CASE("a half-radius sphere is escaped by the attractor") {
    DynSystem sys = lorenz_classic();
    EllipsoidBound e{1, 1, 1, 38, 19.6};
    InvarianceReport rep = check_positive_invariance(e, sys, 30, 50, 1e-4);
    CHECK_FALSE(rep.invariant);
    CHECK(rep.max_v_excess > 0.1);
}

TEST_CASE("stationary flow keeps every ellipsoid invariant") {
    DynSystem sys = parse_system("vars x1 x2 x3\node x1 = 0\node x2 = 0\node x3 = 0\n");
    EllipsoidBound e{2, 3, 4, -7, 11};
    InvarianceReport rep = check_positive_invariance(e, sys, 20, 5, 1e-9);
    CHECK(rep.invariant);
    CHECK(rep.max_v_excess == doctest::Approx(0.0).epsilon(1e-12));
}

TEST_CASE("randomized falsification") {
    VarId x = var("x");
    FormulaRef positive = parse_formula("x^2 + 1 > 0");
    CHECK_FALSE(sample_falsify(positive, {x}, {{-10, 10}}, 1000, 1).found);

    FormulaRef gap = parse_formula("x^2 - 1 > 0");
    FalsificationReport rep = sample_falsify(gap, {x}, {{-10, 10}}, 10000, 1);
    CHECK(rep.found);
    REQUIRE(rep.witness.has_value());
    CHECK(std::abs((*rep.witness)[0]) <= 1.0);
    CHECK(rep.samples_used <= 10000);
}

TEST_CASE("falsification finds sub-threshold levels infeasible") {
    // The invariance condition for the unit-weight sphere at level c = 39
    // (below the 152/sqrt(15) threshold) has a state-space counterexample.
    DynSystem sys = lorenz_classic();
    Polynomial x1 = Polynomial::variable(var("x1")), x2 = Polynomial::variable(var("x2"));
    Polynomial x3 = Polynomial::variable(var("x3"));
    Polynomial V = x1.pow(2) + x2.pow(2) + (x3 - 38).pow(2);
    Polynomial Vdot = lie_derivative(V, sys);
    // V > c^2 implies Vdot < 0, as a quantifier-free matrix at c = 39.
    FormulaRef matrix = mk_or(mk_atom(V - Rational(39 * 39), Rel::Le), mk_atom(Vdot, Rel::Lt));
    // Counterexamples live in a thin shell where the level-derivative
    // boundary surface reaches its highest level value (near x1 = 0,
    // x2 ~ 25, x3 ~ 8), so search a box around that region.
    FalsificationReport rep = sample_falsify(matrix, {var("x1"), var("x2"), var("x3")},
                                             {{-3, 3}, {18, 32}, {2, 14}}, 200000, 2);
    CHECK(rep.found);

    // At a level above the threshold the same box holds no counterexample.
    FormulaRef matrix40 =
        mk_or(mk_atom(V - Rational(40 * 40), Rel::Le), mk_atom(Vdot, Rel::Lt));
    CHECK_FALSE(sample_falsify(matrix40, {var("x1"), var("x2"), var("x3")},
                               {{-3, 3}, {18, 32}, {2, 14}}, 50000, 2)
                    .found);
}
