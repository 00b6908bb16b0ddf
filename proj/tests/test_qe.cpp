#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "polybound/bounds.hpp"
#include "polybound/dynsystem.hpp"
#include "polybound/numeric.hpp"
#include "polybound/vs.hpp"

#include <algorithm>
#include <map>
#include <random>
#include <vector>

using namespace polybound;

namespace {

void check_sampling_equivalent(const FormulaRef& f, const FormulaRef& g, int n = 500,
                               std::uint64_t seed = 5) {
    std::set<VarId> vars = free_variables(f);
    for (VarId v : free_variables(g)) vars.insert(v);
    std::mt19937_64 gen(seed);
    std::uniform_int_distribution<int> num(-20, 20), den(1, 5);
    for (int i = 0; i < n; ++i) {
        std::map<VarId, Rational> at;
        for (VarId v : vars) at[v] = Rational(num(gen), den(gen));
        CHECK(eval_ground(f, at) == eval_ground(g, at));
    }
}

// The quantifier-free characterization of "a2*x^2+a1*x+a0 > 0 for all real x".
FormulaRef positivity_answer() {
    return parse_formula("(a1 = 0 | 4*a2*a0 - a1^2 != 0) & (a0 > 0) & (-4*a2*a0 + a1^2 <= 0)");
}

}  // namespace

TEST_CASE("virtual substitution of single test points") {
    VarId x = var("x");
    Polynomial px = Polynomial::variable(x);

    // Plain value.
    CHECK(simplify_basic(virtual_substitute({px - 5, Rel::Gt}, x, VirtualTerm::rational(7)))
              ->is_true());
    CHECK(simplify_basic(virtual_substitute({px - 5, Rel::Gt}, x, VirtualTerm::rational(3)))
              ->is_false());

    // The upper root of x^2 - 2 satisfies x^2 - 2 <= 0 with equality.
    VirtualTerm root = VirtualTerm::quad_root(Polynomial(1), Polynomial(0), Polynomial(-2), +1);
    CHECK(simplify_basic(virtual_substitute({px * px - 2, Rel::Le}, x, root))->is_true());
    CHECK(simplify_basic(virtual_substitute({px * px - 2, Rel::Lt}, x, root))->is_false());

    // Leading-sign analysis at minus infinity.
    CHECK(simplify_basic(virtual_substitute({px, Rel::Gt}, x, VirtualTerm::neg_inf()))->is_false());
    CHECK(simplify_basic(virtual_substitute({px, Rel::Lt}, x, VirtualTerm::neg_inf()))->is_true());
    CHECK(simplify_basic(virtual_substitute({px * px, Rel::Gt}, x, VirtualTerm::neg_inf()))
              ->is_true());

    // Degree cap.
    CHECK_THROWS_AS(virtual_substitute({px * px * px, Rel::Gt}, x, root), DegreeTooHighError);
}

TEST_CASE("elimination set guards cover root existence") {
    VarId x = var("x");
    FormulaRef matrix = parse_formula("(a*x^2 + b*x + c <= 0) & (d*x + e > 0)");
    auto entries = elimination_set(matrix, x);
    REQUIRE(!entries.empty());
    bool saw_neg_inf = false, saw_quad = false, saw_lin = false;
    for (const auto& en : entries) {
        if (en.term.kind == VirtualTerm::Kind::NegInf) saw_neg_inf = true;
        if (en.term.kind == VirtualTerm::Kind::QuadRoot) {
            saw_quad = true;
            // Structural guard coverage: the guard must conjoin qa != 0 and
            // the nonnegative discriminant of the root expression.
            Polynomial disc =
                en.term.qb * en.term.qb - 4 * Rational(1) * en.term.qa * en.term.qc;
            bool has_nonzero = false, has_disc = false;
            std::function<void(const FormulaRef&)> scan = [&](const FormulaRef& f) {
                if (f->kind() == FormulaKind::Atomic) {
                    const Atom& a = f->atom();
                    // Atoms are sign-canonicalized, so accept both
                    // orientations of each guard inequality.
                    if (a.rel == Rel::Ne && (a.lhs == en.term.qa || a.lhs == -en.term.qa))
                        has_nonzero = true;
                    if ((a.rel == Rel::Ge && a.lhs == disc) ||
                        (a.rel == Rel::Le && a.lhs == -disc))
                        has_disc = true;
                }
                for (const auto& c : f->children()) scan(c);
            };
            scan(en.guard);
            CHECK(has_nonzero);
            CHECK(has_disc);
        }
        if (en.term.kind == VirtualTerm::Kind::Fraction) saw_lin = true;
    }
    CHECK(saw_neg_inf);
    CHECK(saw_quad);
    CHECK(saw_lin);
}

TEST_CASE("existential elimination basics") {
    VarId x = var("x");
    FormulaRef empty = parse_formula("x^2 + 1 < 0");
    CHECK(simplify_basic(eliminate_existential(empty, x))->is_false());

    // An open unit interval above u is never empty, for any u.
    FormulaRef interval = parse_formula("(x - u > 0) & (x - u < 1)");
    FormulaRef res = eliminate_existential(interval, x);
    CHECK(!res->is_false());
    check_sampling_equivalent(res, mk_true());
}

TEST_CASE("quadratic positivity against the known characterization") {
    FormulaRef query = parse_formula("A x. (a2*x^2 + a1*x + a0 > 0)");
    FormulaRef ours = qe(query);
    CHECK(ours->is_quantifier_free());
    check_sampling_equivalent(ours, positivity_answer(), 2000, 17);

    // Dualized route: eliminate x from the negated atom and negate the result.
    VarId x = var("x");
    FormulaRef neg = parse_formula("!(a2*x^2 + a1*x + a0 > 0)");
    FormulaRef dual = mk_not(eliminate_existential(simplify_basic(neg), x));
    check_sampling_equivalent(dual, positivity_answer(), 2000, 18);
}

TEST_CASE("closed tautologies and simple decisions") {
    CHECK(qe(parse_formula("A x. (x^2 >= 0)"))->is_true());
    CHECK(decide(parse_formula("E a2. E a1. E a0. A x. (a2*x^2 + a1*x + a0 > 0)")));
    CHECK_FALSE(decide(parse_formula("E x. (x^2 + 1 <= 0)")));
    CHECK(decide(parse_formula("E x. ((x - 3 > 0) & (x - 4 < 0))")));
}

TEST_CASE("forall / exists duality") {
    VarId x = var("x");
    std::vector<std::string> matrices = {
        "a*x^2 + b*x + c > 0",
        "(x - u > 0) & (x - u < 1)",
        "(a*x + b <= 0) | (x^2 - c = 0)",
    };
    for (const auto& text : matrices) {
        FormulaRef m = parse_formula(text);
        FormulaRef all = qe(mk_forall(x, m));
        FormulaRef dual = mk_not(qe(mk_exists(x, mk_not(m))));
        check_sampling_equivalent(all, dual, 400, 23);
    }
}

TEST_CASE("level decisions for the fixed sphere candidate") {
    DynSystem sys = lorenz_classic();
    VarId c = var("c");
    LyapunovCandidate cand = make_ellipsoid_candidate(1, 1, 1, 38, c);
    FormulaRef f = build_invariance_formula(sys, cand);
    // Threshold is 152/sqrt(15) ~ 39.246.
    CHECK(decide(substitute(f, c, 40)));
    CHECK_FALSE(decide(substitute(f, c, 39)));
}

TEST_CASE("degree and size limits") {
    QeOptions strict;
    strict.allow_degree_rewrite = false;
    CHECK_THROWS_AS(qe(parse_formula("E x. (x^3 + a0 = 0)"), strict), DegreeTooHighError);
    try {
        qe(parse_formula("E x. (x^3 + a0 = 0)"), strict);
    } catch (const DegreeTooHighError& e) {
        CHECK(var_name(e.report.variable) == "x");
        CHECK(e.report.max_degree == 3);
    }

    QeOptions tiny;
    tiny.max_atoms = 2;
    CHECK_THROWS_AS(
        qe(parse_formula("E x. ((a*x^2 + b*x + c > 0) & (d*x^2 + e*x + f < 0))"), tiny),
        QeOverflowError);
}

TEST_CASE("univariate decisions against a constructed-root oracle") {
    // Instances are built from factored polynomials, so every sign change
    // happens at a rational root known by construction. The oracle samples
    // all roots, all midpoints between adjacent roots and points beyond the
    // extremes -- exact and independent of the elimination engine.
    std::mt19937_64 gen(99);
    VarId x = var("x");
    Polynomial px = Polynomial::variable(x);
    std::uniform_int_distribution<int> root_num(-6, 6), root_den(1, 3), n_atoms(2, 4),
        n_roots(0, 2), coef(0, 3), rel_pick(0, 5), shape(0, 2);
    const int kInstances = 1000;
    int checked = 0;
    for (int inst = 0; inst < kInstances; ++inst) {
        std::vector<Rational> all_roots;
        std::vector<FormulaRef> atoms;
        int na = n_atoms(gen);
        for (int a = 0; a < na; ++a) {
            static const Rational lead_choices[] = {1, -1, 2, -2};
            Polynomial p = lead_choices[coef(gen)];
            int nr = n_roots(gen);
            for (int r = 0; r < nr; ++r) {
                Rational root(root_num(gen), root_den(gen));
                all_roots.push_back(root);
                p = p * (px - root);
            }
            if (nr == 0) p = p * (px * px + 1);  // irreducible, sign-constant
            static const Rel rels[] = {Rel::Lt, Rel::Le, Rel::Eq, Rel::Ne, Rel::Ge, Rel::Gt};
            atoms.push_back(mk_atom(p, rels[rel_pick(gen)]));
        }
        FormulaRef matrix;
        switch (shape(gen)) {
            case 0: matrix = mk_and(atoms); break;
            case 1: matrix = mk_or(atoms); break;
            default: {
                FormulaRef head = mk_not(atoms[0]);
                atoms[0] = head;
                matrix = mk_and(atoms);
            }
        }

        // Oracle sample points.
        std::sort(all_roots.begin(), all_roots.end());
        all_roots.erase(std::unique(all_roots.begin(), all_roots.end()), all_roots.end());
        std::vector<Rational> samples;
        if (all_roots.empty()) {
            samples.push_back(0);
        } else {
            samples.push_back(all_roots.front() - 1);
            for (std::size_t i = 0; i < all_roots.size(); ++i) {
                samples.push_back(all_roots[i]);
                if (i + 1 < all_roots.size())
                    samples.push_back((all_roots[i] + all_roots[i + 1]) / 2);
            }
            samples.push_back(all_roots.back() + 1);
        }
        bool oracle_exists = false;
        for (const Rational& s : samples) {
            if (eval_ground(matrix, {{x, s}})) {
                oracle_exists = true;
                break;
            }
        }

        CHECK(decide(mk_exists(x, matrix)) == oracle_exists);
        ++checked;
    }
    CHECK(checked == kInstances);
}

TEST_CASE("sampling never contradicts decide") {
    // For decided universal truths the falsifier must find no counterexample;
    // for decided existential falsehoods it must find no witness.
    VarId x = var("x"), y = var("y");
    FormulaRef m1 = parse_formula("x^2 + 1 > 0");
    REQUIRE(decide(mk_forall(x, m1)));
    CHECK_FALSE(sample_falsify(m1, {x}, {{-100, 100}}, 100000, 4).found);

    FormulaRef m2 = parse_formula("x^2 + y^2 + 1/10 < 0");
    REQUIRE_FALSE(decide(mk_exists(x, mk_exists(y, m2))));
    // A witness of the existential would falsify its negation.
    CHECK_FALSE(sample_falsify(mk_not(m2), {x, y}, {{-100, 100}, {-100, 100}}, 100000, 4).found);
}
