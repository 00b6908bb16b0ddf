#ifndef POLYBOUND_VS_HPP
#define POLYBOUND_VS_HPP

#include "polybound/formula.hpp"

#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace polybound {

struct DegreeReport {
    VarId variable;
    int max_degree = 0;
    Polynomial offending;
};

struct DegreeTooHighError : std::runtime_error {
    DegreeReport report;
    explicit DegreeTooHighError(DegreeReport r)
        : std::runtime_error("degree " + std::to_string(r.max_degree) + " in " +
                             var_name(r.variable) + " exceeds the virtual substitution limit"),
          report(std::move(r)) {}
};

struct QeOverflowError : std::runtime_error {
    std::size_t atom_count;
    explicit QeOverflowError(std::size_t n)
        : std::runtime_error("intermediate formula exceeded the atom cap (" + std::to_string(n) +
                             " atoms)"),
          atom_count(n) {}
};

// Symbolic test point for virtual substitution.
struct VirtualTerm {
    enum class Kind {
        Value,     // rational constant
        Fraction,  // num/den, guard den != 0 (covers the linear root -c/b)
        QuadRoot,  // (-qb + branch*sqrt(qb^2-4*qa*qc)) / (2*qa), guard qa != 0 && disc >= 0
        NegInf,
        EpsAbove,  // inner + epsilon
    };

    Kind kind = Kind::Value;
    Rational value;
    Polynomial num, den;
    Polynomial qa, qb, qc;
    int branch = +1;
    std::shared_ptr<const VirtualTerm> inner;

    static VirtualTerm rational(Rational v);
    static VirtualTerm fraction(Polynomial num, Polynomial den);
    static VirtualTerm quad_root(Polynomial a, Polynomial b, Polynomial c, int branch);
    static VirtualTerm neg_inf();
    static VirtualTerm eps_above(VirtualTerm t);

    // Side condition under which the term denotes a real number.
    FormulaRef guard() const;

    std::string describe() const;
};

struct EliminationEntry {
    VirtualTerm term;
    FormulaRef guard;
};

struct QeOptions {
    // Permit the degree-lowering v -> +-sqrt(y) rewrite and the exact
    // univariate sign-table decision for ground last variables. Without it,
    // any elimination step of degree > 2 raises DegreeTooHighError, which is
    // the documented virtual substitution limit.
    bool allow_degree_rewrite = true;
    std::size_t max_atoms = 1'000'000;
    std::ostream* diagnostics = nullptr;
};

// Loos-Weispfenning substitution of a single test point into one atom. The
// result is quantifier-free, free of v, and (conjoined with t's guard)
// equivalent to the atom holding at the point denoted by t. Throws
// DegreeTooHighError when the atom has degree > 2 in v and t is a root or an
// epsilon offset.
FormulaRef virtual_substitute(const Atom& atom, VarId v, const VirtualTerm& t);

// Test points covering all sign-change candidates of v in the matrix, plus
// -infinity. Exposed for diagnostics and tests.
std::vector<EliminationEntry> elimination_set(const FormulaRef& matrix, VarId v);

// Quantifier-free formula equivalent to "exists v. matrix".
FormulaRef eliminate_existential(const FormulaRef& matrix, VarId v, const QeOptions& opts = {});

// Full quantifier elimination; universal blocks are handled as !E!. The
// result is quantifier-free in the free variables and passed through
// simplify_basic.
FormulaRef qe(const FormulaRef& f, const QeOptions& opts = {});

// Exact truth value of a closed formula. A bounded deterministic search for
// exact rational witnesses/counterexamples runs first when the prenex form is
// uniform in one quantifier; the QE path settles everything it leaves open.
bool decide(const FormulaRef& f, const QeOptions& opts = {});

}  // namespace polybound

#endif
