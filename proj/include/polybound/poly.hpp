#ifndef POLYBOUND_POLY_HPP
#define POLYBOUND_POLY_HPP

#include "polybound/rational.hpp"
#include "polybound/vartable.hpp"

#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

namespace polybound {

// Sparse power product. Exponents are strictly positive; the empty product
// is the constant monomial 1.
class Monomial {
public:
    Monomial() = default;
    static Monomial one() { return Monomial{}; }
    static Monomial variable(VarId v, int exp = 1);

    int exponent(VarId v) const;
    int total_degree() const;
    bool is_one() const { return factors_.empty(); }
    const std::vector<std::pair<VarId, int>>& factors() const { return factors_; }

    Monomial operator*(const Monomial& other) const;

    // Graded lexicographic: first by total degree, then lexicographically by
    // variable registration order (earlier variable, higher exponent first).
    friend bool operator<(const Monomial& a, const Monomial& b);
    friend bool operator==(const Monomial& a, const Monomial& b);
    friend bool operator!=(const Monomial& a, const Monomial& b) { return !(a == b); }

    std::string to_string() const;

private:
    // Sorted by VarId, no zero exponents.
    std::vector<std::pair<VarId, int>> factors_;
};

// Sparse multivariate polynomial over exact rationals. Immutable value type;
// no zero coefficients are stored, so structural equality is semantic
// equality.
class Polynomial {
public:
    Polynomial() = default;
    Polynomial(const Rational& c);           // NOLINT: implicit by design
    Polynomial(long long c) : Polynomial(Rational(c)) {}
    static Polynomial variable(VarId v);
    static Polynomial term(const Rational& c, const Monomial& m);

    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const;
    // Requires is_constant().
    Rational constant_value() const;

    Polynomial operator+(const Polynomial& q) const;
    Polynomial operator-(const Polynomial& q) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& q) const;
    Polynomial pow(int n) const;

    friend bool operator==(const Polynomial& a, const Polynomial& b);
    friend bool operator!=(const Polynomial& a, const Polynomial& b) { return !(a == b); }
    // Arbitrary total order for use as a container key.
    friend bool operator<(const Polynomial& a, const Polynomial& b);

    Polynomial derivative(VarId v) const;

    int degree(VarId v) const;
    int total_degree() const;
    bool contains(VarId v) const;
    std::set<VarId> variables() const;

    // Coefficients c0..cd with p = sum ci * v^i; size is degree(v)+1 and the
    // last entry is a nonzero polynomial (single zero entry for p = 0).
    std::vector<Polynomial> univariate_coeffs(VarId v) const;

    // Even/odd split in v: p = even(v^2->y) + v * odd(v^2->y) after replacing
    // v^2 by the fresh variable y. Used by the degree-lowering rewrite in QE.
    void even_odd_split(VarId v, VarId y, Polynomial& even_part, Polynomial& odd_part) const;

    // Exact evaluation; throws std::invalid_argument naming any unassigned
    // variable of p.
    Rational evaluate(const std::map<VarId, Rational>& assignment) const;
    double evaluate_double(const std::map<VarId, double>& assignment) const;

    // Partial evaluation of one variable.
    Polynomial substitute(VarId v, const Rational& value) const;
    Polynomial substitute(VarId v, const Polynomial& value) const;

    const std::map<Monomial, Rational>& terms() const { return terms_; }

    // Canonical rendering, highest monomial first, e.g. "2*x1*x2 - 16/3*x3^2".
    std::string to_string() const;

private:
    void add_term(const Monomial& m, const Rational& c);
    std::map<Monomial, Rational> terms_;
};

Polynomial operator*(const Rational& c, const Polynomial& p);

}  // namespace polybound

#endif
