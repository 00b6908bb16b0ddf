#ifndef POLYBOUND_STURM_HPP
#define POLYBOUND_STURM_HPP

#include "polybound/formula.hpp"
#include "polybound/rational.hpp"

#include <vector>

namespace polybound {

// Dense exact univariate polynomial, coefficient of v^i at index i.
// Normalized: no trailing zero coefficients (zero polynomial is empty).
class UniPoly {
public:
    UniPoly() = default;
    explicit UniPoly(std::vector<Rational> coeffs);

    // Requires: p univariate in v, all other coefficient parts constant.
    static UniPoly from_polynomial(const Polynomial& p, VarId v);

    bool is_zero() const { return coeffs_.empty(); }
    int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
    const std::vector<Rational>& coeffs() const { return coeffs_; }
    const Rational& leading() const { return coeffs_.back(); }

    Rational eval(const Rational& x) const;
    UniPoly derivative() const;
    UniPoly operator*(const UniPoly& q) const;
    UniPoly operator-(const UniPoly& q) const;

    // Remainder of *this divided by q (q nonzero).
    UniPoly rem(const UniPoly& q) const;

    // Positive rescaling to integer coefficients with gcd 1.
    UniPoly primitive() const;

    // Monic gcd with q.
    UniPoly gcd(const UniPoly& q) const;

    // Exact quotient *this / q; requires q to divide *this.
    UniPoly div_exact(const UniPoly& q) const;

    UniPoly squarefree_part() const;

    // Exact division by (v - root); requires eval(root) == 0.
    UniPoly deflate(const Rational& root) const;

    // All real roots exceed -bound and are below +bound (Cauchy bound).
    Rational root_bound() const;

    // Number of distinct real roots in the half-open interval (a, b].
    // Requires a squarefree polynomial for exact multiplicity-free counts.
    int count_roots(const Rational& a, const Rational& b) const;

    // Signed remainder sequence (entries rescaled to primitive integers).
    std::vector<UniPoly> sturm_chain() const;

private:
    void trim();
    std::vector<Rational> coeffs_;
};

// One isolated real root: either an exact rational or a half-open interval
// (lo, hi] containing exactly one root, with lo and hi themselves non-roots.
struct IsolatedRoot {
    bool exact = false;
    Rational value;  // when exact
    Rational lo, hi;
};

// Disjoint, ascending isolation of all real roots.
std::vector<IsolatedRoot> isolate_real_roots(const UniPoly& p);

// Exact decision of "exists v. f" where f is quantifier-free and every atom
// is univariate in v with rational coefficients. Sign-table method: evaluate
// f at every isolated root of every atom polynomial and at a rational sample
// point in every gap between them.
bool decide_exists_univariate(const FormulaRef& f, VarId v);

}  // namespace polybound

#endif
