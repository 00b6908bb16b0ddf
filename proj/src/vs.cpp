#include "polybound/vs.hpp"

#include "polybound/sturm.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <map>
#include <optional>
#include <utility>

namespace polybound {

namespace {

bool formula_contains(const FormulaRef& f, VarId v) {
    switch (f->kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return false;
        case FormulaKind::Atomic:
            return f->atom().lhs.contains(v);
        default:
            if ((f->kind() == FormulaKind::Exists || f->kind() == FormulaKind::Forall) &&
                f->quantified_var() == v) {
                return false;
            }
            for (const auto& c : f->children()) {
                if (formula_contains(c, v)) return true;
            }
            return false;
    }
}

int formula_max_degree(const FormulaRef& f, VarId v, Polynomial* offending) {
    switch (f->kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return 0;
        case FormulaKind::Atomic: {
            int d = f->atom().lhs.degree(v);
            if (d > 0 && offending) *offending = f->atom().lhs;
            return d;
        }
        default: {
            int best = 0;
            for (const auto& c : f->children()) {
                Polynomial p;
                int d = formula_max_degree(c, v, &p);
                if (d > best) {
                    best = d;
                    if (offending) *offending = p;
                }
            }
            return best;
        }
    }
}

}  // namespace

VirtualTerm VirtualTerm::rational(Rational v) {
    VirtualTerm t;
    t.kind = Kind::Value;
    t.value = std::move(v);
    return t;
}

VirtualTerm VirtualTerm::fraction(Polynomial num, Polynomial den) {
    VirtualTerm t;
    t.kind = Kind::Fraction;
    t.num = std::move(num);
    t.den = std::move(den);
    return t;
}

VirtualTerm VirtualTerm::quad_root(Polynomial a, Polynomial b, Polynomial c, int branch) {
    VirtualTerm t;
    t.kind = Kind::QuadRoot;
    t.qa = std::move(a);
    t.qb = std::move(b);
    t.qc = std::move(c);
    t.branch = branch;
    return t;
}

VirtualTerm VirtualTerm::neg_inf() {
    VirtualTerm t;
    t.kind = Kind::NegInf;
    return t;
}

VirtualTerm VirtualTerm::eps_above(VirtualTerm inner) {
    VirtualTerm t;
    t.kind = Kind::EpsAbove;
    t.inner = std::make_shared<const VirtualTerm>(std::move(inner));
    return t;
}

FormulaRef VirtualTerm::guard() const {
    switch (kind) {
        case Kind::Value:
        case Kind::NegInf:
            return mk_true();
        case Kind::Fraction:
            return mk_atom(den, Rel::Ne);
        case Kind::QuadRoot:
            return mk_and(mk_atom(qa, Rel::Ne),
                          mk_atom(qb * qb - Rational(4) * qa * qc, Rel::Ge));
        case Kind::EpsAbove:
            return inner->guard();
    }
    return mk_true();
}

std::string VirtualTerm::describe() const {
    switch (kind) {
        case Kind::Value:
            return rational_to_string(value);
        case Kind::Fraction:
            return "(" + num.to_string() + ") / (" + den.to_string() + ")";
        case Kind::QuadRoot:
            return std::string("(-(") + qb.to_string() + ") " + (branch > 0 ? "+" : "-") +
                   " sqrt((" + qb.to_string() + ")^2 - 4*(" + qa.to_string() + ")*(" +
                   qc.to_string() + "))) / (2*(" + qa.to_string() + "))";
        case Kind::NegInf:
            return "-inf";
        case Kind::EpsAbove:
            return inner->describe() + " + eps";
    }
    return "?";
}

namespace {

// Sign formula for E = U + W*sqrt(R) rel 0, valid wherever R >= 0 holds.
// The W == 0 and U == 0 special cases avoid the degree-doubled discriminant
// atom D = U^2 - W^2 R whenever possible; that is what keeps the Lorenz-shaped
// eliminations inside the quadratic fragment.
FormulaRef radical_sign(const Polynomial& U, const Polynomial& W, const Polynomial& R, Rel rel) {
    if (W.is_zero() || R.is_zero()) return mk_atom(U, rel);
    if (U.is_zero()) {
        // E = W*sqrt(R); sqrt(R) is zero iff R = 0, positive otherwise.
        switch (rel) {
            case Rel::Lt:
                return mk_and(mk_atom(W, Rel::Lt), mk_atom(R, Rel::Gt));
            case Rel::Gt:
                return mk_and(mk_atom(W, Rel::Gt), mk_atom(R, Rel::Gt));
            case Rel::Le:
                return mk_or(mk_atom(W, Rel::Le), mk_atom(R, Rel::Eq));
            case Rel::Ge:
                return mk_or(mk_atom(W, Rel::Ge), mk_atom(R, Rel::Eq));
            case Rel::Eq:
                return mk_or(mk_atom(W, Rel::Eq), mk_atom(R, Rel::Eq));
            case Rel::Ne:
                return mk_and(mk_atom(W, Rel::Ne), mk_atom(R, Rel::Gt));
        }
    }
    Polynomial D = U * U - W * W * R;
    switch (rel) {
        case Rel::Lt:
            return mk_or({mk_and(mk_atom(U, Rel::Lt), mk_atom(W, Rel::Le)),
                          mk_and(mk_atom(U, Rel::Lt), mk_atom(D, Rel::Gt)),
                          mk_and(mk_atom(W, Rel::Lt), mk_atom(D, Rel::Lt))});
        case Rel::Le:
            return mk_or({mk_and(mk_atom(U, Rel::Le), mk_atom(W, Rel::Le)),
                          mk_and(mk_atom(U, Rel::Le), mk_atom(D, Rel::Ge)),
                          mk_and(mk_atom(W, Rel::Le), mk_atom(D, Rel::Le))});
        case Rel::Gt:
            return mk_or({mk_and(mk_atom(U, Rel::Gt), mk_atom(W, Rel::Ge)),
                          mk_and(mk_atom(U, Rel::Gt), mk_atom(D, Rel::Gt)),
                          mk_and(mk_atom(W, Rel::Gt), mk_atom(D, Rel::Lt))});
        case Rel::Ge:
            return mk_or({mk_and(mk_atom(U, Rel::Ge), mk_atom(W, Rel::Ge)),
                          mk_and(mk_atom(U, Rel::Ge), mk_atom(D, Rel::Ge)),
                          mk_and(mk_atom(W, Rel::Ge), mk_atom(D, Rel::Le))});
        case Rel::Eq:
            return mk_and(mk_atom(U * W, Rel::Le), mk_atom(D, Rel::Eq));
        case Rel::Ne:
            return mk_or(mk_atom(U * W, Rel::Gt), mk_atom(D, Rel::Ne));
    }
    return mk_true();
}

FormulaRef substitute_neg_inf(const Polynomial& p, VarId v, Rel rel) {
    auto e = p.univariate_coeffs(v);
    int d = static_cast<int>(e.size()) - 1;
    auto all_zero = [&] {
        std::vector<FormulaRef> cs;
        for (const auto& ei : e) cs.push_back(mk_atom(ei, Rel::Eq));
        return mk_and(std::move(cs));
    };
    auto leading_sign = [&](Rel strict) {
        // Disjunct j: e_j leads (all higher coefficients vanish) and its
        // contribution (-1)^j e_j satisfies the strict relation at -infinity.
        std::vector<FormulaRef> disjuncts;
        for (int j = d; j >= 0; --j) {
            std::vector<FormulaRef> conj;
            for (int i = j + 1; i <= d; ++i) conj.push_back(mk_atom(e[i], Rel::Eq));
            Polynomial lead = (j % 2 == 0) ? e[j] : -e[j];
            conj.push_back(mk_atom(lead, strict));
            disjuncts.push_back(mk_and(std::move(conj)));
        }
        return mk_or(std::move(disjuncts));
    };
    switch (rel) {
        case Rel::Lt:
            return leading_sign(Rel::Lt);
        case Rel::Gt:
            return leading_sign(Rel::Gt);
        case Rel::Le:
            return mk_or(leading_sign(Rel::Lt), all_zero());
        case Rel::Ge:
            return mk_or(leading_sign(Rel::Gt), all_zero());
        case Rel::Eq:
            return all_zero();
        case Rel::Ne:
            return mk_not(all_zero());
    }
    return mk_true();
}

FormulaRef substitute_eps(const Polynomial& p, VarId v, Rel rel, const VirtualTerm& inner) {
    auto at_inner = [&](const Polynomial& q, Rel r) {
        return virtual_substitute(Atom{q, r}, v, inner);
    };
    switch (rel) {
        case Rel::Eq:
        case Rel::Ne: {
            // Zero (resp. nonzero) just right of the point: the whole
            // derivative chain vanishes (resp. some derivative does not).
            std::vector<FormulaRef> parts;
            Polynomial q = p;
            while (true) {
                parts.push_back(at_inner(q, rel == Rel::Eq ? Rel::Eq : Rel::Ne));
                if (!q.contains(v)) break;
                q = q.derivative(v);
            }
            return rel == Rel::Eq ? mk_and(std::move(parts)) : mk_or(std::move(parts));
        }
        default: {
            // Sign just right of the point is the first nonzero entry of
            // p, p', p'', ... evaluated at the point.
            Rel strict = (rel == Rel::Lt || rel == Rel::Le) ? Rel::Lt : Rel::Gt;
            std::function<FormulaRef(const Polynomial&)> chain =
                [&](const Polynomial& q) -> FormulaRef {
                if (!q.contains(v)) return at_inner(q, rel);
                return mk_or(at_inner(q, strict),
                             mk_and(at_inner(q, Rel::Eq), chain(q.derivative(v))));
            };
            return chain(p);
        }
    }
}

}  // namespace

FormulaRef virtual_substitute(const Atom& atom, VarId v, const VirtualTerm& t) {
    const Polynomial& p = atom.lhs;
    if (!p.contains(v)) return mk_atom(p, atom.rel);
    switch (t.kind) {
        case VirtualTerm::Kind::Value:
            return mk_atom(p.substitute(v, t.value), atom.rel);
        case VirtualTerm::Kind::Fraction: {
            auto e = p.univariate_coeffs(v);
            int d = static_cast<int>(e.size()) - 1;
            Polynomial N;
            for (int i = 0; i <= d; ++i) N = N + e[i] * t.num.pow(i) * t.den.pow(d - i);
            // N = p(num/den) * den^d; for order relations an odd power of the
            // sign-unknown denominator remains and is multiplied back in.
            bool order = atom.rel != Rel::Eq && atom.rel != Rel::Ne;
            if (order && d % 2 == 1) return mk_atom(N * t.den, atom.rel);
            return mk_atom(N, atom.rel);
        }
        case VirtualTerm::Kind::QuadRoot: {
            auto e = p.univariate_coeffs(v);
            if (static_cast<int>(e.size()) - 1 > 2) {
                throw DegreeTooHighError({v, static_cast<int>(e.size()) - 1, p});
            }
            e.resize(3, Polynomial{});
            Polynomial A = -t.qb;
            Polynomial C = Rational(2) * t.qa;
            Polynomial R = t.qb * t.qb - Rational(4) * t.qa * t.qc;
            // p((A + s*sqrt(R))/C) * C^2 = U + (s*W') * sqrt(R), C^2 > 0 under
            // the guard, so the relation transfers to the numerator.
            Polynomial U = e[2] * (A * A + R) + e[1] * A * C + e[0] * C * C;
            Polynomial W = Rational(t.branch) * (Rational(2) * e[2] * A + e[1] * C);
            return radical_sign(U, W, R, atom.rel);
        }
        case VirtualTerm::Kind::NegInf:
            return substitute_neg_inf(p, v, atom.rel);
        case VirtualTerm::Kind::EpsAbove: {
            if (p.degree(v) > 2 && t.inner->kind == VirtualTerm::Kind::QuadRoot) {
                throw DegreeTooHighError({v, p.degree(v), p});
            }
            return substitute_eps(p, v, atom.rel, *t.inner);
        }
    }
    return mk_atom(p, atom.rel);
}

namespace {

// Atoms of the matrix that mention v, with the relation polarity seen from the
// root, merged per distinct polynomial: does any occurrence need an epsilon
// test point (strict effective relation)?
void collect_atoms(const FormulaRef& f, VarId v, bool negated,
                   std::map<Polynomial, bool>& out) {
    switch (f->kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return;
        case FormulaKind::Atomic: {
            const Atom& a = f->atom();
            if (!a.lhs.contains(v)) return;
            Rel eff = negated ? negate_rel(a.rel) : a.rel;
            bool eps = is_strict(eff);
            auto [it, fresh] = out.emplace(a.lhs, eps);
            if (!fresh) it->second = it->second || eps;
            return;
        }
        case FormulaKind::Not:
            collect_atoms(f->child(), v, !negated, out);
            return;
        case FormulaKind::And:
        case FormulaKind::Or:
            for (const auto& c : f->children()) collect_atoms(c, v, negated, out);
            return;
        default:
            throw std::invalid_argument("elimination_set: matrix must be quantifier-free");
    }
}

}  // namespace

std::vector<EliminationEntry> elimination_set(const FormulaRef& matrix, VarId v) {
    std::map<Polynomial, bool> atoms;
    collect_atoms(matrix, v, false, atoms);

    std::vector<EliminationEntry> entries;
    entries.push_back({VirtualTerm::neg_inf(), mk_true()});
    auto add = [&](VirtualTerm t, FormulaRef guard, bool eps) {
        if (guard->is_false()) return;
        if (eps) entries.push_back({VirtualTerm::eps_above(t), guard});
        entries.push_back({std::move(t), std::move(guard)});
    };

    for (const auto& [p, eps] : atoms) {
        auto e = p.univariate_coeffs(v);
        int d = static_cast<int>(e.size()) - 1;
        if (d > 2) throw DegreeTooHighError({v, d, p});
        if (d == 1) {
            add(VirtualTerm::fraction(-e[0], e[1]), mk_atom(e[1], Rel::Ne), eps);
        } else if (d == 2) {
            FormulaRef quad_guard = mk_and(
                mk_atom(e[2], Rel::Ne),
                mk_atom(e[1] * e[1] - Rational(4) * e[2] * e[0], Rel::Ge));
            add(VirtualTerm::quad_root(e[2], e[1], e[0], +1), quad_guard, eps);
            add(VirtualTerm::quad_root(e[2], e[1], e[0], -1), quad_guard, eps);
            // Degenerate leading coefficient: the surviving linear root.
            add(VirtualTerm::fraction(-e[0], e[1]),
                mk_and(mk_atom(e[2], Rel::Eq), mk_atom(e[1], Rel::Ne)), eps);
        }
    }
    return entries;
}

namespace {

FormulaRef substitute_term(const FormulaRef& f, VarId v, const VirtualTerm& t) {
    switch (f->kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return f;
        case FormulaKind::Atomic:
            return virtual_substitute(f->atom(), v, t);
        case FormulaKind::Not:
            return mk_not(substitute_term(f->child(), v, t));
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<FormulaRef> ch;
            ch.reserve(f->children().size());
            for (const auto& c : f->children()) ch.push_back(substitute_term(c, v, t));
            return f->kind() == FormulaKind::And ? mk_and(std::move(ch))
                                                 : mk_or(std::move(ch));
        }
        default:
            throw std::invalid_argument("virtual substitution: matrix must be quantifier-free");
    }
}

// Replace every atom p rel 0 by the sign formula of p at v = branch*sqrt(y),
// via the even/odd split p = pe(y) + v*po(y).
FormulaRef substitute_sqrt(const FormulaRef& f, VarId v, VarId y, int branch) {
    switch (f->kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return f;
        case FormulaKind::Atomic: {
            const Atom& a = f->atom();
            if (!a.lhs.contains(v)) return f;
            Polynomial pe, po;
            a.lhs.even_odd_split(v, y, pe, po);
            return radical_sign(pe, Rational(branch) * po, Polynomial::variable(y), a.rel);
        }
        case FormulaKind::Not:
            return mk_not(substitute_sqrt(f->child(), v, y, branch));
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<FormulaRef> ch;
            ch.reserve(f->children().size());
            for (const auto& c : f->children()) ch.push_back(substitute_sqrt(c, v, y, branch));
            return f->kind() == FormulaKind::And ? mk_and(std::move(ch))
                                                 : mk_or(std::move(ch));
        }
        default:
            throw std::invalid_argument("virtual substitution: matrix must be quantifier-free");
    }
}

void check_cap(const FormulaRef& f, const QeOptions& opts) {
    std::size_t n = f->atom_count();
    if (n > opts.max_atoms) throw QeOverflowError(n);
}

}  // namespace

FormulaRef eliminate_existential(const FormulaRef& matrix, VarId v, const QeOptions& opts) {
    FormulaRef m = simplify_basic(matrix);
    if (!formula_contains(m, v)) return m;

    // The quantifier distributes over disjunction; eliminating per disjunct
    // keeps every elimination set small.
    if (m->kind() == FormulaKind::Or) {
        std::vector<FormulaRef> parts;
        parts.reserve(m->children().size());
        for (const auto& c : m->children()) parts.push_back(eliminate_existential(c, v, opts));
        FormulaRef out = simplify_basic(mk_or(std::move(parts)));
        check_cap(out, opts);
        return out;
    }

    Polynomial offending;
    int maxdeg = formula_max_degree(m, v, &offending);
    if (maxdeg <= 2) {
        auto entries = elimination_set(m, v);
        if (opts.diagnostics) {
            *opts.diagnostics << "eliminate " << var_name(v) << ": " << entries.size()
                              << " test points\n";
            for (const auto& en : entries) {
                *opts.diagnostics << "  " << en.term.describe() << "  [guard "
                                  << print_formula(en.guard) << "]\n";
            }
        }
        std::vector<FormulaRef> disjuncts;
        disjuncts.reserve(entries.size());
        for (const auto& en : entries) {
            disjuncts.push_back(mk_and(en.guard, substitute_term(m, v, en.term)));
        }
        FormulaRef out = simplify_basic(mk_or(std::move(disjuncts)));
        check_cap(out, opts);
        return out;
    }

    if (!opts.allow_degree_rewrite) throw DegreeTooHighError({v, maxdeg, offending});

    // Ground last variable: decide exactly by root isolation and sign tables.
    std::set<VarId> frees = free_variables(m);
    if (frees.size() == 1 && *frees.begin() == v) {
        if (opts.diagnostics) {
            *opts.diagnostics << "eliminate " << var_name(v)
                              << ": univariate sign-table decision (degree " << maxdeg << ")\n";
        }
        return decide_exists_univariate(m, v) ? mk_true() : mk_false();
    }

    // exists v. G(v)  <=>  exists y. y >= 0 and (G(sqrt(y)) or G(-sqrt(y))).
    // Only accepted when it actually lowers the degree (it does whenever the
    // atoms are parity-pure in v); otherwise the step is out of reach.
    VarId y = VarTable::instance().fresh("y");
    FormulaRef body = mk_and(mk_atom(Polynomial::variable(y), Rel::Ge),
                             mk_or(substitute_sqrt(m, v, y, +1), substitute_sqrt(m, v, y, -1)));
    int newdeg = formula_max_degree(body, y, nullptr);
    if (newdeg >= maxdeg) throw DegreeTooHighError({v, maxdeg, offending});
    if (opts.diagnostics) {
        *opts.diagnostics << "eliminate " << var_name(v) << ": square rewrite to "
                          << var_name(y) << " (degree " << maxdeg << " -> " << newdeg << ")\n";
    }
    check_cap(body, opts);
    return eliminate_existential(body, y, opts);
}

namespace {

// Eliminate a uniform existential block, choosing the order. Variables with
// lower degree go first; on a DegreeTooHighError the next order is tried,
// since a different pivot can keep the step inside the quadratic fragment.
FormulaRef eliminate_block(FormulaRef m, std::vector<VarId> vars, const QeOptions& opts) {
    vars.erase(std::remove_if(vars.begin(), vars.end(),
                              [&](VarId v) { return !formula_contains(m, v); }),
               vars.end());
    if (vars.empty()) return m;
    std::sort(vars.begin(), vars.end(), [&](VarId a, VarId b) {
        int da = formula_max_degree(m, a, nullptr), db = formula_max_degree(m, b, nullptr);
        if (da != db) return da < db;
        return a.index < b.index;
    });
    std::optional<DegreeTooHighError> saved;
    for (std::size_t i = 0; i < vars.size(); ++i) {
        try {
            FormulaRef step = eliminate_existential(m, vars[i], opts);
            std::vector<VarId> rest = vars;
            rest.erase(rest.begin() + static_cast<std::ptrdiff_t>(i));
            return eliminate_block(simplify_basic(step), std::move(rest), opts);
        } catch (const DegreeTooHighError& e) {
            if (!saved) saved = e;
        }
    }
    throw *saved;
}

}  // namespace

FormulaRef qe(const FormulaRef& f, const QeOptions& opts) {
    PrenexForm pf = to_prenex(simplify_basic(f));
    FormulaRef m = pf.matrix;
    std::size_t i = pf.blocks.size();
    while (i > 0) {
        FormulaKind k = pf.blocks[i - 1].first;
        std::vector<VarId> group;
        while (i > 0 && pf.blocks[i - 1].first == k) group.push_back(pf.blocks[--i].second);
        if (k == FormulaKind::Forall) {
            m = mk_not(eliminate_block(mk_not(m), std::move(group), opts));
        } else {
            m = eliminate_block(m, std::move(group), opts);
        }
        m = simplify_basic(m);
        check_cap(m, opts);
    }
    return m;
}

namespace {

// Deterministic exact sample points for the witness/counterexample fast path.
const std::vector<Rational>& sample_values() {
    static const std::vector<Rational> vals = [] {
        std::vector<Rational> v{Rational(0)};
        for (long long m : {1, 2, 10, 100}) {
            v.emplace_back(m);
            v.emplace_back(-m);
            v.emplace_back(Rational(1, m + 1));
            v.emplace_back(Rational(-1, m + 1));
        }
        // Large magnitudes catch counterexamples driven by highest-degree
        // terms (e.g. sign-indefinite cubics) far outside any level set.
        for (long long m : {1000, 30000}) {
            v.emplace_back(m);
            v.emplace_back(-m);
        }
        return v;
    }();
    return vals;
}

bool search_samples(const FormulaRef& matrix, const std::vector<VarId>& vars,
                    std::map<VarId, Rational>& assignment, std::size_t i, bool target) {
    if (i == vars.size()) return eval_ground(matrix, assignment) == target;
    for (const Rational& r : sample_values()) {
        assignment[vars[i]] = r;
        if (search_samples(matrix, vars, assignment, i + 1, target)) return true;
    }
    assignment.erase(vars[i]);
    return false;
}

// Robust floating satisfaction margin: clearly positive iff the formula holds
// with slack, clearly negative iff it fails with slack.
double float_margin(const FormulaRef& f, const std::map<VarId, double>& asg) {
    switch (f->kind()) {
        case FormulaKind::True:
            return 1e300;
        case FormulaKind::False:
            return -1e300;
        case FormulaKind::Atomic: {
            double v = f->atom().lhs.evaluate_double(asg);
            switch (f->atom().rel) {
                case Rel::Lt:
                case Rel::Le:
                    return -v;
                case Rel::Gt:
                case Rel::Ge:
                    return v;
                case Rel::Eq:
                    return -std::abs(v);
                case Rel::Ne:
                    return std::abs(v);
            }
            return 0;
        }
        case FormulaKind::Not:
            return -float_margin(f->child(), asg);
        case FormulaKind::And: {
            double m = 1e300;
            for (const auto& c : f->children()) m = std::min(m, float_margin(c, asg));
            return m;
        }
        case FormulaKind::Or: {
            double m = -1e300;
            for (const auto& c : f->children()) m = std::max(m, float_margin(c, asg));
            return m;
        }
        default:
            return 0;
    }
}

// Deterministic float pattern search for a point where the matrix evaluates
// to `target`, confirmed by one exact rational evaluation before reporting.
bool search_hill_climb(const FormulaRef& matrix, const std::vector<VarId>& vars, bool target) {
    if (vars.empty() || vars.size() > 6) return false;
    // Objective: minimize margin when hunting a falsifying point, maximize it
    // for a witness; normalize to "smaller is better".
    auto objective = [&](const std::map<VarId, double>& asg) {
        double m = float_margin(matrix, asg);
        return target ? -m : m;
    };
    auto verify = [&](const std::map<VarId, double>& asg) {
        std::map<VarId, Rational> exact;
        for (const auto& [v, x] : asg) {
            if (!std::isfinite(x)) return false;
            exact[v] = dyadic_from_double(x, 40);
        }
        return eval_ground(matrix, exact) == target;
    };

    // Starting points: coarse magnitude grid ranked by objective.
    static const double mags[] = {0, 1, -1, 10, -10, 100, -100, 1000, -1000};
    std::vector<std::map<VarId, double>> starts;
    std::vector<std::size_t> idx(vars.size(), 0);
    for (;;) {
        std::map<VarId, double> asg;
        for (std::size_t i = 0; i < vars.size(); ++i) asg[vars[i]] = mags[idx[i]];
        starts.push_back(std::move(asg));
        std::size_t i = 0;
        while (i < vars.size() && ++idx[i] == std::size(mags)) idx[i++] = 0;
        if (i == vars.size()) break;
        if (starts.size() > 20000) break;
    }
    std::sort(starts.begin(), starts.end(),
              [&](const auto& a, const auto& b) { return objective(a) < objective(b); });
    if (starts.size() > 8) starts.resize(8);

    for (auto& point : starts) {
        double best = objective(point);
        std::map<VarId, double> steps;
        for (VarId v : vars) steps[v] = std::max(1.0, std::abs(point[v]));
        for (int iter = 0; iter < 400; ++iter) {
            if (best < -1e-9 && verify(point)) return true;
            bool improved = false;
            for (VarId v : vars) {
                for (double dir : {1.0, -1.0}) {
                    std::map<VarId, double> cand = point;
                    cand[v] += dir * steps[v];
                    double obj = objective(cand);
                    if (obj < best) {
                        best = obj;
                        point = std::move(cand);
                        improved = true;
                    }
                }
            }
            if (improved) {
                for (VarId v : vars) steps[v] *= 1.6;
            } else {
                bool all_tiny = true;
                for (VarId v : vars) {
                    steps[v] *= 0.5;
                    if (steps[v] > 1e-9) all_tiny = false;
                }
                if (all_tiny) break;
            }
        }
        if (best < 0 && verify(point)) return true;
    }
    return false;
}

}  // namespace

bool decide(const FormulaRef& f, const QeOptions& opts) {
    FormulaRef g = simplify_basic(f);
    if (!free_variables(g).empty()) {
        throw std::invalid_argument("decide: formula is not closed");
    }
    if (g->is_true()) return true;
    if (g->is_false()) return false;

    PrenexForm pf = to_prenex(g);
    bool uniform = !pf.blocks.empty() &&
                   std::all_of(pf.blocks.begin(), pf.blocks.end(),
                               [&](const auto& b) { return b.first == pf.blocks[0].first; });
    if (uniform && pf.matrix->is_quantifier_free()) {
        // A single exact rational point settles a uniform block: a witness
        // proves an existential closure, a counterexample refutes a universal
        // one. The search is bounded and purely an accelerator.
        std::vector<VarId> vars;
        for (const auto& b : pf.blocks) vars.push_back(b.second);
        bool existential = pf.blocks[0].first == FormulaKind::Exists;
        std::map<VarId, Rational> assignment;
        if (search_samples(pf.matrix, vars, assignment, 0, existential)) return existential;
        if (search_hill_climb(pf.matrix, vars, existential)) return existential;
    }

    FormulaRef res = qe(g, opts);
    if (res->is_true()) return true;
    if (res->is_false()) return false;
    throw std::logic_error("decide: quantifier elimination left a non-ground residue");
}

}  // namespace polybound
