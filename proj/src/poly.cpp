#include "polybound/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace polybound {

Monomial Monomial::variable(VarId v, int exp) {
    Monomial m;
    if (exp < 0) throw std::invalid_argument("Monomial::variable: negative exponent");
    if (exp > 0) m.factors_.emplace_back(v, exp);
    return m;
}

int Monomial::exponent(VarId v) const {
    for (const auto& [w, e] : factors_)
        if (w == v) return e;
    return 0;
}

int Monomial::total_degree() const {
    int d = 0;
    for (const auto& [w, e] : factors_) d += e;
    return d;
}

Monomial Monomial::operator*(const Monomial& other) const {
    Monomial out;
    auto a = factors_.begin(), ae = factors_.end();
    auto b = other.factors_.begin(), be = other.factors_.end();
    while (a != ae || b != be) {
        if (b == be || (a != ae && a->first < b->first)) {
            out.factors_.push_back(*a++);
        } else if (a == ae || b->first < a->first) {
            out.factors_.push_back(*b++);
        } else {
            out.factors_.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    return out;
}

bool operator<(const Monomial& a, const Monomial& b) {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    // Lexicographic on (variable, exponent) runs; a smaller VarId with a
    // higher power ranks higher, so invert accordingly.
    auto ia = a.factors_.begin(), ea = a.factors_.end();
    auto ib = b.factors_.begin(), eb = b.factors_.end();
    while (ia != ea && ib != eb) {
        if (ia->first != ib->first) return ib->first < ia->first;
        if (ia->second != ib->second) return ia->second < ib->second;
        ++ia;
        ++ib;
    }
    return ib != eb;
}

bool operator==(const Monomial& a, const Monomial& b) {
    return a.factors_ == b.factors_;
}

std::string Monomial::to_string() const {
    if (factors_.empty()) return "1";
    std::string s;
    for (const auto& [v, e] : factors_) {
        if (!s.empty()) s += "*";
        s += var_name(v);
        if (e > 1) s += "^" + std::to_string(e);
    }
    return s;
}

Polynomial::Polynomial(const Rational& c) {
    if (c != 0) terms_.emplace(Monomial::one(), c);
}

Polynomial Polynomial::variable(VarId v) {
    Polynomial p;
    p.terms_.emplace(Monomial::variable(v), Rational(1));
    return p;
}

Polynomial Polynomial::term(const Rational& c, const Monomial& m) {
    Polynomial p;
    if (c != 0) p.terms_.emplace(m, c);
    return p;
}

bool Polynomial::is_constant() const {
    return terms_.empty() || (terms_.size() == 1 && terms_.begin()->first.is_one());
}

Rational Polynomial::constant_value() const {
    if (terms_.empty()) return Rational(0);
    if (!is_constant()) throw std::logic_error("constant_value on non-constant polynomial");
    return terms_.begin()->second;
}

void Polynomial::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    auto it = terms_.find(m);
    if (it == terms_.end()) {
        terms_.emplace(m, c);
    } else {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

Polynomial Polynomial::operator+(const Polynomial& q) const {
    Polynomial out = *this;
    for (const auto& [m, c] : q.terms_) out.add_term(m, c);
    return out;
}

Polynomial Polynomial::operator-(const Polynomial& q) const {
    Polynomial out = *this;
    for (const auto& [m, c] : q.terms_) out.add_term(m, -c);
    return out;
}

Polynomial Polynomial::operator-() const {
    Polynomial out;
    for (const auto& [m, c] : terms_) out.terms_.emplace(m, -c);
    return out;
}

Polynomial Polynomial::operator*(const Polynomial& q) const {
    Polynomial out;
    for (const auto& [ma, ca] : terms_) {
        for (const auto& [mb, cb] : q.terms_) {
            out.add_term(ma * mb, ca * cb);
        }
    }
    return out;
}

Polynomial Polynomial::pow(int n) const {
    if (n < 0) throw std::invalid_argument("Polynomial::pow: negative exponent");
    Polynomial out{Rational(1)};
    Polynomial base = *this;
    while (n > 0) {
        if (n & 1) out = out * base;
        base = base * base;
        n >>= 1;
    }
    return out;
}

bool operator==(const Polynomial& a, const Polynomial& b) {
    return a.terms_ == b.terms_;
}

bool operator<(const Polynomial& a, const Polynomial& b) {
    return std::lexicographical_compare(
        a.terms_.begin(), a.terms_.end(), b.terms_.begin(), b.terms_.end(),
        [](const auto& ta, const auto& tb) {
            if (ta.first != tb.first) return ta.first < tb.first;
            return ta.second < tb.second;
        });
}

Polynomial Polynomial::derivative(VarId v) const {
    Polynomial out;
    for (const auto& [m, c] : terms_) {
        int e = m.exponent(v);
        if (e == 0) continue;
        Monomial reduced;
        for (const auto& [w, k] : m.factors()) {
            if (w == v) {
                if (k > 1) reduced = reduced * Monomial::variable(w, k - 1);
            } else {
                reduced = reduced * Monomial::variable(w, k);
            }
        }
        out.add_term(reduced, c * e);
    }
    return out;
}

int Polynomial::degree(VarId v) const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.exponent(v));
    return d;
}

int Polynomial::total_degree() const {
    int d = 0;
    for (const auto& [m, c] : terms_) d = std::max(d, m.total_degree());
    return d;
}

bool Polynomial::contains(VarId v) const {
    for (const auto& [m, c] : terms_)
        if (m.exponent(v) > 0) return true;
    return false;
}

std::set<VarId> Polynomial::variables() const {
    std::set<VarId> vars;
    for (const auto& [m, c] : terms_)
        for (const auto& [v, e] : m.factors()) vars.insert(v);
    return vars;
}

std::vector<Polynomial> Polynomial::univariate_coeffs(VarId v) const {
    int d = degree(v);
    std::vector<Polynomial> coeffs(static_cast<std::size_t>(d) + 1);
    for (const auto& [m, c] : terms_) {
        int e = m.exponent(v);
        Monomial rest;
        for (const auto& [w, k] : m.factors())
            if (w != v) rest = rest * Monomial::variable(w, k);
        coeffs[static_cast<std::size_t>(e)].add_term(rest, c);
    }
    return coeffs;
}

void Polynomial::even_odd_split(VarId v, VarId y, Polynomial& even_part,
                                Polynomial& odd_part) const {
    even_part = Polynomial();
    odd_part = Polynomial();
    for (const auto& [m, c] : terms_) {
        int e = m.exponent(v);
        Monomial rest;
        for (const auto& [w, k] : m.factors())
            if (w != v) rest = rest * Monomial::variable(w, k);
        if (e % 2 == 0) {
            even_part.add_term(rest * Monomial::variable(y, e / 2), c);
        } else {
            odd_part.add_term(rest * Monomial::variable(y, (e - 1) / 2), c);
        }
    }
}

Rational Polynomial::evaluate(const std::map<VarId, Rational>& assignment) const {
    Rational total(0);
    for (const auto& [m, c] : terms_) {
        Rational value = c;
        for (const auto& [v, e] : m.factors()) {
            auto it = assignment.find(v);
            if (it == assignment.end()) {
                throw std::invalid_argument("evaluate: unassigned variable " + var_name(v));
            }
            for (int k = 0; k < e; ++k) value *= it->second;
        }
        total += value;
    }
    return total;
}

double Polynomial::evaluate_double(const std::map<VarId, double>& assignment) const {
    double total = 0.0;
    for (const auto& [m, c] : terms_) {
        double value = to_double(c);
        for (const auto& [v, e] : m.factors()) {
            auto it = assignment.find(v);
            if (it == assignment.end()) {
                throw std::invalid_argument("evaluate: unassigned variable " + var_name(v));
            }
            for (int k = 0; k < e; ++k) value *= it->second;
        }
        total += value;
    }
    return total;
}

Polynomial Polynomial::substitute(VarId v, const Rational& value) const {
    Polynomial out;
    for (const auto& [m, c] : terms_) {
        int e = m.exponent(v);
        Rational coeff = c;
        for (int k = 0; k < e; ++k) coeff *= value;
        if (coeff == 0) continue;
        Monomial rest;
        for (const auto& [w, k] : m.factors())
            if (w != v) rest = rest * Monomial::variable(w, k);
        out.add_term(rest, coeff);
    }
    return out;
}

Polynomial Polynomial::substitute(VarId v, const Polynomial& value) const {
    Polynomial out;
    for (const auto& [m, c] : terms_) {
        int e = m.exponent(v);
        Monomial rest;
        for (const auto& [w, k] : m.factors())
            if (w != v) rest = rest * Monomial::variable(w, k);
        Polynomial piece = Polynomial::term(c, rest);
        if (e > 0) piece = piece * value.pow(e);
        out = out + piece;
    }
    return out;
}

std::string Polynomial::to_string() const {
    if (terms_.empty()) return "0";
    std::string s;
    // Highest monomial first for readability.
    for (auto it = terms_.rbegin(); it != terms_.rend(); ++it) {
        const auto& [m, c] = *it;
        Rational abs_c = c < 0 ? Rational(-c) : c;
        if (s.empty()) {
            if (c < 0) s += "-";
        } else {
            s += (c < 0) ? " - " : " + ";
        }
        if (m.is_one()) {
            s += rational_to_string(abs_c);
        } else if (abs_c == 1) {
            s += m.to_string();
        } else {
            s += rational_to_string(abs_c) + "*" + m.to_string();
        }
    }
    return s;
}

Polynomial operator*(const Rational& c, const Polynomial& p) {
    return Polynomial(c) * p;
}

}  // namespace polybound
