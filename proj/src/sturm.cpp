#include "polybound/sturm.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <stdexcept>

namespace polybound {

UniPoly::UniPoly(std::vector<Rational> coeffs) : coeffs_(std::move(coeffs)) { trim(); }

void UniPoly::trim() {
    while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

UniPoly UniPoly::from_polynomial(const Polynomial& p, VarId v) {
    std::vector<Rational> coeffs;
    auto parts = p.univariate_coeffs(v);
    coeffs.reserve(parts.size());
    for (const auto& part : parts) {
        if (!part.is_constant()) {
            throw std::invalid_argument("UniPoly: polynomial is not univariate in " + var_name(v));
        }
        coeffs.push_back(part.constant_value());
    }
    return UniPoly(std::move(coeffs));
}

Rational UniPoly::eval(const Rational& x) const {
    Rational acc(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) acc = acc * x + *it;
    return acc;
}

UniPoly UniPoly::derivative() const {
    std::vector<Rational> out;
    for (std::size_t i = 1; i < coeffs_.size(); ++i) {
        out.push_back(coeffs_[i] * Rational(static_cast<long>(i)));
    }
    return UniPoly(std::move(out));
}

UniPoly UniPoly::operator*(const UniPoly& q) const {
    if (is_zero() || q.is_zero()) return UniPoly{};
    std::vector<Rational> out(coeffs_.size() + q.coeffs_.size() - 1, Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i)
        for (std::size_t j = 0; j < q.coeffs_.size(); ++j) out[i + j] += coeffs_[i] * q.coeffs_[j];
    return UniPoly(std::move(out));
}

UniPoly UniPoly::operator-(const UniPoly& q) const {
    std::vector<Rational> out(std::max(coeffs_.size(), q.coeffs_.size()), Rational(0));
    for (std::size_t i = 0; i < coeffs_.size(); ++i) out[i] += coeffs_[i];
    for (std::size_t i = 0; i < q.coeffs_.size(); ++i) out[i] -= q.coeffs_[i];
    return UniPoly(std::move(out));
}

UniPoly UniPoly::rem(const UniPoly& q) const {
    if (q.is_zero()) throw std::invalid_argument("UniPoly::rem: division by zero polynomial");
    std::vector<Rational> r = coeffs_;
    int dq = q.degree();
    while (static_cast<int>(r.size()) - 1 >= dq) {
        while (!r.empty() && r.back() == 0) r.pop_back();
        if (static_cast<int>(r.size()) - 1 < dq) break;
        Rational factor = r.back() / q.leading();
        std::size_t shift = r.size() - 1 - static_cast<std::size_t>(dq);
        for (std::size_t i = 0; i < q.coeffs_.size(); ++i) {
            r[i + shift] -= factor * q.coeffs_[i];
        }
        r.pop_back();
    }
    return UniPoly(std::move(r));
}

UniPoly UniPoly::primitive() const {
    if (is_zero()) return *this;
    // Scale by a positive rational so that the coefficients become integers
    // with gcd 1; keeps remainder sequences from exploding in bit size.
    BigInt num_gcd = 0, den_lcm = 1;
    for (const auto& c : coeffs_) {
        num_gcd = boost::multiprecision::gcd(num_gcd, boost::multiprecision::numerator(c));
        den_lcm = boost::multiprecision::lcm(den_lcm, boost::multiprecision::denominator(c));
    }
    if (num_gcd < 0) num_gcd = -num_gcd;
    Rational scale(den_lcm, num_gcd);
    std::vector<Rational> out;
    out.reserve(coeffs_.size());
    for (const auto& c : coeffs_) out.push_back(c * scale);
    return UniPoly(std::move(out));
}

UniPoly UniPoly::gcd(const UniPoly& q) const {
    UniPoly a = this->primitive(), b = q.primitive();
    while (!b.is_zero()) {
        UniPoly r = a.rem(b).primitive();
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.is_zero()) {
        Rational lead = a.leading();
        for (auto& c : a.coeffs_) c /= lead;
    }
    return a;
}

UniPoly UniPoly::div_exact(const UniPoly& q) const {
    if (q.is_zero()) throw std::invalid_argument("UniPoly::div_exact: division by zero");
    if (is_zero()) return *this;
    if (degree() < q.degree()) throw std::invalid_argument("UniPoly::div_exact: not divisible");
    std::vector<Rational> quotient(coeffs_.size() - q.coeffs_.size() + 1, Rational(0));
    std::vector<Rational> r = coeffs_;
    int dq = q.degree();
    while (static_cast<int>(r.size()) - 1 >= dq) {
        while (!r.empty() && r.back() == 0) r.pop_back();
        if (static_cast<int>(r.size()) - 1 < dq) break;
        Rational factor = r.back() / q.leading();
        std::size_t shift = r.size() - 1 - static_cast<std::size_t>(dq);
        quotient[shift] = factor;
        for (std::size_t i = 0; i < q.coeffs_.size(); ++i) r[i + shift] -= factor * q.coeffs_[i];
        r.pop_back();
    }
    return UniPoly(std::move(quotient));
}

UniPoly UniPoly::squarefree_part() const {
    if (degree() <= 1) return *this;
    UniPoly g = gcd(derivative());
    if (g.degree() == 0) return *this;
    return div_exact(g);
}

UniPoly UniPoly::deflate(const Rational& root) const {
    if (is_zero()) return *this;
    // Synthetic division by (v - root).
    std::vector<Rational> out(coeffs_.size() - 1, Rational(0));
    Rational carry = coeffs_.back();
    for (std::size_t i = coeffs_.size() - 1; i-- > 0;) {
        out[i] = carry;
        carry = coeffs_[i] + carry * root;
    }
    if (carry != 0) throw std::invalid_argument("UniPoly::deflate: not a root");
    return UniPoly(std::move(out));
}

Rational UniPoly::root_bound() const {
    if (degree() < 1) return Rational(1);
    Rational m(0);
    for (std::size_t i = 0; i + 1 < coeffs_.size(); ++i) {
        Rational a = coeffs_[i] / leading();
        if (a < 0) a = -a;
        if (a > m) m = a;
    }
    return m + 1;
}

std::vector<UniPoly> UniPoly::sturm_chain() const {
    std::vector<UniPoly> chain;
    chain.push_back(this->primitive());
    UniPoly d = derivative().primitive();
    if (!d.is_zero()) chain.push_back(std::move(d));
    while (chain.size() >= 2 && !chain.back().is_zero()) {
        UniPoly r = chain[chain.size() - 2].rem(chain.back());
        if (r.is_zero()) break;
        for (auto& c : r.coeffs_) c = -c;
        // Positive rescaling preserves every sign in the sequence.
        chain.push_back(r.primitive());
    }
    return chain;
}

namespace {

int sign_variations(const std::vector<UniPoly>& chain, const Rational& x) {
    int variations = 0;
    int prev = 0;
    for (const auto& p : chain) {
        int s = sign(p.eval(x));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++variations;
        prev = s;
    }
    return variations;
}

// Sturm chain computed once, queried many times.
struct ChainCounter {
    std::vector<UniPoly> chain;
    explicit ChainCounter(const UniPoly& p) : chain(p.sturm_chain()) {}
    int count(const Rational& a, const Rational& b) const {
        return sign_variations(chain, a) - sign_variations(chain, b);
    }
};

}  // namespace

int UniPoly::count_roots(const Rational& a, const Rational& b) const {
    if (degree() < 1) return 0;
    return ChainCounter(*this).count(a, b);
}

namespace {

}  // namespace

std::vector<IsolatedRoot> isolate_real_roots(const UniPoly& p) {
    UniPoly work = p.squarefree_part().primitive();
    if (work.degree() < 1) return {};

    // Bisection with deflation: a rational root discovered at a midpoint is
    // recorded exactly, divided out, and the isolation restarts on the
    // (rare) smaller polynomial.
    std::vector<IsolatedRoot> exact_entries;
    std::vector<IsolatedRoot> intervals;
    bool restart = true;
    while (restart) {
        restart = false;
        intervals.clear();
        if (work.degree() < 1) break;
        ChainCounter counter(work);
        Rational bound = work.root_bound();
        std::vector<std::pair<Rational, Rational>> stack{{-bound, bound}};
        while (!stack.empty()) {
            auto [a, b] = stack.back();
            stack.pop_back();
            int n = counter.count(a, b);
            if (n == 0) continue;
            if (n == 1) {
                IsolatedRoot r;
                r.lo = a;
                r.hi = b;
                intervals.push_back(r);
                continue;
            }
            Rational m = (a + b) / 2;
            if (work.eval(m) == 0) {
                IsolatedRoot r;
                r.exact = true;
                r.value = m;
                r.lo = r.hi = m;
                exact_entries.push_back(r);
                work = work.deflate(m).primitive();
                restart = true;
                break;
            }
            stack.emplace_back(a, m);
            stack.emplace_back(m, b);
        }
    }

    // Exclude every exact rational root from the closed span of every
    // interval entry so that endpoints are reliable sign-sample points.
    if (!intervals.empty() && !exact_entries.empty()) {
        ChainCounter counter(work);
        for (auto& iv : intervals) {
            for (;;) {
                bool clean = true;
                for (const auto& ex : exact_entries) {
                    if (ex.value >= iv.lo && ex.value <= iv.hi) {
                        clean = false;
                        break;
                    }
                }
                if (clean) break;
                Rational m = (iv.lo + iv.hi) / 2;
                if (work.eval(m) == 0) {
                    iv.exact = true;
                    iv.value = m;
                    iv.lo = iv.hi = m;
                    break;
                }
                if (counter.count(iv.lo, m) == 1) {
                    iv.hi = m;
                } else {
                    iv.lo = m;
                }
            }
        }
    }

    std::vector<IsolatedRoot> all;
    all.reserve(intervals.size() + exact_entries.size());
    for (auto& iv : intervals) all.push_back(std::move(iv));
    for (auto& ex : exact_entries) all.push_back(std::move(ex));
    std::sort(all.begin(), all.end(),
              [](const IsolatedRoot& x, const IsolatedRoot& y) { return x.lo < y.lo; });
    return all;
}

namespace {

struct AtomInfo {
    UniPoly poly;
    std::set<std::size_t> factors;  // basis elements dividing the squarefree part
};

bool eval_with_signs(const FormulaRef& f, const std::map<Polynomial, std::size_t>& index,
                     const std::vector<int>& signs) {
    switch (f->kind()) {
        case FormulaKind::True:
            return true;
        case FormulaKind::False:
            return false;
        case FormulaKind::Atomic: {
            auto it = index.find(f->atom().lhs);
            if (it == index.end()) throw std::logic_error("decide_exists_univariate: unindexed atom");
            return rel_holds(f->atom().rel, signs[it->second]);
        }
        case FormulaKind::Not:
            return !eval_with_signs(f->child(), index, signs);
        case FormulaKind::And:
            for (const auto& c : f->children())
                if (!eval_with_signs(c, index, signs)) return false;
            return true;
        case FormulaKind::Or:
            for (const auto& c : f->children())
                if (eval_with_signs(c, index, signs)) return true;
            return false;
        default:
            throw std::invalid_argument("decide_exists_univariate: quantified input");
    }
}

void collect_atom_polys(const FormulaRef& f, std::map<Polynomial, std::size_t>& index,
                        std::vector<AtomInfo>& infos, VarId v) {
    if (f->kind() == FormulaKind::Atomic) {
        const Polynomial& p = f->atom().lhs;
        if (index.count(p)) return;
        AtomInfo info;
        info.poly = UniPoly::from_polynomial(p, v);  // throws if not univariate in v
        index.emplace(p, infos.size());
        infos.push_back(std::move(info));
        return;
    }
    for (const auto& c : f->children()) collect_atom_polys(c, index, infos, v);
}

// Insert a squarefree polynomial into a pairwise-coprime (gcd-free) basis.
void add_to_basis(UniPoly q, std::vector<UniPoly>& basis) {
    q = q.primitive();
    for (std::size_t i = 0; i < basis.size() && q.degree() >= 1; ++i) {
        UniPoly g = basis[i].gcd(q);
        if (g.degree() < 1) continue;
        UniPoly rest = basis[i].div_exact(g).primitive();
        q = q.div_exact(g).primitive();
        basis[i] = g.primitive();
        if (rest.degree() >= 1) basis.push_back(std::move(rest));
    }
    if (q.degree() >= 1) basis.push_back(std::move(q));
}

struct RootEntry {
    IsolatedRoot root;
    std::size_t elem;  // owning basis element
};

}  // namespace

bool decide_exists_univariate(const FormulaRef& f, VarId v) {
    std::map<Polynomial, std::size_t> index;
    std::vector<AtomInfo> infos;
    collect_atom_polys(f, index, infos, v);
    if (infos.empty()) return eval_with_signs(f, index, {});

    // Pairwise-coprime basis of the distinct squarefree parts: every atom
    // root is a root of exactly one basis element, and roots of distinct
    // elements are distinct, so isolating intervals can always be separated.
    std::vector<UniPoly> squarefree(infos.size());
    std::vector<UniPoly> basis;
    for (std::size_t i = 0; i < infos.size(); ++i) {
        squarefree[i] = infos[i].poly.squarefree_part().primitive();
        add_to_basis(squarefree[i], basis);
    }
    for (std::size_t i = 0; i < infos.size(); ++i) {
        for (std::size_t j = 0; j < basis.size(); ++j) {
            if (squarefree[i].degree() >= basis[j].degree() &&
                squarefree[i].rem(basis[j]).is_zero()) {
                infos[i].factors.insert(j);
            }
        }
    }

    std::vector<ChainCounter> counters;
    counters.reserve(basis.size());
    std::vector<RootEntry> entries;
    for (std::size_t j = 0; j < basis.size(); ++j) {
        counters.emplace_back(basis[j]);
        for (auto& r : isolate_real_roots(basis[j])) {
            entries.push_back({std::move(r), j});
        }
    }

    auto refine = [&](RootEntry& e) {
        Rational m = (e.root.lo + e.root.hi) / 2;
        if (basis[e.elem].eval(m) == 0) {
            e.root.exact = true;
            e.root.value = m;
            e.root.lo = e.root.hi = m;
            return;
        }
        if (counters[e.elem].count(e.root.lo, m) == 1) {
            e.root.hi = m;
        } else {
            e.root.lo = m;
        }
    };

    // Separate all isolating intervals (closed-span disjoint, exact values
    // outside every interval). Terminates because all the roots are distinct.
    bool changed = true;
    while (changed) {
        changed = false;
        std::sort(entries.begin(), entries.end(), [](const RootEntry& a, const RootEntry& b) {
            if (a.root.lo != b.root.lo) return a.root.lo < b.root.lo;
            return a.root.hi < b.root.hi;
        });
        for (std::size_t k = 0; k + 1 < entries.size(); ++k) {
            RootEntry& a = entries[k];
            RootEntry& b = entries[k + 1];
            bool overlap;
            if (a.root.exact && b.root.exact) {
                overlap = false;  // distinct rationals
            } else if (a.root.exact) {
                overlap = a.root.value >= b.root.lo && a.root.value <= b.root.hi;
                if (overlap) refine(b);
            } else if (b.root.exact) {
                overlap = b.root.value <= a.root.hi;
                if (overlap) refine(a);
            } else {
                overlap = b.root.lo < a.root.hi;
                if (overlap) refine(a.root.hi - a.root.lo >= b.root.hi - b.root.lo ? a : b);
            }
            if (overlap) changed = true;
        }
    }

    // Sample points: one per gap between consecutive roots, plus the outside.
    std::vector<Rational> samples;
    if (entries.empty()) {
        samples.push_back(Rational(0));
    } else {
        samples.push_back(entries.front().root.lo - 1);
        for (std::size_t k = 0; k + 1 < entries.size(); ++k) {
            const auto& cur = entries[k].root;
            const auto& nxt = entries[k + 1].root;
            if (!nxt.exact) {
                samples.push_back(nxt.lo);
            } else if (!cur.exact) {
                samples.push_back(cur.hi);
            } else {
                samples.push_back((cur.value + nxt.value) / 2);
            }
        }
        samples.push_back(entries.back().root.hi + 1);
    }

    std::vector<int> signs(infos.size());
    for (const auto& s : samples) {
        for (std::size_t i = 0; i < infos.size(); ++i) signs[i] = sign(infos[i].poly.eval(s));
        if (eval_with_signs(f, index, signs)) return true;
    }
    for (const auto& entry : entries) {
        for (std::size_t i = 0; i < infos.size(); ++i) {
            if (infos[i].factors.count(entry.elem)) {
                signs[i] = 0;
            } else if (entry.root.exact) {
                signs[i] = sign(infos[i].poly.eval(entry.root.value));
            } else {
                signs[i] = sign(infos[i].poly.eval(entry.root.hi));
            }
        }
        if (eval_with_signs(f, index, signs)) return true;
    }
    return false;
}

}  // namespace polybound
