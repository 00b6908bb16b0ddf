#include "polybound/formula.hpp"

#include <algorithm>
#include <cctype>

namespace polybound {

Rel negate_rel(Rel r) {
    switch (r) {
        case Rel::Lt: return Rel::Ge;
        case Rel::Le: return Rel::Gt;
        case Rel::Eq: return Rel::Ne;
        case Rel::Ne: return Rel::Eq;
        case Rel::Ge: return Rel::Lt;
        case Rel::Gt: return Rel::Le;
    }
    throw std::logic_error("negate_rel");
}

Rel flip_rel(Rel r) {
    switch (r) {
        case Rel::Lt: return Rel::Gt;
        case Rel::Le: return Rel::Ge;
        case Rel::Eq: return Rel::Eq;
        case Rel::Ne: return Rel::Ne;
        case Rel::Ge: return Rel::Le;
        case Rel::Gt: return Rel::Lt;
    }
    throw std::logic_error("flip_rel");
}

bool rel_holds(Rel r, int s) {
    switch (r) {
        case Rel::Lt: return s < 0;
        case Rel::Le: return s <= 0;
        case Rel::Eq: return s == 0;
        case Rel::Ne: return s != 0;
        case Rel::Ge: return s >= 0;
        case Rel::Gt: return s > 0;
    }
    throw std::logic_error("rel_holds");
}

bool is_strict(Rel r) {
    return r == Rel::Lt || r == Rel::Gt || r == Rel::Ne;
}

std::string rel_to_string(Rel r) {
    switch (r) {
        case Rel::Lt: return "<";
        case Rel::Le: return "<=";
        case Rel::Eq: return "=";
        case Rel::Ne: return "!=";
        case Rel::Ge: return ">=";
        case Rel::Gt: return ">";
    }
    throw std::logic_error("rel_to_string");
}

bool Formula::is_quantifier_free() const {
    if (kind_ == FormulaKind::Exists || kind_ == FormulaKind::Forall) return false;
    for (const auto& c : children_)
        if (!c->is_quantifier_free()) return false;
    return true;
}

std::size_t Formula::atom_count() const {
    if (kind_ == FormulaKind::Atomic) return 1;
    std::size_t n = 0;
    for (const auto& c : children_) n += c->atom_count();
    return n;
}

FormulaRef Formula::make(FormulaKind k, Atom a, std::vector<FormulaRef> ch, VarId v) {
    auto node = std::make_shared<Formula>();
    node->kind_ = k;
    node->atom_ = std::move(a);
    node->children_ = std::move(ch);
    node->qvar_ = v;
    return node;
}

namespace {

int formula_compare(const FormulaRef& a, const FormulaRef& b) {
    if (a.get() == b.get()) return 0;
    if (a->kind() != b->kind()) return a->kind() < b->kind() ? -1 : 1;
    switch (a->kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return 0;
        case FormulaKind::Atomic: {
            const Atom& x = a->atom();
            const Atom& y = b->atom();
            if (x == y) return 0;
            return x < y ? -1 : 1;
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            if (a->quantified_var() != b->quantified_var())
                return a->quantified_var() < b->quantified_var() ? -1 : 1;
            return formula_compare(a->child(), b->child());
        default: {
            if (a->children().size() != b->children().size())
                return a->children().size() < b->children().size() ? -1 : 1;
            for (std::size_t i = 0; i < a->children().size(); ++i) {
                int c = formula_compare(a->children()[i], b->children()[i]);
                if (c != 0) return c;
            }
            return 0;
        }
    }
}

struct FormulaRefLess {
    bool operator()(const FormulaRef& a, const FormulaRef& b) const {
        return formula_compare(a, b) < 0;
    }
};

}  // namespace

FormulaRef mk_true() {
    static FormulaRef t = Formula::make(FormulaKind::True, {}, {}, {});
    return t;
}

FormulaRef mk_false() {
    static FormulaRef f = Formula::make(FormulaKind::False, {}, {}, {});
    return f;
}

FormulaRef mk_atom(Polynomial lhs, Rel rel) {
    if (lhs.is_constant()) {
        return rel_holds(rel, sign(lhs.constant_value())) ? mk_true() : mk_false();
    }
    // Canonical sign: leading coefficient positive.
    if (lhs.terms().rbegin()->second < 0) {
        lhs = -lhs;
        rel = flip_rel(rel);
    }
    return Formula::make(FormulaKind::Atomic, Atom{std::move(lhs), rel}, {}, {});
}

FormulaRef mk_not(FormulaRef f) {
    switch (f->kind()) {
        case FormulaKind::True: return mk_false();
        case FormulaKind::False: return mk_true();
        case FormulaKind::Atomic: return mk_atom(f->atom().lhs, negate_rel(f->atom().rel));
        case FormulaKind::Not: return f->child();
        default: return Formula::make(FormulaKind::Not, {}, {std::move(f)}, {});
    }
}

namespace {

FormulaRef mk_nary(FormulaKind kind, std::vector<FormulaRef> fs) {
    const bool is_and = kind == FormulaKind::And;
    const FormulaRef absorbing = is_and ? mk_false() : mk_true();
    const FormulaRef neutral = is_and ? mk_true() : mk_false();

    std::vector<FormulaRef> flat;
    std::set<FormulaRef, FormulaRefLess> seen;
    std::vector<FormulaRef> stack(fs.rbegin(), fs.rend());
    while (!stack.empty()) {
        FormulaRef f = std::move(stack.back());
        stack.pop_back();
        if (f->kind() == kind) {
            for (auto it = f->children().rbegin(); it != f->children().rend(); ++it)
                stack.push_back(*it);
            continue;
        }
        if (f->kind() == absorbing->kind()) return absorbing;
        if (f->kind() == neutral->kind()) continue;
        if (seen.insert(f).second) flat.push_back(std::move(f));
    }
    if (flat.empty()) return neutral;
    if (flat.size() == 1) return flat.front();
    return Formula::make(kind, {}, std::move(flat), {});
}

}  // namespace

FormulaRef mk_and(std::vector<FormulaRef> fs) { return mk_nary(FormulaKind::And, std::move(fs)); }
FormulaRef mk_or(std::vector<FormulaRef> fs) { return mk_nary(FormulaKind::Or, std::move(fs)); }
FormulaRef mk_and(FormulaRef a, FormulaRef b) { return mk_and(std::vector<FormulaRef>{a, b}); }
FormulaRef mk_or(FormulaRef a, FormulaRef b) { return mk_or(std::vector<FormulaRef>{a, b}); }

FormulaRef mk_quant(FormulaKind k, VarId v, FormulaRef body) {
    if (body->is_true() || body->is_false()) return body;
    return Formula::make(k, {}, {std::move(body)}, v);
}

FormulaRef mk_exists(VarId v, FormulaRef body) {
    return mk_quant(FormulaKind::Exists, v, std::move(body));
}

FormulaRef mk_forall(VarId v, FormulaRef body) {
    return mk_quant(FormulaKind::Forall, v, std::move(body));
}

namespace {

FormulaRef rename_var(const FormulaRef& f, VarId from, VarId to) {
    switch (f->kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return f;
        case FormulaKind::Atomic:
            if (!f->atom().lhs.contains(from)) return f;
            return mk_atom(f->atom().lhs.substitute(from, Polynomial::variable(to)),
                           f->atom().rel);
        case FormulaKind::Not:
            return mk_not(rename_var(f->child(), from, to));
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<FormulaRef> ch;
            ch.reserve(f->children().size());
            for (const auto& c : f->children()) ch.push_back(rename_var(c, from, to));
            return f->kind() == FormulaKind::And ? mk_and(std::move(ch)) : mk_or(std::move(ch));
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            if (f->quantified_var() == from) return f;  // shadowed
            return mk_quant(f->kind(), f->quantified_var(), rename_var(f->child(), from, to));
        }
    }
    throw std::logic_error("rename_var");
}

void collect_variables(const FormulaRef& f, std::set<VarId>& all) {
    switch (f->kind()) {
        case FormulaKind::Atomic: {
            auto vs = f->atom().lhs.variables();
            all.insert(vs.begin(), vs.end());
            return;
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            all.insert(f->quantified_var());
            [[fallthrough]];
        default:
            for (const auto& c : f->children()) collect_variables(c, all);
    }
}

PrenexForm prenex_impl(const FormulaRef& f, std::set<VarId>& used) {
    switch (f->kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
        case FormulaKind::Atomic:
            return {{}, f};
        case FormulaKind::Not: {
            PrenexForm inner = prenex_impl(f->child(), used);
            for (auto& [k, v] : inner.blocks)
                k = (k == FormulaKind::Exists) ? FormulaKind::Forall : FormulaKind::Exists;
            inner.matrix = mk_not(inner.matrix);
            return inner;
        }
        case FormulaKind::And:
        case FormulaKind::Or: {
            PrenexForm out;
            std::vector<FormulaRef> matrices;
            // Renaming happens in the quantifier case below; `used` is shared
            // across children, so a second binder of the same name gets a
            // fresh variable there.
            for (const auto& c : f->children()) {
                PrenexForm p = prenex_impl(c, used);
                for (auto& [k, v] : p.blocks) out.blocks.emplace_back(k, v);
                matrices.push_back(p.matrix);
            }
            out.matrix = f->kind() == FormulaKind::And ? mk_and(std::move(matrices))
                                                       : mk_or(std::move(matrices));
            return out;
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            VarId v = f->quantified_var();
            PrenexForm inner = prenex_impl(f->child(), used);
            FormulaKind k = f->kind();
            if (used.count(v)) {
                VarId fresh = VarTable::instance().fresh(var_name(v));
                inner.matrix = rename_var(inner.matrix, v, fresh);
                for (auto& [bk, bv] : inner.blocks)
                    if (bv == v) bv = fresh;  // cannot happen after parsing, kept for safety
                v = fresh;
            }
            used.insert(v);
            inner.blocks.insert(inner.blocks.begin(), {k, v});
            return inner;
        }
    }
    throw std::logic_error("to_prenex");
}

}  // namespace

PrenexForm to_prenex(const FormulaRef& f) {
    std::set<VarId> used;
    // Seed with the free variables so pulled quantifiers never capture them.
    auto frees = free_variables(f);
    used.insert(frees.begin(), frees.end());
    return prenex_impl(f, used);
}

FormulaRef from_prenex(const PrenexForm& p) {
    FormulaRef f = p.matrix;
    for (auto it = p.blocks.rbegin(); it != p.blocks.rend(); ++it) {
        f = mk_quant(it->first, it->second, f);
    }
    return f;
}

FormulaRef simplify_basic(const FormulaRef& f) {
    switch (f->kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return f;
        case FormulaKind::Atomic:
            return mk_atom(f->atom().lhs, f->atom().rel);
        case FormulaKind::Not:
            return mk_not(simplify_basic(f->child()));
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<FormulaRef> ch;
            ch.reserve(f->children().size());
            for (const auto& c : f->children()) ch.push_back(simplify_basic(c));
            return f->kind() == FormulaKind::And ? mk_and(std::move(ch)) : mk_or(std::move(ch));
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            return mk_quant(f->kind(), f->quantified_var(), simplify_basic(f->child()));
    }
    throw std::logic_error("simplify_basic");
}

bool eval_ground_cached(const FormulaRef& f, const std::map<VarId, Rational>& assignment,
                        std::unordered_map<const Formula*, bool>& cache) {
    switch (f->kind()) {
        case FormulaKind::True: return true;
        case FormulaKind::False: return false;
        case FormulaKind::Atomic: {
            auto it = cache.find(f.get());
            if (it != cache.end()) return it->second;
            bool v = rel_holds(f->atom().rel, sign(f->atom().lhs.evaluate(assignment)));
            cache.emplace(f.get(), v);
            return v;
        }
        case FormulaKind::Not:
            return !eval_ground_cached(f->child(), assignment, cache);
        case FormulaKind::And:
            for (const auto& c : f->children())
                if (!eval_ground_cached(c, assignment, cache)) return false;
            return true;
        case FormulaKind::Or:
            for (const auto& c : f->children())
                if (eval_ground_cached(c, assignment, cache)) return true;
            return false;
        default:
            throw std::invalid_argument("eval_ground: formula contains quantifiers");
    }
}

bool eval_ground(const FormulaRef& f, const std::map<VarId, Rational>& assignment) {
    std::unordered_map<const Formula*, bool> cache;
    return eval_ground_cached(f, assignment, cache);
}

FormulaRef substitute(const FormulaRef& f, VarId v, const Rational& value) {
    switch (f->kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
            return f;
        case FormulaKind::Atomic:
            if (!f->atom().lhs.contains(v)) return f;
            return mk_atom(f->atom().lhs.substitute(v, value), f->atom().rel);
        case FormulaKind::Not:
            return mk_not(substitute(f->child(), v, value));
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<FormulaRef> ch;
            ch.reserve(f->children().size());
            for (const auto& c : f->children()) ch.push_back(substitute(c, v, value));
            return f->kind() == FormulaKind::And ? mk_and(std::move(ch)) : mk_or(std::move(ch));
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            if (f->quantified_var() == v) return f;
            return mk_quant(f->kind(), f->quantified_var(), substitute(f->child(), v, value));
    }
    throw std::logic_error("substitute");
}

namespace {

void free_vars_impl(const FormulaRef& f, std::set<VarId>& bound, std::set<VarId>& out) {
    switch (f->kind()) {
        case FormulaKind::Atomic:
            for (VarId v : f->atom().lhs.variables())
                if (!bound.count(v)) out.insert(v);
            return;
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            bool inserted = bound.insert(f->quantified_var()).second;
            free_vars_impl(f->child(), bound, out);
            if (inserted) bound.erase(f->quantified_var());
            return;
        }
        default:
            for (const auto& c : f->children()) free_vars_impl(c, bound, out);
    }
}

}  // namespace

std::set<VarId> free_variables(const FormulaRef& f) {
    std::set<VarId> bound, out;
    free_vars_impl(f, bound, out);
    return out;
}

// ---------------------------------------------------------------------------
// Printer
// ---------------------------------------------------------------------------

namespace {

bool needs_parens_as_operand(const FormulaRef& f) {
    switch (f->kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
        case FormulaKind::Atomic:
        case FormulaKind::Not:
            return false;
        default:
            return true;
    }
}

void print_impl(const FormulaRef& f, std::string& out) {
    switch (f->kind()) {
        case FormulaKind::True: out += "true"; return;
        case FormulaKind::False: out += "false"; return;
        case FormulaKind::Atomic:
            out += f->atom().lhs.to_string();
            out += " " + rel_to_string(f->atom().rel) + " 0";
            return;
        case FormulaKind::Not: {
            out += "!";
            const auto& c = f->child();
            out += "(";
            print_impl(c, out);
            out += ")";
            return;
        }
        case FormulaKind::And:
        case FormulaKind::Or: {
            const char* sep = f->kind() == FormulaKind::And ? " & " : " | ";
            bool first = true;
            for (const auto& c : f->children()) {
                if (!first) out += sep;
                first = false;
                bool parens = needs_parens_as_operand(c) ||
                              (f->kind() == FormulaKind::And && c->kind() == FormulaKind::Or);
                if (c->kind() == FormulaKind::Atomic) parens = true;
                if (parens) out += "(";
                print_impl(c, out);
                if (parens) out += ")";
            }
            return;
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall:
            out += (f->kind() == FormulaKind::Exists) ? "E " : "A ";
            out += var_name(f->quantified_var());
            out += ". ";
            print_impl(f->child(), out);
            return;
    }
}

}  // namespace

std::string print_formula(const FormulaRef& f) {
    std::string out;
    print_impl(f, out);
    return out;
}

// ---------------------------------------------------------------------------
// Parser
// ---------------------------------------------------------------------------

namespace {

enum class Tok {
    End, Ident, Number,
    LParen, RParen, Dot,
    Plus, Minus, Star, Caret,
    Lt, Le, Eq, Ne, Ge, Gt,
    AndOp, OrOp, NotOp, Imp, Iff,
};

struct Token {
    Tok kind;
    std::string text;
    int line, col;
};

std::vector<Token> tokenize(const std::string& src) {
    std::vector<Token> out;
    std::size_t pos = 0;
    int line = 1, col = 1;
    while (pos < src.size()) {
        char c = src[pos];
        if (std::isspace(static_cast<unsigned char>(c))) {
            if (c == '\n') {
                ++line;
                col = 1;
            } else {
                ++col;
            }
            ++pos;
            continue;
        }
        Token t;
        t.line = line;
        t.col = col;
        auto take = [&](std::size_t n, Tok k) {
            t.kind = k;
            t.text = src.substr(pos, n);
            pos += n;
            col += static_cast<int>(n);
            out.push_back(t);
        };
        if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
            std::size_t end = pos;
            while (end < src.size() &&
                   (std::isalnum(static_cast<unsigned char>(src[end])) || src[end] == '_' ||
                    src[end] == '$'))
                ++end;
            take(end - pos, Tok::Ident);
            continue;
        }
        if (std::isdigit(static_cast<unsigned char>(c))) {
            std::size_t end = pos;
            while (end < src.size() && std::isdigit(static_cast<unsigned char>(src[end]))) ++end;
            // A '/' directly followed by digits extends the literal to a rational.
            if (end < src.size() && src[end] == '/' && end + 1 < src.size() &&
                std::isdigit(static_cast<unsigned char>(src[end + 1]))) {
                ++end;
                while (end < src.size() && std::isdigit(static_cast<unsigned char>(src[end])))
                    ++end;
            }
            take(end - pos, Tok::Number);
            continue;
        }
        auto starts = [&](const char* s) {
            return src.compare(pos, std::char_traits<char>::length(s), s) == 0;
        };
        if (starts("<->")) { take(3, Tok::Iff); continue; }
        if (starts("->")) { take(2, Tok::Imp); continue; }
        if (starts("<=")) { take(2, Tok::Le); continue; }
        if (starts(">=")) { take(2, Tok::Ge); continue; }
        if (starts("!=")) { take(2, Tok::Ne); continue; }
        switch (c) {
            case '(': take(1, Tok::LParen); break;
            case ')': take(1, Tok::RParen); break;
            case '.': take(1, Tok::Dot); break;
            case '+': take(1, Tok::Plus); break;
            case '-': take(1, Tok::Minus); break;
            case '*': take(1, Tok::Star); break;
            case '^': take(1, Tok::Caret); break;
            case '<': take(1, Tok::Lt); break;
            case '>': take(1, Tok::Gt); break;
            case '=': take(1, Tok::Eq); break;
            case '&': take(1, Tok::AndOp); break;
            case '|': take(1, Tok::OrOp); break;
            case '!': take(1, Tok::NotOp); break;
            default:
                throw ParseError(line, col, std::string("unexpected character '") + c + "'");
        }
    }
    Token end;
    end.kind = Tok::End;
    end.line = line;
    end.col = col;
    out.push_back(end);
    return out;
}

class TokenStream {
public:
    explicit TokenStream(const std::string& src) : tokens_(tokenize(src)) {}

    const Token& peek() const { return tokens_[index_]; }
    Token next() { return tokens_[peek().kind == Tok::End ? index_ : index_++]; }
    std::size_t mark() const { return index_; }
    void rewind(std::size_t m) { index_ = m; }

private:
    std::vector<Token> tokens_;
    std::size_t index_ = 0;
};

class Parser {
public:
    Parser(const std::string& src, const std::set<std::string>* strict_vars)
        : lex_(src), strict_(strict_vars) {}

    FormulaRef parse_formula_top() {
        FormulaRef f = formula();
        expect_end();
        return f;
    }

    Polynomial parse_poly_top() {
        Polynomial p = poly();
        expect_end();
        return p;
    }

private:
    [[noreturn]] void fail(const std::string& msg) {
        throw ParseError(lex_.peek().line, lex_.peek().col, msg);
    }

    void expect_end() {
        if (lex_.peek().kind != Tok::End) fail("trailing input");
    }

    bool at_quantifier() {
        const Token& t = lex_.peek();
        return t.kind == Tok::Ident && (t.text == "A" || t.text == "E");
    }

    VarId intern_var(const std::string& name) {
        if (strict_ && !strict_->count(name)) fail("unknown variable '" + name + "'");
        return var(name);
    }

    FormulaRef formula() {
        if (at_quantifier()) {
            Token q = lex_.next();
            if (lex_.peek().kind != Tok::Ident) fail("expected variable after quantifier");
            VarId v = intern_var(lex_.next().text);
            if (lex_.peek().kind != Tok::Dot) fail("expected '.' after quantified variable");
            lex_.next();
            FormulaRef body = formula();
            return mk_quant(q.text == "A" ? FormulaKind::Forall : FormulaKind::Exists, v, body);
        }
        return iff();
    }

    FormulaRef iff() {
        FormulaRef left = imp();
        while (lex_.peek().kind == Tok::Iff) {
            lex_.next();
            FormulaRef right = imp();
            left = mk_and(mk_or(mk_not(left), right), mk_or(mk_not(right), left));
        }
        return left;
    }

    FormulaRef imp() {
        FormulaRef left = disj();
        if (lex_.peek().kind == Tok::Imp) {
            lex_.next();
            FormulaRef right = imp();  // right associative
            return mk_or(mk_not(left), right);
        }
        return left;
    }

    FormulaRef disj() {
        std::vector<FormulaRef> parts{conj()};
        while (lex_.peek().kind == Tok::OrOp) {
            lex_.next();
            parts.push_back(conj());
        }
        return mk_or(std::move(parts));
    }

    FormulaRef conj() {
        std::vector<FormulaRef> parts{negation()};
        while (lex_.peek().kind == Tok::AndOp) {
            lex_.next();
            parts.push_back(negation());
        }
        return mk_and(std::move(parts));
    }

    FormulaRef negation() {
        if (lex_.peek().kind == Tok::NotOp) {
            lex_.next();
            return mk_not(negation());
        }
        if (lex_.peek().kind == Tok::LParen) {
            // Ambiguous: either a parenthesized formula or an atom whose
            // left-hand polynomial starts with '('. Try the formula route and
            // backtrack to the atom route on failure.
            std::size_t m = lex_.mark();
            try {
                lex_.next();
                FormulaRef f = formula();
                if (lex_.peek().kind != Tok::RParen) fail("expected ')'");
                lex_.next();
                return f;
            } catch (const ParseError&) {
                lex_.rewind(m);
                return atom();
            }
        }
        if (lex_.peek().kind == Tok::Ident) {
            if (lex_.peek().text == "true" || lex_.peek().text == "false") {
                return lex_.next().text == "true" ? mk_true() : mk_false();
            }
            if (at_quantifier()) return formula();
        }
        return atom();
    }

    FormulaRef atom() {
        Polynomial lhs = poly();
        Rel rel;
        switch (lex_.peek().kind) {
            case Tok::Lt: rel = Rel::Lt; break;
            case Tok::Le: rel = Rel::Le; break;
            case Tok::Eq: rel = Rel::Eq; break;
            case Tok::Ne: rel = Rel::Ne; break;
            case Tok::Ge: rel = Rel::Ge; break;
            case Tok::Gt: rel = Rel::Gt; break;
            default: fail("expected relation in atom");
        }
        lex_.next();
        Polynomial rhs = poly();
        return mk_atom(lhs - rhs, rel);
    }

    Polynomial poly() {
        Polynomial acc = polyterm();
        for (;;) {
            if (lex_.peek().kind == Tok::Plus) {
                lex_.next();
                acc = acc + polyterm();
            } else if (lex_.peek().kind == Tok::Minus) {
                lex_.next();
                acc = acc - polyterm();
            } else {
                return acc;
            }
        }
    }

    Polynomial polyterm() {
        Polynomial acc = polyfactor();
        while (lex_.peek().kind == Tok::Star) {
            lex_.next();
            acc = acc * polyfactor();
        }
        return acc;
    }

    Polynomial polyfactor() {
        if (lex_.peek().kind == Tok::Minus) {
            lex_.next();
            return -polyfactor();
        }
        if (lex_.peek().kind == Tok::Plus) {
            lex_.next();
            return polyfactor();
        }
        Polynomial base = polyprimary();
        if (lex_.peek().kind == Tok::Caret) {
            lex_.next();
            if (lex_.peek().kind != Tok::Number) fail("expected integer exponent after '^'");
            Token e = lex_.next();
            if (e.text.find('/') != std::string::npos) fail("exponent must be an integer");
            int n = 0;
            try {
                n = std::stoi(e.text);
            } catch (...) {
                fail("exponent out of range");
            }
            return base.pow(n);
        }
        return base;
    }

    Polynomial polyprimary() {
        const Token& t = lex_.peek();
        if (t.kind == Tok::Number) {
            auto q = parse_rational(lex_.next().text);
            if (!q) fail("malformed numeric literal");
            return Polynomial(*q);
        }
        if (t.kind == Tok::Ident) {
            return Polynomial::variable(intern_var(lex_.next().text));
        }
        if (t.kind == Tok::LParen) {
            lex_.next();
            Polynomial p = poly();
            if (lex_.peek().kind != Tok::RParen) fail("expected ')'");
            lex_.next();
            return p;
        }
        fail("expected polynomial");
    }

    TokenStream lex_;
    const std::set<std::string>* strict_;
};

// Renames bound variables that collide with free variables or with an
// enclosing binder, so the parsed formula satisfies the distinctness
// invariant.
FormulaRef disambiguate_bound(const FormulaRef& f, const std::set<VarId>& frees,
                              std::set<VarId>& in_scope) {
    switch (f->kind()) {
        case FormulaKind::True:
        case FormulaKind::False:
        case FormulaKind::Atomic:
            return f;
        case FormulaKind::Not:
            return mk_not(disambiguate_bound(f->child(), frees, in_scope));
        case FormulaKind::And:
        case FormulaKind::Or: {
            std::vector<FormulaRef> ch;
            ch.reserve(f->children().size());
            for (const auto& c : f->children())
                ch.push_back(disambiguate_bound(c, frees, in_scope));
            return f->kind() == FormulaKind::And ? mk_and(std::move(ch)) : mk_or(std::move(ch));
        }
        case FormulaKind::Exists:
        case FormulaKind::Forall: {
            VarId v = f->quantified_var();
            FormulaRef body = f->child();
            if (frees.count(v) || in_scope.count(v)) {
                VarId fresh = VarTable::instance().fresh(var_name(v));
                body = rename_var(body, v, fresh);
                v = fresh;
            }
            in_scope.insert(v);
            body = disambiguate_bound(body, frees, in_scope);
            in_scope.erase(v);
            return mk_quant(f->kind(), v, body);
        }
    }
    throw std::logic_error("disambiguate_bound");
}

}  // namespace

FormulaRef parse_formula(const std::string& text, const std::set<std::string>* strict_vars) {
    Parser parser(text, strict_vars);
    FormulaRef f = parser.parse_formula_top();
    std::set<VarId> frees = free_variables(f);
    std::set<VarId> in_scope;
    return disambiguate_bound(f, frees, in_scope);
}

Polynomial parse_polynomial(const std::string& text) {
    Parser parser(text, nullptr);
    return parser.parse_poly_top();
}

}  // namespace polybound
