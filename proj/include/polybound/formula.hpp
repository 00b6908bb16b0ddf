#ifndef POLYBOUND_FORMULA_HPP
#define POLYBOUND_FORMULA_HPP

#include "polybound/poly.hpp"

#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

namespace polybound {

enum class Rel { Lt, Le, Eq, Ne, Ge, Gt };

Rel negate_rel(Rel r);
// Relation of -p tau 0 given p tau' 0 (mirror around zero).
Rel flip_rel(Rel r);
bool rel_holds(Rel r, int sign_of_lhs);
bool is_strict(Rel r);
std::string rel_to_string(Rel r);

// Atomic constraint p rel 0; the right-hand side is always zero.
struct Atom {
    Polynomial lhs;
    Rel rel;

    friend bool operator==(const Atom& a, const Atom& b) {
        return a.rel == b.rel && a.lhs == b.lhs;
    }
    friend bool operator<(const Atom& a, const Atom& b) {
        if (a.rel != b.rel) return a.rel < b.rel;
        return a.lhs < b.lhs;
    }
};

enum class FormulaKind { True, False, Atomic, Not, And, Or, Exists, Forall };

class Formula;
using FormulaRef = std::shared_ptr<const Formula>;

// Immutable first-order formula node. And/Or children are flattened and
// deduplicated by the builders; quantifier nodes carry one variable each.
class Formula {
public:
    FormulaKind kind() const { return kind_; }
    const Atom& atom() const { return atom_; }
    const std::vector<FormulaRef>& children() const { return children_; }
    const FormulaRef& child() const { return children_.front(); }
    VarId quantified_var() const { return qvar_; }

    bool is_true() const { return kind_ == FormulaKind::True; }
    bool is_false() const { return kind_ == FormulaKind::False; }
    bool is_quantifier_free() const;

    // Number of atom occurrences; used by the QE size cap.
    std::size_t atom_count() const;

    static FormulaRef make(FormulaKind k, Atom a, std::vector<FormulaRef> ch, VarId v);

private:
    FormulaKind kind_ = FormulaKind::True;
    Atom atom_;
    std::vector<FormulaRef> children_;
    VarId qvar_;
};

// Node builders. mk_and/mk_or flatten nested same-kind nodes, drop neutral
// elements, short-circuit on absorbing elements and deduplicate children.
FormulaRef mk_true();
FormulaRef mk_false();
FormulaRef mk_atom(Polynomial lhs, Rel rel);
FormulaRef mk_not(FormulaRef f);
FormulaRef mk_and(std::vector<FormulaRef> fs);
FormulaRef mk_or(std::vector<FormulaRef> fs);
FormulaRef mk_and(FormulaRef a, FormulaRef b);
FormulaRef mk_or(FormulaRef a, FormulaRef b);
FormulaRef mk_quant(FormulaKind k, VarId v, FormulaRef body);
FormulaRef mk_exists(VarId v, FormulaRef body);
FormulaRef mk_forall(VarId v, FormulaRef body);

struct PrenexForm {
    // Outermost first.
    std::vector<std::pair<FormulaKind, VarId>> blocks;
    FormulaRef matrix;
};

// Equivalent prenex form; quantifier kinds flip under negation and bound
// variables are renamed when pulling them past siblings that mention them.
PrenexForm to_prenex(const FormulaRef& f);

FormulaRef from_prenex(const PrenexForm& p);

// Constant folding, True/False absorption, duplicate removal, single-child
// unwrapping. No semantic reasoning between distinct atoms.
FormulaRef simplify_basic(const FormulaRef& f);

// Truth value of a quantifier-free formula under an exact assignment of every
// free variable. Throws std::invalid_argument on unassigned variables.
bool eval_ground(const FormulaRef& f, const std::map<VarId, Rational>& assignment);

// Same, with a per-assignment atom cache keyed by node identity. The cache
// must not be reused across assignments.
bool eval_ground_cached(const FormulaRef& f, const std::map<VarId, Rational>& assignment,
                        std::unordered_map<const Formula*, bool>& cache);

// Ground one variable throughout (atoms only; quantifiers binding v shadow it).
FormulaRef substitute(const FormulaRef& f, VarId v, const Rational& value);

std::set<VarId> free_variables(const FormulaRef& f);

std::string print_formula(const FormulaRef& f);

struct ParseError : std::runtime_error {
    int line;
    int column;
    ParseError(int l, int c, const std::string& msg)
        : std::runtime_error("parse error at " + std::to_string(l) + ":" + std::to_string(c) +
                             ": " + msg),
          line(l),
          column(c) {}
};

// Grammar:
//   formula := quant | iff
//   quant   := ("A"|"E") ident "." formula
//   iff     := imp ("<->" imp)*
//   imp     := or ("->" or)*
//   or      := and ("|" and)*
//   and     := not ("&" not)*
//   not     := "!" not | "(" formula ")" | atom | "true" | "false"
//   atom    := poly rel poly,  rel in { < <= = != >= > }
// Implication and equivalence are desugared into !/&/| at parse time; atoms
// are normalized to "p rel 0". If `strict_vars` is given, identifiers outside
// the set are rejected.
FormulaRef parse_formula(const std::string& text,
                         const std::set<std::string>* strict_vars = nullptr);

Polynomial parse_polynomial(const std::string& text);

}  // namespace polybound

#endif
