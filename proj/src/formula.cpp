#include "grothlin/formula.hpp"

#include <algorithm>

#include "grothlin/error.hpp"

namespace grothlin {

// ---------------------------------------------------------------------------
// Atom

Atom::Atom(LinTerm term, Rel rel) : term_(std::move(term)), rel_(rel) {
  if (term_.is_constant()) throw Error("ground functional cannot form an atom");
  auto [canon, flipped] = term_.normalized();
  if (rel_ == Rel::EQ) {
    term_ = std::move(canon);
  } else {
    term_ = flipped ? -canon : std::move(canon);
  }
}

bool Atom::eval(std::span<const Rational> point) const {
  Rational v = term_.eval_at(point);
  return rel_ == Rel::LT ? v.sign() < 0 : v.is_zero();
}

int Atom::compare(const Atom& other) const {
  if (rel_ != other.rel_) return rel_ == Rel::LT ? -1 : 1;
  return term_.compare(other.term_);
}

std::string Atom::str(std::span<const std::string> names) const {
  // Rendered with each side nonnegative: positive monomials stay left,
  // negated ones move right.
  LinTerm lhs(term_.dim()), rhs(term_.dim());
  for (const auto& [v, c] : term_.coeffs()) {
    if (c.sign() > 0)
      lhs = lhs + LinTerm::variable(term_.dim(), v, c);
    else
      rhs = rhs + LinTerm::variable(term_.dim(), v, -c);
  }
  const Rational& k = term_.constant_part();
  if (k.sign() > 0)
    lhs = lhs + LinTerm::constant(term_.dim(), k);
  else if (k.sign() < 0)
    rhs = rhs + LinTerm::constant(term_.dim(), -k);
  return lhs.str(names) + (rel_ == Rel::LT ? " < " : " = ") + rhs.str(names);
}

// ---------------------------------------------------------------------------
// Formula

struct Formula::Node {
  Kind kind;
  std::unique_ptr<Atom> atom;     // Atomic
  std::vector<Formula> children;  // And/Or list; single body for Not/Exists
  int var = -1;                   // Exists
};

Formula Formula::truth() {
  static const Formula t = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::True;
    return Formula(std::move(n));
  }();
  return t;
}

Formula Formula::falsity() {
  static const Formula f = [] {
    auto n = std::make_shared<Node>();
    n->kind = Kind::False;
    return Formula(std::move(n));
  }();
  return f;
}

Formula Formula::atom(const LinTerm& term, Rel rel) {
  if (term.is_constant()) {
    bool value = rel == Rel::LT ? term.constant_part().sign() < 0
                                : term.constant_part().is_zero();
    return value ? truth() : falsity();
  }
  return atom(Atom(term, rel));
}

Formula Formula::atom(Atom a) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Atomic;
  n->atom = std::make_unique<Atom>(std::move(a));
  return Formula(std::move(n));
}

Formula Formula::conj(std::vector<Formula> children) {
  std::vector<Formula> flat;
  for (auto& c : children) {
    if (c.is_false()) return falsity();
    if (c.is_true()) continue;
    if (c.kind() == Kind::And) {
      for (const auto& g : c.children()) flat.push_back(g);
    } else {
      flat.push_back(std::move(c));
    }
  }
  if (flat.empty()) return truth();
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::And;
  n->children = std::move(flat);
  return Formula(std::move(n));
}

Formula Formula::disj(std::vector<Formula> children) {
  std::vector<Formula> flat;
  for (auto& c : children) {
    if (c.is_true()) return truth();
    if (c.is_false()) continue;
    if (c.kind() == Kind::Or) {
      for (const auto& g : c.children()) flat.push_back(g);
    } else {
      flat.push_back(std::move(c));
    }
  }
  if (flat.empty()) return falsity();
  if (flat.size() == 1) return flat.front();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Or;
  n->children = std::move(flat);
  return Formula(std::move(n));
}

Formula Formula::negation(Formula f) {
  if (f.is_true()) return falsity();
  if (f.is_false()) return truth();
  if (f.kind() == Kind::Not) return f.body();
  auto n = std::make_shared<Node>();
  n->kind = Kind::Not;
  n->children.push_back(std::move(f));
  return Formula(std::move(n));
}

Formula Formula::exists(int var, Formula body) {
  if (body.is_true() || body.is_false()) return body;
  auto n = std::make_shared<Node>();
  n->kind = Kind::Exists;
  n->var = var;
  n->children.push_back(std::move(body));
  return Formula(std::move(n));
}

Formula::Kind Formula::kind() const { return node_->kind; }

const Atom& Formula::as_atom() const {
  if (kind() != Kind::Atomic) throw Error("formula is not an atom");
  return *node_->atom;
}

std::span<const Formula> Formula::children() const {
  if (kind() != Kind::And && kind() != Kind::Or) throw Error("formula has no child list");
  return node_->children;
}

const Formula& Formula::body() const {
  if (kind() != Kind::Not && kind() != Kind::Exists) throw Error("formula has no body");
  return node_->children.front();
}

int Formula::bound_var() const {
  if (kind() != Kind::Exists) throw Error("formula is not a quantifier");
  return node_->var;
}

bool Formula::has_quantifier() const {
  switch (kind()) {
    case Kind::True:
    case Kind::False:
    case Kind::Atomic:
      return false;
    case Kind::And:
    case Kind::Or: {
      for (const auto& c : children())
        if (c.has_quantifier()) return true;
      return false;
    }
    case Kind::Not:
      return body().has_quantifier();
    case Kind::Exists:
      return true;
  }
  return false;
}

int Formula::max_var() const {
  switch (kind()) {
    case Kind::True:
    case Kind::False:
      return -1;
    case Kind::Atomic:
      return as_atom().term().max_var();
    case Kind::And:
    case Kind::Or: {
      int m = -1;
      for (const auto& c : children()) m = std::max(m, c.max_var());
      return m;
    }
    case Kind::Not:
      return body().max_var();
    case Kind::Exists:
      return std::max(bound_var(), body().max_var());
  }
  return -1;
}

bool Formula::eval(std::span<const Rational> point) const {
  switch (kind()) {
    case Kind::True:
      return true;
    case Kind::False:
      return false;
    case Kind::Atomic:
      return as_atom().eval(point);
    case Kind::And: {
      for (const auto& c : children())
        if (!c.eval(point)) return false;
      return true;
    }
    case Kind::Or: {
      for (const auto& c : children())
        if (c.eval(point)) return true;
      return false;
    }
    case Kind::Not:
      return !body().eval(point);
    case Kind::Exists:
      throw Error("cannot evaluate a quantified formula at a point");
  }
  return false;
}

bool Formula::equals(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (kind() != other.kind()) return false;
  switch (kind()) {
    case Kind::True:
    case Kind::False:
      return true;
    case Kind::Atomic:
      return as_atom() == other.as_atom();
    case Kind::And:
    case Kind::Or: {
      auto a = children(), b = other.children();
      if (a.size() != b.size()) return false;
      for (std::size_t i = 0; i < a.size(); ++i)
        if (!a[i].equals(b[i])) return false;
      return true;
    }
    case Kind::Not:
      return body().equals(other.body());
    case Kind::Exists:
      return bound_var() == other.bound_var() && body().equals(other.body());
  }
  return false;
}

namespace {

// Printing precedence: ! > & > |. A quantifier's scope extends maximally
// right, so quantified subformulas are parenthesized under any connective.
enum class Prec { Top, Or, And, Unary };

std::string print(const Formula& f, std::vector<std::string>& scope, Prec ctx) {
  auto parens = [](const std::string& s) { return "(" + s + ")"; };
  switch (f.kind()) {
    case Formula::Kind::True:
      return "0 = 0";
    case Formula::Kind::False:
      return "0 < 0";
    case Formula::Kind::Atomic:
      return f.as_atom().str(scope);
    case Formula::Kind::And: {
      std::string s;
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) s += " & ";
        s += print(f.children()[i], scope, Prec::And);
      }
      return ctx == Prec::And || ctx == Prec::Unary ? parens(s) : s;
    }
    case Formula::Kind::Or: {
      std::string s;
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) s += " | ";
        s += print(f.children()[i], scope, Prec::Or);
      }
      return ctx == Prec::Top ? s : parens(s);
    }
    case Formula::Kind::Not:
      return "!" + print(f.body(), scope, Prec::Unary);
    case Formula::Kind::Exists: {
      // Synthesize a binder name that cannot capture anything in scope.
      int v = f.bound_var();
      std::string name = "x" + std::to_string(v);
      while (std::find(scope.begin(), scope.end(), name) != scope.end()) name += "_";
      std::size_t old_size = scope.size();
      std::string saved;
      bool overrode = false;
      if (v < static_cast<int>(scope.size())) {
        saved = scope[v];
        scope[v] = name;
        overrode = true;
      } else {
        while (static_cast<int>(scope.size()) < v)
          scope.push_back("x" + std::to_string(scope.size()));
        scope.push_back(name);
      }
      std::string s = "EX " + name + ". " + print(f.body(), scope, Prec::Top);
      if (overrode)
        scope[v] = saved;
      else
        scope.resize(old_size);
      return ctx == Prec::Top ? s : parens(s);
    }
  }
  return "";
}

}  // namespace

std::string Formula::str(std::span<const std::string> names) const {
  std::vector<std::string> scope(names.begin(), names.end());
  return print(*this, scope, Prec::Top);
}

// ---------------------------------------------------------------------------
// NNF

namespace {

Formula nnf_impl(const Formula& f, bool positive) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return positive ? Formula::truth() : Formula::falsity();
    case Formula::Kind::False:
      return positive ? Formula::falsity() : Formula::truth();
    case Formula::Kind::Atomic: {
      const Atom& a = f.as_atom();
      if (positive) return f;
      if (a.rel() == Rel::LT) {
        // !(t < 0)  ==  (-t < 0) | (t = 0)
        return Formula::disj({Formula::atom(-a.term(), Rel::LT),
                              Formula::atom(a.term(), Rel::EQ)});
      }
      // !(t = 0)  ==  (t < 0) | (-t < 0)
      return Formula::disj({Formula::atom(a.term(), Rel::LT),
                            Formula::atom(-a.term(), Rel::LT)});
    }
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      bool is_and = f.kind() == Formula::Kind::And;
      std::vector<Formula> out;
      out.reserve(f.children().size());
      for (const auto& c : f.children()) out.push_back(nnf_impl(c, positive));
      return is_and == positive ? Formula::conj(std::move(out))
                                : Formula::disj(std::move(out));
    }
    case Formula::Kind::Not:
      return nnf_impl(f.body(), !positive);
    case Formula::Kind::Exists:
      throw Error("nnf expects a quantifier-free formula");
  }
  return Formula::falsity();
}

}  // namespace

Formula nnf(const Formula& f) { return nnf_impl(f, true); }

// ---------------------------------------------------------------------------
// Conjunctions and DefSet

Conj make_conj(std::vector<Atom> atoms) {
  std::sort(atoms.begin(), atoms.end());
  atoms.erase(std::unique(atoms.begin(), atoms.end()), atoms.end());
  return atoms;
}

bool conj_eval(const Conj& c, std::span<const Rational> point) {
  for (const Atom& a : c)
    if (!a.eval(point)) return false;
  return true;
}

Formula conj_to_formula(const Conj& c) {
  std::vector<Formula> parts;
  parts.reserve(c.size());
  for (const Atom& a : c) parts.push_back(Formula::atom(a));
  return Formula::conj(std::move(parts));
}

std::string conj_str(const Conj& c, std::span<const std::string> names) {
  if (c.empty()) return "0 = 0";
  std::string s;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i) s += " & ";
    s += c[i].str(names);
  }
  return s;
}

bool DefSet::contains(std::span<const Rational> point) const {
  for (const Conj& c : disjuncts)
    if (conj_eval(c, point)) return true;
  return false;
}

Formula DefSet::to_formula() const {
  std::vector<Formula> parts;
  parts.reserve(disjuncts.size());
  for (const Conj& c : disjuncts) parts.push_back(conj_to_formula(c));
  return Formula::disj(std::move(parts));
}

std::string DefSet::str(std::span<const std::string> names) const {
  if (disjuncts.empty()) return "false";
  if (disjuncts.size() == 1 && disjuncts.front().empty()) return "true";
  std::string s;
  for (std::size_t i = 0; i < disjuncts.size(); ++i) {
    if (i) s += " | ";
    bool parens = disjuncts.size() > 1 && disjuncts[i].size() > 1;
    s += parens ? "(" + conj_str(disjuncts[i], names) + ")" : conj_str(disjuncts[i], names);
  }
  return s;
}

bool operator==(const DefSet& a, const DefSet& b) {
  return a.dim == b.dim && a.disjuncts == b.disjuncts;
}

namespace {

int conj_compare(const Conj& a, const Conj& b) {
  std::size_t n = std::min(a.size(), b.size());
  for (std::size_t i = 0; i < n; ++i)
    if (int c = a[i].compare(b[i]); c != 0) return c;
  if (a.size() != b.size()) return a.size() < b.size() ? -1 : 1;
  return 0;
}

bool subset_of(const Conj& a, const Conj& b) {
  // Both sorted.
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

}  // namespace

std::vector<Conj> prune_subsumed(std::vector<Conj> disjuncts) {
  std::sort(disjuncts.begin(), disjuncts.end(),
            [](const Conj& a, const Conj& b) { return conj_compare(a, b) < 0; });
  disjuncts.erase(std::unique(disjuncts.begin(), disjuncts.end()), disjuncts.end());
  std::vector<Conj> kept;
  for (const Conj& c : disjuncts) {
    bool subsumed = false;
    for (const Conj& k : disjuncts) {
      if (&k == &c) continue;
      if (k.size() < c.size() && subset_of(k, c)) {
        subsumed = true;
        break;
      }
    }
    if (!subsumed) kept.push_back(c);
  }
  return kept;
}

DefSet product(const DefSet& a, const DefSet& b) {
  DefSet out;
  out.dim = a.dim + b.dim;
  for (const Conj& ca : a.disjuncts) {
    for (const Conj& cb : b.disjuncts) {
      std::vector<Atom> atoms;
      atoms.reserve(ca.size() + cb.size());
      for (const Atom& at : ca) atoms.emplace_back(at.term().widened(out.dim), at.rel());
      for (const Atom& at : cb) {
        LinTerm shifted = at.term().map_vars(out.dim, [&](int v) { return v + a.dim; });
        atoms.emplace_back(std::move(shifted), at.rel());
      }
      out.disjuncts.push_back(make_conj(std::move(atoms)));
    }
  }
  out.disjuncts = prune_subsumed(std::move(out.disjuncts));
  return out;
}

DefSet restrict_coordinate(const DefSet& a, int var, const Rational& value) {
  if (var < 0 || var >= a.dim) throw DimensionError("coordinate out of range");
  DefSet out;
  out.dim = a.dim - 1;
  for (const Conj& c : a.disjuncts) {
    std::vector<Atom> atoms;
    bool dead = false;
    for (const Atom& at : c) {
      LinTerm t = at.term().substituted(var, value);
      t = t.map_vars(out.dim, [&](int v) { return v > var ? v - 1 : v; });
      Formula f = Formula::atom(t, at.rel());
      if (f.is_false()) {
        dead = true;
        break;
      }
      if (f.is_true()) continue;
      atoms.push_back(f.as_atom());
    }
    if (!dead) out.disjuncts.push_back(make_conj(std::move(atoms)));
  }
  out.disjuncts = prune_subsumed(std::move(out.disjuncts));
  return out;
}

}  // namespace grothlin
