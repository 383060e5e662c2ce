#pragma once

#include <memory>
#include <span>
#include <string>
#include <vector>

#include "grothlin/linterm.hpp"

namespace grothlin {

enum class Rel { LT, EQ };  // functional < 0, functional = 0

/**
 * Canonical atomic constraint `term REL 0`.
 *
 * EQ atoms store the sign-canonical integer-coprime multiple of the
 * functional (t = 0 and -t = 0 coincide). LT atoms store the positively
 * scaled integer-coprime multiple — the orientation is semantic and kept.
 * Ground (constant) functionals never appear in an Atom; the Formula
 * factory folds them to true/false.
 */
class Atom {
 public:
  Atom(LinTerm term, Rel rel);

  const LinTerm& term() const { return term_; }
  Rel rel() const { return rel_; }

  bool eval(std::span<const Rational> point) const;

  int compare(const Atom& other) const;
  friend bool operator==(const Atom& a, const Atom& b) { return a.compare(b) == 0; }
  friend bool operator<(const Atom& a, const Atom& b) { return a.compare(b) < 0; }

  std::string str(std::span<const std::string> names = {}) const;

 private:
  LinTerm term_;
  Rel rel_;
};

/**
 * Immutable first-order formula over atoms `LinTerm < 0` / `LinTerm = 0`.
 *
 * Trees are shared (cheap copies). The factories do light constant folding:
 * ground atoms become True/False, True/False absorb through connectives,
 * nested conjunctions/disjunctions are flattened, and double negations
 * cancel. Bound variables are plain indices; on any root-to-leaf path an
 * index is bound at most once.
 */
class Formula {
 public:
  enum class Kind { True, False, Atomic, And, Or, Not, Exists };

  Formula() : Formula(truth()) {}

  static Formula truth();
  static Formula falsity();
  /// Folds ground functionals; otherwise builds a canonical atom.
  static Formula atom(const LinTerm& term, Rel rel);
  static Formula atom(Atom a);
  static Formula conj(std::vector<Formula> children);
  static Formula disj(std::vector<Formula> children);
  static Formula negation(Formula f);
  static Formula exists(int var, Formula body);

  Kind kind() const;
  bool is_true() const { return kind() == Kind::True; }
  bool is_false() const { return kind() == Kind::False; }
  const Atom& as_atom() const;
  std::span<const Formula> children() const;  // And / Or
  const Formula& body() const;                // Not / Exists
  int bound_var() const;                      // Exists

  bool has_quantifier() const;
  /// Highest variable index occurring anywhere (free or bound), or -1.
  int max_var() const;

  /// Quantifier-free evaluation at an exact point. Throws on Exists.
  bool eval(std::span<const Rational> point) const;

  bool equals(const Formula& other) const;
  friend bool operator==(const Formula& a, const Formula& b) { return a.equals(b); }

  std::string str(std::span<const std::string> names = {}) const;

 private:
  struct Node;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

/// Negation-normal form of a quantifier-free formula: negations are pushed
/// inward and absorbed into atoms by order trichotomy,
///   !(t < 0)  ~>  (-t < 0) | (t = 0)
///   !(t = 0)  ~>  (t < 0) | (-t < 0).
Formula nnf(const Formula& f);

/// Conjunction of atoms, sorted and deduplicated.
using Conj = std::vector<Atom>;

Conj make_conj(std::vector<Atom> atoms);
bool conj_eval(const Conj& c, std::span<const Rational> point);
Formula conj_to_formula(const Conj& c);
std::string conj_str(const Conj& c, std::span<const std::string> names = {});

/**
 * Quantifier-free set description in disjunctive normal form: a union of
 * conjunctions of atoms over a fixed ambient dimension. The canonical empty
 * set has no disjuncts; the full space is one empty conjunction.
 */
struct DefSet {
  int dim = 0;
  std::vector<Conj> disjuncts;

  static DefSet empty(int dim) { return DefSet{dim, {}}; }
  static DefSet full(int dim) { return DefSet{dim, {Conj{}}}; }

  bool contains(std::span<const Rational> point) const;
  Formula to_formula() const;
  std::string str(std::span<const std::string> names = {}) const;

  friend bool operator==(const DefSet& a, const DefSet& b);
};

/// Sorts disjuncts, drops exact duplicates and syntactically subsumed ones
/// (a disjunct whose atom set contains another disjunct's is redundant).
std::vector<Conj> prune_subsumed(std::vector<Conj> disjuncts);

/// Cartesian product; b's variables are shifted past a's.
DefSet product(const DefSet& a, const DefSet& b);

/// Substitutes x_var := value and drops that coordinate (indices above it
/// shift down). Result lives in dimension a.dim - 1.
DefSet restrict_coordinate(const DefSet& a, int var, const Rational& value);

}  // namespace grothlin
