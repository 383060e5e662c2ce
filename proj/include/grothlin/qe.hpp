#pragma once

#include <optional>
#include <vector>

#include "grothlin/formula.hpp"

namespace grothlin {

/**
 * Fourier-Motzkin bookkeeping for one target variable inside a conjunction:
 * every atom lands in exactly one bucket, with the variable solved out of
 * the bound functionals (x = e, e < x, x < e respectively).
 */
struct BoundPartition {
  std::vector<LinTerm> equalities;
  std::vector<LinTerm> lowers;
  std::vector<LinTerm> uppers;
  std::vector<Atom> free_atoms;
};

BoundPartition partition_bounds(int var, const Conj& conj);

/**
 * One Fourier-Motzkin elimination step over the dense unbounded order:
 * equality substitution when possible, otherwise lower/upper pairing
 * (pairings with a missing side vanish — a witness always exists between
 * the surviving bounds). Returns nullopt when a ground contradiction
 * appears. The result never mentions `var`.
 */
std::optional<Conj> eliminate_var(int var, const Conj& conj);

/// Exists(var, conj) as a quantifier-free formula, with redundant
/// constraints removed from the eliminated conjunction.
Formula eliminate_exists(int var, const Conj& conj);

/// Eliminates the listed variables in order, removing redundant constraints
/// after each round. nullopt when the conjunction is unsatisfiable.
std::optional<Conj> project_out(const Conj& conj, const std::vector<int>& vars);

/// Exact satisfiability of a conjunction of atoms over the rationals.
bool conj_satisfiable(const Conj& conj);

/// Drops every atom entailed by the rest, testing in deterministic order.
Conj remove_redundant(Conj conj);

/// A rational point satisfying the conjunction, if any. The conjunction
/// must only mention variables < dim.
std::optional<Point> find_witness(const Conj& conj, int dim);

/// The 1-2 atoms whose disjunction is the negation of `a` (order trichotomy).
std::vector<Atom> negated_atom(const Atom& a);

/// DNF of a quantifier-free formula with unsatisfiable disjuncts removed and
/// syntactically subsumed disjuncts dropped. Denotation preserved.
DefSet to_dnf(const Formula& f, int dim);

/// Full quantifier elimination: innermost-first, existentials distributed
/// over DNF disjuncts. `dim` is the ambient dimension of the free variables.
DefSet qe(const Formula& f, int dim);

bool is_empty(const DefSet& s);

/// a \ b as a pruned DNF (computed by incremental subtraction of b's
/// disjuncts, not by expanding the full negation).
DefSet set_difference(const DefSet& a, const DefSet& b);

DefSet set_union(const DefSet& a, const DefSet& b);
DefSet set_intersection(const DefSet& a, const DefSet& b);

/// a ⊆ b, decided exactly (a \ b empty).
bool entails(const DefSet& a, const DefSet& b);

bool equivalent(const DefSet& a, const DefSet& b);

/// Elimination-step budget, read from GROTHLIN_FM_DEPTH (default 100000).
long fm_step_limit();

/**
 * Direct evaluation of a possibly quantified formula at a point, with
 * existential witnesses found by grid search over fractions a/b with
 * b <= max_denominator and |a/b| <= max_magnitude. Sound on instances whose
 * witnesses land on the grid; used as the engine-independent cross-check
 * for qe.
 */
struct WitnessGrid {
  long max_denominator = 8;
  long max_magnitude = 12;
};

bool eval_with_search(const Formula& f, const Point& point, const WitnessGrid& grid = {});

}  // namespace grothlin
