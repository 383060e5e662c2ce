#include "grothlin/qe.hpp"

#include <algorithm>
#include <cstdlib>
#include <set>

#include "grothlin/error.hpp"

namespace grothlin {

// ---------------------------------------------------------------------------
// Step budget. The counter spans one outermost engine entry; nested internal
// calls share it.

namespace {

thread_local long fm_steps = 0;
thread_local int fm_gate_depth = 0;

struct FmGate {
  FmGate() {
    if (fm_gate_depth++ == 0) fm_steps = 0;
  }
  ~FmGate() { --fm_gate_depth; }
};

void fm_tick() {
  if (++fm_steps > fm_step_limit())
    throw BudgetExceeded("elimination budget exhausted (GROTHLIN_FM_DEPTH)");
}

constexpr std::size_t kConjAtomCap = 100000;

}  // namespace

long fm_step_limit() {
  static const long limit = [] {
    if (const char* env = std::getenv("GROTHLIN_FM_DEPTH")) {
      long v = std::atol(env);
      if (v > 0) return v;
    }
    return 100000L;
  }();
  return limit;
}

// ---------------------------------------------------------------------------
// Conjunction building with ground folding

namespace {

// Adds `t rel 0`; returns false on a ground contradiction.
bool add_atom(std::set<Atom>& atoms, const LinTerm& t, Rel rel) {
  Formula f = Formula::atom(t, rel);
  if (f.is_false()) return false;
  if (f.is_true()) return true;
  atoms.insert(f.as_atom());
  if (atoms.size() > kConjAtomCap) throw BudgetExceeded("conjunction grew past the atom cap");
  return true;
}

Conj to_conj(std::set<Atom> atoms) { return Conj(atoms.begin(), atoms.end()); }

}  // namespace

// ---------------------------------------------------------------------------
// Fourier-Motzkin core

BoundPartition partition_bounds(int var, const Conj& conj) {
  BoundPartition p;
  for (const Atom& a : conj) {
    Rational c = a.term().coeff(var);
    if (c.is_zero()) {
      p.free_atoms.push_back(a);
    } else if (a.rel() == Rel::EQ) {
      p.equalities.push_back(a.term().solve_for(var));
    } else if (c.sign() > 0) {
      p.uppers.push_back(a.term().solve_for(var));
    } else {
      p.lowers.push_back(a.term().solve_for(var));
    }
  }
  return p;
}

std::optional<Conj> eliminate_var(int var, const Conj& conj) {
  fm_tick();
  // Equality substitution first; ties broken by the canonical atom order
  // (conj is sorted, so the first EQ atom mentioning var is the pick).
  for (const Atom& a : conj) {
    if (a.rel() != Rel::EQ || !a.term().mentions(var)) continue;
    LinTerm e = a.term().solve_for(var);
    std::set<Atom> out;
    for (const Atom& b : conj) {
      if (&b == &a) continue;
      if (!add_atom(out, b.term().substituted(var, e), b.rel())) return std::nullopt;
    }
    return to_conj(std::move(out));
  }
  BoundPartition p = partition_bounds(var, conj);
  std::set<Atom> out(p.free_atoms.begin(), p.free_atoms.end());
  for (const LinTerm& lo : p.lowers)
    for (const LinTerm& up : p.uppers)
      if (!add_atom(out, lo - up, Rel::LT)) return std::nullopt;
  return to_conj(std::move(out));
}

namespace {

std::vector<int> vars_of(const Conj& conj) {
  std::set<int> vs;
  for (const Atom& a : conj)
    for (const auto& [v, c] : a.term().coeffs()) vs.insert(v);
  return std::vector<int>(vs.begin(), vs.end());
}

// Deterministic pivot choice: any variable with an equality, else the one
// with the smallest lower*upper pairing product.
int pick_pivot(const Conj& conj, const std::vector<int>& vars) {
  for (const Atom& a : conj)
    if (a.rel() == Rel::EQ) return a.term().coeffs().begin()->first;
  int best = vars.front();
  std::size_t best_cost = SIZE_MAX;
  for (int v : vars) {
    std::size_t lo = 0, up = 0;
    for (const Atom& a : conj) {
      Rational c = a.term().coeff(v);
      if (c.is_zero()) continue;
      (c.sign() > 0 ? up : lo)++;
    }
    std::size_t cost = lo * up;
    if (cost < best_cost) {
      best_cost = cost;
      best = v;
    }
  }
  return best;
}

}  // namespace

bool conj_satisfiable(const Conj& conj0) {
  FmGate gate;
  Conj conj = conj0;
  while (true) {
    std::vector<int> vars = vars_of(conj);
    if (vars.empty()) return true;  // ground atoms fold away on construction
    int v = pick_pivot(conj, vars);
    auto next = eliminate_var(v, conj);
    if (!next) return false;
    conj = std::move(*next);
  }
}

Conj remove_redundant(Conj conj) {
  FmGate gate;
  // Greedy front-to-back pass; conj is kept sorted throughout.
  for (std::size_t i = 0; i < conj.size();) {
    Conj rest;
    rest.reserve(conj.size() - 1);
    for (std::size_t j = 0; j < conj.size(); ++j)
      if (j != i) rest.push_back(conj[j]);
    bool redundant = true;
    for (const Atom& neg : negated_atom(conj[i])) {
      Conj probe = rest;
      probe.insert(std::lower_bound(probe.begin(), probe.end(), neg), neg);
      if (conj_satisfiable(probe)) {
        redundant = false;
        break;
      }
    }
    if (redundant)
      conj = std::move(rest);
    else
      ++i;
  }
  return conj;
}

std::vector<Atom> negated_atom(const Atom& a) {
  std::vector<Atom> out;
  if (a.rel() == Rel::LT) {
    out.emplace_back(-a.term(), Rel::LT);
    out.emplace_back(a.term(), Rel::EQ);
  } else {
    out.emplace_back(a.term(), Rel::LT);
    out.emplace_back(-a.term(), Rel::LT);
  }
  return out;
}

Formula eliminate_exists(int var, const Conj& conj) {
  FmGate gate;
  auto out = eliminate_var(var, conj);
  if (!out) return Formula::falsity();
  return conj_to_formula(remove_redundant(std::move(*out)));
}

std::optional<Conj> project_out(const Conj& conj, const std::vector<int>& vars) {
  FmGate gate;
  Conj cur = conj;
  for (int v : vars) {
    auto next = eliminate_var(v, cur);
    if (!next) return std::nullopt;
    cur = remove_redundant(std::move(*next));
  }
  return cur;
}

std::optional<Point> find_witness(const Conj& conj0, int dim) {
  FmGate gate;
  for (const Atom& a : conj0)
    if (a.term().max_var() >= dim)
      throw DimensionError("conjunction mentions variables beyond the ambient dimension");
  std::vector<Conj> stage(dim);
  Conj cur = conj0;
  for (int v = dim - 1; v >= 0; --v) {
    stage[v] = cur;
    auto next = eliminate_var(v, cur);
    if (!next) return std::nullopt;
    cur = std::move(*next);
  }
  Point p;
  p.reserve(dim);
  for (int v = 0; v < dim; ++v) {
    std::span<const Rational> prefix(p.data(), p.size());
    std::optional<Rational> eq, lo, up;
    for (const Atom& a : stage[v]) {
      Rational c = a.term().coeff(v);
      if (c.is_zero()) continue;
      Rational bound = a.term().solve_for(v).eval_at(prefix);
      if (a.rel() == Rel::EQ) {
        eq = bound;
      } else if (c.sign() > 0) {
        up = up ? std::min(*up, bound) : bound;
      } else {
        lo = lo ? std::max(*lo, bound) : bound;
      }
    }
    Rational value(0);
    if (eq) {
      value = *eq;
    } else if (lo && up) {
      value = (*lo + *up) / Rational(2);
    } else if (lo) {
      value = *lo + Rational(1);
    } else if (up) {
      value = *up - Rational(1);
    }
    p.push_back(std::move(value));
  }
  return p;
}

// ---------------------------------------------------------------------------
// DNF

namespace {

// f must be in NNF (atoms under And/Or only).
std::vector<Conj> dnf_core(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return {Conj{}};
    case Formula::Kind::False:
      return {};
    case Formula::Kind::Atomic:
      return {Conj{f.as_atom()}};
    case Formula::Kind::Or: {
      std::vector<Conj> out;
      for (const auto& c : f.children()) {
        auto sub = dnf_core(c);
        out.insert(out.end(), sub.begin(), sub.end());
      }
      return out;
    }
    case Formula::Kind::And: {
      // Distribute with eager infeasibility pruning; without it the
      // conjunction of several disjunctions explodes on formulas like the
      // negation of an eliminated body.
      std::vector<Conj> acc = {Conj{}};
      for (const auto& c : f.children()) {
        std::vector<Conj> sub = dnf_core(c);
        std::vector<Conj> next;
        for (const Conj& a : acc) {
          for (const Conj& b : sub) {
            std::vector<Atom> merged;
            merged.reserve(a.size() + b.size());
            merged.insert(merged.end(), a.begin(), a.end());
            merged.insert(merged.end(), b.begin(), b.end());
            Conj cand = make_conj(std::move(merged));
            if (!conj_satisfiable(cand)) continue;
            next.push_back(std::move(cand));
            if (next.size() > kConjAtomCap)
              throw BudgetExceeded("DNF expansion grew past the cap");
          }
        }
        acc = prune_subsumed(std::move(next));
        if (acc.empty()) return {};
      }
      return acc;
    }
    default:
      throw Error("dnf expects a negation-normal formula");
  }
}

Conj narrow_conj(const Conj& c, int dim) {
  std::vector<Atom> atoms;
  atoms.reserve(c.size());
  for (const Atom& a : c) atoms.emplace_back(a.term().widened(dim), a.rel());
  return make_conj(std::move(atoms));
}

}  // namespace

DefSet to_dnf(const Formula& f, int dim) {
  FmGate gate;
  if (f.has_quantifier()) throw Error("to_dnf expects a quantifier-free formula");
  if (f.max_var() >= dim)
    throw DimensionError("formula mentions variables beyond the ambient dimension");
  DefSet out;
  out.dim = dim;
  for (const Conj& c : dnf_core(nnf(f))) {
    if (!conj_satisfiable(c)) continue;
    out.disjuncts.push_back(narrow_conj(c, dim));
  }
  out.disjuncts = prune_subsumed(std::move(out.disjuncts));
  return out;
}

// ---------------------------------------------------------------------------
// Quantifier elimination

namespace {

Formula elim_quantifiers(const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True:
    case Formula::Kind::False:
    case Formula::Kind::Atomic:
      return f;
    case Formula::Kind::And:
    case Formula::Kind::Or: {
      std::vector<Formula> out;
      out.reserve(f.children().size());
      for (const auto& c : f.children()) out.push_back(elim_quantifiers(c));
      return f.kind() == Formula::Kind::And ? Formula::conj(std::move(out))
                                            : Formula::disj(std::move(out));
    }
    case Formula::Kind::Not:
      return Formula::negation(elim_quantifiers(f.body()));
    case Formula::Kind::Exists: {
      Formula body = elim_quantifiers(f.body());
      int var = f.bound_var();
      std::vector<Formula> parts;
      for (const Conj& c : dnf_core(nnf(body))) {
        if (!conj_satisfiable(c)) continue;
        auto out = eliminate_var(var, c);
        if (!out) continue;
        parts.push_back(conj_to_formula(remove_redundant(std::move(*out))));
      }
      return Formula::disj(std::move(parts));
    }
  }
  return Formula::falsity();
}

}  // namespace

DefSet qe(const Formula& f, int dim) {
  FmGate gate;
  return to_dnf(elim_quantifiers(f), dim);
}

bool is_empty(const DefSet& s) {
  FmGate gate;
  for (const Conj& c : s.disjuncts)
    if (conj_satisfiable(c)) return false;
  return true;
}

DefSet set_difference(const DefSet& a, const DefSet& b) {
  FmGate gate;
  if (a.dim != b.dim) throw DimensionError("set difference across dimensions");
  std::vector<Conj> work;
  for (const Conj& c : a.disjuncts)
    if (conj_satisfiable(c)) work.push_back(c);
  for (const Conj& sub : b.disjuncts) {
    // work := work ∧ ¬sub, one negated literal per branch.
    std::vector<Conj> next;
    for (const Conj& k : work) {
      for (const Atom& a2 : sub) {
        for (const Atom& lit : negated_atom(a2)) {
          std::vector<Atom> merged(k.begin(), k.end());
          merged.push_back(lit);
          Conj cand = make_conj(std::move(merged));
          if (conj_satisfiable(cand)) next.push_back(std::move(cand));
        }
      }
    }
    work = prune_subsumed(std::move(next));
  }
  return DefSet{a.dim, std::move(work)};
}

DefSet set_union(const DefSet& a, const DefSet& b) {
  if (a.dim != b.dim) throw DimensionError("set union across dimensions");
  std::vector<Conj> all = a.disjuncts;
  all.insert(all.end(), b.disjuncts.begin(), b.disjuncts.end());
  std::vector<Conj> live;
  for (Conj& c : all)
    if (conj_satisfiable(c)) live.push_back(std::move(c));
  return DefSet{a.dim, prune_subsumed(std::move(live))};
}

DefSet set_intersection(const DefSet& a, const DefSet& b) {
  FmGate gate;
  if (a.dim != b.dim) throw DimensionError("set intersection across dimensions");
  std::vector<Conj> out;
  for (const Conj& ca : a.disjuncts) {
    for (const Conj& cb : b.disjuncts) {
      std::vector<Atom> merged(ca.begin(), ca.end());
      merged.insert(merged.end(), cb.begin(), cb.end());
      Conj cand = make_conj(std::move(merged));
      if (conj_satisfiable(cand)) out.push_back(std::move(cand));
    }
  }
  return DefSet{a.dim, prune_subsumed(std::move(out))};
}

bool entails(const DefSet& a, const DefSet& b) {
  return set_difference(a, b).disjuncts.empty();
}

bool equivalent(const DefSet& a, const DefSet& b) {
  return entails(a, b) && entails(b, a);
}

bool eval_with_search(const Formula& f, const Point& point, const WitnessGrid& grid) {
  switch (f.kind()) {
    case Formula::Kind::True:
      return true;
    case Formula::Kind::False:
      return false;
    case Formula::Kind::Atomic:
      return f.as_atom().eval(point);
    case Formula::Kind::And: {
      for (const auto& c : f.children())
        if (!eval_with_search(c, point, grid)) return false;
      return true;
    }
    case Formula::Kind::Or: {
      for (const auto& c : f.children())
        if (eval_with_search(c, point, grid)) return true;
      return false;
    }
    case Formula::Kind::Not:
      return !eval_with_search(f.body(), point, grid);
    case Formula::Kind::Exists: {
      if (f.bound_var() != static_cast<int>(point.size()))
        throw Error("bound variable index does not extend the point");
      Point extended = point;
      extended.emplace_back(0);
      for (long den = 1; den <= grid.max_denominator; ++den) {
        for (long num = -grid.max_magnitude * den; num <= grid.max_magnitude * den; ++num) {
          extended.back() = Rational(num, den);
          if (eval_with_search(f.body(), extended, grid)) return true;
        }
      }
      return false;
    }
  }
  return false;
}

}  // namespace grothlin
