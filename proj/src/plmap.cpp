#include "grothlin/plmap.hpp"

#include <map>

#include "grothlin/error.hpp"
#include "grothlin/parser.hpp"
#include "grothlin/qe.hpp"

namespace grothlin {

PLMap::PLMap(int src_dim, int dst_dim, std::vector<Piece> pieces, bool certify)
    : src_(src_dim), dst_(dst_dim), pieces_(std::move(pieces)) {
  for (const Piece& p : pieces_) {
    if (p.domain.dim != src_) throw DimensionError("piece domain dimension mismatch");
    if (static_cast<int>(p.rows.size()) != dst_)
      throw DimensionError("piece must have one row per output coordinate");
    for (const LinTerm& r : p.rows)
      if (r.max_var() >= src_) throw DimensionError("row mentions a non-input variable");
  }
  if (certify) {
    for (std::size_t i = 0; i < pieces_.size(); ++i)
      for (std::size_t j = i + 1; j < pieces_.size(); ++j)
        if (!is_empty(set_intersection(pieces_[i].domain, pieces_[j].domain)))
          throw SemanticError("piece domains overlap");
  }
}

DefSet PLMap::domain() const {
  DefSet out = DefSet::empty(src_);
  for (const Piece& p : pieces_) out = set_union(out, p.domain);
  return out;
}

Point PLMap::apply(const Point& p) const {
  if (static_cast<int>(p.size()) != src_) throw DimensionError("point dimension mismatch");
  for (const Piece& piece : pieces_) {
    if (!piece.domain.contains(p)) continue;
    Point out;
    out.reserve(dst_);
    for (const LinTerm& r : piece.rows) out.push_back(r.eval_at(p));
    return out;
  }
  throw DomainError("point outside the map's domain");
}

DefSet PLMap::graph() const {
  int total = src_ + dst_;
  std::vector<Conj> disjuncts;
  for (const Piece& piece : pieces_) {
    for (const Conj& dom : piece.domain.disjuncts) {
      std::vector<Atom> atoms;
      for (const Atom& a : dom) atoms.emplace_back(a.term().widened(total), a.rel());
      bool dead = false;
      for (int i = 0; i < dst_; ++i) {
        LinTerm yi = LinTerm::variable(total, src_ + i);
        Formula eq = Formula::atom(yi - piece.rows[i].widened(total), Rel::EQ);
        if (eq.is_false()) {
          dead = true;
          break;
        }
        if (!eq.is_true()) atoms.push_back(eq.as_atom());
      }
      if (!dead) disjuncts.push_back(make_conj(std::move(atoms)));
    }
  }
  return DefSet{total, prune_subsumed(std::move(disjuncts))};
}

PLMap PLMap::identity(int dim) {
  Piece p{DefSet::full(dim), {}};
  for (int i = 0; i < dim; ++i) p.rows.push_back(LinTerm::variable(dim, i));
  return PLMap(dim, dim, {std::move(p)}, false);
}

PLMap PLMap::translate(const Point& offset) {
  int dim = static_cast<int>(offset.size());
  Piece p{DefSet::full(dim), {}};
  for (int i = 0; i < dim; ++i)
    p.rows.push_back(LinTerm::variable(dim, i) + LinTerm::constant(dim, offset[i]));
  return PLMap(dim, dim, {std::move(p)}, false);
}

PLMap PLMap::scale_map(int dim, const Rational& factor) {
  if (factor.is_zero()) throw SemanticError("scaling by zero is not a bijection");
  Piece p{DefSet::full(dim), {}};
  for (int i = 0; i < dim; ++i) p.rows.push_back(LinTerm::variable(dim, i, factor));
  return PLMap(dim, dim, {std::move(p)}, false);
}

PLMap PLMap::halve(int dim) { return scale_map(dim, Rational(1, 2)); }

PLMap PLMap::reflect(int dim) { return scale_map(dim, Rational(-1)); }

PLMap PLMap::swap_coords(const std::vector<int>& perm) {
  int dim = static_cast<int>(perm.size());
  std::vector<bool> seen(dim, false);
  for (int v : perm) {
    if (v < 0 || v >= dim || seen[v]) throw SemanticError("not a permutation");
    seen[v] = true;
  }
  Piece p{DefSet::full(dim), {}};
  for (int i = 0; i < dim; ++i) p.rows.push_back(LinTerm::variable(dim, perm[i]));
  return PLMap(dim, dim, {std::move(p)}, false);
}

PLMap PLMap::shear() {
  Piece p{DefSet::full(2), {LinTerm::variable(2, 0), LinTerm::variable(2, 0) + LinTerm::variable(2, 1)}};
  return PLMap(2, 2, {std::move(p)}, false);
}

PLMap PLMap::raise_above(const LinTerm& lower, int base_dim) {
  if (lower.max_var() >= base_dim) throw DimensionError("bound mentions the fiber coordinate");
  int dim = base_dim + 1;
  Piece p{DefSet::full(dim), {}};
  for (int i = 0; i < base_dim; ++i) p.rows.push_back(LinTerm::variable(dim, i));
  p.rows.push_back(lower.widened(dim) + LinTerm::variable(dim, base_dim));
  return PLMap(dim, dim, {std::move(p)}, false);
}

PLMap PLMap::drop_below(const LinTerm& upper, int base_dim) {
  if (upper.max_var() >= base_dim) throw DimensionError("bound mentions the fiber coordinate");
  int dim = base_dim + 1;
  Piece p{DefSet::full(dim), {}};
  for (int i = 0; i < base_dim; ++i) p.rows.push_back(LinTerm::variable(dim, i));
  p.rows.push_back(upper.widened(dim) - LinTerm::variable(dim, base_dim));
  return PLMap(dim, dim, {std::move(p)}, false);
}

PLMap PLMap::from_graph(const DefSet& graph_set, int src_dim, int dst_dim,
                        const std::optional<DefSet>& declared_domain) {
  if (graph_set.dim != src_dim + dst_dim)
    throw DimensionError("graph dimension must be src + dst");
  std::vector<Piece> pieces;
  for (const Conj& disjunct : graph_set.disjuncts) {
    // Triangularize: solve the equalities for the output coordinates, top
    // index first.
    Conj conj = disjunct;
    std::map<int, LinTerm> sol;
    bool dead = false;
    for (int j = src_dim + dst_dim - 1; j >= src_dim && !dead; --j) {
      const Atom* pick = nullptr;
      for (const Atom& a : conj)
        if (a.rel() == Rel::EQ && a.term().mentions(j)) {
          pick = &a;
          break;
        }
      if (!pick)
        throw SemanticError("set is not a functional graph: an output is unconstrained");
      LinTerm e = pick->term().solve_for(j);
      sol.emplace(j, e);
      std::vector<Atom> rest;
      for (const Atom& a : conj) {
        if (&a == pick) continue;
        Formula f = Formula::atom(a.term().substituted(j, e), a.rel());
        if (f.is_false()) {
          dead = true;
          break;
        }
        if (!f.is_true()) rest.push_back(f.as_atom());
      }
      conj = make_conj(std::move(rest));
    }
    if (dead) continue;
    // Back-substitute so each output depends on inputs only.
    for (int j = src_dim; j < src_dim + dst_dim; ++j)
      for (auto& [k, e] : sol)
        if (k > j) e = e.substituted(j, sol.at(j));
    Piece piece;
    for (int j = src_dim; j < src_dim + dst_dim; ++j) {
      const LinTerm& e = sol.at(j);
      if (e.max_var() >= src_dim)
        throw SemanticError("set is not a functional graph: outputs are entangled");
      piece.rows.push_back(e.widened(src_dim));
    }
    // Narrow the domain atoms to the input space.
    std::vector<Atom> dom_atoms;
    for (const Atom& a : conj) {
      if (a.term().max_var() >= src_dim)
        throw SemanticError("set is not a functional graph: residual output constraint");
      dom_atoms.emplace_back(a.term().widened(src_dim), a.rel());
    }
    piece.domain = DefSet{src_dim, {make_conj(std::move(dom_atoms))}};
    pieces.push_back(std::move(piece));
  }
  // Make overlapping pieces disjoint (values agree on overlaps if the graph
  // is single-valued, so trimming is harmless).
  std::vector<Piece> disjoint;
  DefSet covered = DefSet::empty(src_dim);
  for (Piece& p : pieces) {
    DefSet trimmed = set_difference(p.domain, covered);
    covered = set_union(covered, p.domain);
    if (trimmed.disjuncts.empty()) continue;
    disjoint.push_back(Piece{std::move(trimmed), std::move(p.rows)});
  }
  PLMap f(src_dim, dst_dim, std::move(disjoint), false);
  // Single-valuedness of the input: two copies sharing x must agree.
  {
    const DefSet& g = graph_set;
    int total = src_dim + 2 * dst_dim;
    auto copy1 = [&](int v) { return v; };  // (x, y) stay
    auto copy2 = [&](int v) { return v < src_dim ? v : v + dst_dim; };  // (x, y')
    std::vector<Conj> both;
    for (const Conj& c1 : g.disjuncts) {
      std::vector<Atom> base;
      for (const Atom& a : c1) base.emplace_back(a.term().map_vars(total, copy1), a.rel());
      Conj b1 = make_conj(std::move(base));
      for (const Conj& c2 : g.disjuncts) {
        std::vector<Atom> atoms(b1.begin(), b1.end());
        for (const Atom& a : c2) atoms.emplace_back(a.term().map_vars(total, copy2), a.rel());
        both.push_back(make_conj(std::move(atoms)));
      }
    }
    std::vector<Formula> differ;
    for (int i = 0; i < dst_dim; ++i) {
      LinTerm yi = LinTerm::variable(total, src_dim + i);
      LinTerm yi2 = LinTerm::variable(total, src_dim + dst_dim + i);
      differ.push_back(Formula::atom(yi - yi2, Rel::LT));
      differ.push_back(Formula::atom(yi2 - yi, Rel::LT));
    }
    DefSet pairs{total, prune_subsumed(std::move(both))};
    DefSet neq = to_dnf(Formula::disj(std::move(differ)), total);
    if (!is_empty(set_intersection(pairs, neq)))
      throw SemanticError("set is not a functional graph: not single-valued");
  }
  if (declared_domain) {
    if (declared_domain->dim != src_dim)
      throw DimensionError("declared domain dimension mismatch");
    if (!entails(*declared_domain, f.domain()))
      throw SemanticError("graph is not total on the declared domain");
    if (!entails(f.domain(), *declared_domain))
      throw SemanticError("graph extends outside the declared domain");
  }
  return f;
}

// ---------------------------------------------------------------------------
// Operations

DefSet image(const PLMap& f, const DefSet& s) {
  if (s.dim != f.src_dim()) throw DimensionError("set dimension mismatch");
  if (!entails(s, f.domain())) throw DomainError("set escapes the map's domain");
  int m = f.src_dim(), n = f.dst_dim();
  int total = m + n;
  DefSet g = f.graph();
  std::vector<Conj> lifted;
  for (const Conj& c : s.disjuncts) {
    std::vector<Atom> atoms;
    for (const Atom& a : c) atoms.emplace_back(a.term().widened(total), a.rel());
    lifted.push_back(make_conj(std::move(atoms)));
  }
  DefSet meet = set_intersection(DefSet{total, std::move(lifted)}, g);
  std::vector<int> inputs(m);
  for (int i = 0; i < m; ++i) inputs[i] = i;
  std::vector<Conj> out;
  for (const Conj& c : meet.disjuncts) {
    auto proj = project_out(c, inputs);
    if (!proj) continue;
    std::vector<Atom> shifted;
    for (const Atom& a : *proj)
      shifted.emplace_back(a.term().map_vars(n, [&](int v) { return v - m; }), a.rel());
    out.push_back(make_conj(std::move(shifted)));
  }
  return DefSet{n, prune_subsumed(std::move(out))};
}

bool is_injective_on(const PLMap& f, const DefSet& s) {
  if (s.dim != f.src_dim()) throw DimensionError("set dimension mismatch");
  int m = f.src_dim(), n = f.dst_dim();
  int total = 2 * m;
  auto second = [&](int v) { return v + m; };
  // s(x) ∧ s(x') ∧ f(x) = f(x') piecewise ∧ x != x'
  std::vector<Conj> collide;
  for (const auto& p : f.pieces()) {
    for (const auto& q : f.pieces()) {
      for (const Conj& dp : p.domain.disjuncts) {
        for (const Conj& dq : q.domain.disjuncts) {
          std::vector<Atom> atoms;
          for (const Atom& a : dp) atoms.emplace_back(a.term().widened(total), a.rel());
          for (const Atom& a : dq)
            atoms.emplace_back(a.term().map_vars(total, second), a.rel());
          bool dead = false;
          for (int i = 0; i < n && !dead; ++i) {
            LinTerm left = p.rows[i].widened(total);
            LinTerm right = q.rows[i].map_vars(total, second);
            Formula eq = Formula::atom(left - right, Rel::EQ);
            if (eq.is_false()) dead = true;
            else if (!eq.is_true()) atoms.push_back(eq.as_atom());
          }
          if (!dead) collide.push_back(make_conj(std::move(atoms)));
        }
      }
    }
  }
  DefSet same_value{total, prune_subsumed(std::move(collide))};
  std::vector<Conj> s_pair;
  for (const Conj& c1 : s.disjuncts) {
    std::vector<Atom> base;
    for (const Atom& a : c1) base.emplace_back(a.term().widened(total), a.rel());
    Conj b1 = make_conj(std::move(base));
    for (const Conj& c2 : s.disjuncts) {
      std::vector<Atom> atoms(b1.begin(), b1.end());
      for (const Atom& a : c2) atoms.emplace_back(a.term().map_vars(total, second), a.rel());
      s_pair.push_back(make_conj(std::move(atoms)));
    }
  }
  std::vector<Formula> differ;
  for (int i = 0; i < m; ++i) {
    LinTerm xi = LinTerm::variable(total, i);
    LinTerm xi2 = LinTerm::variable(total, i + m);
    differ.push_back(Formula::atom(xi - xi2, Rel::LT));
    differ.push_back(Formula::atom(xi2 - xi, Rel::LT));
  }
  DefSet witness = set_intersection(
      set_intersection(DefSet{total, prune_subsumed(std::move(s_pair))}, same_value),
      to_dnf(Formula::disj(std::move(differ)), total));
  return is_empty(witness);
}

bool certify_bijection(const PLMap& f, const DefSet& s, const DefSet& t) {
  return is_injective_on(f, s) && equivalent(image(f, s), t);
}

// ---------------------------------------------------------------------------
// JSON

nlohmann::json plmap_to_json(const PLMap& f, const std::vector<std::string>& names) {
  nlohmann::json pieces = nlohmann::json::array();
  for (const auto& p : f.pieces()) {
    nlohmann::json rows = nlohmann::json::array();
    for (const LinTerm& r : p.rows) rows.push_back(r.str(names));
    pieces.push_back({{"where", p.domain.str(names)}, {"rows", rows}});
  }
  return nlohmann::json{{"src", f.src_dim()}, {"dst", f.dst_dim()}, {"pieces", pieces}};
}

PLMap plmap_from_json(const nlohmann::json& j, const std::vector<std::string>& names) {
  int src = j.at("src").get<int>();
  int dst = j.at("dst").get<int>();
  if (static_cast<int>(names.size()) < src)
    throw SemanticError("map needs " + std::to_string(src) + " input variable names");
  std::vector<std::string> input_names(names.begin(), names.begin() + src);
  std::vector<PLMap::Piece> pieces;
  for (const auto& pj : j.at("pieces")) {
    PLMap::Piece piece;
    Formula where = parse_formula(pj.at("where").get<std::string>(), input_names);
    piece.domain = qe(where, src);
    for (const auto& row : pj.at("rows"))
      piece.rows.push_back(parse_term(row.get<std::string>(), input_names));
    pieces.push_back(std::move(piece));
  }
  return PLMap(src, dst, std::move(pieces));
}

}  // namespace grothlin
