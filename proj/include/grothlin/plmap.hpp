#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "grothlin/formula.hpp"

namespace grothlin {

/**
 * Piecewise-affine definable map Q^m -> Q^n: finitely many affine pieces
 * over pairwise disjoint quantifier-free domains. Every definable function
 * of this structure is of this shape cellwise, so the representation is
 * complete for the maps that occur here.
 */
class PLMap {
 public:
  struct Piece {
    DefSet domain;             // over Q^m
    std::vector<LinTerm> rows;  // n functionals over the m inputs
  };

  /// `certify` QE-checks pairwise disjointness of the piece domains.
  PLMap(int src_dim, int dst_dim, std::vector<Piece> pieces, bool certify = true);

  int src_dim() const { return src_; }
  int dst_dim() const { return dst_; }
  const std::vector<Piece>& pieces() const { return pieces_; }

  /// Union of the piece domains.
  DefSet domain() const;

  /// Evaluation; throws DomainError outside the domain.
  Point apply(const Point& p) const;

  /// {(x, f(x))} as a set in Q^{m+n}.
  DefSet graph() const;

  // Stock bijections.
  static PLMap identity(int dim);
  static PLMap translate(const Point& offset);           // x ↦ x + a
  static PLMap scale_map(int dim, const Rational& factor);  // x ↦ c·x, c != 0
  static PLMap halve(int dim = 1);                       // x ↦ x/2
  static PLMap reflect(int dim = 1);                     // x ↦ -x
  /// x_i ↦ x_{perm[i]}; perm must be a permutation of 0..m-1.
  static PLMap swap_coords(const std::vector<int>& perm);
  static PLMap shear();                                  // (x,y) ↦ (x, x+y)
  /// (x, t) ↦ (x, lower(x) + t); `lower` is over the base coordinates.
  static PLMap raise_above(const LinTerm& lower, int base_dim);
  /// (x, t) ↦ (x, upper(x) - t).
  static PLMap drop_below(const LinTerm& upper, int base_dim);

  /**
   * Builds a map from a functional graph in Q^{m+n}: each disjunct must
   * determine the outputs affinely; the graph must be single-valued
   * (QE-checked). Overlapping disjuncts are made disjoint. When a domain is
   * declared, the graph must be total on exactly that set (QE-checked).
   * Throws SemanticError when the set is not such a graph.
   */
  static PLMap from_graph(const DefSet& graph_set, int src_dim, int dst_dim,
                          const std::optional<DefSet>& declared_domain = std::nullopt);

 private:
  int src_;
  int dst_;
  std::vector<Piece> pieces_;
};

/// Exact image f(s); requires s inside the domain (throws DomainError).
DefSet image(const PLMap& f, const DefSet& s);

/// No two distinct points of s share a value (decided by QE).
bool is_injective_on(const PLMap& f, const DefSet& s);

/// Injective on s and image(f, s) equivalent to t.
bool certify_bijection(const PLMap& f, const DefSet& s, const DefSet& t);

nlohmann::json plmap_to_json(const PLMap& f, const std::vector<std::string>& names);
PLMap plmap_from_json(const nlohmann::json& j, const std::vector<std::string>& names);

}  // namespace grothlin
