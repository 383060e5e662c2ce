#pragma once

#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "grothlin/rational.hpp"

namespace grothlin {

/**
 * Affine functional c1*x1 + ... + cn*xn + c0 over the rationals.
 *
 * Coefficients are stored sparsely, keyed by 0-based variable index; zero
 * coefficients are never stored. `dim` is the declared ambient capacity and
 * is at least max stored index + 1. Immutable in spirit.
 */
class LinTerm {
 public:
  explicit LinTerm(int dim) : dim_(dim) {}

  static LinTerm constant(int dim, Rational c);
  static LinTerm variable(int dim, int index, Rational coefficient = Rational(1));

  int dim() const { return dim_; }
  const std::map<int, Rational>& coeffs() const { return coeffs_; }
  const Rational& constant_part() const { return constant_; }

  Rational coeff(int var) const;
  bool mentions(int var) const { return coeffs_.count(var) != 0; }
  bool is_constant() const { return coeffs_.empty(); }
  bool is_zero() const { return coeffs_.empty() && constant_.is_zero(); }

  /// Highest stored variable index, or -1 for a constant functional.
  int max_var() const { return coeffs_.empty() ? -1 : coeffs_.rbegin()->first; }

  /// Exact evaluation; the point must have exactly `dim` coordinates.
  Rational eval(std::span<const Rational> point) const;

  /// Relaxed evaluation: the point only has to cover the occupied indices.
  Rational eval_at(std::span<const Rational> point) const;

  LinTerm operator-() const;
  friend LinTerm operator+(const LinTerm& a, const LinTerm& b);
  friend LinTerm operator-(const LinTerm& a, const LinTerm& b);
  LinTerm scaled(const Rational& factor) const;

  /// Replaces x_var by `replacement` (which must not mention x_var).
  LinTerm substituted(int var, const LinTerm& replacement) const;
  /// Replaces x_var by the constant `value`.
  LinTerm substituted(int var, const Rational& value) const;

  /// For t = c*x_var + r with c != 0, returns e := -r/c, i.e. the unique
  /// solution of t = 0 for x_var. The result does not mention x_var.
  LinTerm solve_for(int var) const;

  /**
   * Canonical scalar multiple: integer coprime coefficients (constant
   * included) and a positive sign pivot — the lowest-index variable
   * coefficient, or the constant when no variable occurs. Returns the
   * canonical term and whether the sign was flipped. Throws on the zero
   * functional. Idempotent.
   */
  std::pair<LinTerm, bool> normalized() const;

  /// Positive canonical multiple: integer coprime coefficients, sign kept.
  LinTerm normalized_keep_sign() const;

  /// Remaps variable indices; `fn` must be injective on the stored indices.
  template <typename Fn>
  LinTerm map_vars(int new_dim, Fn fn) const {
    LinTerm out(new_dim);
    out.constant_ = constant_;
    for (const auto& [v, c] : coeffs_) out.coeffs_.emplace(fn(v), c);
    return out;
  }

  LinTerm widened(int new_dim) const;

  int compare(const LinTerm& other) const;
  friend bool operator==(const LinTerm& a, const LinTerm& b) { return a.compare(b) == 0; }
  friend bool operator!=(const LinTerm& a, const LinTerm& b) { return a.compare(b) != 0; }
  friend bool operator<(const LinTerm& a, const LinTerm& b) { return a.compare(b) < 0; }

  /// Rendering like "x + 2*y - 1/2"; names may be shorter than dim, missing
  /// indices render as "x<i>".
  std::string str(std::span<const std::string> names = {}) const;

 private:
  void set_coeff(int var, Rational c);

  int dim_;
  std::map<int, Rational> coeffs_;
  Rational constant_;
};

std::string var_name(int index, std::span<const std::string> names);

}  // namespace grothlin
