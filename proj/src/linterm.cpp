#include "grothlin/linterm.hpp"

#include <algorithm>

#include "grothlin/error.hpp"

namespace grothlin {

LinTerm LinTerm::constant(int dim, Rational c) {
  LinTerm t(dim);
  t.constant_ = std::move(c);
  return t;
}

LinTerm LinTerm::variable(int dim, int index, Rational coefficient) {
  if (index < 0 || index >= dim) throw DimensionError("variable index out of range");
  LinTerm t(dim);
  t.set_coeff(index, std::move(coefficient));
  return t;
}

Rational LinTerm::coeff(int var) const {
  auto it = coeffs_.find(var);
  return it == coeffs_.end() ? Rational(0) : it->second;
}

void LinTerm::set_coeff(int var, Rational c) {
  if (c.is_zero())
    coeffs_.erase(var);
  else
    coeffs_[var] = std::move(c);
  if (var >= dim_) dim_ = var + 1;
}

Rational LinTerm::eval(std::span<const Rational> point) const {
  if (static_cast<int>(point.size()) != dim_)
    throw DimensionError("point has " + std::to_string(point.size()) +
                         " coordinates, functional expects " + std::to_string(dim_));
  return eval_at(point);
}

Rational LinTerm::eval_at(std::span<const Rational> point) const {
  if (max_var() >= static_cast<int>(point.size()))
    throw DimensionError("point does not cover the functional's variables");
  Rational acc = constant_;
  for (const auto& [v, c] : coeffs_) acc += c * point[v];
  return acc;
}

LinTerm LinTerm::operator-() const { return scaled(Rational(-1)); }

LinTerm operator+(const LinTerm& a, const LinTerm& b) {
  LinTerm out(std::max(a.dim_, b.dim_));
  out.constant_ = a.constant_ + b.constant_;
  out.coeffs_ = a.coeffs_;
  for (const auto& [v, c] : b.coeffs_) {
    auto it = out.coeffs_.find(v);
    if (it == out.coeffs_.end()) {
      out.coeffs_.emplace(v, c);
    } else {
      it->second += c;
      if (it->second.is_zero()) out.coeffs_.erase(it);
    }
  }
  return out;
}

LinTerm operator-(const LinTerm& a, const LinTerm& b) { return a + (-b); }

LinTerm LinTerm::scaled(const Rational& factor) const {
  LinTerm out(dim_);
  if (factor.is_zero()) return out;
  out.constant_ = constant_ * factor;
  for (const auto& [v, c] : coeffs_) out.coeffs_.emplace(v, c * factor);
  return out;
}

LinTerm LinTerm::substituted(int var, const LinTerm& replacement) const {
  if (replacement.mentions(var)) throw Error("substitution reintroduces the variable");
  auto it = coeffs_.find(var);
  if (it == coeffs_.end()) return *this;
  Rational c = it->second;
  LinTerm rest = *this;
  rest.coeffs_.erase(var);
  return rest + replacement.scaled(c);
}

LinTerm LinTerm::substituted(int var, const Rational& value) const {
  return substituted(var, LinTerm::constant(dim_, value));
}

LinTerm LinTerm::solve_for(int var) const {
  Rational c = coeff(var);
  if (c.is_zero()) throw Error("functional does not mention the variable to solve for");
  LinTerm rest = *this;
  rest.coeffs_.erase(var);
  return rest.scaled(-c.reciprocal());
}

std::pair<LinTerm, bool> LinTerm::normalized() const {
  if (is_zero()) throw Error("cannot normalize the zero functional");
  // Scale so that every coefficient (constant included) is an integer and
  // their gcd is 1.
  mpz_class den_lcm = 1;
  for (const auto& [v, c] : coeffs_) mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), c.den().get_mpz_t());
  if (!constant_.is_zero())
    mpz_lcm(den_lcm.get_mpz_t(), den_lcm.get_mpz_t(), constant_.den().get_mpz_t());
  mpz_class num_gcd = 0;
  auto fold_gcd = [&num_gcd, &den_lcm](const Rational& c) {
    mpz_class scaled_num = c.num() * (den_lcm / c.den());
    mpz_gcd(num_gcd.get_mpz_t(), num_gcd.get_mpz_t(), scaled_num.get_mpz_t());
  };
  for (const auto& [v, c] : coeffs_) fold_gcd(c);
  if (!constant_.is_zero()) fold_gcd(constant_);
  Rational lambda(den_lcm, num_gcd);  // positive: num_gcd > 0
  const Rational& pivot = coeffs_.empty() ? constant_ : coeffs_.begin()->second;
  bool flipped = pivot.sign() < 0;
  if (flipped) lambda = -lambda;
  return {scaled(lambda), flipped};
}

LinTerm LinTerm::normalized_keep_sign() const {
  auto [t, flipped] = normalized();
  return flipped ? -t : t;
}

LinTerm LinTerm::widened(int new_dim) const {
  if (new_dim < dim_) {
    if (max_var() >= new_dim) throw DimensionError("cannot narrow below occupied indices");
    LinTerm out = *this;
    out.dim_ = new_dim;
    return out;
  }
  LinTerm out = *this;
  out.dim_ = new_dim;
  return out;
}

int LinTerm::compare(const LinTerm& other) const {
  auto it = coeffs_.begin();
  auto jt = other.coeffs_.begin();
  while (it != coeffs_.end() && jt != other.coeffs_.end()) {
    if (it->first != jt->first) return it->first < jt->first ? -1 : 1;
    if (int c = it->second.compare(jt->second); c != 0) return c;
    ++it;
    ++jt;
  }
  if (it != coeffs_.end()) return 1;
  if (jt != other.coeffs_.end()) return -1;
  return constant_.compare(other.constant_);
}

std::string var_name(int index, std::span<const std::string> names) {
  if (index >= 0 && index < static_cast<int>(names.size())) return names[index];
  return "x" + std::to_string(index);
}

std::string LinTerm::str(std::span<const std::string> names) const {
  if (is_zero()) return "0";
  std::string out;
  bool first = true;
  auto emit = [&](const Rational& c, const std::string& sym) {
    Rational a = c.abs();
    std::string piece;
    if (sym.empty()) {
      piece = a.str();
    } else if (a == Rational(1)) {
      piece = sym;
    } else {
      piece = a.str() + "*" + sym;
    }
    if (first) {
      out += (c.sign() < 0 ? "-" : "") + piece;
      first = false;
    } else {
      out += (c.sign() < 0 ? " - " : " + ") + piece;
    }
  };
  for (const auto& [v, c] : coeffs_) emit(c, var_name(v, names));
  if (!constant_.is_zero()) emit(constant_, "");
  return out;
}

}  // namespace grothlin
