#include "grothlin/rational.hpp"

#include <cctype>
#include <limits>
#include <ostream>
#include <sstream>

#include "grothlin/error.hpp"

namespace grothlin {

namespace {

mpz_class mpz_from_ll(long long n) {
  mpz_class z;
  if (n >= std::numeric_limits<long>::min() && n <= std::numeric_limits<long>::max()) {
    z = static_cast<long>(n);
  } else {
    std::ostringstream os;
    os << n;
    z = mpz_class(os.str());
  }
  return z;
}

bool all_digits(std::string_view s) {
  if (s.empty()) return false;
  for (char c : s)
    if (!std::isdigit(static_cast<unsigned char>(c))) return false;
  return true;
}

}  // namespace

Rational::Rational(long long n) : v_(mpz_from_ll(n)) {}

Rational::Rational(long long num, long long den) : Rational(mpz_from_ll(num), mpz_from_ll(den)) {}

Rational::Rational(const mpz_class& num, const mpz_class& den) {
  if (den == 0) throw Error("rational with zero denominator");
  v_ = mpq_class(num, den);
  v_.canonicalize();
}

Rational Rational::parse(std::string_view text) {
  std::string_view s = text;
  bool neg = false;
  if (!s.empty() && (s.front() == '-' || s.front() == '+')) {
    neg = s.front() == '-';
    s.remove_prefix(1);
  }
  std::string_view num_part = s;
  std::string_view den_part;
  if (auto slash = s.find('/'); slash != std::string_view::npos) {
    num_part = s.substr(0, slash);
    den_part = s.substr(slash + 1);
    if (!all_digits(den_part))
      throw Error("malformed rational literal '" + std::string(text) + "'");
  }
  if (!all_digits(num_part))
    throw Error("malformed rational literal '" + std::string(text) + "'");
  mpz_class num(std::string(num_part), 10);
  mpz_class den = den_part.empty() ? mpz_class(1) : mpz_class(std::string(den_part), 10);
  if (den == 0) throw Error("malformed rational literal '" + std::string(text) + "': zero denominator");
  if (neg) num = -num;
  return Rational(num, den);
}

Rational Rational::reciprocal() const {
  if (is_zero()) throw Error("reciprocal of zero");
  return Rational(den(), num());
}

Rational operator/(const Rational& a, const Rational& b) {
  if (b.is_zero()) throw Error("division by zero");
  return Rational(mpq_class(a.v_ / b.v_));
}

std::string Rational::str() const {
  if (is_integer()) return num().get_str();
  return num().get_str() + "/" + den().get_str();
}

std::ostream& operator<<(std::ostream& os, const Rational& r) { return os << r.str(); }

std::string point_str(const Point& p) {
  std::string out = "(";
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (i) out += ", ";
    out += p[i].str();
  }
  out += ")";
  return out;
}

}  // namespace grothlin
