#pragma once

#include <string_view>
#include <vector>

#include "grothlin/formula.hpp"

namespace grothlin {

/**
 * Parses a formula over the named free variables (declaration order is the
 * coordinate order). Quantified variables receive the next free indices,
 * stack-style. Desugars on the fly:
 *   ALL x. f   ~>  !EX x. !f
 *   t <= s     ~>  t < s | t = s        t >= s  ~>  s < t | s = t
 *   t != s     ~>  t < s | s < t        t > s   ~>  s < t
 * Ground atoms fold to true/false. '#' starts a comment running to the end
 * of the line.
 *
 * Throws ParseError on bad syntax and SemanticError on unknown identifiers.
 */
Formula parse_formula(std::string_view text, const std::vector<std::string>& names);

/// Parses a bare affine term (no relation), e.g. "2*x - y + 1/2".
LinTerm parse_term(std::string_view text, const std::vector<std::string>& names);

}  // namespace grothlin
