#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grothlin {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Lexical or grammatical error; `position` is a byte offset into the input.
struct ParseError : Error {
  ParseError(const std::string& msg, std::size_t position)
      : Error(msg + " (at offset " + std::to_string(position) + ")"),
        position(position) {}
  std::size_t position;
};

/// Well-formed input with an invalid meaning (unknown variable, wrong arity, ...).
struct SemanticError : Error {
  using Error::Error;
};

struct DimensionError : Error {
  using Error::Error;
};

/// A point or set fed to a map lies outside the map's domain.
struct DomainError : Error {
  using Error::Error;
};

/// Raised when an operation exceeds its configured size caps.
struct CapExceeded : Error {
  using Error::Error;
};

/// Raised when the elimination engine exhausts its round budget
/// (see GROTHLIN_FM_DEPTH).
struct BudgetExceeded : Error {
  using Error::Error;
};

}  // namespace grothlin
