#pragma once

#include <unistd.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

#include "grothlin/parser.hpp"
#include "grothlin/qe.hpp"

namespace testutil {

using namespace grothlin;

inline DefSet make_set(const std::string& text, const std::vector<std::string>& vars) {
  return qe(parse_formula(text, vars), static_cast<int>(vars.size()));
}

inline Rational random_rational(std::mt19937_64& rng, long max_den = 4, long mag = 6) {
  std::uniform_int_distribution<long> den(1, max_den);
  long d = den(rng);
  std::uniform_int_distribution<long> num(-mag * d, mag * d);
  return Rational(num(rng), d);
}

inline Point random_point(std::mt19937_64& rng, int dim, long max_den = 2, long mag = 6) {
  Point p;
  for (int i = 0; i < dim; ++i) p.push_back(random_rational(rng, max_den, mag));
  return p;
}

/// Directory under the system temp dir, removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    auto base = std::filesystem::temp_directory_path();
    for (int i = 0;; ++i) {
      auto candidate = base / ("grothlin_test_" + std::to_string(::getpid()) + "_" +
                               std::to_string(i));
      std::error_code ec;
      if (std::filesystem::create_directory(candidate, ec)) {
        path = candidate;
        return;
      }
    }
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }

  std::string write(const std::string& name, const std::string& content) const {
    auto p = path / name;
    std::ofstream out(p);
    out << content;
    return p.string();
  }
};

}  // namespace testutil
