#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "grothlin/formula.hpp"

namespace grothlin::cli {

struct Report {
  std::string input;
  std::vector<std::string> vars;
  std::size_t cell_count = 0;
  std::size_t good = 0, bad = 0, exceptional = 0;
  int dim = -1;
  long long chi_g = 0;
  long long chi_b = 0;
  std::string class_str;
  bool bounded = false;
  long long elapsed_us = 0;
};

nlohmann::json report_to_json(const Report& r);
std::string report_text(const Report& r);

/**
 * A corpus file is a formula file with directives in '#' comments:
 *   # name: open-interval
 *   # vars: x
 *   # expect-chi-g: -1
 *   # expect-chi-b: -1
 *   # expect-class: -1
 *   # note: free text
 * The non-comment lines are the formula. Loaders throw Error with the file
 * named on any malformed content.
 */
struct CorpusEntry {
  std::string path;
  std::string name;
  std::vector<std::string> vars;
  std::string formula_text;
  std::optional<long long> expect_chi_g;
  std::optional<long long> expect_chi_b;
  std::optional<std::string> expect_class;
  std::string note;
};

CorpusEntry load_corpus_file(const std::string& path);
std::vector<CorpusEntry> load_corpus_dir(const std::string& dir);

/// Compile-time default, overridable with GROTHLIN_CORPUS.
std::string default_corpus_dir();

/// Entry point used by the binary and the tests. argv excludes the program
/// name. Exit codes: 0 ok, 1 property violation, 2 input error, 3 semantic
/// error.
int run_cli(const std::vector<std::string>& argv, std::ostream& out, std::ostream& err);

}  // namespace grothlin::cli
