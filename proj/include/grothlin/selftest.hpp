#pragma once

#include <string>
#include <vector>

#include "grothlin/cli.hpp"

namespace grothlin::cli {

struct SuiteResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Runs every invariant suite whose name contains `filter` (all when empty)
/// over the bundled corpus. Deterministic: fixed seeds throughout.
std::vector<SuiteResult> run_selftest(const std::vector<CorpusEntry>& corpus,
                                      const std::string& filter);

}  // namespace grothlin::cli
