#pragma once

#include <utility>
#include <vector>

#include "grothlin/formula.hpp"

namespace grothlin {

struct OracleCaps {
  int max_dim = 3;
  std::size_t max_functionals = 8;
};

/**
 * One realizable face of the hyperplane arrangement: a sign vector over the
 * functionals (-1, 0, +1), its affine dimension (ambient minus the rank of
 * the vanishing functionals), an exact boundedness flag, and a rational
 * witness point realizing exactly these signs.
 */
struct Face {
  std::vector<int> signs;
  int dim = 0;
  bool bounded = false;
  Point witness;
};

struct Arrangement {
  std::vector<LinTerm> functionals;  // sign-canonical, sorted
  std::vector<Face> faces;
};

/**
 * Enumerates the realizable faces of the arrangement spanned by the source's
 * atom functionals plus the coordinate functionals. Brute force by design —
 * this is the independent cross-check for the cell-decomposition path, not a
 * production path. Throws CapExceeded beyond the caps.
 */
Arrangement arrangement_faces(const DefSet& s, const OracleCaps& caps = {});

/// (chi_g, chi_b) summed over the faces lying inside s; bounded faces only
/// for the second component.
std::pair<long long, long long> oracle_chi(const DefSet& s, const OracleCaps& caps = {});

}  // namespace grothlin
