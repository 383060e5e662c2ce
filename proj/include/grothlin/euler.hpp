#pragma once

#include <string>
#include <vector>

#include "grothlin/cell.hpp"

namespace grothlin {

/**
 * Element m + n*T of Z[T]/(T^2 + T), with T the class of an open ray.
 * Multiplication reduces by T^2 = -T.
 */
struct GClass {
  long long m = 0;
  long long n = 0;

  friend GClass operator+(GClass a, GClass b) { return {a.m + b.m, a.n + b.n}; }
  friend GClass operator-(GClass a) { return {-a.m, -a.n}; }
  friend GClass operator-(GClass a, GClass b) { return a + (-b); }
  friend GClass operator*(GClass a, GClass b) {
    return {a.m * b.m, a.m * b.n + b.m * a.n - a.n * b.n};
  }
  friend bool operator==(GClass a, GClass b) { return a.m == b.m && a.n == b.n; }
  friend bool operator!=(GClass a, GClass b) { return !(a == b); }
};

inline long long psi_g(GClass a) { return a.m - a.n; }
inline long long psi_b(GClass a) { return a.m; }

/// Canonical rendering: "0", "-1", "T", "2*T + 1", "-T + 3", ...
std::string gclass_str(GClass a);

struct EulerOptions {
  DecomposeOptions decomp{.verify = false};
};

/// Sum of (-1)^dim over all cells of a decomposition of s; 0 for the empty set.
long long chi_g(const DefSet& s, const EulerOptions& opts = {});

/// Sum of (-1)^dim over the Good cells only; 0 when none is Good.
long long chi_b(const DefSet& s, const EulerOptions& opts = {});

/// The class of s, extracted from the pair of characteristics:
/// m = chi_b(s), n = chi_b(s) - chi_g(s).
GClass g_class(const DefSet& s, const EulerOptions& opts = {});

/**
 * Stabilization check for a distance-like function. `dist_graph` describes
 * {(t, x) : d(x) = t} in Q x Q^n (value first). Verifies the preconditions
 * (d total on s, single-valued, nonnegative, bounded fibers), computes a
 * threshold mu strictly above the value-range of every bounded cell of the
 * graph's decomposition, and compares chi_g of the sublevel sets at three
 * sample thresholds against chi_b(s).
 */
struct BdReport {
  enum class Status { Ok, Failed, Unverified };
  struct Precondition {
    std::string name;
    Status status;
    std::string detail;
  };
  struct Sample {
    Rational threshold;
    long long chi_g_sublevel = 0;
    bool matches = false;
  };

  std::vector<Precondition> preconditions;
  Rational mu;
  long long chi_b_source = 0;
  std::vector<Sample> samples;

  bool preconditions_ok() const;
  bool identity_verified() const;
};

BdReport bd_check(const DefSet& s, const DefSet& dist_graph, const EulerOptions& opts = {});

}  // namespace grothlin
