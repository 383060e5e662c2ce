#pragma once

#include <optional>
#include <vector>

#include <json.hpp>

#include "grothlin/formula.hpp"

namespace grothlin {

/**
 * One level of a cell tower: either the graph of an affine function of the
 * earlier coordinates, or an open band between two such functions (either
 * side may be infinite).
 */
struct Stage {
  enum class Kind { Graph, Band };

  Kind kind = Kind::Graph;
  LinTerm fn{0};                // Graph
  std::optional<LinTerm> lo;    // Band; nullopt = -inf
  std::optional<LinTerm> hi;    // Band; nullopt = +inf

  static Stage graph(LinTerm f);
  static Stage band(std::optional<LinTerm> lo, std::optional<LinTerm> hi);

  int compare(const Stage& other) const;
};

/**
 * A cell in Q^n: stage k constrains coordinate k using only coordinates
 * < k. Cells produced by `decompose` are nonempty with band bounds strictly
 * ordered over the base; hand-built cells are only checked for the scoping
 * invariant.
 */
class Cell {
 public:
  Cell(int ambient_dim, std::vector<Stage> stages);

  int ambient_dim() const { return ambient_; }
  const std::vector<Stage>& stages() const { return stages_; }

  /// Number of band stages; 0 for a point.
  int dim() const;

  Conj to_conj() const;
  DefSet to_defset() const;

  /// A point of the cell; different variants give distinct points.
  Point sample(int variant = 0) const;

  /// The cell over the first k coordinates (drops the top stages).
  Cell prefix(int k) const;

  int compare(const Cell& other) const;
  friend bool operator==(const Cell& a, const Cell& b) { return a.compare(b) == 0; }
  friend bool operator<(const Cell& a, const Cell& b) { return a.compare(b) < 0; }

  std::string str(std::span<const std::string> names = {}) const;

 private:
  int ambient_;
  std::vector<Stage> stages_;
};

enum class CellKind { Exceptional, Bad, Good };

const char* kind_name(CellKind k);

/// Stage-shape classification: Exceptional when some band is doubly
/// infinite, Bad when some band is half-infinite, Good otherwise.
CellKind classify(const Cell& c);

/// Per-coordinate exact range [lo, hi] enclosing the cell.
struct Box {
  std::vector<std::pair<Rational, Rational>> ranges;
};

/// Witnessing box computed by interval arithmetic up the stages, or nullopt
/// when the cell is unbounded.
std::optional<Box> bounding_box(const Cell& c);

bool is_bounded(const Cell& c);

struct Decomposition {
  std::vector<Cell> cells;
  DefSet source;

  /// Max cell dimension; -1 for the empty decomposition.
  int max_dim() const;
};

struct DecomposeOptions {
  /// QE-certify containment of kept cells, emptiness of rejected regions,
  /// boundary ordering per base cell, and pairwise disjointness on samples.
  bool verify = true;
  std::size_t boundary_cap = 4096;  // per-level boundary expressions
  std::size_t cell_cap = 500000;    // enumerated cells
};

/**
 * Cell decomposition adapted to the coordinate order. Every atom functional
 * of the source is split on, every level is seeded with its own coordinate
 * (so no doubly infinite band survives), and boundary crossings are pushed
 * down the levels so that boundary order is constant per base cell. The
 * result partitions the source; no cell is Exceptional.
 */
Decomposition decompose(const DefSet& s, const DecomposeOptions& opts = {});

/// Same decomposition further split by the sign of each extra functional;
/// every new cell lies inside exactly one cell of `d`.
Decomposition refine(const Decomposition& d, const std::vector<LinTerm>& extra,
                     const DecomposeOptions& opts = {});

nlohmann::json cell_to_json(const Cell& c);

}  // namespace grothlin
