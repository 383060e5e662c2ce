#include "grothlin/cell.hpp"

#include <algorithm>
#include <set>

#include "grothlin/error.hpp"
#include "grothlin/qe.hpp"

namespace grothlin {

// ---------------------------------------------------------------------------
// Stage / Cell basics

Stage Stage::graph(LinTerm f) {
  Stage s;
  s.kind = Kind::Graph;
  s.fn = std::move(f);
  return s;
}

Stage Stage::band(std::optional<LinTerm> lo, std::optional<LinTerm> hi) {
  Stage s;
  s.kind = Kind::Band;
  s.lo = std::move(lo);
  s.hi = std::move(hi);
  return s;
}

namespace {

int compare_opt(const std::optional<LinTerm>& a, const std::optional<LinTerm>& b) {
  if (a.has_value() != b.has_value()) return a.has_value() ? 1 : -1;
  if (!a) return 0;
  return a->compare(*b);
}

}  // namespace

int Stage::compare(const Stage& other) const {
  // Spatial order along the fiber: the lower-unbounded band first, then
  // graphs and bands keyed by their lower term, a graph preceding the band
  // that starts at it, the upper-unbounded band last.
  bool a_bottom = kind == Kind::Band && !lo;
  bool b_bottom = other.kind == Kind::Band && !other.lo;
  if (a_bottom != b_bottom) return a_bottom ? -1 : 1;
  if (a_bottom) return compare_opt(hi, other.hi);
  const LinTerm& a_start = kind == Kind::Graph ? fn : *lo;
  const LinTerm& b_start = other.kind == Kind::Graph ? other.fn : *other.lo;
  if (int c = a_start.compare(b_start); c != 0) return c;
  if (kind != other.kind) return kind == Kind::Graph ? -1 : 1;
  if (kind == Kind::Graph) return 0;
  if (hi.has_value() != other.hi.has_value()) return hi.has_value() ? -1 : 1;
  return hi ? hi->compare(*other.hi) : 0;
}

Cell::Cell(int ambient_dim, std::vector<Stage> stages)
    : ambient_(ambient_dim), stages_(std::move(stages)) {
  if (static_cast<int>(stages_.size()) != ambient_)
    throw DimensionError("cell must have one stage per coordinate");
  for (int k = 0; k < ambient_; ++k) {
    const Stage& st = stages_[k];
    int top = -1;
    if (st.kind == Stage::Kind::Graph) {
      top = st.fn.max_var();
    } else {
      if (st.lo) top = std::max(top, st.lo->max_var());
      if (st.hi) top = std::max(top, st.hi->max_var());
    }
    if (top >= k) throw DimensionError("stage functionals may only use earlier coordinates");
  }
}

int Cell::dim() const {
  int d = 0;
  for (const Stage& s : stages_)
    if (s.kind == Stage::Kind::Band) ++d;
  return d;
}

Conj Cell::to_conj() const {
  std::vector<Atom> atoms;
  for (int k = 0; k < ambient_; ++k) {
    const Stage& st = stages_[k];
    LinTerm xk = LinTerm::variable(ambient_, k);
    if (st.kind == Stage::Kind::Graph) {
      atoms.emplace_back(xk - st.fn.widened(ambient_), Rel::EQ);
    } else {
      if (st.lo) atoms.emplace_back(st.lo->widened(ambient_) - xk, Rel::LT);
      if (st.hi) atoms.emplace_back(xk - st.hi->widened(ambient_), Rel::LT);
    }
  }
  return make_conj(std::move(atoms));
}

DefSet Cell::to_defset() const { return DefSet{ambient_, {to_conj()}}; }

Point Cell::sample(int variant) const {
  Point p;
  p.reserve(ambient_);
  // Interior fractions used for doubly bounded bands, per variant.
  static const std::pair<int, int> fracs[] = {{1, 2}, {1, 3}, {2, 3}, {1, 4}, {3, 4},
                                              {1, 5}, {2, 5}, {3, 5}, {4, 5}, {1, 6}};
  auto frac = [&](int i) {
    auto [num, den] = fracs[i % (sizeof(fracs) / sizeof(fracs[0]))];
    return Rational(num, den);
  };
  for (const Stage& st : stages_) {
    std::span<const Rational> prefix(p.data(), p.size());
    if (st.kind == Stage::Kind::Graph) {
      p.push_back(st.fn.eval_at(prefix));
      continue;
    }
    if (st.lo && st.hi) {
      Rational lo = st.lo->eval_at(prefix);
      Rational hi = st.hi->eval_at(prefix);
      p.push_back(lo + (hi - lo) * frac(variant));
    } else if (st.lo) {
      p.push_back(st.lo->eval_at(prefix) + Rational(variant + 1));
    } else if (st.hi) {
      p.push_back(st.hi->eval_at(prefix) - Rational(variant + 1));
    } else {
      p.push_back(Rational(variant));
    }
  }
  return p;
}

Cell Cell::prefix(int k) const {
  if (k < 0 || k > ambient_) throw DimensionError("prefix length out of range");
  return Cell(k, std::vector<Stage>(stages_.begin(), stages_.begin() + k));
}

int Cell::compare(const Cell& other) const {
  if (ambient_ != other.ambient_) return ambient_ < other.ambient_ ? -1 : 1;
  for (int k = 0; k < ambient_; ++k)
    if (int c = stages_[k].compare(other.stages_[k]); c != 0) return c;
  return 0;
}

std::string Cell::str(std::span<const std::string> names) const {
  std::string out = "[";
  for (int k = 0; k < ambient_; ++k) {
    if (k) out += ", ";
    const Stage& st = stages_[k];
    if (st.kind == Stage::Kind::Graph) {
      out += "graph(" + st.fn.str(names) + ")";
    } else {
      out += "band(" + (st.lo ? st.lo->str(names) : "-inf") + ", " +
             (st.hi ? st.hi->str(names) : "+inf") + ")";
    }
  }
  return out + "]";
}

// ---------------------------------------------------------------------------
// Classification and boundedness

const char* kind_name(CellKind k) {
  switch (k) {
    case CellKind::Exceptional: return "exceptional";
    case CellKind::Bad: return "bad";
    case CellKind::Good: return "good";
  }
  return "?";
}

CellKind classify(const Cell& c) {
  bool bad = false;
  for (const Stage& st : c.stages()) {
    if (st.kind != Stage::Kind::Band) continue;
    if (!st.lo && !st.hi) return CellKind::Exceptional;
    if (!st.lo || !st.hi) bad = true;
  }
  return bad ? CellKind::Bad : CellKind::Good;
}

namespace {

// Exact range of an affine functional over a box.
std::pair<Rational, Rational> affine_range(const LinTerm& t, const Box& box) {
  Rational lo = t.constant_part(), hi = t.constant_part();
  for (const auto& [v, c] : t.coeffs()) {
    const auto& [rlo, rhi] = box.ranges[v];
    if (c.sign() > 0) {
      lo += c * rlo;
      hi += c * rhi;
    } else {
      lo += c * rhi;
      hi += c * rlo;
    }
  }
  return {lo, hi};
}

}  // namespace

std::optional<Box> bounding_box(const Cell& c) {
  Box box;
  for (const Stage& st : c.stages()) {
    if (st.kind == Stage::Kind::Graph) {
      box.ranges.push_back(affine_range(st.fn, box));
      continue;
    }
    if (!st.lo || !st.hi) return std::nullopt;
    Rational lo = affine_range(*st.lo, box).first;
    Rational hi = affine_range(*st.hi, box).second;
    box.ranges.emplace_back(std::move(lo), std::move(hi));
  }
  return box;
}

bool is_bounded(const Cell& c) { return bounding_box(c).has_value(); }

int Decomposition::max_dim() const {
  int m = -1;
  for (const Cell& c : cells) m = std::max(m, c.dim());
  return m;
}

// ---------------------------------------------------------------------------
// Decomposition

namespace {

struct Builder {
  const DefSet& source;
  int n;
  const std::vector<std::vector<LinTerm>>& boundaries;  // per level, deduped
  const DecomposeOptions& opts;

  std::vector<Cell> kept;
  std::vector<Stage> stages;
  Point sample;
  Conj partial;  // constraints of the stages built so far
  std::size_t enumerated = 0;

  // Region reachable by the current stage prefix still meets the source?
  bool region_feasible() const {
    for (const Conj& d : source.disjuncts) {
      std::vector<Atom> merged(partial.begin(), partial.end());
      merged.insert(merged.end(), d.begin(), d.end());
      if (conj_satisfiable(make_conj(std::move(merged)))) return true;
    }
    return false;
  }

  void certify_boundary_order(const std::vector<std::vector<const LinTerm*>>& groups) const {
    // Within a group: expressions coincide on the base; between consecutive
    // groups: strict order on the base. Certified by emptiness of the
    // opposite sign conditions.
    auto check_empty = [&](const LinTerm& t, Rel rel) {
      std::vector<Atom> merged(partial.begin(), partial.end());
      Formula f = Formula::atom(t, rel);
      if (f.is_false()) return;
      if (f.is_true())
        throw Error("boundary order certificate failed (trivially nonempty)");
      merged.push_back(f.as_atom());
      if (conj_satisfiable(make_conj(std::move(merged))))
        throw Error("boundary order certificate failed");
    };
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const LinTerm& rep = *groups[g].front();
      for (const LinTerm* other : groups[g]) {
        if (other == groups[g].front()) continue;
        check_empty(rep - *other, Rel::LT);
        check_empty(*other - rep, Rel::LT);
      }
      if (g + 1 < groups.size()) {
        const LinTerm& next = *groups[g + 1].front();
        check_empty(next - rep, Rel::LT);  // never below rep on the base
        check_empty(rep - next, Rel::EQ);  // never equal to it either
      }
    }
  }

  void push_atoms(const Stage& st, int k) {
    LinTerm xk = LinTerm::variable(k + 1, k);
    std::vector<Atom> extra(partial.begin(), partial.end());
    if (st.kind == Stage::Kind::Graph) {
      extra.emplace_back(xk - st.fn.widened(k + 1), Rel::EQ);
    } else {
      if (st.lo) extra.emplace_back(st.lo->widened(k + 1) - xk, Rel::LT);
      if (st.hi) extra.emplace_back(xk - st.hi->widened(k + 1), Rel::LT);
    }
    partial = make_conj(std::move(extra));
  }

  void descend(int k, const Stage& st, const Rational& value) {
    auto saved_partial = partial;
    stages.push_back(st);
    sample.push_back(value);
    push_atoms(st, k);
    build(k + 1);
    partial = std::move(saved_partial);
    sample.pop_back();
    stages.pop_back();
  }

  void build(int k) {
    if (opts.cell_cap && enumerated > opts.cell_cap)
      throw CapExceeded("cell enumeration exceeded the cap");
    if (!source.disjuncts.empty() && !region_feasible()) return;
    if (k == n) {
      ++enumerated;
      if (source.contains(sample)) {
        kept.emplace_back(n, stages);
      } else if (opts.verify) {
        // The rejected cell must be disjoint from the source.
        Conj cell_atoms = Cell(n, stages).to_conj();
        for (const Conj& d : source.disjuncts) {
          std::vector<Atom> merged(cell_atoms.begin(), cell_atoms.end());
          merged.insert(merged.end(), d.begin(), d.end());
          if (conj_satisfiable(make_conj(std::move(merged))))
            throw Error("decomposition certificate failed: rejected cell meets the source");
        }
      }
      return;
    }
    // Sort this level's boundary expressions over the current base cell;
    // expressions with equal value on the base collapse into one boundary.
    std::span<const Rational> prefix(sample.data(), sample.size());
    std::vector<std::pair<Rational, const LinTerm*>> evaluated;
    evaluated.reserve(boundaries[k].size());
    for (const LinTerm& e : boundaries[k]) evaluated.emplace_back(e.eval_at(prefix), &e);
    std::sort(evaluated.begin(), evaluated.end(), [](const auto& a, const auto& b) {
      if (int c = a.first.compare(b.first); c != 0) return c < 0;
      return a.second->compare(*b.second) < 0;
    });
    std::vector<std::vector<const LinTerm*>> groups;
    std::vector<Rational> values;
    for (const auto& [val, term] : evaluated) {
      if (values.empty() || values.back() != val) {
        values.push_back(val);
        groups.emplace_back();
      }
      groups.back().push_back(term);
    }
    if (opts.verify) certify_boundary_order(groups);

    // Stages in coordinate order: band below, then graph/band alternating.
    descend(k, Stage::band(std::nullopt, *groups.front().front()), values.front() - Rational(1));
    for (std::size_t g = 0; g < groups.size(); ++g) {
      const LinTerm& rep = *groups[g].front();
      descend(k, Stage::graph(rep), values[g]);
      if (g + 1 < groups.size()) {
        const LinTerm& next = *groups[g + 1].front();
        descend(k, Stage::band(rep, next),
                (values[g] + values[g + 1]) / Rational(2));
      }
    }
    descend(k, Stage::band(*groups.back().front(), std::nullopt), values.back() + Rational(1));
  }
};

std::vector<std::vector<LinTerm>> boundary_levels(const DefSet& s,
                                                  const std::vector<LinTerm>& extra,
                                                  const DecomposeOptions& opts) {
  int n = s.dim;
  std::vector<std::set<LinTerm>> levels(n);
  auto add = [&](const LinTerm& t) {
    if (t.is_constant()) return;
    int k = t.max_var();
    if (k >= n) throw DimensionError("functional outside the ambient space");
    levels[k].insert(t.solve_for(k));
    if (levels[k].size() > opts.boundary_cap)
      throw CapExceeded("boundary expressions exceeded the cap");
  };
  for (const Conj& d : s.disjuncts)
    for (const Atom& a : d) add(a.term());
  for (int k = 0; k < n; ++k) add(LinTerm::variable(n, k));  // seed coordinates
  for (const LinTerm& t : extra) add(t);
  // Crossing closure, top level down: the difference of two boundary
  // expressions at level k is split on at its own (lower) level, which keeps
  // the boundary order constant per base cell.
  for (int k = n - 1; k >= 1; --k) {
    std::vector<LinTerm> exprs(levels[k].begin(), levels[k].end());
    for (std::size_t i = 0; i < exprs.size(); ++i)
      for (std::size_t j = i + 1; j < exprs.size(); ++j) add(exprs[i] - exprs[j]);
  }
  std::vector<std::vector<LinTerm>> out(n);
  for (int k = 0; k < n; ++k) out[k].assign(levels[k].begin(), levels[k].end());
  return out;
}

void verify_decomposition(const Decomposition& d, const DefSet& s);

Decomposition decompose_with(const DefSet& s, const std::vector<LinTerm>& extra,
                             const DecomposeOptions& opts) {
  Decomposition d;
  d.source = s;
  if (s.disjuncts.empty()) return d;
  if (s.dim == 0) {
    // Points of Q^0: the source is the one-point space.
    d.cells.emplace_back(0, std::vector<Stage>{});
    return d;
  }
  auto levels = boundary_levels(s, extra, opts);
  Builder b{s, s.dim, levels, opts, {}, {}, {}, {}, 0};
  b.build(0);
  std::sort(b.kept.begin(), b.kept.end());
  d.cells = std::move(b.kept);
  if (opts.verify) verify_decomposition(d, s);
  return d;
}

// Containment certificate for one cell: the disjunct holding the cell's
// sample must contain the whole cell, shown atom by atom (the cell cannot
// meet the negation of any of the disjunct's atoms). Falls back to the full
// difference when no single disjunct certifies.
bool cell_inside_disjunct(const Conj& cell_conj, const Conj& disjunct) {
  for (const Atom& alpha : disjunct) {
    for (const Atom& lit : negated_atom(alpha)) {
      std::vector<Atom> probe(cell_conj.begin(), cell_conj.end());
      probe.push_back(lit);
      if (conj_satisfiable(make_conj(std::move(probe)))) return false;
    }
  }
  return true;
}

void verify_decomposition(const Decomposition& d, const DefSet& s) {
  for (const Cell& c : d.cells) {
    Conj cell_conj = c.to_conj();
    Point p = c.sample();
    bool certified = false;
    for (const Conj& disjunct : s.disjuncts) {
      if (!conj_eval(disjunct, p)) continue;
      if (cell_inside_disjunct(cell_conj, disjunct)) {
        certified = true;
        break;
      }
    }
    if (!certified && !entails(c.to_defset(), s))
      throw Error("decomposition certificate failed: cell not contained in the source");
  }
  // Sample-level disjointness audit: all pairs at small scale, a fixed
  // pseudo-random stride of partners per cell at large scale.
  std::size_t n = d.cells.size();
  auto check_pair = [&](std::size_t i, std::size_t j) {
    if (i == j) return;
    if (conj_eval(d.cells[j].to_conj(), d.cells[i].sample()))
      throw Error("decomposition certificate failed: cells overlap");
  };
  if (n <= 1024) {
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) check_pair(i, j);
  } else {
    for (std::size_t i = 0; i < n; ++i) {
      check_pair(i, (i + 1) % n);
      std::size_t h = i;
      for (int k = 0; k < 30; ++k) {
        h = h * 6364136223846793005ULL + 1442695040888963407ULL;
        check_pair(i, h % n);
      }
    }
  }
}

}  // namespace

Decomposition decompose(const DefSet& s, const DecomposeOptions& opts) {
  return decompose_with(s, {}, opts);
}

Decomposition refine(const Decomposition& d, const std::vector<LinTerm>& extra,
                     const DecomposeOptions& opts) {
  return decompose_with(d.source, extra, opts);
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json term_json(const LinTerm& t) {
  nlohmann::json j;
  j["const"] = t.constant_part().str();
  for (const auto& [v, c] : t.coeffs()) j[std::to_string(v)] = c.str();
  return j;
}

}  // namespace

nlohmann::json cell_to_json(const Cell& c) {
  nlohmann::json stages = nlohmann::json::array();
  for (const Stage& st : c.stages()) {
    if (st.kind == Stage::Kind::Graph) {
      stages.push_back({{"graph", term_json(st.fn)}});
    } else {
      nlohmann::json band;
      band["lo"] = st.lo ? nlohmann::json(term_json(*st.lo)) : nlohmann::json("-inf");
      band["hi"] = st.hi ? nlohmann::json(term_json(*st.hi)) : nlohmann::json("+inf");
      stages.push_back({{"band", band}});
    }
  }
  return nlohmann::json{{"dim", c.dim()},
                        {"kind", kind_name(classify(c))},
                        {"stages", stages}};
}

}  // namespace grothlin
