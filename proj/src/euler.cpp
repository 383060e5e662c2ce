#include "grothlin/euler.hpp"

#include <algorithm>

#include "grothlin/error.hpp"
#include "grothlin/qe.hpp"

namespace grothlin {

std::string gclass_str(GClass a) {
  if (a.m == 0 && a.n == 0) return "0";
  std::string out;
  if (a.n != 0) {
    if (a.n == 1)
      out = "T";
    else if (a.n == -1)
      out = "-T";
    else
      out = std::to_string(a.n) + "*T";
    if (a.m != 0)
      out += (a.m > 0 ? " + " : " - ") + std::to_string(a.m > 0 ? a.m : -a.m);
  } else {
    out = std::to_string(a.m);
  }
  return out;
}

long long chi_g(const DefSet& s, const EulerOptions& opts) {
  long long sum = 0;
  for (const Cell& c : decompose(s, opts.decomp).cells) sum += c.dim() % 2 == 0 ? 1 : -1;
  return sum;
}

long long chi_b(const DefSet& s, const EulerOptions& opts) {
  long long sum = 0;
  for (const Cell& c : decompose(s, opts.decomp).cells)
    if (classify(c) == CellKind::Good) sum += c.dim() % 2 == 0 ? 1 : -1;
  return sum;
}

GClass g_class(const DefSet& s, const EulerOptions& opts) {
  Decomposition d = decompose(s, opts.decomp);
  long long g = 0, b = 0;
  for (const Cell& c : d.cells) {
    long long sign = c.dim() % 2 == 0 ? 1 : -1;
    g += sign;
    if (classify(c) == CellKind::Good) b += sign;
  }
  return GClass{b, b - g};
}

// ---------------------------------------------------------------------------
// Stabilization check

bool BdReport::preconditions_ok() const {
  for (const auto& p : preconditions)
    if (p.status != Status::Ok) return false;
  return true;
}

bool BdReport::identity_verified() const {
  if (samples.empty()) return false;
  for (const auto& s : samples)
    if (!s.matches) return false;
  return true;
}

namespace {

// Existential closure over a contiguous variable range [first, last].
Formula exists_range(int first, int last, Formula body) {
  for (int v = last; v >= first; --v) body = Formula::exists(v, std::move(body));
  return body;
}

// The x-projection of the graph {(t, x)}: eliminates the value coordinate.
DefSet graph_domain(const DefSet& graph) {
  int n = graph.dim - 1;
  std::vector<Conj> out;
  for (const Conj& c : graph.disjuncts) {
    auto proj = eliminate_var(0, c);
    if (!proj) continue;
    std::vector<Atom> atoms;
    for (const Atom& a : *proj)
      atoms.emplace_back(a.term().map_vars(n, [](int v) { return v - 1; }), a.rel());
    out.push_back(make_conj(std::move(atoms)));
  }
  return DefSet{n, prune_subsumed(std::move(out))};
}

// {x in s : d(x) <= t0} for a fixed rational threshold.
DefSet sublevel(const DefSet& s, const DefSet& graph, const Rational& t0) {
  int n = s.dim;
  std::vector<Conj> out;
  LinTerm t_var = LinTerm::variable(n + 1, 0);
  LinTerm bound = LinTerm::constant(n + 1, t0);
  for (const Conj& c : graph.disjuncts) {
    // d(x) <= t0 splits into < and =.
    for (Rel rel : {Rel::LT, Rel::EQ}) {
      Formula extra = Formula::atom(t_var - bound, rel);
      std::vector<Atom> atoms(c.begin(), c.end());
      if (extra.is_false()) continue;
      if (!extra.is_true()) atoms.push_back(extra.as_atom());
      auto proj = eliminate_var(0, make_conj(std::move(atoms)));
      if (!proj) continue;
      std::vector<Atom> shifted;
      for (const Atom& a : *proj)
        shifted.emplace_back(a.term().map_vars(n, [](int v) { return v - 1; }), a.rel());
      out.push_back(make_conj(std::move(shifted)));
    }
  }
  DefSet reach{n, prune_subsumed(std::move(out))};
  return set_intersection(reach, s);
}

}  // namespace

BdReport bd_check(const DefSet& s, const DefSet& dist_graph, const EulerOptions& opts) {
  if (dist_graph.dim != s.dim + 1)
    throw DimensionError("distance graph must live in Q x Q^n for a set in Q^n");
  const int n = s.dim;
  BdReport report;
  auto add_pre = [&](std::string name, BdReport::Status st, std::string detail) {
    report.preconditions.push_back({std::move(name), st, std::move(detail)});
  };

  // Totality and domain agreement.
  {
    DefSet dom = graph_domain(dist_graph);
    bool total = entails(s, dom);
    add_pre("total", total ? BdReport::Status::Ok : BdReport::Status::Failed,
            total ? "" : "some point of the set has no value");
    bool inside = entails(dom, s);
    add_pre("domain", inside ? BdReport::Status::Ok : BdReport::Status::Failed,
            inside ? "" : "the graph extends outside the set");
  }

  // Single-valuedness: no x with two distinct values. Variables (t, t', x).
  {
    int m = n + 2;
    auto first_copy = [](int v) { return v == 0 ? 0 : v + 1; };
    auto second_copy = [](int v) { return v == 0 ? 1 : v + 1; };
    std::vector<Conj> pairs;
    for (const Conj& c1 : dist_graph.disjuncts) {
      std::vector<Atom> base;
      for (const Atom& at : c1) base.emplace_back(at.term().map_vars(m, first_copy), at.rel());
      Conj a = make_conj(std::move(base));
      for (const Conj& c2 : dist_graph.disjuncts) {
        std::vector<Atom> atoms(a.begin(), a.end());
        for (const Atom& at : c2)
          atoms.emplace_back(at.term().map_vars(m, second_copy), at.rel());
        pairs.push_back(make_conj(std::move(atoms)));
      }
    }
    DefSet both{m, prune_subsumed(std::move(pairs))};
    LinTerm t0 = LinTerm::variable(m, 0), t1 = LinTerm::variable(m, 1);
    DefSet differ = to_dnf(Formula::disj({Formula::atom(t0 - t1, Rel::LT),
                                          Formula::atom(t1 - t0, Rel::LT)}),
                           m);
    bool single = is_empty(set_intersection(both, differ));
    add_pre("single-valued", single ? BdReport::Status::Ok : BdReport::Status::Failed,
            single ? "" : "some point carries two distinct values");
  }

  // Nonnegativity: the graph never takes a negative value.
  {
    DefSet neg = to_dnf(Formula::atom(LinTerm::variable(n + 1, 0), Rel::LT), n + 1);
    bool ok = is_empty(set_intersection(dist_graph, neg));
    add_pre("nonnegative", ok ? BdReport::Status::Ok : BdReport::Status::Failed,
            ok ? "" : "the function takes negative values");
  }

  // Bounded fibers: for every t >= 0 there is a box bound B on the fiber.
  // Variables: t = 0, x_i = i + 1, B = n + 1.
  {
    try {
      int bvar = n + 1;
      LinTerm b = LinTerm::variable(bvar + 1, bvar);
      std::vector<Formula> box_parts;
      for (int i = 1; i <= n; ++i) {
        LinTerm xi = LinTerm::variable(bvar + 1, i);
        box_parts.push_back(Formula::atom(-b - xi, Rel::LT));  // -B < x_i
        box_parts.push_back(Formula::atom(xi - b, Rel::LT));   // x_i < B
      }
      Formula box = Formula::conj(std::move(box_parts));
      Formula escape =
          exists_range(1, n, Formula::conj({dist_graph.to_formula(), Formula::negation(box)}));
      Formula fiber_bounded = Formula::exists(bvar, Formula::negation(escape));
      LinTerm t = LinTerm::variable(1, 0);
      Formula t_nonneg = Formula::negation(Formula::atom(t, Rel::LT));  // t >= 0
      Formula bad_t = Formula::exists(
          0, Formula::conj({t_nonneg, Formula::negation(fiber_bounded)}));
      bool ok = qe(Formula::negation(bad_t), 0).disjuncts.size() == 1;
      add_pre("bounded-fibers", ok ? BdReport::Status::Ok : BdReport::Status::Failed,
              ok ? "" : "some fiber is unbounded");
    } catch (const BudgetExceeded& e) {
      add_pre("bounded-fibers", BdReport::Status::Unverified, e.what());
    }
  }

  // Threshold: strictly above the value range of every bounded cell.
  Decomposition d = decompose(dist_graph, opts.decomp);
  std::optional<Rational> top;
  for (const Cell& c : d.cells) {
    auto box = bounding_box(c);
    if (!box) continue;
    const Rational& hi = box->ranges.front().second;  // value coordinate range
    if (!top || *top < hi) top = hi;
  }
  report.mu = top ? *top + Rational(1) : Rational(0);

  report.chi_b_source = chi_b(s, opts);
  for (int mult : {1, 2, 10}) {
    Rational t0 = (report.mu + Rational(1)) * Rational(mult);
    DefSet level = sublevel(s, dist_graph, t0);
    long long cg = chi_g(level, opts);
    report.samples.push_back({t0, cg, cg == report.chi_b_source});
  }
  return report;
}

}  // namespace grothlin
