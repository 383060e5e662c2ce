#include "grothlin/selftest.hpp"

#include <functional>
#include <random>
#include <sstream>

#include "grothlin/cell.hpp"
#include "grothlin/error.hpp"
#include "grothlin/euler.hpp"
#include "grothlin/oracle.hpp"
#include "grothlin/parser.hpp"
#include "grothlin/plmap.hpp"
#include "grothlin/qe.hpp"

namespace grothlin::cli {

namespace {

struct Check {
  bool ok = true;
  std::string detail;

  void fail(const std::string& msg) {
    if (ok) detail = msg;
    ok = false;
  }
  void require(bool cond, const std::string& msg) {
    if (!cond) fail(msg);
  }
};

DefSet corpus_set(const CorpusEntry& e) {
  Formula f = parse_formula(e.formula_text, e.vars);
  return qe(f, static_cast<int>(e.vars.size()));
}

Rational random_rational(std::mt19937_64& rng, long max_den = 4, long mag = 6) {
  std::uniform_int_distribution<long> den(1, max_den);
  long d = den(rng);
  std::uniform_int_distribution<long> num(-mag * d, mag * d);
  return Rational(num(rng), d);
}

LinTerm random_functional(std::mt19937_64& rng, int dim) {
  LinTerm t(dim);
  bool nonzero = false;
  for (int v = 0; v < dim; ++v) {
    std::uniform_int_distribution<int> coin(0, 2);
    if (coin(rng) == 0) continue;
    std::uniform_int_distribution<int> coeff(-3, 3);
    int c = coeff(rng);
    if (c == 0) continue;
    t = t + LinTerm::variable(dim, v, Rational(c));
    nonzero = true;
  }
  if (!nonzero) t = t + LinTerm::variable(dim, 0);
  std::uniform_int_distribution<int> k(-4, 4);
  return t + LinTerm::constant(dim, Rational(k(rng), 2));
}

DefSet parse_set(const std::string& text, const std::vector<std::string>& vars) {
  return qe(parse_formula(text, vars), static_cast<int>(vars.size()));
}

// --------------------------------------------------------------------------
// Suites

void suite_roundtrip(const std::vector<CorpusEntry>& corpus, Check& c) {
  for (const CorpusEntry& e : corpus) {
    Formula f = parse_formula(e.formula_text, e.vars);
    Formula again = parse_formula(f.str(e.vars), e.vars);
    c.require(f == again, e.name + ": print/parse round-trip changed the tree");
  }
}

void suite_qe_pointwise(const std::vector<CorpusEntry>& corpus, Check& c) {
  std::mt19937_64 rng(0x5eed0001);
  for (const CorpusEntry& e : corpus) {
    Formula f = parse_formula(e.formula_text, e.vars);
    DefSet s = qe(f, static_cast<int>(e.vars.size()));
    for (int trial = 0; trial < 60 && c.ok; ++trial) {
      Point p;
      for (std::size_t i = 0; i < e.vars.size(); ++i) p.push_back(random_rational(rng, 2, 6));
      bool direct = eval_with_search(f, p);
      c.require(direct == s.contains(p),
                e.name + ": qe disagrees with direct evaluation at " + point_str(p));
    }
  }
}

void suite_corpus_expected(const std::vector<CorpusEntry>& corpus, Check& c) {
  for (const CorpusEntry& e : corpus) {
    DefSet s = corpus_set(e);
    GClass cls = g_class(s);
    if (e.expect_chi_g)
      c.require(psi_g(cls) == *e.expect_chi_g, e.name + ": chi_g mismatch");
    if (e.expect_chi_b)
      c.require(psi_b(cls) == *e.expect_chi_b, e.name + ": chi_b mismatch");
    if (e.expect_class)
      c.require(gclass_str(cls) == *e.expect_class,
                e.name + ": class mismatch, got " + gclass_str(cls));
  }
}

void suite_partition(const std::vector<CorpusEntry>& corpus, Check& c) {
  for (const CorpusEntry& e : corpus) {
    DefSet s = corpus_set(e);
    Decomposition d;
    try {
      d = decompose(s, DecomposeOptions{.verify = true});
    } catch (const Error& err) {
      c.fail(e.name + ": " + err.what());
      return;
    }
    // Coverage: the source minus the union of cells is empty.
    std::vector<Conj> cell_conjs;
    for (const Cell& cell : d.cells) cell_conjs.push_back(cell.to_conj());
    DefSet uni{s.dim, cell_conjs};
    c.require(is_empty(set_difference(s, uni)), e.name + ": cells do not cover the source");
    c.require(is_empty(set_difference(uni, s)), e.name + ": cells escape the source");
  }
}

void suite_refine(const std::vector<CorpusEntry>& corpus, Check& c) {
  std::mt19937_64 rng(0x5eed0002);
  for (const CorpusEntry& e : corpus) {
    DefSet s = corpus_set(e);
    Decomposition d = decompose(s, DecomposeOptions{.verify = false});
    long long base = 0;
    for (const Cell& cell : d.cells)
      if (classify(cell) == CellKind::Good) base += cell.dim() % 2 == 0 ? 1 : -1;
    for (int round = 0; round < 2; ++round) {
      std::vector<LinTerm> extra;
      for (int i = 0; i < 2; ++i) extra.push_back(random_functional(rng, s.dim));
      Decomposition r = refine(d, extra, DecomposeOptions{.verify = false});
      long long refined = 0;
      for (const Cell& cell : r.cells)
        if (classify(cell) == CellKind::Good) refined += cell.dim() % 2 == 0 ? 1 : -1;
      c.require(refined == base, e.name + ": chi_b changed under refinement");
    }
  }
}

void suite_good_bounded(const std::vector<CorpusEntry>& corpus, Check& c) {
  for (const CorpusEntry& e : corpus) {
    DefSet s = corpus_set(e);
    for (const Cell& cell : decompose(s, DecomposeOptions{.verify = false}).cells)
      c.require((classify(cell) == CellKind::Good) == is_bounded(cell),
                e.name + ": good/bounded disagreement on " + cell.str());
  }
}

void suite_oracle(const std::vector<CorpusEntry>& corpus, Check& c) {
  for (const CorpusEntry& e : corpus) {
    DefSet s = corpus_set(e);
    std::pair<long long, long long> o;
    try {
      o = oracle_chi(s);
    } catch (const CapExceeded&) {
      continue;
    }
    GClass cls = g_class(s);
    c.require(o.first == psi_g(cls) && o.second == psi_b(cls),
              e.name + ": oracle disagrees with the decomposition path");
  }
}

void suite_claim1(const std::vector<CorpusEntry>&, Check& c) {
  std::mt19937_64 rng(0x5eed0003);
  for (int i = 0; i < 10 && c.ok; ++i) {
    Rational a = random_rational(rng);
    Rational b = a + random_rational(rng).abs() + Rational(1, 7);
    std::vector<Atom> atoms{Atom(LinTerm::constant(1, a) - LinTerm::variable(1, 0), Rel::LT),
                            Atom(LinTerm::variable(1, 0) - LinTerm::constant(1, b), Rel::LT)};
    DefSet interval{1, {make_conj(std::move(atoms))}};
    c.require(gclass_str(g_class(interval)) == "-1",
              "interval (" + a.str() + ", " + b.str() + ") has class != -1");
  }
}

void suite_claim2(const std::vector<CorpusEntry>&, Check& c) {
  c.require(gclass_str(g_class(DefSet::full(1))) == "2*T + 1", "class of the line is not 2*T + 1");
}

void suite_claim3(const std::vector<CorpusEntry>&, Check& c) {
  GClass t{0, 1};
  c.require(t * t == -t, "T*T != -T in the class ring");
  DefSet quadrant = parse_set("0 < x & 0 < y", {"x", "y"});
  DefSet ray = parse_set("0 < x", {"x"});
  c.require(g_class(quadrant) == g_class(ray) * g_class(ray),
            "class of the quadrant is not the square of the ray class");
  c.require(g_class(quadrant) == -t, "class of the quadrant is not -T");
}

void suite_ring(const std::vector<CorpusEntry>&, Check& c) {
  std::mt19937_64 rng(0x5eed0004);
  std::uniform_int_distribution<long long> coeff(-9, 9);
  for (int i = 0; i < 100 && c.ok; ++i) {
    GClass a{coeff(rng), coeff(rng)}, b{coeff(rng), coeff(rng)}, d{coeff(rng), coeff(rng)};
    c.require((a * b) * d == a * (b * d), "associativity fails");
    c.require(a * (b + d) == a * b + a * d, "distributivity fails");
    c.require(a * b == b * a, "commutativity fails");
    c.require(psi_g(a * b) == psi_g(a) * psi_g(b), "psi_g is not multiplicative");
    c.require(psi_b(a * b) == psi_b(a) * psi_b(b), "psi_b is not multiplicative");
    c.require(psi_g(a + b) == psi_g(a) + psi_g(b), "psi_g is not additive");
    c.require(psi_b(a + b) == psi_b(a) + psi_b(b), "psi_b is not additive");
  }
}

void suite_bijection(const std::vector<CorpusEntry>&, Check& c) {
  struct Pair {
    const char* name;
    PLMap f;
    DefSet s;
    DefSet t;
  };
  std::vector<Pair> pairs;
  pairs.push_back({"halve", PLMap::halve(), parse_set("0 < x & x < 1", {"x"}),
                   parse_set("0 < x & x < 1/2", {"x"})});
  pairs.push_back({"reflect", PLMap::reflect(), parse_set("0 < x", {"x"}),
                   parse_set("x < 0", {"x"})});
  pairs.push_back({"shear", PLMap::shear(), parse_set("0 < x & 0 < y", {"x", "y"}),
                   parse_set("0 < x & x < y", {"x", "y"})});
  pairs.push_back({"swap", PLMap::swap_coords({1, 0}),
                   parse_set("0 < y & y < x", {"x", "y"}),
                   parse_set("0 < x & x < y", {"x", "y"})});
  pairs.push_back({"raise", PLMap::raise_above(parse_term("x", {"x"}), 1),
                   parse_set("0 < x & x < 1 & 0 < y", {"x", "y"}),
                   parse_set("0 < x & x < 1 & x < y", {"x", "y"})});
  for (const Pair& p : pairs) {
    if (!certify_bijection(p.f, p.s, p.t)) {
      c.fail(std::string(p.name) + ": bijection certificate failed");
      continue;
    }
    c.require(chi_g(p.s) == chi_g(p.t), std::string(p.name) + ": chi_g not preserved");
    c.require(chi_b(p.s) == chi_b(p.t), std::string(p.name) + ": chi_b not preserved");
  }
}

void suite_union_product(const std::vector<CorpusEntry>& corpus, Check& c) {
  std::vector<DefSet> sets;
  for (const CorpusEntry& e : corpus) sets.push_back(corpus_set(e));
  std::mt19937_64 rng(0x5eed0005);
  std::uniform_int_distribution<std::size_t> pick(0, sets.size() - 1);
  int done = 0;
  for (int guard = 0; done < 10 && guard < 200; ++guard) {
    const DefSet& x = sets[pick(rng)];
    const DefSet& y = sets[pick(rng)];
    if (x.dim != y.dim || x.dim > 2) continue;
    long long u = chi_b(set_union(x, y));
    long long i = chi_b(set_intersection(x, y));
    c.require(u + i == chi_b(x) + chi_b(y), "chi_b union law fails");
    ++done;
  }
  done = 0;
  for (int guard = 0; done < 10 && guard < 200; ++guard) {
    const DefSet& x = sets[pick(rng)];
    const DefSet& y = sets[pick(rng)];
    if (x.dim + y.dim > 3) continue;
    DefSet p = product(x, y);
    c.require(chi_b(p) == chi_b(x) * chi_b(y), "chi_b product law fails");
    c.require(chi_g(p) == chi_g(x) * chi_g(y), "chi_g product law fails");
    c.require(g_class(p) == g_class(x) * g_class(y), "class product law fails");
    ++done;
  }
}

void suite_fiber(const std::vector<CorpusEntry>&, Check& c) {
  std::vector<std::string> xy{"x", "y"};
  for (const char* text : {"0 < y & y < x & x < 1", "0 < x & x < 1 & 0 < y & y < 1",
                           "0 < x & 0 < y"}) {
    DefSet s = parse_set(text, xy);
    Decomposition d = decompose(s, DecomposeOptions{.verify = false});
    std::vector<Cell> bases;
    for (const Cell& cell : d.cells) {
      Cell base = cell.prefix(1);
      bool seen = false;
      for (const Cell& b : bases) seen = seen || b == base;
      if (!seen) bases.push_back(base);
    }
    for (const Cell& base : bases) {
      std::optional<long long> expected;
      for (int variant = 0; variant < 5; ++variant) {
        Point a = base.sample(variant);
        long long fiber = chi_b(restrict_coordinate(s, 0, a[0]));
        if (!expected)
          expected = fiber;
        else
          c.require(*expected == fiber, std::string(text) + ": fiber chi_b not constant");
      }
      DefSet base_set = base.to_defset();
      std::vector<Conj> lifted;
      for (const Conj& bc : base_set.disjuncts) {
        std::vector<Atom> atoms;
        for (const Atom& a : bc) atoms.emplace_back(a.term().widened(2), a.rel());
        lifted.push_back(make_conj(std::move(atoms)));
      }
      long long whole = chi_b(set_intersection(s, DefSet{2, lifted}));
      long long base_chi = chi_b(base_set);
      c.require(whole == base_chi * *expected,
                std::string(text) + ": fiber product identity fails");
    }
  }
}

void suite_bd(const std::vector<CorpusEntry>&, Check& c) {
  struct Fixture {
    const char* name;
    const char* set_text;
    std::vector<std::string> vars;
    const char* graph_text;
  };
  std::vector<Fixture> fixtures = {
      {"abs-on-line", "x = x", {"x"}, "(0 <= x & t = x) | (x < 0 & t = 0 - x)"},
      {"id-on-ray", "0 < x", {"x"}, "0 < x & t = x"},
      {"const-on-interval", "0 < x & x < 1", {"x"}, "0 < x & x < 1 & t = 0"},
  };
  for (const Fixture& fx : fixtures) {
    DefSet s = parse_set(fx.set_text, fx.vars);
    std::vector<std::string> gvars{"t"};
    gvars.insert(gvars.end(), fx.vars.begin(), fx.vars.end());
    DefSet graph = parse_set(fx.graph_text, gvars);
    BdReport r = bd_check(s, graph);
    c.require(r.preconditions_ok(), std::string(fx.name) + ": precondition failed");
    c.require(r.identity_verified(), std::string(fx.name) + ": stabilization identity fails");
  }
}

}  // namespace

std::vector<SuiteResult> run_selftest(const std::vector<CorpusEntry>& corpus,
                                      const std::string& filter) {
  using SuiteFn = std::function<void(const std::vector<CorpusEntry>&, Check&)>;
  std::vector<std::pair<std::string, SuiteFn>> suites = {
      {"roundtrip", suite_roundtrip},
      {"qe-pointwise", suite_qe_pointwise},
      {"corpus-expected", suite_corpus_expected},
      {"partition", suite_partition},
      {"refine", suite_refine},
      {"good-bounded", suite_good_bounded},
      {"oracle", suite_oracle},
      {"claim1", suite_claim1},
      {"claim2", suite_claim2},
      {"claim3", suite_claim3},
      {"ring", suite_ring},
      {"bijection", suite_bijection},
      {"union-product", suite_union_product},
      {"fiber", suite_fiber},
      {"bd", suite_bd},
  };
  std::vector<SuiteResult> results;
  for (auto& [name, fn] : suites) {
    if (!filter.empty() && name.find(filter) == std::string::npos) continue;
    Check c;
    try {
      fn(corpus, c);
    } catch (const std::exception& e) {
      c.fail(std::string("exception: ") + e.what());
    }
    results.push_back({name, c.ok, c.detail});
  }
  return results;
}

}  // namespace grothlin::cli
