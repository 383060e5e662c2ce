// Acceptance suite: one pass/fail line per criterion, exact arithmetic
// throughout. Returns nonzero when any criterion fails.

#include <chrono>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <vector>

#include "grothlin/cell.hpp"
#include "grothlin/cli.hpp"
#include "grothlin/error.hpp"
#include "grothlin/euler.hpp"
#include "grothlin/oracle.hpp"
#include "grothlin/parser.hpp"
#include "grothlin/plmap.hpp"
#include "grothlin/qe.hpp"
#include "support.hpp"

using namespace grothlin;
using testutil::make_set;

namespace {

const std::vector<std::string> X{"x"};
const std::vector<std::string> XY{"x", "y"};

struct Criterion {
  std::string name;
  double budget_seconds;
  std::function<void(std::string&)> run;  // sets a nonempty message on failure
};

std::vector<cli::CorpusEntry> the_corpus() {
  static std::vector<cli::CorpusEntry> corpus =
      cli::load_corpus_dir(std::string(GROTHLIN_SOURCE_DIR) + "/corpus");
  return corpus;
}

DefSet entry_set(const cli::CorpusEntry& e) {
  return qe(parse_formula(e.formula_text, e.vars), static_cast<int>(e.vars.size()));
}

void expect(bool cond, const std::string& msg, std::string& fail) {
  if (!cond && fail.empty()) fail = msg;
}

// Runs the real CLI and returns (exit code, stdout).
std::pair<int, std::string> run_eval_json(const std::string& formula,
                                          const std::string& vars) {
  testutil::TempDir tmp;
  std::string path = tmp.write("input.def", formula + "\n");
  std::ostringstream out, err;
  int code = cli::run_cli({"eval", path, "--vars", vars, "--json"}, out, err);
  return {code, out.str()};
}

// ---------------------------------------------------------------------------

void criterion_1(std::string& fail) {
  // Class of a bounded open interval (a, b), via the CLI, for random a < b.
  std::mt19937_64 rng(101);
  for (int i = 0; i < 10; ++i) {
    Rational a = testutil::random_rational(rng, 4, 8);
    Rational b = a + testutil::random_rational(rng, 4, 8).abs() + Rational(1, 5);
    std::string formula = a.str() + " < x & x < " + b.str();
    auto [code, out] = run_eval_json(formula, "x");
    expect(code == 0, "eval exited with " + std::to_string(code), fail);
    if (code != 0) return;
    nlohmann::json j = nlohmann::json::parse(out);
    expect(j["class"] == "-1", "(" + a.str() + ", " + b.str() + ") got class " +
                                   j["class"].get<std::string>(), fail);
  }
}

void criterion_2(std::string& fail) {
  auto [code, out] = run_eval_json("x = x", "x");
  expect(code == 0, "eval exited with " + std::to_string(code), fail);
  if (code != 0) return;
  nlohmann::json j = nlohmann::json::parse(out);
  expect(j["class"] == "2*T + 1",
         "the line got class " + j["class"].get<std::string>(), fail);
}

void criterion_3(std::string& fail) {
  GClass T{0, 1};
  expect(T * T == -T, "T*T != -T algebraically", fail);
  GClass quadrant = g_class(make_set("0 < x & 0 < y", XY));
  GClass ray = g_class(make_set("0 < x", X));
  expect(quadrant == -T, "quadrant class is " + gclass_str(quadrant), fail);
  expect(quadrant == ray * ray, "quadrant class differs from the ray class squared", fail);
}

void criterion_4(std::string& fail) {
  // All corpus classes and their pairwise sums/products satisfy the ring
  // laws and the evaluation homomorphisms.
  std::vector<GClass> classes;
  for (const auto& e : the_corpus()) classes.push_back(g_class(entry_set(e)));
  for (const GClass& a : classes) {
    for (const GClass& b : classes) {
      GClass s = a + b, p = a * b;
      expect(psi_g(s) == psi_g(a) + psi_g(b), "psi_g not additive on corpus classes", fail);
      expect(psi_b(p) == psi_b(a) * psi_b(b), "psi_b not multiplicative", fail);
      expect(psi_g(p) == psi_g(a) * psi_g(b), "psi_g not multiplicative", fail);
    }
  }
  std::mt19937_64 rng(104);
  std::uniform_int_distribution<long long> c(-50, 50);
  for (int i = 0; i < 100; ++i) {
    GClass a{c(rng), c(rng)}, b{c(rng), c(rng)}, d{c(rng), c(rng)};
    expect((a * b) * d == a * (b * d), "associativity fails", fail);
    expect(a * (b + d) == a * b + a * d, "distributivity fails", fail);
    expect(a * b == b * a, "commutativity fails", fail);
    expect(a + b == b + a, "additive commutativity fails", fail);
  }
}

void criterion_5(std::string& fail) {
  std::mt19937_64 rng(105);
  for (const auto& e : the_corpus()) {
    DefSet s = entry_set(e);
    Decomposition d = decompose(s, DecomposeOptions{.verify = false});
    long long base = 0;
    for (const Cell& c : d.cells)
      if (classify(c) == CellKind::Good) base += c.dim() % 2 == 0 ? 1 : -1;
    for (int round = 0; round < 5; ++round) {
      std::vector<LinTerm> extra;
      std::uniform_int_distribution<int> coeff(-3, 3);
      for (int k = 0; k < 2; ++k) {
        LinTerm t(s.dim);
        for (int v = 0; v < s.dim; ++v) {
          int cv = coeff(rng);
          if (cv != 0) t = t + LinTerm::variable(s.dim, v, Rational(cv));
        }
        if (t.is_constant()) t = t + LinTerm::variable(s.dim, 0);
        t = t + LinTerm::constant(s.dim, testutil::random_rational(rng, 2, 3));
        extra.push_back(t);
      }
      Decomposition r = refine(d, extra, DecomposeOptions{.verify = false});
      long long refined = 0;
      for (const Cell& c : r.cells)
        if (classify(c) == CellKind::Good) refined += c.dim() % 2 == 0 ? 1 : -1;
      expect(refined == base, e.name + ": chi_b depends on the partition", fail);
    }
  }
}

void criterion_6(std::string& fail) {
  std::mt19937_64 rng(106);
  for (const auto& e : the_corpus()) {
    DefSet s = entry_set(e);
    Decomposition d = decompose(s, DecomposeOptions{.verify = false});
    std::vector<LinTerm> extra{LinTerm::variable(s.dim, s.dim - 1) -
                               LinTerm::constant(s.dim, testutil::random_rational(rng, 2, 2))};
    Decomposition r = refine(d, extra, DecomposeOptions{.verify = false});
    for (const Decomposition* dec : {&d, &r})
      for (const Cell& c : dec->cells)
        expect((classify(c) == CellKind::Good) == is_bounded(c),
               e.name + ": good/bounded mismatch on " + c.str(), fail);
  }
}

void criterion_7(std::string& fail) {
  for (const auto& e : the_corpus()) {
    DefSet s = entry_set(e);
    std::pair<long long, long long> o;
    try {
      o = oracle_chi(s);
    } catch (const CapExceeded&) {
      continue;
    }
    expect(o.first == chi_g(s), e.name + ": oracle chi_g disagrees", fail);
    expect(o.second == chi_b(s), e.name + ": oracle chi_b disagrees", fail);
  }
}

struct BijectionCase {
  std::string name;
  PLMap f;
  DefSet s;
  DefSet t;
};

std::vector<BijectionCase> bijection_cases() {
  std::vector<BijectionCase> cases;
  cases.push_back({"halve", PLMap::halve(), make_set("0 < x & x < 1", X),
                   make_set("0 < x & x < 1/2", X)});
  cases.push_back({"translate", PLMap::translate({Rational(3)}),
                   make_set("1 < x & x < 2", X), make_set("4 < x & x < 5", X)});
  cases.push_back({"reflect", PLMap::reflect(), make_set("0 < x", X),
                   make_set("x < 0", X)});
  cases.push_back({"swap", PLMap::swap_coords({1, 0}), make_set("0 < y & y < x", XY),
                   make_set("0 < x & x < y", XY)});
  cases.push_back({"shear", PLMap::shear(), make_set("0 < x & 0 < y", XY),
                   make_set("0 < x & x < y", XY)});
  cases.push_back({"raise-cylinder", PLMap::raise_above(parse_term("x", X), 1),
                   make_set("0 < x & x < 1 & 0 < y", XY),
                   make_set("0 < x & x < 1 & x < y", XY)});
  cases.push_back({"drop-cylinder", PLMap::drop_below(parse_term("x", X), 1),
                   make_set("0 < x & x < 1 & 0 < y", XY),
                   make_set("0 < x & x < 1 & y < x", XY)});
  cases.push_back({"shear-square", PLMap::shear(),
                   make_set("0 < x & x < 1 & 0 < y & y < 1", XY),
                   make_set("0 < x & x < 1 & x < y & y < x + 1", XY)});
  cases.push_back({"swap-plane", PLMap::swap_coords({1, 0}), DefSet::full(2),
                   DefSet::full(2)});
  cases.push_back({"translate-2d", PLMap::translate({Rational(1, 2), Rational(-1)}),
                   make_set("0 < x & x < 1 & y = x", XY),
                   make_set("1/2 < x & x < 3/2 & y = x - 3/2", XY)});
  {
    DefSet g = make_set("(0 < x & x < 1 & y = x) | (2 < x & x < 3 & y = x - 1)", XY);
    cases.push_back({"piecewise-shift", PLMap::from_graph(g, 1, 1),
                     make_set("(0 < x & x < 1) | (2 < x & x < 3)", X),
                     make_set("(0 < x & x < 1) | (1 < x & x < 2)", X)});
  }
  return cases;
}

void criterion_8(std::string& fail) {
  auto cases = bijection_cases();
  expect(cases.size() >= 10, "need at least ten bijection fixtures", fail);
  for (const auto& c : cases) {
    bool certified = certify_bijection(c.f, c.s, c.t);
    expect(certified, c.name + ": bijection certificate failed", fail);
    if (!certified) continue;
    expect(chi_g(c.s) == chi_g(c.t), c.name + ": chi_g changed", fail);
    expect(chi_b(c.s) == chi_b(c.t), c.name + ": chi_b changed", fail);
  }
}

void criterion_9(std::string& fail) {
  std::vector<DefSet> sets;
  for (const auto& e : the_corpus()) sets.push_back(entry_set(e));
  std::mt19937_64 rng(109);
  std::uniform_int_distribution<std::size_t> pick(0, sets.size() - 1);
  int unions = 0, products = 0;
  for (int guard = 0; unions < 10 && guard < 400; ++guard) {
    const DefSet& x = sets[pick(rng)];
    const DefSet& y = sets[pick(rng)];
    if (x.dim != y.dim || x.dim > 2) continue;
    long long lhs = chi_b(set_union(x, y)) + chi_b(set_intersection(x, y));
    expect(lhs == chi_b(x) + chi_b(y), "chi_b union law fails", fail);
    ++unions;
  }
  for (int guard = 0; products < 10 && guard < 400; ++guard) {
    const DefSet& x = sets[pick(rng)];
    const DefSet& y = sets[pick(rng)];
    if (x.dim + y.dim > 3) continue;
    DefSet p = product(x, y);
    expect(chi_b(p) == chi_b(x) * chi_b(y), "chi_b product law fails", fail);
    expect(chi_g(p) == chi_g(x) * chi_g(y), "chi_g product law fails", fail);
    ++products;
  }
  expect(unions >= 10 && products >= 10, "not enough comparable corpus pairs", fail);
}

void criterion_10(std::string& fail) {
  const char* texts[] = {"0 < y & y < x & x < 1",
                         "0 < x & x < 1 & 0 < y & y < 1",
                         "0 < x & 0 < y",
                         "(0 < x & x < 1 & y = x) | (0 < x & x < 1 & 0 < y & y < x)",
                         "y = x | y = 0 - x"};
  for (const char* text : texts) {
    DefSet s = make_set(text, XY);
    Decomposition d = decompose(s, DecomposeOptions{.verify = false});
    std::vector<Cell> bases;
    for (const Cell& cell : d.cells) {
      Cell base = cell.prefix(1);
      bool seen = false;
      for (const Cell& b : bases) seen = seen || b == base;
      if (!seen) bases.push_back(base);
    }
    for (const Cell& base : bases) {
      std::optional<long long> fiber_chi;
      for (int variant = 0; variant < 5; ++variant) {
        Point a = base.sample(variant);
        long long chi = chi_b(restrict_coordinate(s, 0, a[0]));
        if (!fiber_chi)
          fiber_chi = chi;
        else
          expect(*fiber_chi == chi,
                 std::string(text) + ": fiber chi_b varies over a base cell", fail);
      }
      DefSet base_set = base.to_defset();
      std::vector<Conj> lifted;
      for (const Conj& bc : base_set.disjuncts) {
        std::vector<Atom> atoms;
        for (const Atom& a : bc) atoms.emplace_back(a.term().widened(2), a.rel());
        lifted.push_back(make_conj(std::move(atoms)));
      }
      long long whole = chi_b(set_intersection(s, DefSet{2, lifted}));
      expect(whole == chi_b(base_set) * *fiber_chi,
             std::string(text) + ": fiber product identity fails", fail);
    }
  }
}

void criterion_11(std::string& fail) {
  struct Fixture {
    std::string name;
    std::string set_text;
    std::vector<std::string> vars;
    std::string graph_text;
  };
  std::vector<Fixture> fixtures = {
      {"abs-on-line", "x = x", X, "(0 <= x & t = x) | (x < 0 & t = 0 - x)"},
      {"id-on-ray", "0 < x", X, "0 < x & t = x"},
      {"const-on-interval", "0 < x & x < 1", X, "0 < x & x < 1 & t = 0"},
      {"two-piece", "(0 < x & x < 1) | (2 < x & x < 3)", X,
       "(0 < x & x < 1 & t = 0) | (2 < x & x < 3 & t = x)"},
      {"max-norm-plane", "x = x & y = y", XY,
       "(0 <= x & y <= x & 0 - x <= y & t = x) | (x <= 0 & y <= 0 - x & x <= y & t = 0 - x) | "
       "(0 <= y & x <= y & 0 - y <= x & t = y) | (y <= 0 & x <= 0 - y & y <= x & t = 0 - y)"},
  };
  for (const auto& fx : fixtures) {
    DefSet s = make_set(fx.set_text, fx.vars);
    std::vector<std::string> gvars{"t"};
    gvars.insert(gvars.end(), fx.vars.begin(), fx.vars.end());
    DefSet graph = make_set(fx.graph_text, gvars);
    BdReport r = bd_check(s, graph);
    expect(r.preconditions_ok(), fx.name + ": precondition check failed", fail);
    expect(r.identity_verified(), fx.name + ": chi_g(sublevel) != chi_b beyond mu", fail);
  }
}

void criterion_12(std::string& fail) {
  for (const auto& c : bijection_cases()) {
    if (!certify_bijection(c.f, c.s, c.t)) {
      expect(false, c.name + ": certificate failed", fail);
      continue;
    }
    bool src_bounded = true;
    for (const Cell& cell : decompose(c.s, DecomposeOptions{.verify = false}).cells)
      src_bounded = src_bounded && is_bounded(cell);
    if (!src_bounded) continue;
    for (const Cell& cell : decompose(c.t, DecomposeOptions{.verify = false}).cells)
      expect(is_bounded(cell), c.name + ": bounded source, unbounded image cell", fail);
  }
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {"interval class is -1 (CLI, 10 random intervals)", 1.0, criterion_1},
      {"class of the full line is 2*T + 1", 1.0, criterion_2},
      {"T^2 = -T, algebraically and geometrically", 5.0, criterion_3},
      {"ring laws and evaluation homomorphisms", 30.0, criterion_4},
      {"chi_b independent of the partition (5 refinements)", 10.0, criterion_5},
      {"good cells are exactly the bounded cells", 30.0, criterion_6},
      {"sign-enumeration oracle agrees on the corpus", 60.0, criterion_7},
      {"certified bijections preserve both characteristics", 30.0, criterion_8},
      {"union and product laws on corpus pairs", 30.0, criterion_9},
      {"fiber characteristic constant per base cell", 30.0, criterion_10},
      {"sublevel chi_g stabilizes to chi_b beyond mu", 10.0, criterion_11},
      {"certified bijections preserve boundedness", 30.0, criterion_12},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    std::string fail;
    try {
      criteria[i].run(fail);
    } catch (const std::exception& e) {
      fail = std::string("exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (fail.empty() && secs > criteria[i].budget_seconds)
      fail = "exceeded the " + std::to_string(criteria[i].budget_seconds) + "s budget";
    std::ostringstream line;
    line << (fail.empty() ? "PASS" : "FAIL") << "  criterion " << (i + 1 < 10 ? " " : "")
         << i + 1 << ": " << criteria[i].name << "  [" << std::fixed;
    line.precision(2);
    line << secs << "s]";
    std::cout << line.str() << "\n";
    if (!fail.empty()) {
      std::cout << "      " << fail << "\n";
      ++failures;
    }
  }
  if (failures == 0)
    std::cout << "all 12 acceptance criteria passed\n";
  else
    std::cout << failures << " criterion(s) failed\n";
  return failures == 0 ? 0 : 1;
}
