#include <doctest.h>

#include <random>

#include "grothlin/error.hpp"
#include "grothlin/euler.hpp"
#include "grothlin/parser.hpp"
#include "grothlin/plmap.hpp"
#include "grothlin/qe.hpp"
#include "support.hpp"

using namespace grothlin;
using testutil::make_set;

namespace {

const std::vector<std::string> X{"x"};
const std::vector<std::string> XY{"x", "y"};

Point pt(std::initializer_list<Rational> vals) { return Point(vals); }

}  // namespace

TEST_SUITE_BEGIN("plmap");

TEST_CASE("application") {
  CHECK(PLMap::translate({Rational(3, 2)}).apply(pt({Rational(0)})) == pt({Rational(3, 2)}));
  CHECK(PLMap::halve().apply(pt({Rational(1)})) == pt({Rational(1, 2)}));
  CHECK(PLMap::swap_coords({1, 0}).apply(pt({Rational(1), Rational(2)})) ==
        pt({Rational(2), Rational(1)}));
  CHECK(PLMap::shear().apply(pt({Rational(2), Rational(3)})) == pt({Rational(2), Rational(5)}));

  PLMap restricted(1, 1,
                   {PLMap::Piece{make_set("0 < x", X), {LinTerm::variable(1, 0)}}});
  CHECK_THROWS_AS(restricted.apply(pt({Rational(-1)})), DomainError);
}

TEST_CASE("graphs of maps") {
  PLMap id_on_unit(1, 1,
                   {PLMap::Piece{make_set("0 < x & x < 1", X), {LinTerm::variable(1, 0)}}});
  CHECK(equivalent(id_on_unit.graph(), make_set("0 < x & x < 1 & y = x", XY)));

  PLMap shift_on_ray(1, 1,
                     {PLMap::Piece{make_set("0 < x", X),
                                   {LinTerm::variable(1, 0) + LinTerm::constant(1, Rational(5))}}});
  CHECK(equivalent(shift_on_ray.graph(), make_set("0 < x & y = x + 5", XY)));

  PLMap empty_domain(1, 1, {PLMap::Piece{DefSet::empty(1), {LinTerm::variable(1, 0)}}});
  CHECK(is_empty(empty_domain.graph()));
}

TEST_CASE("images") {
  CHECK(equivalent(image(PLMap::halve(), make_set("0 < x & x < 1", X)),
                   make_set("0 < x & x < 1/2", X)));
  CHECK(equivalent(image(PLMap::reflect(), make_set("0 < x", X)), make_set("x < 0", X)));
  CHECK(equivalent(image(PLMap::shear(), make_set("0 < x & 0 < y", XY)),
                   make_set("0 < x & x < y", XY)));
  // a set escaping the declared domain is rejected
  PLMap restricted(1, 1,
                   {PLMap::Piece{make_set("0 < x", X), {LinTerm::variable(1, 0)}}});
  CHECK_THROWS_AS(image(restricted, make_set("x = x", X)), DomainError);
}

TEST_CASE("injectivity") {
  CHECK(is_injective_on(PLMap::halve(), make_set("0 < x & x < 1", X)));
  PLMap constant(1, 1, {PLMap::Piece{DefSet::full(1), {LinTerm::constant(1, Rational(0))}}});
  CHECK(!is_injective_on(constant, make_set("0 < x & x < 1", X)));
  CHECK(is_injective_on(PLMap::shear(), DefSet::full(2)));
}

TEST_CASE("bijection certificates") {
  CHECK(certify_bijection(PLMap::halve(), make_set("0 < x & x < 1", X),
                          make_set("0 < x & x < 1/2", X)));
  CHECK(certify_bijection(PLMap::shear(), make_set("0 < x & 0 < y", XY),
                          make_set("0 < x & x < y", XY)));
  CHECK(!certify_bijection(PLMap::identity(1), make_set("0 < x & x < 1", X),
                           make_set("0 < x & x < 2", X)));
}

TEST_CASE("stock bijections of the band arguments") {
  // (x, t) -> (x, x + t) carries the upper cylinder onto the band above the diagonal
  PLMap raise = PLMap::raise_above(parse_term("x", X), 1);
  CHECK(certify_bijection(raise, make_set("0 < x & x < 1 & 0 < y", XY),
                          make_set("0 < x & x < 1 & x < y", XY)));
  // (x, t) -> (x, x - t) carries it onto the band below
  PLMap drop = PLMap::drop_below(parse_term("x", X), 1);
  CHECK(certify_bijection(drop, make_set("0 < x & x < 1 & 0 < y", XY),
                          make_set("0 < x & x < 1 & y < x", XY)));
}

TEST_CASE("piecewise map from a functional graph") {
  // the absolute value as a two-piece graph
  DefSet g = make_set("(0 <= x & y = x) | (x < 0 & y = 0 - x)", XY);
  PLMap abs_map = PLMap::from_graph(g, 1, 1);
  CHECK(abs_map.apply(pt({Rational(-2)})) == pt({Rational(2)}));
  CHECK(abs_map.apply(pt({Rational(3, 2)})) == pt({Rational(3, 2)}));
  CHECK(equivalent(abs_map.domain(), DefSet::full(1)));
  CHECK(!is_injective_on(abs_map, DefSet::full(1)));

  // a relation with two values over a point is rejected
  DefSet bad = make_set("y = x | y = x + 1", XY);
  CHECK_THROWS_AS(PLMap::from_graph(bad, 1, 1), SemanticError);

  // a relation that fixes no output is rejected
  DefSet open_rel = make_set("x < y", XY);
  CHECK_THROWS_AS(PLMap::from_graph(open_rel, 1, 1), SemanticError);

  // totality against a declared domain
  CHECK_NOTHROW(PLMap::from_graph(g, 1, 1, DefSet::full(1)));
  DefSet half_graph = make_set("0 < x & y = x", XY);
  CHECK_THROWS_AS(PLMap::from_graph(half_graph, 1, 1, DefSet::full(1)), SemanticError);
  CHECK_NOTHROW(PLMap::from_graph(half_graph, 1, 1, make_set("0 < x", X)));
}

TEST_CASE("graph consistency at random points") {
  std::mt19937_64 rng(31);
  PLMap f = PLMap::shear();
  DefSet g = f.graph();
  for (int i = 0; i < 100; ++i) {
    Point p = testutil::random_point(rng, 2);
    Point q = f.apply(p);
    Point joint = p;
    joint.insert(joint.end(), q.begin(), q.end());
    CHECK(g.contains(joint));
  }
}

TEST_CASE("characteristic invariance under certified bijections") {
  struct PairCase {
    PLMap f;
    DefSet s;
    DefSet t;
  };
  std::vector<PairCase> cases;
  cases.push_back({PLMap::halve(), make_set("0 < x & x < 1", X), make_set("0 < x & x < 1/2", X)});
  cases.push_back({PLMap::translate({Rational(7, 3)}), make_set("0 < x & x < 1", X),
                   make_set("7/3 < x & x < 10/3", X)});
  cases.push_back({PLMap::reflect(), make_set("0 < x", X), make_set("x < 0", X)});
  cases.push_back({PLMap::swap_coords({1, 0}), make_set("0 < y & y < x", XY),
                   make_set("0 < x & x < y", XY)});
  for (const auto& c : cases) {
    REQUIRE(certify_bijection(c.f, c.s, c.t));
    CHECK(chi_g(c.s) == chi_g(c.t));
    CHECK(chi_b(c.s) == chi_b(c.t));
    CHECK(g_class(c.s) == g_class(c.t));
  }
}

TEST_CASE("bounded sources map to bounded targets") {
  PLMap f = PLMap::halve();
  DefSet s = make_set("0 < x & x < 1", X);
  DefSet t = image(f, s);
  REQUIRE(certify_bijection(f, s, t));
  bool src_bounded = true;
  for (const Cell& c : decompose(s).cells) src_bounded = src_bounded && is_bounded(c);
  REQUIRE(src_bounded);
  for (const Cell& c : decompose(t).cells) CHECK(is_bounded(c));
}

TEST_CASE("json round-trip") {
  PLMap f(1, 1,
          {PLMap::Piece{make_set("0 < x", X), {LinTerm::variable(1, 0, Rational(1, 2))}},
           PLMap::Piece{make_set("x <= 0", X), {LinTerm::variable(1, 0, Rational(2))}}});
  nlohmann::json j = plmap_to_json(f, X);
  PLMap g = plmap_from_json(j, X);
  CHECK(g.src_dim() == 1);
  CHECK(g.dst_dim() == 1);
  CHECK(equivalent(f.graph(), g.graph()));
  CHECK(plmap_to_json(g, X) == j);
}

TEST_SUITE_END();
