#include "ecw/errors.hpp"
#include "ecw/oracle.hpp"
#include "ecw/spectral.hpp"
#include "ecw/walk.hpp"

#include <doctest.h>

#include <sstream>

using namespace ecw;

namespace {

Rational r(long num, long den = 1) { return make_rational(num, den); }

}  // namespace

TEST_CASE("rational formatting") {
  CHECK(to_string(r(14, 3)) == "14/3");
  CHECK(to_string(r(-6, 4)) == "-3/2");
  CHECK(to_string(r(8)) == "8");
  CHECK(to_string(r(0)) == "0");
  CHECK(parse_rational("28/6") == r(14, 3));
  CHECK(parse_rational("-5") == r(-5));
  CHECK_THROWS_AS(parse_rational("1/0"), std::invalid_argument);
  CHECK_THROWS_AS(parse_rational("abc"), std::invalid_argument);
  CHECK(format_double(0.5) == "0.5");
  CHECK(pow(r(3, 2), 3) == r(27, 8));
}

TEST_CASE("hitting table examples") {
  const auto t11 = hitting_table_exact({1, 1});
  CHECK(t11(0, 1) == 4);
  CHECK(t11(3, 0) == 3);
  CHECK(t11(0, 3) == 8);
  CHECK(t11(3, 4) == 10);
  for (std::size_t i = 0; i < t11.size; ++i) CHECK(t11(i, i) == 0);

  const auto t21 = hitting_table_exact({2, 1});
  CHECK(t21(4, 10) == 18);
  CHECK(t21(10, 4) == 18);

  for (int q = 1; q <= 4; ++q) {
    const auto base = hitting_table_exact({q, 0});
    for (std::size_t i = 0; i < base.size; ++i)
      for (std::size_t j = 0; j < base.size; ++j) CHECK(base(i, j) == (i == j ? 0 : q + 1));
  }
}

TEST_CASE("hitting table caps") {
  CHECK_THROWS_AS(hitting_table_exact({1, 3}, Execution::serial, 41), ResourceLimitError);
  CHECK_THROWS_AS(hitting_table_float({1, 3}, Execution::serial, 41), ResourceLimitError);
}

TEST_CASE("float table tracks exact table") {
  for (auto params : {GraphParams{1, 3}, GraphParams{2, 2}, GraphParams{3, 1}}) {
    const auto exact = hitting_table_exact(params);
    const auto real = hitting_table_float(params);
    REQUIRE(real.size == exact.size);
    for (std::size_t k = 0; k < exact.values.size(); ++k)
      CHECK(real.values[k] == doctest::Approx(exact.values[k].get_d()).epsilon(1e-12));
  }
}

TEST_CASE("hitting_pair") {
  CHECK(hitting_pair(GraphParams{1, 1}, 0, 1) == 4);
  CHECK(hitting_pair(GraphParams{1, 1}, 3, 3) == 0);
  CHECK(hitting_pair(GraphParams{1, 1}, 0, 3) == 8);
  CHECK_THROWS_AS(hitting_pair(GraphParams{1, 1}, 0, 6), std::out_of_range);
  for (auto params : {GraphParams{1, 3}, GraphParams{2, 2}}) {
    const auto graph = build_graph(params);
    const auto table = hitting_table_exact(params);
    for (NodeId i = 0; i < graph.node_count(); i += 7)
      for (NodeId j = 0; j < graph.node_count(); j += 5) CHECK(hitting_pair(graph, i, j) == table(i, j));
  }
  // A pair on a graph far beyond any table cap.
  CHECK(hitting_pair(GraphParams{1, 9}, 0, 1) == 1024);
}

TEST_CASE("table CSV") {
  std::ostringstream out;
  write_table_csv(out, hitting_table_exact({1, 0}));
  CHECK(out.str() == "node,0,1,2\n0,0,2,2\n1,2,0,2\n2,2,2,0\n");
}

TEST_CASE("kemeny") {
  CHECK(kemeny_closed({1, 0}) == r(4, 3));
  CHECK(kemeny_closed({1, 1}) == r(14, 3));
  CHECK(kemeny_closed({2, 1}) == r(69, 4));
  CHECK(kemeny_closed({1, 2}) == r(49, 3));
  for (int q = 1; q <= 5; ++q) CHECK(kemeny_closed({q, 0}) == r((q + 1) * (q + 1), q + 2));
  for (int q = 1; q <= 4; ++q)
    for (int g = 0; g <= 6; ++g) {
      CHECK(kemeny_recursive({q, g}) == kemeny_closed({q, g}));
      CHECK(kemeny_from_spectrum(recursive_spectrum({q, g})) == kemeny_closed({q, g}));
    }

  SpectrumMultiset k4{{2, 0}, {{r(1), 1}, {r(-1, 3), 3}}};
  CHECK(kemeny_from_spectrum(k4) == r(9, 4));
  SpectrumMultiset missing{{1, 0}, {{r(-1, 2), 2}}};
  CHECK_THROWS_AS(kemeny_from_spectrum(missing), std::invalid_argument);
  SpectrumMultiset doubled{{1, 0}, {{r(1), 2}, {r(-1, 2), 1}}};
  CHECK_THROWS_AS(kemeny_from_spectrum(doubled), std::invalid_argument);
}

TEST_CASE("hitting-time sums") {
  CHECK(sum_hitting({1, 0}) == 12);
  CHECK(sum_hitting({1, 1}) == 195);
  CHECK(sum_hitting({2, 0}) == 36);
  CHECK(sum_hitting({2, 1}) == 5616);
  CHECK(sum_additive({1, 0}) == 48);
  CHECK(sum_additive({1, 1}) == 1098);
  CHECK(sum_additive({2, 0}) == 216);
  CHECK(sum_multiplicative({1, 0}) == 48);
  CHECK(sum_multiplicative({1, 1}) == 1512);
  CHECK(sum_multiplicative({2, 0}) == 324);
  CHECK(mean_hitting({1, 0}) == 2);
  CHECK(mean_hitting({1, 1}) == r(13, 2));

  for (int q = 1; q <= 4; ++q)
    for (int g = 0; g <= 6; ++g) {
      const GraphParams p{q, g};
      const auto m = Integer(static_cast<unsigned long>(counts(p).edges));
      const auto n = Integer(static_cast<unsigned long>(counts(p).nodes));
      CHECK(sum_multiplicative(p) == Rational(4 * m * m) * kemeny_closed(p));
      CHECK(mean_hitting(p) == mean_hitting_composite(p));
      CHECK(mean_hitting(p) == sum_hitting(p) / Rational(n * (n - 1)));
      const auto rec = sums_by_recursion(p);
      CHECK(rec.hitting == sum_hitting(p));
      CHECK(rec.additive == sum_additive(p));
      CHECK(rec.multiplicative == sum_multiplicative(p));
      const auto a = analytics(p);
      CHECK(a.kemeny == kemeny_closed(p));
      CHECK(a.mean_hitting == mean_hitting(p));
    }
}

TEST_CASE("table aggregates and cross sums") {
  for (auto params : {GraphParams{1, 1}, GraphParams{1, 2}, GraphParams{1, 3}, GraphParams{2, 1},
                      GraphParams{2, 2}, GraphParams{3, 1}}) {
    CAPTURE(params.q);
    CAPTURE(params.g);
    const auto graph = build_graph(params);
    const auto table = hitting_table_exact(params);
    const auto s = table_sums(table, graph);
    CHECK(s.hitting == sum_hitting(params));
    CHECK(s.additive == sum_additive(params));
    CHECK(s.multiplicative == sum_multiplicative(params));
    for (NodeId i = 0; i < graph.node_count(); ++i) CHECK(kemeny_from_table(table, graph, i) == kemeny_closed(params));

    const GraphParams prev{params.q, params.g - 1};
    const auto cs = cross_sums(table, graph);
    CHECK(cs.new_old == predicted_new_old_commute(prev));
    CHECK(cs.new_new == predicted_new_new_commute(prev));
    CHECK(cs.parent_weighted == cs.degree_weighted);
  }
}

TEST_CASE("asymptotics") {
  auto c = asymptotic_coefficients(1);
  CHECK(c.kemeny_ratio == r(5, 3));
  CHECK(c.mean_hit_ratio == r(50, 21));
  c = asymptotic_coefficients(2);
  CHECK(c.kemeny_ratio == r(13, 8));
  CHECK(c.mean_hit_ratio == r(195, 88));
  for (int q = 1; q < 20; ++q)
    CHECK(asymptotic_coefficients(q + 1).kemeny_ratio < asymptotic_coefficients(q).kemeny_ratio);
  CHECK_THROWS_AS(asymptotic_coefficients(0), std::invalid_argument);
}
