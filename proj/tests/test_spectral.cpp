#include "ecw/errors.hpp"
#include "ecw/spectral.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

using namespace ecw;

namespace {

std::uint64_t multiplicity_of(const SpectrumMultiset& s, const Rational& value) {
  for (const auto& e : s.entries)
    if (e.value == value) return e.multiplicity;
  return 0;
}

}  // namespace

TEST_CASE("recursive spectrum examples") {
  const auto s10 = recursive_spectrum({1, 0});
  REQUIRE(s10.entries.size() == 2);
  CHECK(multiplicity_of(s10, 1) == 1);
  CHECK(multiplicity_of(s10, make_rational(-1, 2)) == 2);

  const auto s11 = recursive_spectrum({1, 1});
  REQUIRE(s11.entries.size() == 3);
  CHECK(multiplicity_of(s11, 1) == 1);
  CHECK(multiplicity_of(s11, make_rational(1, 4)) == 2);
  CHECK(multiplicity_of(s11, make_rational(-1, 2)) == 3);

  const auto s21 = recursive_spectrum({2, 1});
  CHECK(s21.total_multiplicity() == 16);
  CHECK(multiplicity_of(s21, make_rational(-1, 3)) == 10);
  CHECK(multiplicity_of(s21, make_rational(1, 3)) == 2);
  CHECK(multiplicity_of(s21, make_rational(5, 9)) == 3);
  CHECK(multiplicity_of(s21, 1) == 1);
}

TEST_CASE("spectrum invariants") {
  for (int q = 1; q <= 4; ++q)
    for (int g = 0; g <= 6; ++g) {
      const auto s = recursive_spectrum({q, g});
      CHECK(s.total_multiplicity() == node_count({q, g}));
      CHECK(s.trace() == 0);
      CHECK(multiplicity_of(s, 1) == 1);
      for (const auto& e : s.entries) {
        CHECK(e.value > -1);
        CHECK(e.value <= 1);
      }
      for (std::size_t k = 1; k < s.entries.size(); ++k) CHECK(s.entries[k - 1].value > s.entries[k].value);
    }
}

TEST_CASE("recursive spectrum vs dense eigensolve") {
  for (int q = 1; q <= 3; ++q)
    for (int g = 0; g <= 2; ++g) {
      if (node_count({q, g}) > 400) continue;
      const auto graph = build_graph({q, g});
      const auto dense = dense_spectrum(assemble_matrices(graph).normalized);
      CHECK(spectrum_deviation(recursive_spectrum({q, g}), dense) <= 1e-9);
    }
}

TEST_CASE("spectrum CSV") {
  std::ostringstream out;
  write_spectrum_csv(out, recursive_spectrum({1, 1}));
  CHECK(out.str() == "value_num,value_den,multiplicity\n1,1,1\n1,4,2\n-1,2,3\n");
}

TEST_CASE("kernel bases") {
  SUBCASE("q=1, g=0 is empty") {
    const auto k = kernel_bases(assemble_matrices(build_graph({1, 0})), {1, 0});
    CHECK(k.y1.cols() == 0);
    CHECK(k.y2.cols() == 0);
  }
  SUBCASE("q=1, g=1") {
    const auto bundle = assemble_matrices(build_graph({1, 1}));
    const auto k = kernel_bases(bundle, {1, 1});
    CHECK(k.y1.cols() == 3);
    CHECK(k.y2.cols() == 0);
    const auto d = kernel_defects(k, bundle, 1);
    CHECK(d.annihilation < 1e-10);
    CHECK(d.orthonormality < 1e-10);
  }
  SUBCASE("q=3 staircase") {
    for (int g = 0; g <= 1; ++g) {
      const auto bundle = assemble_matrices(build_graph({3, g}));
      const auto k = kernel_bases(bundle, {3, g});
      const auto m = bundle.incidence.cols();
      CHECK(k.y2.cols() == 2 * m);
      CHECK(k.y1.cols() == m - bundle.incidence.rows());
      const auto d = kernel_defects(k, bundle, 3);
      CHECK(d.annihilation < 1e-9);
      CHECK(d.orthonormality < 1e-9);
      CHECK(d.block_sum < 1e-12);
      CHECK(d.coordinate_mass < 1e-12);
      // Per-coordinate Y2 mass is 1 - 1/q = 2/3.
      CHECK(k.y2.row(0).squaredNorm() == doctest::Approx(2.0 / 3.0));
      // Patterns (1/sqrt2, -1/sqrt2, 0) and (1/sqrt6, 1/sqrt6, -2/sqrt6) over the three blocks.
      std::vector<double> first, second;
      for (int b = 0; b < 3; ++b) {
        first.push_back(k.y2.col(0).segment(b * m, m).sum());
        second.push_back(k.y2.col(1).segment(b * m, m).sum());
      }
      const double a = 1 / std::sqrt(2.0), c = 1 / std::sqrt(6.0);
      const bool f1 = std::abs(std::abs(first[0]) - a) < 1e-12 || std::abs(std::abs(second[0]) - a) < 1e-12;
      CHECK(f1);
      std::vector<double> pattern = std::abs(first[2]) < 1e-12 ? second : first;
      CHECK(std::abs(pattern[0]) == doctest::Approx(c));
      CHECK(std::abs(pattern[2]) == doctest::Approx(2 * c));
      CHECK(pattern[0] * pattern[2] < 0);
    }
  }
}

TEST_CASE("eigenvector lifting") {
  SUBCASE("base basis") {
    for (int q = 1; q <= 4; ++q) {
      const auto basis = base_eigenbasis(q);
      const auto d = eigen_defects(basis, assemble_matrices(build_graph({q, 0})));
      CHECK(d.residual < 1e-12);
      CHECK(d.orthonormality < 1e-12);
      CHECK(d.stationary < 1e-12);
    }
  }
  SUBCASE("q=1, g=0 to 1") {
    const auto g0 = build_graph({1, 0});
    const auto b0 = assemble_matrices(g0);
    const auto next = assemble_matrices(build_graph({1, 1}));
    const auto lifted =
        lift_eigenvectors(base_eigenbasis(1), recursive_spectrum({1, 0}), g0, kernel_bases(b0, {1, 0}), next);
    CHECK(lifted.vectors.cols() == 6);
    const auto d = eigen_defects(lifted, next);
    CHECK(d.residual < 1e-10);
    CHECK(d.orthonormality < 1e-10);
    // lambda = 1 lift: old entries sqrt(d_i(g) / (M_g (q+2))), new entries 1 / sqrt(M_g (q+2)).
    const double sign = lifted.vectors(0, 0) > 0 ? 1.0 : -1.0;
    for (int i = 0; i < 3; ++i) CHECK(sign * lifted.vectors(i, 0) == doctest::Approx(std::sqrt(2.0 / 9.0)));
    for (int i = 3; i < 6; ++i) CHECK(sign * lifted.vectors(i, 0) == doctest::Approx(1.0 / 3.0));
  }
  SUBCASE("recursive bases up to (2,2) and (3,1)") {
    for (auto params : {GraphParams{1, 1}, GraphParams{1, 2}, GraphParams{1, 3}, GraphParams{2, 1},
                        GraphParams{2, 2}, GraphParams{3, 1}}) {
      CAPTURE(params.q);
      CAPTURE(params.g);
      const auto basis = recursive_eigenbasis(params);
      const auto d = eigen_defects(basis, assemble_matrices(build_graph(params)));
      CHECK(d.residual <= 1e-9);
      CHECK(d.orthonormality <= 1e-9);
      CHECK(d.stationary <= 1e-9);
      // Column eigenvalues match the multiset.
      const auto s = recursive_spectrum(params);
      for (const auto& e : s.entries)
        CHECK(static_cast<std::uint64_t>(std::count(basis.values.begin(), basis.values.end(), e.value)) ==
              e.multiplicity);

      const GraphParams prev{params.q, params.g - 1};
      const auto prev_graph = build_graph(prev);
      const auto kernel = kernel_bases(assemble_matrices(prev_graph), prev);
      CHECK(kernel_mass_identity_defect(recursive_eigenbasis(prev), prev_graph, kernel) <= 1e-9);
    }
  }
  SUBCASE("mismatched spectrum is rejected") {
    const auto g0 = build_graph({1, 0});
    const auto b0 = assemble_matrices(g0);
    CHECK_THROWS_AS(lift_eigenvectors(base_eigenbasis(1), recursive_spectrum({2, 0}), g0, kernel_bases(b0, {1, 0}),
                                      assemble_matrices(build_graph({1, 1}))),
                    std::invalid_argument);
  }
  SUBCASE("tight tolerance raises") {
    auto basis = base_eigenbasis(2);
    basis.residual_tol = 0.0;
    basis.vectors(0, 1) += 1e-3;
    const auto g0 = build_graph({2, 0});
    const auto b0 = assemble_matrices(g0);
    CHECK_THROWS_AS(lift_eigenvectors(basis, recursive_spectrum({2, 0}), g0, kernel_bases(b0, {2, 0}),
                                      assemble_matrices(build_graph({2, 1}))),
                    NumericalError);
  }
}
