#include "ecw/verify.hpp"

#include "ecw/errors.hpp"
#include "ecw/spectral.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace ecw {

namespace {

Rational count_of(std::size_t n) { return Rational(Integer(static_cast<unsigned long>(n))); }

Rational max_abs_diff(const ExactHittingTable& a, const ExactHittingTable& b) {
  Rational worst = 0;
  for (std::size_t k = 0; k < a.values.size(); ++k) {
    Rational d = abs(a.values[k] - b.values[k]);
    if (d > worst) worst = d;
  }
  return worst;
}

template <typename Other>
double max_rel_diff(const ExactHittingTable& exact, const Other& other) {
  double worst = 0.0;
  for (std::size_t i = 0; i < exact.size; ++i) {
    for (std::size_t j = 0; j < exact.size; ++j) {
      if (i == j) continue;
      const double e = exact(i, j).get_d();
      worst = std::max(worst, std::abs(other(i, j) - e) / std::abs(e));
    }
  }
  return worst;
}

void graph_checks(VerificationReport& report, const GraphInstance& graph, const MatrixBundle* bundle,
                  const VerifyOptions& options) {
  const auto c = counts(graph.params());
  report.add(make_check("node count", count_of(c.nodes), count_of(graph.node_count())));
  report.add(make_check("edge count", count_of(c.edges), count_of(graph.edge_count())));

  const std::string degree_issue = check_degrees(graph);
  report.add(make_check("degree formula (mismatching nodes)", Rational(0), Rational(degree_issue.empty() ? 0 : 1)));

  std::size_t bad_levels = 0;
  for (int level = 1; level <= graph.params().g; ++level) {
    const auto born = std::count_if(graph.nodes().begin(), graph.nodes().end(),
                                    [level](const NodeRecord& n) { return n.birth == level; });
    if (static_cast<std::uint64_t>(born) != c.new_nodes[static_cast<std::size_t>(level - 1)]) ++bad_levels;
  }
  report.add(make_check("new nodes per iteration (mismatching levels)", Rational(0), count_of(bad_levels)));

  report.add(make_check("stationary distribution is a fixed point", Rational(1),
                        Rational(is_stationary(graph, stationary(graph)) ? 1 : 0)));

  if (bundle == nullptr) return;
  const Eigen::MatrixXi bbt = bundle->incidence * bundle->incidence.transpose();
  Eigen::MatrixXi rhs = bundle->adjacency;
  rhs.diagonal() += bundle->degree;
  report.add(make_check("B B^T = A + D (max |entry difference|)", Rational(0),
                        Rational((bbt - rhs).cwiseAbs().maxCoeff())));
  if (graph.node_count() <= options.dense_limit)
    report.add(make_check("rank(B) = N", count_of(graph.node_count()),
                          count_of(static_cast<std::size_t>(numerical_rank(bundle->incidence.cast<double>())))));
}

void spectral_checks(VerificationReport& report, const GraphInstance& graph, const MatrixBundle& bundle,
                     const SpectrumMultiset& spectrum, const VerifyOptions& options) {
  report.add(make_check("spectrum total multiplicity", count_of(graph.node_count()),
                        count_of(spectrum.total_multiplicity())));
  report.add(make_check("spectrum trace", Rational(0), spectrum.trace()));
  report.add(make_check("recursive spectrum vs dense eigensolve", 0.0,
                        spectrum_deviation(spectrum, dense_spectrum(bundle.normalized)), options.spectrum_tol));

  const auto& params = graph.params();
  if (params.g < 1) return;
  const GraphParams prev_params{params.q, params.g - 1};
  try {
    const auto prev_graph = build_graph(prev_params, options.node_cap);
    const auto prev_bundle = assemble_matrices(prev_graph);
    const auto prev_basis = recursive_eigenbasis(prev_params, options.eigen_tol);
    const auto kernel = kernel_bases(prev_bundle, prev_params);
    const auto kd = kernel_defects(kernel, prev_bundle, params.q);
    report.add(make_check("kernel basis annihilates C_g", 0.0, kd.annihilation, options.eigen_tol));
    report.add(make_check("kernel basis orthonormality", 0.0, kd.orthonormality, options.eigen_tol));
    report.add(make_check("kernel staircase block sums", 0.0, kd.block_sum, options.eigen_tol));
    report.add(make_check("kernel staircase coordinate mass 1 - 1/q", 0.0, kd.coordinate_mass, options.eigen_tol));

    EigenBasis lifted;
    try {
      lifted = lift_eigenvectors(prev_basis, recursive_spectrum(prev_params), prev_graph, kernel, bundle);
    } catch (const NumericalError&) {
      // Recompute without the tolerance gate so the report carries the numbers.
      auto loose = prev_basis;
      loose.residual_tol = INFINITY;
      lifted = lift_eigenvectors(loose, recursive_spectrum(prev_params), prev_graph, kernel, bundle);
    }
    const auto ed = eigen_defects(lifted, bundle);
    report.add(make_check("lifted eigen-residual", 0.0, ed.residual, options.eigen_tol));
    report.add(make_check("lifted orthonormality", 0.0, ed.orthonormality, options.eigen_tol));
    report.add(make_check("lifted stationary eigenvector", 0.0, ed.stationary, options.eigen_tol));
    report.add(make_check("kernel mass identity on new nodes", 0.0,
                          kernel_mass_identity_defect(prev_basis, prev_graph, kernel), options.eigen_tol));
  } catch (const NumericalError& ex) {
    report.add(make_check(std::string("eigenvector lifting: ") + ex.what(), Rational(1), Rational(0)));
  }
}

void table_checks(VerificationReport& report, const GraphInstance& graph, const MatrixBundle* bundle,
                  const ExactHittingTable& table, const SpectrumMultiset& spectrum, const VerifyOptions& options) {
  const auto& params = graph.params();
  const std::size_t n = graph.node_count();

  if (params.g >= 1) {
    const auto prev = hitting_table_exact({params.q, params.g - 1}, options.execution);
    std::size_t bad = 0;
    for (std::size_t i = 0; i < prev.size; ++i)
      for (std::size_t j = 0; j < prev.size; ++j)
        if (table(i, j) != (params.q + 1) * prev(i, j)) ++bad;
    report.add(make_check("old pairs scale by q+1 (mismatching cells)", Rational(0), count_of(bad)));
  }

  if (n <= options.exact_oracle_limit) {
    const auto oracle = oracle_hitting_table_exact(graph, options.execution);
    report.add(make_check("recursion table vs exact oracle (max |diff|)", Rational(0), max_abs_diff(table, oracle)));
  } else {
    const auto oracle = oracle_hitting_table_float(graph, options.execution);
    report.add(make_check("recursion table vs float oracle (max rel diff)", 0.0, max_rel_diff(table, oracle),
                          options.float_rel_tol));
  }

  const NodeId last = static_cast<NodeId>(n - 1);
  std::size_t pair_bad = 0;
  for (auto [i, j] : {std::pair<NodeId, NodeId>{0, last}, {last, 0}, {last / 2, last}, {last, last / 2}})
    if (hitting_pair(graph, i, j) != table(i, j)) ++pair_bad;
  report.add(make_check("memoized pair descent vs table (mismatches)", Rational(0), count_of(pair_bad)));

  report.add(foster_check(graph, table));

  if (bundle != nullptr && n <= options.dense_limit) {
    const auto eig = dense_eigenpairs(*bundle);
    const auto spectral = spectral_hitting_table(graph, eig.vectors, eig.values);
    report.add(make_check("spectral hitting formula vs table (max rel diff)", 0.0, max_rel_diff(table, spectral),
                          options.spectral_hitting_rel_tol));
    report.add(make_check("kemeny dense eigensolve", kemeny_closed(params).get_d(), kemeny_oracle(graph), 0.0, 1e-8));
  }

  const Rational k = kemeny_closed(params);
  report.add(make_check("kemeny closed form vs spectrum", k, kemeny_from_spectrum(spectrum)));
  report.add(make_check("kemeny closed form vs level recursion", k, kemeny_recursive(params)));
  Rational worst = 0;
  for (std::size_t i = 0; i < n; ++i) {
    Rational d = abs(kemeny_from_table(table, graph, static_cast<NodeId>(i)) - k);
    if (d > worst) worst = d;
  }
  report.add(make_check("kemeny from table, every start (max |diff|)", Rational(0), worst));

  const auto sums = table_sums(table, graph);
  const Integer m(static_cast<unsigned long>(graph.edge_count()));
  report.add(make_check("H table vs closed form", sum_hitting(params), sums.hitting));
  report.add(make_check("H+ table vs closed form", sum_additive(params), sums.additive));
  report.add(make_check("H* table vs closed form", sum_multiplicative(params), sums.multiplicative));
  report.add(make_check("H* = 4 M^2 K", sum_multiplicative(params), Rational(4 * m * m) * k));
  const auto rec = sums_by_recursion(params);
  report.add(make_check("H closed form vs recursion", sum_hitting(params), rec.hitting));
  report.add(make_check("H+ closed form vs recursion", sum_additive(params), rec.additive));
  const Integer nn(static_cast<unsigned long>(n));
  Rational table_mean = sums.hitting / Rational(nn * (nn - 1));
  table_mean.canonicalize();
  report.add(make_check("mean hitting time table vs closed form", mean_hitting(params), table_mean));
  report.add(make_check("mean hitting time composite form", mean_hitting(params), mean_hitting_composite(params)));

  if (params.g >= 1) {
    const GraphParams prev{params.q, params.g - 1};
    const auto cs = cross_sums(table, graph);
    report.add(make_check("new-old commute sum", predicted_new_old_commute(prev), cs.new_old));
    report.add(make_check("new-new commute sum", predicted_new_new_commute(prev), cs.new_new));
    report.add(make_check("parent-edge weighting of commute sums", cs.degree_weighted, cs.parent_weighted));
  }
}

}  // namespace

VerificationReport verify(const GraphParams& params, const VerifyOptions& options) {
  params.validate();
  VerificationReport report;
  const auto graph = build_graph(params, options.node_cap);
  const bool dense = graph.node_count() <= options.dense_limit;
  std::optional<MatrixBundle> bundle;
  if (dense) bundle = assemble_matrices(graph);
  const MatrixBundle* bundle_ptr = bundle ? &*bundle : nullptr;

  graph_checks(report, graph, bundle_ptr, options);
  const auto spectrum = recursive_spectrum(params);
  if (dense) {
    spectral_checks(report, graph, *bundle, spectrum, options);
  } else {
    report.add(make_check("spectrum total multiplicity", count_of(graph.node_count()),
                          count_of(spectrum.total_multiplicity())));
    report.add(make_check("spectrum trace", Rational(0), spectrum.trace()));
  }

  auto table = hitting_table_exact(params, options.execution);
  if (options.corrupt_entry) {
    const auto [i, j] = *options.corrupt_entry;
    if (i >= table.size || j >= table.size) throw std::out_of_range("corrupt_entry outside the table");
    table(i, j) += 1;
  }
  table_checks(report, graph, bundle_ptr, table, spectrum, options);
  return report;
}

}  // namespace ecw
