#include "ecw/spectral.hpp"

#include "ecw/errors.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>

namespace ecw {

std::uint64_t SpectrumMultiset::total_multiplicity() const {
  std::uint64_t total = 0;
  for (const auto& e : entries) total += e.multiplicity;
  return total;
}

Rational SpectrumMultiset::trace() const {
  Rational sum = 0;
  for (const auto& e : entries) sum += e.value * Integer(static_cast<unsigned long>(e.multiplicity));
  return sum;
}

std::vector<double> SpectrumMultiset::expanded() const {
  std::vector<double> out;
  out.reserve(total_multiplicity());
  for (const auto& e : entries) out.insert(out.end(), e.multiplicity, e.value.get_d());
  return out;
}

SpectrumMultiset recursive_spectrum(const GraphParams& params) {
  params.validate();
  const int q = params.q;
  using Multiset = std::map<Rational, std::uint64_t, std::greater<>>;
  const Rational minus = make_rational(-1, q + 1);

  Multiset current;
  current[Rational(1)] = 1;
  current[minus] = static_cast<std::uint64_t>(q + 1);

  for (int level = 0; level < params.g; ++level) {
    const auto c = counts({q, level});
    Multiset next;
    for (const auto& [value, mult] : current) {
      Rational image = (value + q) / (q + 1);
      image.canonicalize();
      next[image] += mult;
    }
    next[minus] += static_cast<std::uint64_t>(q - 1) * c.edges + c.nodes;
    if (c.edges > c.nodes) next[make_rational(q - 1, q + 1)] += c.edges - c.nodes;
    current = std::move(next);
  }

  SpectrumMultiset out;
  out.params = params;
  for (auto& [value, mult] : current) out.entries.push_back({value, mult});
  return out;
}

std::vector<double> dense_spectrum(const Eigen::MatrixXd& symmetric) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(symmetric, Eigen::EigenvaluesOnly);
  if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolve did not converge");
  std::vector<double> values(solver.eigenvalues().data(), solver.eigenvalues().data() + solver.eigenvalues().size());
  std::sort(values.begin(), values.end(), std::greater<>());
  return values;
}

double spectrum_deviation(const SpectrumMultiset& exact, const std::vector<double>& dense) {
  auto expected = exact.expanded();
  if (expected.size() != dense.size()) return std::numeric_limits<double>::infinity();
  auto actual = dense;
  std::sort(actual.begin(), actual.end(), std::greater<>());
  double worst = 0.0;
  for (std::size_t i = 0; i < expected.size(); ++i) worst = std::max(worst, std::abs(expected[i] - actual[i]));
  return worst;
}

void write_spectrum_csv(std::ostream& out, const SpectrumMultiset& spectrum) {
  out << "value_num,value_den,multiplicity\n";
  for (const auto& e : spectrum.entries)
    out << e.value.get_num().get_str() << ',' << e.value.get_den().get_str() << ',' << e.multiplicity << '\n';
}

EigenDefects eigen_defects(const EigenBasis& basis, const MatrixBundle& bundle) {
  const auto& v = basis.vectors;
  const auto n = v.rows();
  if (bundle.normalized.rows() != n || v.cols() != n || static_cast<Eigen::Index>(basis.values.size()) != n)
    throw std::invalid_argument("eigen_defects: dimension mismatch");
  EigenDefects d;
  Eigen::MatrixXd pv = bundle.normalized * v;
  for (Eigen::Index k = 0; k < n; ++k) {
    const double lambda = basis.values[static_cast<std::size_t>(k)].get_d();
    d.residual = std::max(d.residual, (pv.col(k) - lambda * v.col(k)).cwiseAbs().maxCoeff());
  }
  d.orthonormality = (v.transpose() * v - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff();

  const double two_m = bundle.degree.cast<double>().sum();
  Eigen::VectorXd stationary = (bundle.degree.cast<double>() / two_m).cwiseSqrt();
  const double sign = v.col(0).dot(stationary) < 0 ? -1.0 : 1.0;
  d.stationary = (sign * v.col(0) - stationary).cwiseAbs().maxCoeff();
  return d;
}

EigenBasis base_eigenbasis(int q) {
  GraphParams params{q, 0};
  params.validate();
  const auto bundle = assemble_matrices(build_graph(params));
  const auto n = bundle.normalized.rows();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(bundle.normalized);
  if (solver.info() != Eigen::Success) throw NumericalError("base eigensolve did not converge");

  EigenBasis basis;
  basis.params = params;
  basis.vectors.resize(n, n);
  // Eigen sorts ascending; the top eigenvalue 1 is last.
  basis.vectors.col(0) = Eigen::VectorXd::Constant(n, 1.0 / std::sqrt(static_cast<double>(n)));
  basis.values.push_back(Rational(1));
  for (Eigen::Index k = 0; k + 1 < n; ++k) {
    basis.vectors.col(k + 1) = solver.eigenvectors().col(k);
    basis.values.push_back(make_rational(-1, q + 1));
  }
  return basis;
}

KernelBasis kernel_bases(const MatrixBundle& bundle, const GraphParams& params) {
  params.validate();
  const int q = params.q;
  const Eigen::Index n = bundle.incidence.rows();
  const Eigen::Index m = bundle.incidence.cols();

  KernelBasis kb;
  const Eigen::MatrixXd b = bundle.incidence.cast<double>();
  Eigen::BDCSVD<Eigen::MatrixXd> svd(b, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  const double cutoff = s.size() > 0 ? 1e-10 * s(0) : 0.0;
  const Eigen::Index rank = (s.array() > cutoff).count();
  if (m - rank != m - n)
    throw NumericalError("incidence nullspace has dimension " + std::to_string(m - rank) + ", expected " +
                         std::to_string(m - n));
  kb.x = svd.matrixV().rightCols(m - rank);

  kb.y1.resize(q * m, kb.x.cols());
  for (int f = 0; f < q; ++f) kb.y1.middleRows(f * m, m) = kb.x / std::sqrt(static_cast<double>(q));

  kb.y2 = Eigen::MatrixXd::Zero(q * m, (q - 1) * m);
  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < m; ++i) {
    for (int k = 1; k < q; ++k, ++col) {
      const double head = 1.0 / std::sqrt(static_cast<double>(k) * (k + 1));
      for (int f = 0; f < k; ++f) kb.y2(f * m + i, col) = head;
      kb.y2(k * m + i, col) = -std::sqrt(static_cast<double>(k) / (k + 1));
    }
  }
  return kb;
}

KernelDefects kernel_defects(const KernelBasis& kernel, const MatrixBundle& bundle, int q) {
  const Eigen::Index m = bundle.incidence.cols();
  const Eigen::MatrixXd b = bundle.incidence.cast<double>();
  KernelDefects d;

  auto annihilate = [&](const Eigen::MatrixXd& y) {
    if (y.cols() == 0) return 0.0;
    Eigen::MatrixXd cy = Eigen::MatrixXd::Zero(b.rows(), y.cols());
    for (int f = 0; f < q; ++f) cy += b * y.middleRows(f * m, m);
    return cy.cwiseAbs().maxCoeff();
  };
  d.annihilation = std::max(annihilate(kernel.y1), annihilate(kernel.y2));

  Eigen::MatrixXd all(q * m, kernel.y1.cols() + kernel.y2.cols());
  all << kernel.y1, kernel.y2;
  if (all.cols() > 0)
    d.orthonormality = (all.transpose() * all - Eigen::MatrixXd::Identity(all.cols(), all.cols())).cwiseAbs().maxCoeff();

  if (kernel.y2.cols() > 0) {
    Eigen::MatrixXd block_sum = Eigen::MatrixXd::Zero(m, kernel.y2.cols());
    for (int f = 0; f < q; ++f) block_sum += kernel.y2.middleRows(f * m, m);
    d.block_sum = block_sum.cwiseAbs().maxCoeff();
  }
  const double expected_mass = 1.0 - 1.0 / q;
  Eigen::VectorXd mass = kernel.y2.rowwise().squaredNorm();
  if (mass.size() == 0) mass = Eigen::VectorXd::Zero(q * m);
  d.coordinate_mass = (mass.array() - expected_mass).abs().maxCoeff();
  return d;
}

namespace {

/// Column i holds v_s/sqrt(d_s) + v_t/sqrt(d_t) for every edge (s, t), i.e.
/// B^T D^{-1/2} applied to eigenvector i.
Eigen::MatrixXd edge_projection(const EigenBasis& basis, const GraphInstance& graph) {
  const auto& v = basis.vectors;
  Eigen::VectorXd inv_sqrt(v.rows());
  for (Eigen::Index i = 0; i < v.rows(); ++i)
    inv_sqrt(i) = 1.0 / std::sqrt(static_cast<double>(graph.degree(static_cast<NodeId>(i))));
  Eigen::MatrixXd w(static_cast<Eigen::Index>(graph.edge_count()), v.cols());
  for (const auto& e : graph.edges())
    w.row(e.id) = inv_sqrt(e.u) * v.row(e.u) + inv_sqrt(e.v) * v.row(e.v);
  return w;
}

bool same_values(const EigenBasis& basis, const SpectrumMultiset& spectrum) {
  std::map<Rational, std::uint64_t> carried;
  for (const auto& value : basis.values) ++carried[value];
  if (carried.size() != spectrum.entries.size()) return false;
  for (const auto& e : spectrum.entries) {
    auto it = carried.find(e.value);
    if (it == carried.end() || it->second != e.multiplicity) return false;
  }
  return true;
}

}  // namespace

EigenBasis lift_eigenvectors(const EigenBasis& basis, const SpectrumMultiset& spectrum,
                             const GraphInstance& graph, const KernelBasis& kernel,
                             const MatrixBundle& next) {
  const int q = graph.params().q;
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  const auto m = static_cast<Eigen::Index>(graph.edge_count());
  const Eigen::Index n_next = n + q * m;
  if (basis.vectors.rows() != n || basis.vectors.cols() != n || basis.params != graph.params())
    throw std::invalid_argument("lift_eigenvectors: basis does not match graph");
  if (spectrum.params != graph.params() || !same_values(basis, spectrum))
    throw std::invalid_argument("lift_eigenvectors: spectrum does not match basis eigenvalues");
  if (next.normalized.rows() != n_next) throw std::invalid_argument("lift_eigenvectors: next-level bundle has wrong size");
  if (kernel.y1.cols() != m - n || kernel.y2.cols() != (q - 1) * m)
    throw std::invalid_argument("lift_eigenvectors: kernel basis has wrong size");

  const Eigen::MatrixXd w = edge_projection(basis, graph);
  EigenBasis out;
  out.params = {q, graph.params().g + 1};
  out.residual_tol = basis.residual_tol;
  out.vectors = Eigen::MatrixXd::Zero(n_next, n_next);
  out.values.reserve(static_cast<std::size_t>(n_next));

  Eigen::Index col = 0;
  for (Eigen::Index i = 0; i < n; ++i, ++col) {
    const Rational& lambda = basis.values[static_cast<std::size_t>(i)];
    const double l = lambda.get_d();
    const double scale = std::sqrt((l + 1.0) / (q + l + 1.0));
    out.vectors.col(col).head(n) = scale * basis.vectors.col(i);
    for (int f = 0; f < q; ++f) out.vectors.col(col).segment(n + f * m, m) = (scale / (l + 1.0)) * w.col(i);
    Rational image = (lambda + q) / (q + 1);
    image.canonicalize();
    out.values.push_back(image);
  }
  const Rational minus = make_rational(-1, q + 1);
  for (Eigen::Index i = 0; i < n; ++i, ++col) {
    const double l = basis.values[static_cast<std::size_t>(i)].get_d();
    const double scale = std::sqrt(q / (q + l + 1.0));
    out.vectors.col(col).head(n) = scale * basis.vectors.col(i);
    for (int f = 0; f < q; ++f) out.vectors.col(col).segment(n + f * m, m) = (-scale / q) * w.col(i);
    out.values.push_back(minus);
  }
  for (Eigen::Index z = 0; z < kernel.y2.cols(); ++z, ++col) {
    out.vectors.col(col).tail(q * m) = kernel.y2.col(z);
    out.values.push_back(minus);
  }
  const Rational upper = make_rational(q - 1, q + 1);
  for (Eigen::Index z = 0; z < kernel.y1.cols(); ++z, ++col) {
    out.vectors.col(col).tail(q * m) = kernel.y1.col(z);
    out.values.push_back(upper);
  }

  const auto defects = eigen_defects(out, next);
  if (defects.residual > out.residual_tol || defects.orthonormality > out.residual_tol)
    throw NumericalError("lifted eigenbasis exceeds tolerance: residual " + std::to_string(defects.residual) +
                         ", orthonormality " + std::to_string(defects.orthonormality));
  return out;
}

EigenBasis recursive_eigenbasis(const GraphParams& params, double residual_tol) {
  params.validate();
  EigenBasis basis = base_eigenbasis(params.q);
  basis.residual_tol = residual_tol;
  GraphInstance graph = build_graph({params.q, 0});
  MatrixBundle bundle = assemble_matrices(graph);
  for (int level = 0; level < params.g; ++level) {
    GraphInstance next_graph = build_graph({params.q, level + 1});
    MatrixBundle next_bundle = assemble_matrices(next_graph);
    const auto kernel = kernel_bases(bundle, graph.params());
    basis = lift_eigenvectors(basis, recursive_spectrum(graph.params()), graph, kernel, next_bundle);
    graph = std::move(next_graph);
    bundle = std::move(next_bundle);
  }
  return basis;
}

double kernel_mass_identity_defect(const EigenBasis& basis, const GraphInstance& graph,
                                   const KernelBasis& kernel) {
  const int q = graph.params().q;
  const auto m = static_cast<Eigen::Index>(graph.edge_count());
  const Eigen::MatrixXd w = edge_projection(basis, graph);

  // Column of the stationary eigenvector, excluded from the sum.
  Eigen::Index top = -1;
  for (std::size_t k = 0; k < basis.values.size(); ++k)
    if (basis.values[k] == 1) top = static_cast<Eigen::Index>(k);
  if (top < 0) throw std::invalid_argument("kernel_mass_identity_defect: eigenvalue 1 missing");

  Eigen::VectorXd weight(w.cols());
  for (Eigen::Index k = 0; k < w.cols(); ++k)
    weight(k) = k == top ? 0.0 : 1.0 / ((1.0 + basis.values[static_cast<std::size_t>(k)].get_d()) * q);
  Eigen::VectorXd rhs_sum = w.array().square().matrix() * weight;  // per edge

  double worst = 0.0;
  for (int f = 0; f < q; ++f) {
    for (Eigen::Index k = 0; k < m; ++k) {
      const Eigen::Index j = f * m + k;
      double lhs = 0.0;
      if (kernel.y1.cols() > 0) lhs += kernel.y1.row(j).squaredNorm();
      if (kernel.y2.cols() > 0) lhs += kernel.y2.row(j).squaredNorm();
      const double rhs = 1.0 - 1.0 / (static_cast<double>(q) * static_cast<double>(m)) - rhs_sum(k);
      worst = std::max(worst, std::abs(lhs - rhs));
    }
  }
  return worst;
}

}  // namespace ecw
