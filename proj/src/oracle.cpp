#include "ecw/oracle.hpp"

#include "ecw/errors.hpp"
#include "ecw/kernels.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <ostream>
#include <stdexcept>

namespace ecw {

StationaryDistribution stationary(const GraphInstance& graph) {
  StationaryDistribution dist;
  const Integer two_m(static_cast<unsigned long>(2 * graph.edge_count()));
  dist.pi.reserve(graph.node_count());
  for (const auto& node : graph.nodes()) {
    Rational p(Integer(static_cast<unsigned long>(node.degree)), two_m);
    p.canonicalize();
    dist.pi.push_back(std::move(p));
  }
  return dist;
}

bool is_stationary(const GraphInstance& graph, const StationaryDistribution& dist) {
  if (dist.pi.size() != graph.node_count()) return false;
  Rational total = 0;
  for (const auto& p : dist.pi) total += p;
  if (total != 1) return false;
  // (pi^T D^{-1} A)_j = sum_{i ~ j} pi_i / d_i
  std::vector<Rational> image(graph.node_count(), 0);
  for (const auto& e : graph.edges()) {
    image[e.v] += dist.pi[e.u] / Rational(Integer(static_cast<unsigned long>(graph.degree(e.u))));
    image[e.u] += dist.pi[e.v] / Rational(Integer(static_cast<unsigned long>(graph.degree(e.v))));
  }
  for (std::size_t j = 0; j < image.size(); ++j)
    if (image[j] != dist.pi[j]) return false;
  return true;
}

ExactHittingTable oracle_hitting_table_exact(const GraphInstance& graph, Execution exec, std::size_t cap) {
  if (graph.node_count() > cap) throw ResourceLimitError("exact oracle cap exceeded", graph.node_count(), cap);
  return exec == Execution::serial ? kernels::oracle_table_exact_serial(graph)
                                   : kernels::oracle_table_exact_parallel(graph);
}

FloatHittingTable oracle_hitting_table_float(const GraphInstance& graph, Execution exec, std::size_t cap) {
  if (graph.node_count() > cap) throw ResourceLimitError("float oracle cap exceeded", graph.node_count(), cap);
  return exec == Execution::serial ? kernels::oracle_table_float_serial(graph)
                                   : kernels::oracle_table_float_parallel(graph);
}

DenseEigenpairs dense_eigenpairs(const MatrixBundle& bundle) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(bundle.normalized);
  if (solver.info() != Eigen::Success) throw NumericalError("dense eigensolve did not converge");
  const auto n = bundle.normalized.rows();
  DenseEigenpairs out;
  out.vectors.resize(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    out.values.push_back(solver.eigenvalues()(n - 1 - k));
    out.vectors.col(k) = solver.eigenvectors().col(n - 1 - k);
  }
  return out;
}

namespace {

Eigen::Index unit_column(std::span<const double> values) {
  Eigen::Index found = -1;
  int count = 0;
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (std::abs(values[k] - 1.0) <= 1e-9) {
      found = static_cast<Eigen::Index>(k);
      ++count;
    }
  }
  if (count != 1)
    throw std::invalid_argument("eigenvalue 1 must occur exactly once, found " + std::to_string(count));
  return found;
}

std::vector<double> to_doubles(const std::vector<Rational>& values) {
  std::vector<double> out;
  out.reserve(values.size());
  for (const auto& v : values) out.push_back(v.get_d());
  return out;
}

}  // namespace

double spectral_hitting(const GraphInstance& graph, const Eigen::MatrixXd& vectors, std::span<const double> values,
                        NodeId i, NodeId j) {
  const auto n = graph.node_count();
  if (i >= n || j >= n) throw std::out_of_range("spectral_hitting: node id out of range");
  if (static_cast<std::size_t>(vectors.rows()) != n || values.size() != static_cast<std::size_t>(vectors.cols()))
    throw std::invalid_argument("spectral_hitting: dimension mismatch");
  const Eigen::Index top = unit_column(values);
  if (i == j) return 0.0;
  const double di = static_cast<double>(graph.degree(i));
  const double dj = static_cast<double>(graph.degree(j));
  double sum = 0.0;
  for (Eigen::Index k = 0; k < vectors.cols(); ++k) {
    if (k == top) continue;
    const double vi = vectors(i, k), vj = vectors(j, k);
    sum += (vj * vj / dj - vi * vj / std::sqrt(di * dj)) / (1.0 - values[static_cast<std::size_t>(k)]);
  }
  return 2.0 * static_cast<double>(graph.edge_count()) * sum;
}

double spectral_hitting(const GraphInstance& graph, const EigenBasis& basis, NodeId i, NodeId j) {
  const auto values = to_doubles(basis.values);
  return spectral_hitting(graph, basis.vectors, values, i, j);
}

FloatHittingTable spectral_hitting_table(const GraphInstance& graph, const Eigen::MatrixXd& vectors,
                                         std::span<const double> values) {
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  if (vectors.rows() != n || static_cast<Eigen::Index>(values.size()) != vectors.cols())
    throw std::invalid_argument("spectral_hitting_table: dimension mismatch");
  const Eigen::Index top = unit_column(values);
  Eigen::VectorXd inv_sqrt(n);
  for (Eigen::Index i = 0; i < n; ++i) inv_sqrt(i) = 1.0 / std::sqrt(static_cast<double>(graph.degree(static_cast<NodeId>(i))));
  Eigen::VectorXd weight(vectors.cols());
  for (Eigen::Index k = 0; k < weight.size(); ++k)
    weight(k) = k == top ? 0.0 : 1.0 / (1.0 - values[static_cast<std::size_t>(k)]);
  const Eigen::MatrixXd u = inv_sqrt.asDiagonal() * vectors;
  const Eigen::MatrixXd green = u * weight.asDiagonal() * u.transpose();
  const double two_m = 2.0 * static_cast<double>(graph.edge_count());

  FloatHittingTable table(graph.params(), static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j) table(i, j) = i == j ? 0.0 : two_m * (green(j, j) - green(i, j));
  return table;
}

double kemeny_oracle(const GraphInstance& graph) {
  const auto values = dense_spectrum(assemble_matrices(graph).normalized);
  const Eigen::Index top = unit_column(values);
  double k = 0.0;
  for (std::size_t i = 0; i < values.size(); ++i)
    if (static_cast<Eigen::Index>(i) != top) k += 1.0 / (1.0 - values[i]);
  return k;
}

namespace {

double as_double(const CheckValue& v) {
  return std::visit(
      [](const auto& x) -> double {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Rational>)
          return x.get_d();
        else
          return x;
      },
      v);
}

}  // namespace

Check make_check(std::string name, CheckValue expected, CheckValue actual, double abs_tol, double rel_tol) {
  Check c{std::move(name), std::move(expected), std::move(actual), abs_tol, rel_tol, false};
  if (std::holds_alternative<Rational>(c.expected) && std::holds_alternative<Rational>(c.actual) && abs_tol == 0.0 &&
      rel_tol == 0.0) {
    c.pass = std::get<Rational>(c.expected) == std::get<Rational>(c.actual);
  } else {
    const double e = as_double(c.expected), a = as_double(c.actual);
    c.pass = std::isfinite(a) && std::abs(a - e) <= abs_tol + rel_tol * std::abs(e);
  }
  return c;
}

bool VerificationReport::overall() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

Check foster_check(const GraphInstance& graph, const ExactHittingTable& table) {
  Rational sum = 0;
  for (const auto& e : graph.edges()) sum += table(e.u, e.v) + table(e.v, e.u);
  const Integer m(static_cast<unsigned long>(graph.edge_count()));
  const Integer n(static_cast<unsigned long>(graph.node_count()));
  return make_check("foster commute sum", Rational(2 * m * (n - 1)), sum);
}

Check foster_check(const GraphInstance& graph, const FloatHittingTable& table, double rel_tol) {
  double sum = 0.0;
  for (const auto& e : graph.edges()) sum += table(e.u, e.v) + table(e.v, e.u);
  const double expected = 2.0 * static_cast<double>(graph.edge_count()) * (static_cast<double>(graph.node_count()) - 1);
  return make_check("foster commute sum (float)", expected, sum, 0.0, rel_tol);
}

std::string to_string(const CheckValue& value) {
  return std::visit(
      [](const auto& x) -> std::string {
        if constexpr (std::is_same_v<std::decay_t<decltype(x)>, Rational>)
          return ecw::to_string(x);
        else
          return format_double(x);
      },
      value);
}

std::string report_to_json(const VerificationReport& report, int indent) {
  nlohmann::ordered_json doc;
  auto checks = nlohmann::ordered_json::array();
  for (const auto& c : report.checks) {
    nlohmann::ordered_json item;
    item["name"] = c.name;
    auto encode = [](const CheckValue& v) -> nlohmann::ordered_json {
      if (std::holds_alternative<Rational>(v)) return to_string(v);
      const double d = std::get<double>(v);
      if (!std::isfinite(d)) return format_double(d);
      return d;
    };
    item["expected"] = encode(c.expected);
    item["actual"] = encode(c.actual);
    item["abs_tol"] = c.abs_tol;
    item["rel_tol"] = c.rel_tol;
    item["pass"] = c.pass;
    checks.push_back(std::move(item));
  }
  doc["checks"] = std::move(checks);
  doc["overall"] = report.overall();
  return doc.dump(indent);
}

void print_report(std::ostream& out, const VerificationReport& report) {
  std::size_t width = 5;
  for (const auto& c : report.checks) width = std::max(width, c.name.size());
  for (const auto& c : report.checks) {
    out << (c.pass ? "PASS  " : "FAIL  ") << std::left << std::setw(static_cast<int>(width)) << c.name
        << "  expected " << to_string(c.expected) << "  actual " << to_string(c.actual);
    if (c.abs_tol > 0.0 || c.rel_tol > 0.0)
      out << "  (abs " << format_double(c.abs_tol) << ", rel " << format_double(c.rel_tol) << ")";
    out << '\n';
  }
  std::size_t passed = 0;
  for (const auto& c : report.checks) passed += c.pass ? 1 : 0;
  out << (report.overall() ? "OK" : "FAILED") << ": " << passed << "/" << report.checks.size() << " checks passed\n";
}

}  // namespace ecw
