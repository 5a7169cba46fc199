#ifndef ECW_ORACLE_HPP
#define ECW_ORACLE_HPP

// Brute-force linear algebra on an arbitrary GraphInstance. Nothing here uses
// the recursive structure of the family.

#include "ecw/graph.hpp"
#include "ecw/rational.hpp"
#include "ecw/walk.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <span>
#include <string>
#include <variant>
#include <vector>

namespace ecw {

struct StationaryDistribution {
  std::vector<Rational> pi;  // d_i / 2M
};

StationaryDistribution stationary(const GraphInstance& graph);

/// True iff sum(pi) == 1 and pi^T D^{-1} A == pi^T, exactly.
bool is_stationary(const GraphInstance& graph, const StationaryDistribution& dist);

inline constexpr std::size_t kExactOracleCap = 400;
inline constexpr std::size_t kFloatOracleCap = 5000;

/// Solves the first-step system (I - Q_j) h = 1 for every target j with
/// fraction-free elimination. Throws ResourceLimitError above `cap` nodes.
ExactHittingTable oracle_hitting_table_exact(const GraphInstance& graph, Execution exec = Execution::parallel,
                                             std::size_t cap = kExactOracleCap);

/// Dense double-precision table from a single Cholesky factorization of the
/// grounded Laplacian.
FloatHittingTable oracle_hitting_table_float(const GraphInstance& graph, Execution exec = Execution::parallel,
                                             std::size_t cap = kFloatOracleCap);

/// Dense eigenpairs of P, decreasing eigenvalues.
struct DenseEigenpairs {
  std::vector<double> values;
  Eigen::MatrixXd vectors;
};

DenseEigenpairs dense_eigenpairs(const MatrixBundle& bundle);

/// T_ij = 2M sum_{k>=2} (v_kj^2 / d_j - v_ki v_kj / sqrt(d_i d_j)) / (1 - lambda_k).
/// The eigenvalue-1 column is the one whose eigenvalue lies within 1e-9 of 1;
/// throws std::invalid_argument if there is not exactly one.
double spectral_hitting(const GraphInstance& graph, const Eigen::MatrixXd& vectors, std::span<const double> values,
                        NodeId i, NodeId j);
double spectral_hitting(const GraphInstance& graph, const EigenBasis& basis, NodeId i, NodeId j);

/// Full table via the spectral formula, as one matrix expression.
FloatHittingTable spectral_hitting_table(const GraphInstance& graph, const Eigen::MatrixXd& vectors,
                                         std::span<const double> values);

/// sum_{k>=2} 1 / (1 - lambda_k) from a dense eigensolve of P.
double kemeny_oracle(const GraphInstance& graph);

using CheckValue = std::variant<Rational, double>;

struct Check {
  std::string name;
  CheckValue expected;
  CheckValue actual;
  double abs_tol = 0.0;
  double rel_tol = 0.0;
  bool pass = false;
};

/// Builds a check. Two rationals pass only when equal; otherwise both sides
/// are compared as doubles with |a - e| <= abs_tol + rel_tol |e|.
Check make_check(std::string name, CheckValue expected, CheckValue actual, double abs_tol = 0.0, double rel_tol = 0.0);

struct VerificationReport {
  std::vector<Check> checks;

  void add(Check check) { checks.push_back(std::move(check)); }
  bool overall() const;
};

/// Sum over edges of T_ij + T_ji against 2M(N - 1).
Check foster_check(const GraphInstance& graph, const ExactHittingTable& table);
Check foster_check(const GraphInstance& graph, const FloatHittingTable& table, double rel_tol = 1e-9);

std::string to_string(const CheckValue& value);
std::string report_to_json(const VerificationReport& report, int indent = 2);
void print_report(std::ostream& out, const VerificationReport& report);

}  // namespace ecw

#endif  // ECW_ORACLE_HPP
