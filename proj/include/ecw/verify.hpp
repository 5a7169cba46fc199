#ifndef ECW_VERIFY_HPP
#define ECW_VERIFY_HPP

#include "ecw/graph.hpp"
#include "ecw/oracle.hpp"
#include "ecw/walk.hpp"

#include <optional>
#include <utility>

namespace ecw {

struct VerifyOptions {
  std::size_t node_cap = kDefaultNodeCap;
  /// Largest N for which the recursion table is compared with the exact
  /// oracle; above it the double-precision oracle is used.
  std::size_t exact_oracle_limit = 100;
  /// Largest N for dense eigensolves and eigenvector lifting.
  std::size_t dense_limit = 2000;
  double float_rel_tol = 1e-8;
  double spectrum_tol = 1e-9;
  double eigen_tol = 1e-9;
  double spectral_hitting_rel_tol = 1e-6;
  Execution execution = Execution::parallel;
  /// Test hook: adds 1 to this entry of the recursion table before any check
  /// reads it.
  std::optional<std::pair<NodeId, NodeId>> corrupt_entry;
};

/// Cross-checks every closed form and recursion at (q, g) against the
/// brute-force oracle and the structural identities. Throws
/// ResourceLimitError if the graph or hitting table exceeds its cap.
VerificationReport verify(const GraphParams& params, const VerifyOptions& options = {});

}  // namespace ecw

#endif  // ECW_VERIFY_HPP
