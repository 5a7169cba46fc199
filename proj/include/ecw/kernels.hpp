#ifndef ECW_KERNELS_HPP
#define ECW_KERNELS_HPP

// Data-parallel inner loops. Each kernel has a serial reference and an
// OpenMP version; both fill every cell from the same inputs with the same
// arithmetic, so their results are identical.

#include "ecw/graph.hpp"
#include "ecw/walk.hpp"

#include <Eigen/Dense>

namespace ecw::kernels {

/// Extends a level-l table to level l + 1 of `graph` (which must have g > l).
template <typename Scalar>
BasicHittingTable<Scalar> lift_table_serial(const BasicHittingTable<Scalar>& previous, const GraphInstance& graph);
template <typename Scalar>
BasicHittingTable<Scalar> lift_table_parallel(const BasicHittingTable<Scalar>& previous, const GraphInstance& graph);

/// Hitting times to `target` from every node by fraction-free elimination of
/// the first-step system d_i h_i - sum_{k ~ i, k != target} h_k = d_i.
std::vector<Rational> first_step_solve_exact(const std::vector<std::vector<NodeId>>& adjacency, NodeId target);

ExactHittingTable oracle_table_exact_serial(const GraphInstance& graph);
ExactHittingTable oracle_table_exact_parallel(const GraphInstance& graph);

/// Table from the inverse X of the Laplacian grounded at node 0:
/// T_ij = u_i - u_j + 2M (X_jj - X_ij), u = X d.
FloatHittingTable oracle_table_float_serial(const GraphInstance& graph);
FloatHittingTable oracle_table_float_parallel(const GraphInstance& graph);

}  // namespace ecw::kernels

#endif  // ECW_KERNELS_HPP
