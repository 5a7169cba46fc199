#ifndef ECW_SPECTRAL_HPP
#define ECW_SPECTRAL_HPP

#include "ecw/graph.hpp"
#include "ecw/rational.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace ecw {

struct SpectrumEntry {
  Rational value;
  std::uint64_t multiplicity = 0;
};

/// Exact eigenvalue multiset of the normalized adjacency matrix P_g, entries
/// sorted by decreasing value with distinct values.
struct SpectrumMultiset {
  GraphParams params;
  std::vector<SpectrumEntry> entries;

  int level() const noexcept { return params.g; }
  std::uint64_t total_multiplicity() const;
  /// Sum of value * multiplicity (the trace of P_g).
  Rational trace() const;
  /// Values repeated by multiplicity, decreasing.
  std::vector<double> expanded() const;
};

/// Eigenvalues of P_g from the recursion
///   lambda -> (lambda + q) / (q + 1),
///   -1/(q+1) with multiplicity (q-1) M_g + N_g,
///   (q-1)/(q+1) with multiplicity M_g - N_g,
/// starting from K_{q+2}: {1, -1/(q+1) x (q+1)}.
SpectrumMultiset recursive_spectrum(const GraphParams& params);

/// Eigenvalues of a dense symmetric matrix, decreasing.
std::vector<double> dense_spectrum(const Eigen::MatrixXd& symmetric);

/// Largest |recursive - dense| after sorting both; +inf if the total
/// multiplicities differ.
double spectrum_deviation(const SpectrumMultiset& exact, const std::vector<double>& dense);

/// "value_num,value_den,multiplicity" with a header row.
void write_spectrum_csv(std::ostream& out, const SpectrumMultiset& spectrum);

/// Orthonormal eigenvectors (columns) of P_g with the exact eigenvalue of
/// each column. Column 0 is the stationary direction sqrt(d_i / 2M).
struct EigenBasis {
  GraphParams params;
  std::vector<Rational> values;
  Eigen::MatrixXd vectors;
  double residual_tol = 1e-9;
};

struct EigenDefects {
  double residual = 0.0;        // max_k ||P v_k - lambda_k v_k||_inf
  double orthonormality = 0.0;  // ||V^T V - I||_max
  double stationary = 0.0;      // ||v_1 - sqrt(d / 2M)||_inf, sign-adjusted
};

EigenDefects eigen_defects(const EigenBasis& basis, const MatrixBundle& bundle);

/// Dense eigenbasis of G_q(0) = K_{q+2}, with exact eigenvalues attached.
EigenBasis base_eigenbasis(int q);

/// Kernel bases of C_g = [B_g ... B_g] (q copies).
///
/// X: orthonormal basis of ker B_g (M_g x (M_g - N_g)), from the SVD with
/// cutoff 1e-10 * sigma_max. Y1: each X column stacked q times over sqrt(q).
/// Y2: for every edge i and k = 1..q-1 the staircase vector with blocks
/// 1..k equal to e_i / sqrt(k(k+1)) and block k+1 equal to
/// -sqrt(k/(k+1)) e_i. Y1 and Y2 are (q M_g)-row column matrices.
struct KernelBasis {
  Eigen::MatrixXd x;
  Eigen::MatrixXd y1;
  Eigen::MatrixXd y2;
};

/// Throws NumericalError if the detected nullspace dimension is not M_g - N_g.
KernelBasis kernel_bases(const MatrixBundle& bundle, const GraphParams& params);

struct KernelDefects {
  double annihilation = 0.0;    // max ||C_g y||_inf over Y1 and Y2
  double orthonormality = 0.0;  // ||[Y1 Y2]^T [Y1 Y2] - I||_max
  double block_sum = 0.0;       // max over Y2 of ||sum of q blocks||_inf
  double coordinate_mass = 0.0; // max_j |sum_{Y2} y_j^2 - (1 - 1/q)|
};

KernelDefects kernel_defects(const KernelBasis& kernel, const MatrixBundle& bundle, int q);

/// Lifts a level-g eigenbasis to level g + 1: N_g lifts for (lambda + q)/(q+1),
/// N_g lifts for -1/(q+1), the zero-padded Y2 vectors for -1/(q+1) and the
/// zero-padded Y1 vectors for (q-1)/(q+1), in that column order. The new-node
/// entries are built per creating edge (s, t) from v_s/sqrt(d_s) + v_t/sqrt(d_t).
///
/// `graph` is the level-g graph, `next` the bundle of level g + 1, used to
/// check residuals. Throws NumericalError if a residual or the
/// orthonormality defect exceeds basis.residual_tol, and std::invalid_argument
/// if `spectrum` does not match the eigenvalues carried by `basis`.
EigenBasis lift_eigenvectors(const EigenBasis& basis, const SpectrumMultiset& spectrum,
                             const GraphInstance& graph, const KernelBasis& kernel,
                             const MatrixBundle& next);

/// Base basis lifted g times.
EigenBasis recursive_eigenbasis(const GraphParams& params, double residual_tol = 1e-9);

/// Largest deviation, over new nodes j of level g + 1 with parent edge (s, t),
/// between sum_z Y_zj^2 over the whole kernel basis and
///   1 - 1/(q M_g) - sum_{k>=2} (v_ks/sqrt(d_s) + v_kt/sqrt(d_t))^2 / ((1 + lambda_k) q).
/// `basis` and `graph` are at level g.
double kernel_mass_identity_defect(const EigenBasis& basis, const GraphInstance& graph,
                                   const KernelBasis& kernel);

}  // namespace ecw

#endif  // ECW_SPECTRAL_HPP
