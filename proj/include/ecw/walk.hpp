#ifndef ECW_WALK_HPP
#define ECW_WALK_HPP

#include "ecw/graph.hpp"
#include "ecw/rational.hpp"
#include "ecw/spectral.hpp"

#include <cstddef>
#include <iosfwd>
#include <vector>

namespace ecw {

enum class Execution { serial, parallel };

/// Dense N x N table of hitting times, T(i, j) = expected steps from i to j.
template <typename Scalar>
struct BasicHittingTable {
  GraphParams params;
  std::size_t size = 0;
  std::vector<Scalar> values;  // row-major

  BasicHittingTable() = default;
  BasicHittingTable(GraphParams p, std::size_t n) : params(p), size(n), values(n * n) {}

  Scalar& operator()(std::size_t i, std::size_t j) { return values[i * size + j]; }
  const Scalar& operator()(std::size_t i, std::size_t j) const { return values[i * size + j]; }
};

using ExactHittingTable = BasicHittingTable<Rational>;
using FloatHittingTable = BasicHittingTable<double>;

inline constexpr std::size_t kDefaultExactTableCap = 2000;
inline constexpr std::size_t kDefaultFloatTableCap = 10000;

/// Hitting times of G_q(g) built level by level from K_{q+2} (T = q + 1 off
/// the diagonal). At each step, with Gamma(x) the parent edge of a new node:
///   old -> old:   (q+1) T(i, j)
///   new -> old:   (q+1)/2 + (q+1)/2 (T(s, j) + T(t, j))
///   old -> new:   3(q+1)/2 M - (q+1)/2 + (q+1)/4 (2 (T(i, s) + T(i, t)) - T(s, t) - T(t, s))
///   siblings:     (q+1) M
///   other new:    3(q+1)/2 M + (q+1)/4 (T(s,u) + T(t,u) + T(s,v) + T(t,v) - T(u,v) - T(v,u))
/// where M is the edge count of the previous level. Throws ResourceLimitError
/// if N_g exceeds `cap`.
ExactHittingTable hitting_table_exact(const GraphParams& params, Execution exec = Execution::parallel,
                                      std::size_t cap = kDefaultExactTableCap);
FloatHittingTable hitting_table_float(const GraphParams& params, Execution exec = Execution::parallel,
                                      std::size_t cap = kDefaultFloatTableCap);

/// One table entry without materializing the table: memoized descent over
/// the ancestor pairs. Returns 0 when i == j; throws std::out_of_range for
/// ids outside the graph.
Rational hitting_pair(const GraphInstance& graph, NodeId i, NodeId j);
Rational hitting_pair(const GraphParams& params, NodeId i, NodeId j, std::size_t node_cap = kDefaultNodeCap);

void write_table_csv(std::ostream& out, const ExactHittingTable& table);
void write_table_csv(std::ostream& out, const FloatHittingTable& table);

/// Kemeny's constant from its three-term closed form.
Rational kemeny_closed(const GraphParams& params);

/// K_{g+1} = (q+1) K_g + 3q(q+1)/(2(q+2)) M_g - q(q+1)/(2(q+2)) N_g, K_0 = (q+1)^2/(q+2).
Rational kemeny_recursive(const GraphParams& params);

/// Sum over eigenvalues lambda != 1 of multiplicity / (1 - lambda). Throws
/// std::invalid_argument unless 1 occurs exactly once.
Rational kemeny_from_spectrum(const SpectrumMultiset& spectrum);

/// H_g: sum of T_ij over ordered pairs, closed form.
Rational sum_hitting(const GraphParams& params);
/// H+_g: sum of (d_i + d_j) T_ij, closed form.
Rational sum_additive(const GraphParams& params);
/// H*_g: sum of d_i d_j T_ij, closed form.
Rational sum_multiplicative(const GraphParams& params);

/// H_g / (N_g (N_g - 1)).
Rational mean_hitting(const GraphParams& params);
/// The same value through the factored form with the prefactor
/// (q+3)^2 / ((q+1)^2 (q+2)^2 (a^g + 2/(q+1)) (a^g + 1/(q+2))), a = (q+1)(q+2)/2.
Rational mean_hitting_composite(const GraphParams& params);

struct AggregateSums {
  Rational hitting;         // H
  Rational additive;        // H+
  Rational multiplicative;  // H*
};

/// H, H+ and H* by iterating the level recursions from H_0 = (q+2)(q+1)^2 and
/// H+_0 = 2(q+2)(q+1)^3, with H*_g = 4 M_g^2 K_g and K_g from kemeny_recursive.
AggregateSums sums_by_recursion(const GraphParams& params);

struct AnalyticsResult {
  Rational kemeny;
  Rational hitting;
  Rational additive;
  Rational multiplicative;
  Rational mean_hitting;
};

AnalyticsResult analytics(const GraphParams& params);

struct AsymptoticCoefficients {
  Rational kemeny_ratio;    // lim K_g / N_g = (3q+7) / (2(q+2))
  Rational mean_hit_ratio;  // lim <H_g> / N_g = (q+3)(q+4)(3q+7) / (2(q+2)(q^2+5q+8))
};

AsymptoticCoefficients asymptotic_coefficients(int q);

// Quantities read off a table.

AggregateSums table_sums(const ExactHittingTable& table, const GraphInstance& graph);

/// sum_j pi_j T(start, j).
Rational kemeny_from_table(const ExactHittingTable& table, const GraphInstance& graph, NodeId start);

/// Commute-time sums across the newest level of a graph with g >= 1.
struct CrossSums {
  Rational new_old;                 // sum_{i new, j old} C_ij
  Rational new_new;                 // sum_{i, j new} C_ij
  Rational parent_weighted;         // sum_{i new} C_{Gamma(i), V_old}
  Rational degree_weighted;         // sum_{x old} q d_x(g) C_{x, V_old}
};

CrossSums cross_sums(const ExactHittingTable& table, const GraphInstance& graph);

/// Predicted new_old and new_new at level g + 1 from level-g closed forms:
///   q(q+1)/2 H+_g + q(q+1)/2 M_g (3 M_g N_g - N_g^2 + N_g)
///   q^2(q+1)/2 H*_g + q(q+1) M_g^2 (3q M_g - q N_g - 2)
Rational predicted_new_old_commute(const GraphParams& previous);
Rational predicted_new_new_commute(const GraphParams& previous);

}  // namespace ecw

#endif  // ECW_WALK_HPP
