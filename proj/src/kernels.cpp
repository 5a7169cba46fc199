#include "ecw/kernels.hpp"

#include "ecw/errors.hpp"

#include <omp.h>

#include <stdexcept>

namespace ecw::kernels {

namespace {

template <typename Scalar>
Scalar constant(long num, long den) {
  if constexpr (std::is_same_v<Scalar, Rational>)
    return make_rational(num, den);
  else
    return static_cast<double>(num) / static_cast<double>(den);
}

template <typename Scalar>
struct LiftStep {
  const BasicHittingTable<Scalar>& prev;
  const GraphInstance& graph;
  std::size_t old_nodes;
  std::size_t old_edges;
  std::size_t new_nodes;
  Scalar scale;         // q + 1
  Scalar half;          // (q + 1) / 2
  Scalar quarter;       // (q + 1) / 4
  Scalar into_new;      // 3(q+1)/2 M - (q+1)/2
  Scalar between_new;   // 3(q+1)/2 M
  Scalar siblings;      // (q+1) M

  LiftStep(const BasicHittingTable<Scalar>& p, const GraphInstance& g)
      : prev(p), graph(g) {
    const int level = prev.params.g;
    if (prev.params.q != graph.params().q || level >= graph.params().g)
      throw std::invalid_argument("lift_table: graph does not extend the table's level");
    old_nodes = graph.node_count_at(level);
    old_edges = graph.edge_count_at(level);
    new_nodes = graph.node_count_at(level + 1);
    if (prev.size != old_nodes) throw std::invalid_argument("lift_table: table size mismatch");
    const long q1 = graph.params().q + 1;
    const long m = static_cast<long>(old_edges);
    scale = constant<Scalar>(q1, 1);
    half = constant<Scalar>(q1, 2);
    quarter = constant<Scalar>(q1, 4);
    into_new = constant<Scalar>(3 * q1 * m - q1, 2);
    between_new = constant<Scalar>(3 * q1 * m, 2);
    siblings = constant<Scalar>(q1 * m, 1);
  }

  void fill_row(BasicHittingTable<Scalar>& out, std::size_t i) const {
    const bool i_old = i < old_nodes;
    NodeId s = 0, t = 0;
    if (!i_old) std::tie(s, t) = *graph.nodes()[i].parent;
    for (std::size_t j = 0; j < new_nodes; ++j) {
      Scalar& cell = out(i, j);
      if (i == j) {
        cell = 0;
        continue;
      }
      const bool j_old = j < old_nodes;
      if (i_old && j_old) {
        cell = scale * prev(i, j);
      } else if (!i_old && j_old) {
        cell = half + half * (prev(s, j) + prev(t, j));
      } else if (i_old) {
        const auto [a, b] = *graph.nodes()[j].parent;
        cell = into_new + quarter * (2 * (prev(i, a) + prev(i, b)) - prev(b, a) - prev(a, b));
      } else if ((i - old_nodes) % old_edges == (j - old_nodes) % old_edges) {
        cell = siblings;
      } else {
        const auto [u, v] = *graph.nodes()[j].parent;
        cell = between_new +
               quarter * (prev(s, u) + prev(t, u) + prev(s, v) + prev(t, v) - prev(u, v) - prev(v, u));
      }
    }
  }
};

template <typename Scalar>
BasicHittingTable<Scalar> make_lifted(const LiftStep<Scalar>& step) {
  return BasicHittingTable<Scalar>({step.graph.params().q, step.prev.params.g + 1}, step.new_nodes);
}

}  // namespace

template <typename Scalar>
BasicHittingTable<Scalar> lift_table_serial(const BasicHittingTable<Scalar>& previous, const GraphInstance& graph) {
  LiftStep<Scalar> step(previous, graph);
  auto out = make_lifted(step);
  for (std::size_t i = 0; i < step.new_nodes; ++i) step.fill_row(out, i);
  return out;
}

template <typename Scalar>
BasicHittingTable<Scalar> lift_table_parallel(const BasicHittingTable<Scalar>& previous, const GraphInstance& graph) {
  LiftStep<Scalar> step(previous, graph);
  auto out = make_lifted(step);
  const auto rows = static_cast<long>(step.new_nodes);
#pragma omp parallel for schedule(dynamic, 8)
  for (long i = 0; i < rows; ++i) step.fill_row(out, static_cast<std::size_t>(i));
  return out;
}

template ExactHittingTable lift_table_serial(const ExactHittingTable&, const GraphInstance&);
template FloatHittingTable lift_table_serial(const FloatHittingTable&, const GraphInstance&);
template ExactHittingTable lift_table_parallel(const ExactHittingTable&, const GraphInstance&);
template FloatHittingTable lift_table_parallel(const FloatHittingTable&, const GraphInstance&);

std::vector<Rational> first_step_solve_exact(const std::vector<std::vector<NodeId>>& adjacency, NodeId target) {
  const std::size_t n = adjacency.size();
  if (target >= n) throw std::out_of_range("first_step_solve_exact: target out of range");
  if (n == 1) return {Rational(0)};

  // Unknowns are the nodes other than `target`, in order.
  auto index = [target](std::size_t node) { return node < target ? node : node - 1; };
  const std::size_t dim = n - 1;
  std::vector<Integer> a(dim * (dim + 1), 0);  // augmented, row-major
  auto at = [&](std::size_t r, std::size_t c) -> Integer& { return a[r * (dim + 1) + c]; };
  for (std::size_t node = 0; node < n; ++node) {
    if (node == target) continue;
    const std::size_t r = index(node);
    const long degree = static_cast<long>(adjacency[node].size());
    at(r, r) = degree;
    for (NodeId k : adjacency[node])
      if (k != target) at(r, index(k)) -= 1;
    at(r, dim) = degree;
  }

  // Bareiss elimination. The matrix is a reduced graph Laplacian, positive
  // definite for a connected graph, so every leading pivot is nonzero.
  Integer previous = 1;
  for (std::size_t p = 0; p < dim; ++p) {
    if (at(p, p) == 0) throw NumericalError("first-step system is singular");
    for (std::size_t r = p + 1; r < dim; ++r) {
      const Integer factor = at(r, p);
      for (std::size_t c = p + 1; c <= dim; ++c) {
        Integer v = at(r, c) * at(p, p) - factor * at(p, c);
        mpz_divexact(v.get_mpz_t(), v.get_mpz_t(), previous.get_mpz_t());
        at(r, c) = std::move(v);
      }
      at(r, p) = 0;
    }
    previous = at(p, p);
  }

  std::vector<Rational> h(dim);
  for (std::size_t r = dim; r-- > 0;) {
    Rational acc = Rational(at(r, dim));
    for (std::size_t c = r + 1; c < dim; ++c) acc -= Rational(at(r, c)) * h[c];
    acc /= Rational(at(r, r));
    acc.canonicalize();
    h[r] = std::move(acc);
  }

  std::vector<Rational> out(n);
  for (std::size_t node = 0; node < n; ++node) out[node] = node == target ? Rational(0) : h[index(node)];
  return out;
}

namespace {

void store_column(ExactHittingTable& table, NodeId target, const std::vector<Rational>& column) {
  for (std::size_t i = 0; i < table.size; ++i) table(i, target) = column[i];
}

}  // namespace

ExactHittingTable oracle_table_exact_serial(const GraphInstance& graph) {
  const auto adjacency = graph.adjacency_lists();
  ExactHittingTable table(graph.params(), graph.node_count());
  for (std::size_t j = 0; j < table.size; ++j)
    store_column(table, static_cast<NodeId>(j), first_step_solve_exact(adjacency, static_cast<NodeId>(j)));
  return table;
}

ExactHittingTable oracle_table_exact_parallel(const GraphInstance& graph) {
  const auto adjacency = graph.adjacency_lists();
  ExactHittingTable table(graph.params(), graph.node_count());
  const auto n = static_cast<long>(table.size);
#pragma omp parallel for schedule(dynamic, 1)
  for (long j = 0; j < n; ++j)
    store_column(table, static_cast<NodeId>(j), first_step_solve_exact(adjacency, static_cast<NodeId>(j)));
  return table;
}

namespace {

Eigen::MatrixXd grounded_inverse(const GraphInstance& graph) {
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : graph.edges()) {
    lap(e.u, e.v) -= 1.0;
    lap(e.v, e.u) -= 1.0;
    lap(e.u, e.u) += 1.0;
    lap(e.v, e.v) += 1.0;
  }
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(n, n);
  if (n == 1) return x;
  Eigen::LLT<Eigen::MatrixXd> llt(lap.bottomRightCorner(n - 1, n - 1));
  if (llt.info() != Eigen::Success) throw NumericalError("grounded Laplacian is not positive definite");
  x.bottomRightCorner(n - 1, n - 1) = llt.solve(Eigen::MatrixXd::Identity(n - 1, n - 1));
  return x;
}

template <bool Parallel>
FloatHittingTable oracle_table_float_impl(const GraphInstance& graph) {
  const Eigen::MatrixXd x = grounded_inverse(graph);
  const auto n = static_cast<long>(graph.node_count());
  Eigen::VectorXd d(n);
  for (long i = 0; i < n; ++i) d(i) = static_cast<double>(graph.degree(static_cast<NodeId>(i)));
  const double two_m = 2.0 * static_cast<double>(graph.edge_count());
  const Eigen::VectorXd u = x * d;

  FloatHittingTable table(graph.params(), static_cast<std::size_t>(n));
  auto fill_row = [&](long i) {
    for (long j = 0; j < n; ++j)
      table(i, j) = i == j ? 0.0 : u(i) - u(j) + two_m * (x(j, j) - x(i, j));
  };
  if constexpr (Parallel) {
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n; ++i) fill_row(i);
  } else {
    for (long i = 0; i < n; ++i) fill_row(i);
  }
  return table;
}

}  // namespace

FloatHittingTable oracle_table_float_serial(const GraphInstance& graph) { return oracle_table_float_impl<false>(graph); }
FloatHittingTable oracle_table_float_parallel(const GraphInstance& graph) { return oracle_table_float_impl<true>(graph); }

}  // namespace ecw::kernels
