#include "ecw/walk.hpp"

#include "ecw/errors.hpp"
#include "ecw/kernels.hpp"

#include <map>
#include <ostream>
#include <stdexcept>
#include <tuple>

namespace ecw {

namespace {

Rational q_rational(int q) { return Rational(q); }

/// (q+1)(q+2)/2, the per-iteration edge growth factor.
Rational growth(int q) { return make_rational((q + 1) * (q + 2), 2); }

Rational edges_at(int q, int g) { return pow(growth(q), static_cast<unsigned>(g + 1)); }

Rational nodes_at(int q, int g) {
  Rational n = (2 * edges_at(q, g) + 2 * (q + 2)) / (q + 3);
  n.canonicalize();
  return n;
}

template <typename Scalar>
BasicHittingTable<Scalar> base_table(int q) {
  const std::size_t n = static_cast<std::size_t>(q + 2);
  BasicHittingTable<Scalar> t({q, 0}, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) t(i, j) = i == j ? Scalar(0) : Scalar(q + 1);
  return t;
}

template <typename Scalar>
BasicHittingTable<Scalar> build_table(const GraphParams& params, Execution exec, std::size_t cap) {
  params.validate();
  const auto n = node_count(params);
  if (n > cap) throw ResourceLimitError("hitting table cap exceeded", n, cap);
  const auto graph = build_graph(params, cap);
  auto table = base_table<Scalar>(params.q);
  for (int level = 0; level < params.g; ++level) {
    table = exec == Execution::serial ? kernels::lift_table_serial(table, graph)
                                      : kernels::lift_table_parallel(table, graph);
  }
  return table;
}

}  // namespace

ExactHittingTable hitting_table_exact(const GraphParams& params, Execution exec, std::size_t cap) {
  return build_table<Rational>(params, exec, cap);
}

FloatHittingTable hitting_table_float(const GraphParams& params, Execution exec, std::size_t cap) {
  return build_table<double>(params, exec, cap);
}

Rational hitting_pair(const GraphInstance& graph, NodeId i, NodeId j) {
  const auto n = graph.node_count();
  if (i >= n || j >= n) throw std::out_of_range("hitting_pair: node id out of range");
  const int q = graph.params().q;
  const Rational q1(q + 1);
  const Rational half = q1 / 2, quarter = q1 / 4;

  std::map<std::tuple<int, NodeId, NodeId>, Rational> memo;
  auto descend = [&](auto&& self, int level, NodeId a, NodeId b) -> Rational {
    if (a == b) return Rational(0);
    if (level == 0) return q1;
    const auto key = std::tuple{level, a, b};
    if (auto it = memo.find(key); it != memo.end()) return it->second;

    const auto old_nodes = graph.node_count_at(level - 1);
    const Rational m(static_cast<unsigned long>(graph.edge_count_at(level - 1)));
    auto prev = [&](NodeId x, NodeId y) { return self(self, level - 1, x, y); };
    const bool a_old = a < old_nodes, b_old = b < old_nodes;
    Rational value;
    if (a_old && b_old) {
      value = q1 * prev(a, b);
    } else if (!a_old && b_old) {
      const auto [s, t] = *graph.nodes()[a].parent;
      value = half + half * (prev(s, b) + prev(t, b));
    } else if (a_old) {
      const auto [s, t] = *graph.nodes()[b].parent;
      value = 3 * half * m - half + quarter * (2 * (prev(a, s) + prev(a, t)) - prev(t, s) - prev(s, t));
    } else if (*graph.nodes()[a].parent == *graph.nodes()[b].parent) {
      value = q1 * m;
    } else {
      const auto [s, t] = *graph.nodes()[a].parent;
      const auto [u, v] = *graph.nodes()[b].parent;
      value = 3 * half * m + quarter * (prev(s, u) + prev(t, u) + prev(s, v) + prev(t, v) - prev(u, v) - prev(v, u));
    }
    value.canonicalize();
    return memo.emplace(key, std::move(value)).first->second;
  };
  return descend(descend, graph.params().g, i, j);
}

Rational hitting_pair(const GraphParams& params, NodeId i, NodeId j, std::size_t node_cap) {
  return hitting_pair(build_graph(params, node_cap), i, j);
}

namespace {

template <typename Scalar, typename Format>
void write_csv(std::ostream& out, const BasicHittingTable<Scalar>& table, Format format) {
  out << "node";
  for (std::size_t j = 0; j < table.size; ++j) out << ',' << j;
  out << '\n';
  for (std::size_t i = 0; i < table.size; ++i) {
    out << i;
    for (std::size_t j = 0; j < table.size; ++j) out << ',' << format(table(i, j));
    out << '\n';
  }
}

}  // namespace

void write_table_csv(std::ostream& out, const ExactHittingTable& table) {
  write_csv(out, table, [](const Rational& v) { return to_string(v); });
}

void write_table_csv(std::ostream& out, const FloatHittingTable& table) {
  write_csv(out, table, [](double v) { return format_double(v); });
}

Rational kemeny_closed(const GraphParams& params) {
  params.validate();
  const Rational q = q_rational(params.q);
  const auto g = static_cast<unsigned>(params.g);
  Rational k = ((q + 1) * (q + 1) / (q + 2) - 3 * (q + 1) / 2) * pow(q + 1, g) +
               (q + 1) * (3 * q + 7) / (2 * (q + 3)) * pow(growth(params.q), g) + (q + 1) / (q + 3);
  k.canonicalize();
  return k;
}

Rational kemeny_recursive(const GraphParams& params) {
  params.validate();
  const Rational q = q_rational(params.q);
  Rational k = (q + 1) * (q + 1) / (q + 2);
  for (int level = 0; level < params.g; ++level) {
    const Rational m = edges_at(params.q, level);
    const Rational n = nodes_at(params.q, level);
    k = (q + 1) * k + 3 * q * (q + 1) / (2 * (q + 2)) * m - q * (q + 1) / (2 * (q + 2)) * n;
  }
  k.canonicalize();
  return k;
}

Rational kemeny_from_spectrum(const SpectrumMultiset& spectrum) {
  int unit = 0;
  Rational k = 0;
  for (const auto& e : spectrum.entries) {
    if (e.value == 1) {
      unit += static_cast<int>(e.multiplicity);
      continue;
    }
    k += Rational(Integer(static_cast<unsigned long>(e.multiplicity))) / (1 - e.value);
  }
  if (unit != 1)
    throw std::invalid_argument("kemeny_from_spectrum: eigenvalue 1 must occur exactly once, found " +
                                std::to_string(unit));
  k.canonicalize();
  return k;
}

Rational sum_multiplicative(const GraphParams& params) {
  params.validate();
  const Rational q = q_rational(params.q);
  const auto g = static_cast<unsigned>(params.g);
  const Rational a = growth(params.q);
  const Rational b = (q + 2) * (q + 2) * (q + 1) * (q + 1) * (q + 1) / 4;
  const Rational c3 = (q + 1) * (q + 1) * (q + 1);
  Rational h = -(q + 2) * (q + 4) * c3 / 2 * pow(b, g) + (q + 2) * (q + 2) * c3 / (q + 3) * pow(a, 2 * g) +
               (3 * q + 7) * (q + 2) * (q + 2) * c3 / (2 * (q + 3)) * pow(a, 3 * g);
  h.canonicalize();
  return h;
}

Rational sum_additive(const GraphParams& params) {
  params.validate();
  const Rational q = q_rational(params.q);
  const auto g = static_cast<unsigned>(params.g);
  const Rational a = growth(params.q);
  const Rational b = (q + 2) * (q + 2) * (q + 1) * (q + 1) * (q + 1) / 4;
  const Rational c = (q + 2) * (q + 1) * (q + 1) / 2;
  const Rational c3 = (q + 1) * (q + 1) * (q + 1);
  const Rational r = q * q + 5 * q + 8;
  const Rational q3 = (q + 3) * (q + 3);
  Rational h = 2 * (q + 2) * (q + 2) * c3 / q3 * pow(a, 2 * g) +
               (q + 2) * (3 * q + 7) * c3 * (q * q * q + 8 * q * q + 22 * q + 20) / (q3 * r) * pow(a, 3 * g) -
               (q + 2) * (q + 4) * c3 / (q + 3) * pow(b, g) +
               (q + 2) * (q * q + 9 * q + 20) * c3 / ((q + 3) * r) * pow(c, g) + (q + 2) * c3 / q3 * pow(a, g);
  h.canonicalize();
  return h;
}

Rational sum_hitting(const GraphParams& params) {
  params.validate();
  const Rational q = q_rational(params.q);
  const auto g = static_cast<unsigned>(params.g);
  const Rational a = growth(params.q);
  const Rational b = (q + 2) * (q + 2) * (q + 1) * (q + 1) * (q + 1) / 4;
  const Rational c = (q + 2) * (q + 1) * (q + 1) / 2;
  const Rational c2 = (q + 1) * (q + 1);
  const Rational c3 = c2 * (q + 1);
  const Rational r = q * q + 5 * q + 8;
  const Rational q3 = (q + 3) * (q + 3);
  Rational h = (q + 1) * (q + 2) * (q + 2) * (q * q * q + 8 * q * q + 15 * q + 8) / (q3 * r) * pow(a, 2 * g) +
               (q + 4) * (3 * q + 7) * (q + 2) * (q + 2) * c3 / (2 * q3 * r) * pow(a, 3 * g) -
               (q + 2) * (q + 4) * c3 / (2 * q3) * pow(b, g) +
               (q + 2) * (q * q + 9 * q + 20) * c3 / (q3 * r) * pow(c, g) +
               2 * (q + 2) * c2 * (q + 4) * (q + 4) / (q3 * r) * pow(q + 1, g) -
               (q + 2) * c2 / q3 * pow(a, g);
  h.canonicalize();
  return h;
}

Rational mean_hitting(const GraphParams& params) {
  const Rational n = nodes_at(params.q, params.g);
  Rational mean = sum_hitting(params) / (n * (n - 1));
  mean.canonicalize();
  return mean;
}

Rational mean_hitting_composite(const GraphParams& params) {
  params.validate();
  const Rational q = q_rational(params.q);
  const Rational x = pow(growth(params.q), static_cast<unsigned>(params.g));
  const Rational prefactor =
      (q + 3) * (q + 3) / ((q + 1) * (q + 1) * (q + 2) * (q + 2) * (x + 2 / (q + 1)) * (x + 1 / (q + 2)));
  Rational mean = prefactor * sum_hitting(params);
  mean.canonicalize();
  return mean;
}

AggregateSums sums_by_recursion(const GraphParams& params) {
  params.validate();
  const Rational q = q_rational(params.q);
  Rational h = (q + 2) * (q + 1) * (q + 1);
  Rational hp = 2 * (q + 2) * (q + 1) * (q + 1) * (q + 1);
  auto h_star = [&](int level) {
    const Rational m = edges_at(params.q, level);
    return Rational(4 * m * m * kemeny_recursive({params.q, level}));
  };
  for (int level = 0; level < params.g; ++level) {
    const Rational m = edges_at(params.q, level);
    const Rational n = nodes_at(params.q, level);
    const Rational hs = h_star(level);
    const Rational tail_a = 3 * m - n + 1;
    const Rational tail_b = m * m * (3 * q * m - q * n - 2);
    Rational next_h = (q + 1) * h + q * (q + 1) / 2 * hp + q * q * (q + 1) / 4 * hs +
                      q * (q + 1) / 2 * m * n * tail_a + q * (q + 1) / 2 * tail_b;
    Rational next_hp = (q + 2) * (q + 1) * (q + 1) / 2 * hp + q * (q + 2) * (q + 1) * (q + 1) / 2 * hs +
                       q * (q + 1) * (q + 1) / 2 * m * (n + 2 * m) * tail_a + q * (q + 1) * (q + 1) * tail_b;
    h = std::move(next_h);
    hp = std::move(next_hp);
  }
  AggregateSums out{h, hp, h_star(params.g)};
  out.hitting.canonicalize();
  out.additive.canonicalize();
  out.multiplicative.canonicalize();
  return out;
}

AnalyticsResult analytics(const GraphParams& params) {
  return {kemeny_closed(params), sum_hitting(params), sum_additive(params), sum_multiplicative(params),
          mean_hitting(params)};
}

AsymptoticCoefficients asymptotic_coefficients(int q) {
  if (q < 1) throw std::invalid_argument("q must be >= 1, got " + std::to_string(q));
  AsymptoticCoefficients c;
  c.kemeny_ratio = make_rational(3 * q + 7, 2 * (q + 2));
  c.mean_hit_ratio = Rational(Integer((q + 3) * (q + 4) * (3 * q + 7)), Integer(2 * (q + 2) * (q * q + 5 * q + 8)));
  c.mean_hit_ratio.canonicalize();
  return c;
}

AggregateSums table_sums(const ExactHittingTable& table, const GraphInstance& graph) {
  if (table.size != graph.node_count()) throw std::invalid_argument("table_sums: size mismatch");
  AggregateSums s{0, 0, 0};
  for (std::size_t i = 0; i < table.size; ++i) {
    const Integer di(static_cast<unsigned long>(graph.degree(static_cast<NodeId>(i))));
    for (std::size_t j = 0; j < table.size; ++j) {
      const Integer dj(static_cast<unsigned long>(graph.degree(static_cast<NodeId>(j))));
      const Rational& t = table(i, j);
      s.hitting += t;
      s.additive += Rational(di + dj) * t;
      s.multiplicative += Rational(di * dj) * t;
    }
  }
  return s;
}

Rational kemeny_from_table(const ExactHittingTable& table, const GraphInstance& graph, NodeId start) {
  if (table.size != graph.node_count() || start >= table.size)
    throw std::invalid_argument("kemeny_from_table: size mismatch");
  Rational k = 0;
  for (std::size_t j = 0; j < table.size; ++j)
    k += Rational(Integer(static_cast<unsigned long>(graph.degree(static_cast<NodeId>(j))))) * table(start, j);
  k /= Rational(Integer(static_cast<unsigned long>(2 * graph.edge_count())));
  k.canonicalize();
  return k;
}

CrossSums cross_sums(const ExactHittingTable& table, const GraphInstance& graph) {
  const int g = graph.params().g;
  if (g < 1) throw std::invalid_argument("cross_sums: needs g >= 1");
  if (table.size != graph.node_count()) throw std::invalid_argument("cross_sums: size mismatch");
  const std::size_t old_nodes = graph.node_count_at(g - 1);
  const std::size_t n = table.size;
  auto commute = [&](std::size_t i, std::size_t j) { return Rational(table(i, j) + table(j, i)); };

  CrossSums out{0, 0, 0, 0};
  std::vector<Rational> to_old(old_nodes, 0);  // C_{x, V_old} for every old x
  for (std::size_t x = 0; x < old_nodes; ++x)
    for (std::size_t y = 0; y < old_nodes; ++y) to_old[x] += commute(x, y);

  for (std::size_t i = old_nodes; i < n; ++i) {
    for (std::size_t j = 0; j < old_nodes; ++j) out.new_old += commute(i, j);
    for (std::size_t j = old_nodes; j < n; ++j) out.new_new += commute(i, j);
    const auto [s, t] = *graph.nodes()[i].parent;
    out.parent_weighted += to_old[s] + to_old[t];
  }
  const int q = graph.params().q;
  for (std::size_t x = 0; x < old_nodes; ++x) {
    const auto d = graph.degree_at(static_cast<NodeId>(x), g - 1);
    out.degree_weighted += Rational(Integer(static_cast<unsigned long>(q * d))) * to_old[x];
  }
  return out;
}

Rational predicted_new_old_commute(const GraphParams& previous) {
  const Rational q = q_rational(previous.q);
  const Rational m = edges_at(previous.q, previous.g);
  const Rational n = nodes_at(previous.q, previous.g);
  Rational v = q * (q + 1) / 2 * sum_additive(previous) + q * (q + 1) / 2 * m * (3 * m * n - n * n + n);
  v.canonicalize();
  return v;
}

Rational predicted_new_new_commute(const GraphParams& previous) {
  const Rational q = q_rational(previous.q);
  const Rational m = edges_at(previous.q, previous.g);
  const Rational n = nodes_at(previous.q, previous.g);
  Rational v = q * q * (q + 1) / 2 * sum_multiplicative(previous) + q * (q + 1) * m * m * (3 * q * m - q * n - 2);
  v.canonicalize();
  return v;
}

}  // namespace ecw
