#include "ecw/errors.hpp"
#include "ecw/graph.hpp"

#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>
#include <sstream>

using namespace ecw;

TEST_CASE("params validation") {
  CHECK_THROWS_AS(GraphParams({0, 1}).validate(), std::invalid_argument);
  CHECK_THROWS_AS(GraphParams({1, -1}).validate(), std::invalid_argument);
  CHECK_NOTHROW(GraphParams({1, 0}).validate());
  CHECK_THROWS_AS(build_graph({0, 0}), std::invalid_argument);
}

TEST_CASE("counts") {
  auto c = counts({1, 0});
  CHECK(c.nodes == 3);
  CHECK(c.edges == 3);
  CHECK(c.new_nodes.empty());

  c = counts({1, 1});
  CHECK(c.nodes == 6);
  CHECK(c.edges == 9);
  CHECK(c.new_nodes == std::vector<std::uint64_t>{3});

  c = counts({2, 1});
  CHECK(c.nodes == 16);
  CHECK(c.edges == 36);
  CHECK(c.new_nodes == std::vector<std::uint64_t>{12});

  for (int q = 1; q <= 4; ++q) {
    for (int g = 0; g < 4; ++g) {
      const auto a = counts({q, g});
      const auto b = counts({q, g + 1});
      CHECK(b.nodes == a.nodes + static_cast<std::uint64_t>(q) * a.edges);
      CHECK(2 * b.edges == static_cast<std::uint64_t>((q + 1) * (q + 2)) * a.edges);
    }
  }
}

TEST_CASE("build_graph small instances") {
  const auto k3 = build_graph({1, 0});
  CHECK(k3.node_count() == 3);
  CHECK(k3.edge_count() == 3);
  for (const auto& n : k3.nodes()) {
    CHECK(n.degree == 2);
    CHECK_FALSE(n.parent.has_value());
  }

  const auto g11 = build_graph({1, 1});
  CHECK(g11.node_count() == 6);
  CHECK(g11.edge_count() == 9);
  const std::pair<NodeId, NodeId> expected[] = {{0, 1}, {0, 2}, {1, 2}};
  for (NodeId v = 3; v < 6; ++v) {
    CHECK(parent_pair(g11, v) == expected[v - 3]);
    CHECK(g11.degree(v) == 2);
    CHECK(g11.nodes()[v].birth == 1);
  }
  for (NodeId v = 0; v < 3; ++v) CHECK(g11.degree(v) == 4);
  CHECK_THROWS_AS(parent_pair(g11, 0), std::invalid_argument);
  CHECK_THROWS_AS(parent_pair(g11, 6), std::out_of_range);

  const auto g21 = build_graph({2, 1});
  CHECK(g21.node_count() == 16);
  CHECK(g21.edge_count() == 36);
  for (NodeId v = 0; v < 4; ++v) CHECK(g21.degree(v) == 9);
  for (NodeId v = 4; v < 16; ++v) CHECK(g21.degree(v) == 3);
  CHECK(parent_pair(g21, 4) == std::pair<NodeId, NodeId>{0, 1});
  CHECK(parent_pair(g21, 10) == std::pair<NodeId, NodeId>{0, 1});
}

TEST_CASE("edge order: clique lexicographic, then attachments, then sibling cliques") {
  const auto g = build_graph({2, 1});
  std::vector<std::pair<NodeId, NodeId>> got;
  for (const auto& e : g.edges()) got.emplace_back(e.u, e.v);
  const std::vector<std::pair<NodeId, NodeId>> head{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}, {0, 4}, {1, 4}};
  CHECK(std::equal(head.begin(), head.end(), got.begin()));
  // Last attachment is node 15 (copy 2 over edge (2,3)); then the 6 sibling edges (4,10), (5,11), ...
  CHECK(got[6 + 2 * 12 - 1] == std::pair<NodeId, NodeId>{3, 15});
  CHECK(got[6 + 2 * 12] == std::pair<NodeId, NodeId>{4, 10});
  CHECK(got.back() == std::pair<NodeId, NodeId>{9, 15});
  for (const auto& e : g.edges()) CHECK(e.u < e.v);
}

TEST_CASE("structural invariants") {
  for (int q = 1; q <= 3; ++q) {
    for (int g = 0; g <= 3; ++g) {
      if (node_count({q, g}) > 5000) continue;
      CAPTURE(q);
      CAPTURE(g);
      const auto graph = build_graph({q, g});
      const auto c = counts({q, g});
      REQUIRE(graph.node_count() == c.nodes);
      REQUIRE(graph.edge_count() == c.edges);
      CHECK(check_degrees(graph).empty());

      std::uint64_t degree_sum = 0;
      std::map<std::uint64_t, std::uint64_t> histogram;
      for (const auto& n : graph.nodes()) {
        degree_sum += n.degree;
        ++histogram[n.degree];
      }
      CHECK(degree_sum == 2 * c.edges);
      std::uint64_t top = 1;
      for (int k = 0; k <= g; ++k) top *= static_cast<std::uint64_t>(q + 1);
      CHECK(histogram[top] == static_cast<std::uint64_t>(q + 2));
      for (int level = 1; level <= g; ++level) {
        std::uint64_t d = 1;
        for (int k = 0; k < g - level + 1; ++k) d *= static_cast<std::uint64_t>(q + 1);
        CHECK(histogram[d] == c.new_nodes[static_cast<std::size_t>(level - 1)]);
      }

      // Each new node touches both parents and exactly q - 1 same-birth siblings.
      const auto adj = graph.adjacency_lists();
      for (const auto& n : graph.nodes()) {
        if (!n.parent) continue;
        const auto [s, t] = *n.parent;
        const std::set<NodeId> nb(adj[n.id].begin(), adj[n.id].end());
        CHECK(nb.count(s) == 1);
        CHECK(nb.count(t) == 1);
        int siblings = 0;
        for (NodeId x : nb) {
          const auto& other = graph.nodes()[x];
          if (other.birth == n.birth && other.parent == n.parent) ++siblings;
        }
        CHECK(siblings == q - 1);
      }

      // Connected (BFS from 0).
      std::vector<char> seen(graph.node_count(), 0);
      std::vector<NodeId> stack{0};
      seen[0] = 1;
      std::size_t reached = 1;
      while (!stack.empty()) {
        const NodeId v = stack.back();
        stack.pop_back();
        for (NodeId w : adj[v])
          if (!seen[w]) {
            seen[w] = 1;
            ++reached;
            stack.push_back(w);
          }
      }
      CHECK(reached == graph.node_count());
    }
  }
}

TEST_CASE("old edges persist across levels and builds are deterministic") {
  for (int q = 1; q <= 3; ++q) {
    const auto small = build_graph({q, 1});
    const auto large = build_graph({q, 2});
    CHECK(large.node_count_at(1) == small.node_count());
    CHECK(large.edge_count_at(1) == small.edge_count());
    for (std::size_t k = 0; k < small.edge_count(); ++k) {
      CHECK(large.edges()[k].u == small.edges()[k].u);
      CHECK(large.edges()[k].v == small.edges()[k].v);
    }
    CHECK(to_json(build_graph({q, 2})) == to_json(large));
  }
}

TEST_CASE("node cap") {
  CHECK_THROWS_AS(build_graph({1, 3}, 41), ResourceLimitError);
  CHECK_NOTHROW(build_graph({1, 3}, 42));
  try {
    build_graph({2, 2}, 10);
  } catch (const ResourceLimitError& e) {
    CHECK(e.requested() == 88);
    CHECK(e.limit() == 10);
  }
  CHECK(node_count({5, 30}) > kDefaultNodeCap);
}

TEST_CASE("matrices") {
  const auto k3 = assemble_matrices(build_graph({1, 0}));
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(k3.normalized(i, j) == doctest::Approx(i == j ? 0.0 : 0.5));

  const auto g11 = assemble_matrices(build_graph({1, 1}));
  CHECK(g11.normalized(3, 0) == doctest::Approx(1.0 / std::sqrt(8.0)));

  for (auto params : {GraphParams{2, 1}, GraphParams{1, 2}, GraphParams{3, 1}}) {
    const auto graph = build_graph(params);
    const auto m = assemble_matrices(graph);
    CHECK(m.adjacency == m.adjacency.transpose());
    CHECK(m.adjacency.diagonal().isZero());
    Eigen::MatrixXi rhs = m.adjacency;
    rhs.diagonal() += m.degree;
    CHECK((m.incidence * m.incidence.transpose() - rhs).cwiseAbs().maxCoeff() == 0);
    CHECK(numerical_rank(m.incidence.cast<double>()) == static_cast<Eigen::Index>(graph.node_count()));

    // Block layout: A_{g+1} restricted to old nodes is A_g; copy f over edge k sits at N_g + (f-1) M_g + k.
    const GraphParams prev{params.q, params.g - 1};
    const auto old = assemble_matrices(build_graph(prev));
    const auto n0 = old.adjacency.rows();
    CHECK(m.adjacency.topLeftCorner(n0, n0) == old.adjacency);
    const auto m0 = old.incidence.cols();
    for (int f = 1; f < params.q; ++f)
      for (int h = f + 1; h <= params.q; ++h) {
        const auto block = m.adjacency.block(n0 + (f - 1) * m0, n0 + (h - 1) * m0, m0, m0);
        CHECK(block == Eigen::MatrixXi::Identity(m0, m0));
      }
    for (int f = 1; f <= params.q; ++f)
      CHECK(m.adjacency.block(0, n0 + (f - 1) * m0, n0, m0) == old.incidence);
  }
}

TEST_CASE("serialization round trip") {
  for (auto params : {GraphParams{1, 0}, GraphParams{1, 2}, GraphParams{3, 1}}) {
    const auto graph = build_graph(params);
    const auto text = to_json(graph);
    const auto back = graph_from_json(text);
    CHECK(back.params() == params);
    CHECK(to_json(back) == text);
    for (std::size_t v = 0; v < graph.node_count(); ++v) {
      CHECK(back.nodes()[v].degree == graph.nodes()[v].degree);
      CHECK(back.nodes()[v].birth == graph.nodes()[v].birth);
    }
    for (std::size_t k = 0; k < graph.edge_count(); ++k) CHECK(back.edges()[k].birth == graph.edges()[k].birth);

    std::stringstream ss;
    write_edge_list(ss, graph);
    const auto edges = read_edge_list(ss);
    REQUIRE(edges.size() == graph.edge_count());
    for (std::size_t k = 0; k < edges.size(); ++k)
      CHECK(edges[k] == std::pair<NodeId, NodeId>{graph.edges()[k].u, graph.edges()[k].v});
  }
  CHECK_THROWS_AS(graph_from_json("{"), std::invalid_argument);
  CHECK_THROWS_AS(graph_from_json(R"({"q":1,"g":0,"nodes":[],"edges":[]})"), std::invalid_argument);
}
