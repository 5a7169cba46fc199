#include "ecw/graph.hpp"

#include "ecw/errors.hpp"
#include "ecw/rational.hpp"

#include <json.hpp>

#include <algorithm>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace ecw {

void GraphParams::validate() const {
  if (q < 1) throw std::invalid_argument("q must be >= 1, got " + std::to_string(q));
  if (g < 0) throw std::invalid_argument("g must be >= 0, got " + std::to_string(g));
}

namespace {

Integer growth(int q) { return Integer((q + 1) * (q + 2) / 2); }

std::uint64_t to_u64(const Integer& v, const char* what) {
  if (!v.fits_ulong_p()) throw std::overflow_error(std::string(what) + " does not fit in 64 bits");
  return v.get_ui();
}

Integer exact_edges(int q, int g) {
  Integer m;
  mpz_pow_ui(m.get_mpz_t(), growth(q).get_mpz_t(), static_cast<unsigned long>(g + 1));
  return m;
}

Integer exact_nodes(int q, int g) {
  Integer n = (2 * exact_edges(q, g) + 2 * (q + 2)) / (q + 3);
  return n;
}

}  // namespace

GraphCounts counts(const GraphParams& params) {
  params.validate();
  GraphCounts c;
  c.nodes = to_u64(exact_nodes(params.q, params.g), "node count");
  c.edges = to_u64(exact_edges(params.q, params.g), "edge count");
  for (int l = 1; l <= params.g; ++l) {
    Integer w;
    mpz_pow_ui(w.get_mpz_t(), growth(params.q).get_mpz_t(), static_cast<unsigned long>(l));
    c.new_nodes.push_back(to_u64(w * params.q, "new-node count"));
  }
  return c;
}

std::uint64_t node_count(const GraphParams& params) {
  params.validate();
  Integer n = exact_nodes(params.q, params.g);
  return n.fits_ulong_p() ? n.get_ui() : std::numeric_limits<std::uint64_t>::max();
}

GraphInstance::GraphInstance(GraphParams params, std::vector<NodeRecord> nodes,
                             std::vector<EdgeRecord> edges)
    : params_(params), nodes_(std::move(nodes)), edges_(std::move(edges)) {
  params_.validate();
  for (int l = 0; l <= params_.g; ++l) {
    level_nodes_.push_back(to_u64(exact_nodes(params_.q, l), "node count"));
    level_edges_.push_back(to_u64(exact_edges(params_.q, l), "edge count"));
  }
  if (nodes_.size() != level_nodes_.back() || edges_.size() != level_edges_.back())
    throw std::invalid_argument("graph size does not match (q, g)");
}

std::size_t GraphInstance::node_count_at(int level) const {
  return level_nodes_.at(static_cast<std::size_t>(level));
}

std::size_t GraphInstance::edge_count_at(int level) const {
  return level_edges_.at(static_cast<std::size_t>(level));
}

std::uint64_t GraphInstance::degree_at(NodeId v, int level) const {
  const auto& node = nodes_.at(v);
  if (level < node.birth || level > params_.g)
    throw std::out_of_range("node " + std::to_string(v) + " does not exist at level " + std::to_string(level));
  std::uint64_t d = 1;
  for (int i = 0; i <= level - node.birth; ++i) d *= static_cast<std::uint64_t>(params_.q + 1);
  return d;
}

std::vector<std::vector<NodeId>> GraphInstance::adjacency_lists() const {
  std::vector<std::vector<NodeId>> adj(nodes_.size());
  for (const auto& e : edges_) {
    adj[e.u].push_back(e.v);
    adj[e.v].push_back(e.u);
  }
  for (auto& list : adj) std::sort(list.begin(), list.end());
  return adj;
}

GraphInstance build_graph(const GraphParams& params, std::size_t node_cap) {
  params.validate();
  const std::uint64_t target = node_count(params);
  if (target > node_cap) throw ResourceLimitError("graph node cap exceeded", target, node_cap);

  const auto q = static_cast<NodeId>(params.q);
  std::vector<NodeRecord> nodes;
  std::vector<EdgeRecord> edges;
  nodes.reserve(target);

  for (NodeId i = 0; i < q + 2; ++i) nodes.push_back({i, 0, std::nullopt, 0});
  for (NodeId u = 0; u < q + 2; ++u)
    for (NodeId v = u + 1; v < q + 2; ++v)
      edges.push_back({static_cast<std::uint32_t>(edges.size()), u, v, 0});

  for (int level = 1; level <= params.g; ++level) {
    const auto old_nodes = static_cast<NodeId>(nodes.size());
    const auto old_edges = static_cast<NodeId>(edges.size());
    for (NodeId f = 0; f < q; ++f) {
      for (NodeId k = 0; k < old_edges; ++k) {
        const auto id = static_cast<NodeId>(nodes.size());
        nodes.push_back({id, level, std::pair{edges[k].u, edges[k].v}, 0});
      }
    }
    for (NodeId x = old_nodes; x < nodes.size(); ++x) {
      auto [s, t] = *nodes[x].parent;
      edges.push_back({static_cast<std::uint32_t>(edges.size()), s, x, level});
      edges.push_back({static_cast<std::uint32_t>(edges.size()), t, x, level});
    }
    // Copy f over edge k is adjacent to every other copy over edge k; this
    // loop order already yields lexicographic (u, v).
    for (NodeId f = 0; f < q; ++f)
      for (NodeId k = 0; k < old_edges; ++k)
        for (NodeId h = f + 1; h < q; ++h)
          edges.push_back({static_cast<std::uint32_t>(edges.size()), old_nodes + f * old_edges + k,
                           old_nodes + h * old_edges + k, level});
  }

  for (const auto& e : edges) {
    ++nodes[e.u].degree;
    ++nodes[e.v].degree;
  }
  return GraphInstance(params, std::move(nodes), std::move(edges));
}

std::pair<NodeId, NodeId> parent_pair(const GraphInstance& graph, NodeId node) {
  if (node >= graph.node_count()) throw std::out_of_range("node id " + std::to_string(node) + " out of range");
  const auto& rec = graph.nodes()[node];
  if (!rec.parent) throw std::invalid_argument("initial node " + std::to_string(node) + " has no parent edge");
  return *rec.parent;
}

std::string check_degrees(const GraphInstance& graph) {
  std::vector<std::uint64_t> recomputed(graph.node_count(), 0);
  for (const auto& e : graph.edges()) {
    ++recomputed[e.u];
    ++recomputed[e.v];
  }
  const int g = graph.params().g;
  for (const auto& node : graph.nodes()) {
    const auto expected = graph.degree_at(node.id, g);
    if (node.degree != recomputed[node.id] || node.degree != expected) {
      std::ostringstream os;
      os << "node " << node.id << ": stored degree " << node.degree << ", adjacency " << recomputed[node.id]
         << ", formula " << expected;
      return os.str();
    }
  }
  return {};
}

MatrixBundle assemble_matrices(const GraphInstance& graph) {
  const auto n = static_cast<Eigen::Index>(graph.node_count());
  const auto m = static_cast<Eigen::Index>(graph.edge_count());
  MatrixBundle b;
  b.adjacency = Eigen::MatrixXi::Zero(n, n);
  b.incidence = Eigen::MatrixXi::Zero(n, m);
  b.degree = Eigen::VectorXi::Zero(n);
  for (const auto& e : graph.edges()) {
    b.adjacency(e.u, e.v) = 1;
    b.adjacency(e.v, e.u) = 1;
    b.incidence(e.u, e.id) = 1;
    b.incidence(e.v, e.id) = 1;
  }
  b.degree = b.adjacency.rowwise().sum();
  Eigen::VectorXd inv_sqrt = b.degree.cast<double>().cwiseSqrt().cwiseInverse();
  b.normalized = inv_sqrt.asDiagonal() * b.adjacency.cast<double>() * inv_sqrt.asDiagonal();
  return b;
}

Eigen::Index numerical_rank(const Eigen::MatrixXd& m, double rel_cutoff) {
  if (m.size() == 0) return 0;
  Eigen::BDCSVD<Eigen::MatrixXd> svd(m);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0.0) return 0;
  const double cutoff = rel_cutoff * s(0);
  return (s.array() > cutoff).count();
}

std::string to_json(const GraphInstance& graph, int indent) {
  nlohmann::ordered_json doc;
  doc["q"] = graph.params().q;
  doc["g"] = graph.params().g;
  auto nodes = nlohmann::ordered_json::array();
  for (const auto& n : graph.nodes()) {
    nlohmann::ordered_json rec;
    rec["id"] = n.id;
    rec["birth"] = n.birth;
    if (n.parent)
      rec["parent"] = {n.parent->first, n.parent->second};
    else
      rec["parent"] = nullptr;
    nodes.push_back(std::move(rec));
  }
  doc["nodes"] = std::move(nodes);
  auto edges = nlohmann::ordered_json::array();
  for (const auto& e : graph.edges()) edges.push_back({e.u, e.v});
  doc["edges"] = std::move(edges);
  return doc.dump(indent);
}

GraphInstance graph_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("graph JSON: ") + ex.what());
  }
  try {
    GraphParams params{doc.at("q").get<int>(), doc.at("g").get<int>()};
    params.validate();
    std::vector<NodeRecord> nodes;
    for (const auto& rec : doc.at("nodes")) {
      NodeRecord n;
      n.id = rec.at("id").get<NodeId>();
      n.birth = rec.at("birth").get<int>();
      if (n.id != nodes.size()) throw std::invalid_argument("graph JSON: node ids must be 0..N-1 in order");
      const auto& parent = rec.at("parent");
      if (!parent.is_null()) {
        auto s = parent.at(0).get<NodeId>();
        auto t = parent.at(1).get<NodeId>();
        if (s >= t || t >= n.id) throw std::invalid_argument("graph JSON: bad parent of node " + std::to_string(n.id));
        n.parent = std::pair{s, t};
      }
      nodes.push_back(n);
    }
    std::vector<EdgeRecord> edges;
    for (const auto& rec : doc.at("edges")) {
      auto u = rec.at(0).get<NodeId>();
      auto v = rec.at(1).get<NodeId>();
      if (u >= v || v >= nodes.size()) throw std::invalid_argument("graph JSON: bad edge");
      edges.push_back({static_cast<std::uint32_t>(edges.size()), u, v, std::max(nodes[u].birth, nodes[v].birth)});
      ++nodes[u].degree;
      ++nodes[v].degree;
    }
    return GraphInstance(params, std::move(nodes), std::move(edges));
  } catch (const nlohmann::json::exception& ex) {
    throw std::invalid_argument(std::string("graph JSON: ") + ex.what());
  }
}

void write_edge_list(std::ostream& out, const GraphInstance& graph) {
  for (const auto& e : graph.edges()) out << e.u << ' ' << e.v << '\n';
}

std::vector<std::pair<NodeId, NodeId>> read_edge_list(std::istream& in) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::istringstream ls(line);
    long long u = -1, v = -1;
    std::string rest;
    if (!(ls >> u >> v) || (ls >> rest) || u < 0 || v < 0)
      throw std::invalid_argument("edge list: malformed line '" + line + "'");
    edges.emplace_back(static_cast<NodeId>(u), static_cast<NodeId>(v));
  }
  return edges;
}

}  // namespace ecw
