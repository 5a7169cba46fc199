#ifndef ECW_GRAPH_HPP
#define ECW_GRAPH_HPP

#include <Eigen/Dense>

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace ecw {

using NodeId = std::uint32_t;

/// Clique size q >= 1 and iteration count g >= 0 of the family G_q(g).
struct GraphParams {
  int q = 1;
  int g = 0;

  /// Throws std::invalid_argument unless q >= 1 and g >= 0.
  void validate() const;

  friend bool operator==(const GraphParams&, const GraphParams&) = default;
};

struct GraphCounts {
  std::uint64_t nodes = 0;
  std::uint64_t edges = 0;
  /// New-node counts W_1..W_g; empty for g = 0.
  std::vector<std::uint64_t> new_nodes;
};

/// Closed-form node, edge and per-iteration new-node counts. Throws
/// std::overflow_error if a count does not fit in 64 bits.
GraphCounts counts(const GraphParams& params);

/// Node count N_g alone, saturating to UINT64_MAX on overflow.
std::uint64_t node_count(const GraphParams& params);

struct NodeRecord {
  NodeId id = 0;
  int birth = 0;
  /// Endpoints (s, t), s < t, of the edge that created this node. Absent for
  /// the q + 2 initial nodes.
  std::optional<std::pair<NodeId, NodeId>> parent;
  std::uint64_t degree = 0;
};

struct EdgeRecord {
  std::uint32_t id = 0;
  NodeId u = 0;  // u < v
  NodeId v = 0;
  int birth = 0;
};

/// The graph G_q(g) with full genealogy.
///
/// Node order: every node of G_q(l) precedes every node born at l + 1. Within
/// the nodes born at iteration l + 1, copy f in 1..q over the k-th edge of
/// G_q(l) has id N_l + (f - 1) * M_l + k. This is the block order under which
/// the adjacency and normalized adjacency matrices of G_q(l + 1) take their
/// block form.
///
/// Edge order: the initial clique in lexicographic order; then per iteration
/// the two attachment edges (s, x), (t, x) of every new node x in id order,
/// followed by the sibling clique edges sorted lexicographically.
class GraphInstance {
 public:
  GraphInstance() = default;
  GraphInstance(GraphParams params, std::vector<NodeRecord> nodes, std::vector<EdgeRecord> edges);

  const GraphParams& params() const noexcept { return params_; }
  const std::vector<NodeRecord>& nodes() const noexcept { return nodes_; }
  const std::vector<EdgeRecord>& edges() const noexcept { return edges_; }
  std::size_t node_count() const noexcept { return nodes_.size(); }
  std::size_t edge_count() const noexcept { return edges_.size(); }

  /// Node count of G_q(level) for 0 <= level <= g; these nodes are a prefix.
  std::size_t node_count_at(int level) const;
  /// Edge count of G_q(level); these edges are a prefix of edges().
  std::size_t edge_count_at(int level) const;

  std::uint64_t degree(NodeId v) const { return nodes_.at(v).degree; }
  /// Degree of v in G_q(level), level >= birth(v).
  std::uint64_t degree_at(NodeId v, int level) const;

  /// Sorted neighbour lists.
  std::vector<std::vector<NodeId>> adjacency_lists() const;

 private:
  GraphParams params_;
  std::vector<NodeRecord> nodes_;
  std::vector<EdgeRecord> edges_;
  std::vector<std::size_t> level_nodes_;
  std::vector<std::size_t> level_edges_;
};

inline constexpr std::size_t kDefaultNodeCap = 1'000'000;

/// Builds G_q(g) deterministically. Throws ResourceLimitError when N_g exceeds
/// node_cap.
GraphInstance build_graph(const GraphParams& params, std::size_t node_cap = kDefaultNodeCap);

/// Endpoints of the edge that created `node`. Throws std::invalid_argument for
/// initial nodes and std::out_of_range for unknown ids.
std::pair<NodeId, NodeId> parent_pair(const GraphInstance& graph, NodeId node);

/// Recomputes every degree from the edge list and compares it with the stored
/// degree and with (q + 1)^(g - birth + 1). Returns a description of the first
/// mismatch, or an empty string.
std::string check_degrees(const GraphInstance& graph);

/// Dense matrices of a graph.
struct MatrixBundle {
  Eigen::MatrixXi adjacency;
  Eigen::VectorXi degree;
  Eigen::MatrixXi incidence;  // N x M
  Eigen::MatrixXd normalized;  // D^{-1/2} A D^{-1/2}
};

MatrixBundle assemble_matrices(const GraphInstance& graph);

/// Numerical rank with singular-value cutoff rel_cutoff * sigma_max.
Eigen::Index numerical_rank(const Eigen::MatrixXd& m, double rel_cutoff = 1e-10);

// Serialization.

/// {"q","g","nodes":[{"id","birth","parent":[s,t]|null}],"edges":[[u,v],...]}
std::string to_json(const GraphInstance& graph, int indent = -1);
/// Inverse of to_json. Reconstructs degrees and edge births from the node
/// genealogy. Throws std::invalid_argument on malformed or inconsistent input.
GraphInstance graph_from_json(const std::string& text);

/// One "u v" line per edge, 0-based ids, in edge order.
void write_edge_list(std::ostream& out, const GraphInstance& graph);
std::vector<std::pair<NodeId, NodeId>> read_edge_list(std::istream& in);

}  // namespace ecw

#endif  // ECW_GRAPH_HPP
