#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <vector>

#include "lendgraph/types.hpp"

namespace lendgraph::graph {

struct Arc {
    int to = 0;
    double weight = 0.0;
};

// Weighted directed communication graph with adjacency indexes and an
// undirected projection (direction dropped, weights summed across the two
// orientations). Immutable after build.
class CommGraph {
public:
    static CommGraph build(const std::vector<EdgeRecord>& edges,
                           const std::vector<LoanRecord>& loans);

    int num_nodes() const { return static_cast<int>(nodes_.size()); }
    std::int64_t num_edges() const { return num_edges_; }
    const std::vector<NodeId>& nodes() const { return nodes_; }
    const NodeId& node_id(int i) const { return nodes_[i]; }

    // Throws std::out_of_range for unknown identifiers.
    int index_of(const NodeId& id) const;
    bool contains(const NodeId& id) const { return index_.count(id) > 0; }

    const std::vector<Arc>& out_arcs(int i) const { return out_adj_[i]; }
    const std::vector<Arc>& in_arcs(int i) const { return in_adj_[i]; }
    // Undirected neighbors, sorted by target index.
    const std::vector<Arc>& und_arcs(int i) const { return und_adj_[i]; }

    bool is_borrower(int i) const { return borrower_flags_[i] != 0; }
    std::vector<int> borrower_indices() const;
    // Borrowers from the loan table that had no communication edges; they are
    // added to the node set with degree zero.
    const std::vector<NodeId>& isolated_borrowers() const { return isolated_borrowers_; }

    // Weakly-connected component label per node, labels in [0, n_components).
    const std::vector<int>& component_of() const { return component_; }
    int num_components() const { return n_components_; }

private:
    std::vector<NodeId> nodes_;
    std::unordered_map<NodeId, int> index_;
    std::vector<std::vector<Arc>> out_adj_, in_adj_, und_adj_;
    std::vector<char> borrower_flags_;
    std::vector<NodeId> isolated_borrowers_;
    std::vector<int> component_;
    int n_components_ = 0;
    std::int64_t num_edges_ = 0;
};

struct DegreeMetrics {
    std::int64_t out_edges = 0;
    std::int64_t in_edges = 0;
    double dur = 0.0;
};

// Distinct out/in neighbor counts and total incident duration (both directions).
DegreeMetrics degree_metrics(const CommGraph& g, int node);

// Closed triangles through `node` in the undirected projection.
std::int64_t triad_count(const CommGraph& g, int node);

// Total number of triangles in the undirected projection.
std::int64_t triangle_count(const CommGraph& g);

struct ConvergenceError : std::runtime_error {
    explicit ConvergenceError(double delta)
        : std::runtime_error("power iteration did not converge, last delta = " +
                             std::to_string(delta)),
          last_delta(delta) {}
    double last_delta;
};

// Principal eigenvector of the undirected-projection adjacency matrix,
// power iteration per connected component, each component's subvector
// L2-normalized. Nonnegative by Perron-Frobenius.
std::vector<double> eigenvector_centrality(const CommGraph& g, bool weighted,
                                           double tol = 1e-10, int max_iter = 1000);

// Mean hop distance from `node` to every other node of its weakly-connected
// component (self excluded); 0 for isolated nodes.
double farness_centrality(const CommGraph& g, int node);

struct MetricsOptions {
    bool weighted_eigen = true;
    double eigen_tol = 1e-10;
    int eigen_max_iter = 1000;
};

// One metric row per borrower, sorted by borrower id.
std::vector<BorrowerGraphMetrics> metrics_table(const CommGraph& g,
                                                const MetricsOptions& opt = {});

void write_metrics_csv(const std::string& path,
                       const std::vector<BorrowerGraphMetrics>& rows);
std::vector<BorrowerGraphMetrics> read_metrics_csv(const std::string& path);

}  // namespace lendgraph::graph
