#include "lendgraph/graph.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "lendgraph/csv.hpp"

namespace lendgraph::graph {

CommGraph CommGraph::build(const std::vector<EdgeRecord>& edges,
                           const std::vector<LoanRecord>& loans) {
    CommGraph g;
    {
        std::vector<NodeId> ids;
        ids.reserve(edges.size() * 2 + loans.size());
        for (const auto& e : edges) {
            ids.push_back(e.src);
            ids.push_back(e.dst);
        }
        for (const auto& l : loans) ids.push_back(l.borrower_id);
        std::sort(ids.begin(), ids.end());
        ids.erase(std::unique(ids.begin(), ids.end()), ids.end());
        g.nodes_ = std::move(ids);
    }
    g.index_.reserve(g.nodes_.size() * 2);
    for (int i = 0; i < g.num_nodes(); ++i) g.index_[g.nodes_[i]] = i;

    const int n = g.num_nodes();
    g.out_adj_.resize(n);
    g.in_adj_.resize(n);
    g.und_adj_.resize(n);
    g.borrower_flags_.assign(n, 0);

    std::map<std::pair<NodeId, NodeId>, bool> dup_check;
    for (const auto& e : edges) {
        if (!dup_check.emplace(std::make_pair(e.src, e.dst), true).second)
            throw std::invalid_argument("duplicate edge " + e.src + "->" + e.dst);
        int s = g.index_.at(e.src), d = g.index_.at(e.dst);
        g.out_adj_[s].push_back({d, e.weight_s});
        g.in_adj_[d].push_back({s, e.weight_s});
    }
    g.num_edges_ = static_cast<std::int64_t>(edges.size());

    // Undirected projection: weights summed across the two orientations.
    for (int i = 0; i < n; ++i) {
        std::map<int, double> acc;
        for (const auto& a : g.out_adj_[i]) acc[a.to] += a.weight;
        for (const auto& a : g.in_adj_[i]) acc[a.to] += a.weight;
        g.und_adj_[i].reserve(acc.size());
        for (const auto& [to, w] : acc) g.und_adj_[i].push_back({to, w});
    }
    for (auto& adj : g.out_adj_)
        std::sort(adj.begin(), adj.end(), [](const Arc& a, const Arc& b) { return a.to < b.to; });
    for (auto& adj : g.in_adj_)
        std::sort(adj.begin(), adj.end(), [](const Arc& a, const Arc& b) { return a.to < b.to; });

    std::vector<NodeId> edge_endpoint_borrowers;
    for (const auto& l : loans) {
        int i = g.index_.at(l.borrower_id);
        g.borrower_flags_[i] = 1;
        if (g.und_adj_[i].empty()) g.isolated_borrowers_.push_back(l.borrower_id);
    }

    // Weakly-connected components via BFS on the projection.
    g.component_.assign(n, -1);
    int label = 0;
    std::deque<int> queue;
    for (int s = 0; s < n; ++s) {
        if (g.component_[s] >= 0) continue;
        g.component_[s] = label;
        queue.push_back(s);
        while (!queue.empty()) {
            int u = queue.front();
            queue.pop_front();
            for (const auto& a : g.und_adj_[u]) {
                if (g.component_[a.to] < 0) {
                    g.component_[a.to] = label;
                    queue.push_back(a.to);
                }
            }
        }
        ++label;
    }
    g.n_components_ = label;
    return g;
}

int CommGraph::index_of(const NodeId& id) const {
    auto it = index_.find(id);
    if (it == index_.end()) throw std::out_of_range("unknown node " + id);
    return it->second;
}

std::vector<int> CommGraph::borrower_indices() const {
    std::vector<int> out;
    for (int i = 0; i < num_nodes(); ++i)
        if (borrower_flags_[i]) out.push_back(i);
    return out;
}

DegreeMetrics degree_metrics(const CommGraph& g, int node) {
    if (node < 0 || node >= g.num_nodes()) throw std::out_of_range("node index");
    DegreeMetrics m;
    m.out_edges = static_cast<std::int64_t>(g.out_arcs(node).size());
    m.in_edges = static_cast<std::int64_t>(g.in_arcs(node).size());
    for (const auto& a : g.out_arcs(node)) m.dur += a.weight;
    for (const auto& a : g.in_arcs(node)) m.dur += a.weight;
    return m;
}

namespace {

// |N(i) ∩ N(u)| over sorted undirected adjacency.
std::int64_t sorted_intersection_size(const std::vector<Arc>& a, const std::vector<Arc>& b) {
    std::int64_t count = 0;
    std::size_t i = 0, j = 0;
    while (i < a.size() && j < b.size()) {
        if (a[i].to < b[j].to) ++i;
        else if (a[i].to > b[j].to) ++j;
        else { ++count; ++i; ++j; }
    }
    return count;
}

}  // namespace

std::int64_t triad_count(const CommGraph& g, int node) {
    if (node < 0 || node >= g.num_nodes()) throw std::out_of_range("node index");
    std::int64_t twice = 0;
    for (const auto& a : g.und_arcs(node))
        twice += sorted_intersection_size(g.und_arcs(node), g.und_arcs(a.to));
    return twice / 2;
}

std::int64_t triangle_count(const CommGraph& g) {
    std::int64_t total = 0;
    for (int i = 0; i < g.num_nodes(); ++i) total += triad_count(g, i);
    return total / 3;
}

std::vector<double> eigenvector_centrality(const CommGraph& g, bool weighted,
                                           double tol, int max_iter) {
    const int n = g.num_nodes();
    if (n == 0) throw std::invalid_argument("empty graph");
    std::vector<double> result(n, 0.0);

    std::vector<std::vector<int>> comps(g.num_components());
    for (int i = 0; i < n; ++i) comps[g.component_of()[i]].push_back(i);

    for (const auto& comp : comps) {
        if (comp.size() == 1) {
            // Isolated node: zero adjacency block, no influence.
            result[comp[0]] = 0.0;
            continue;
        }
        std::vector<int> local(n, -1);
        for (std::size_t k = 0; k < comp.size(); ++k) local[comp[k]] = static_cast<int>(k);

        const std::size_t m = comp.size();
        // Shift by 1 + max weighted degree: A + cI is positive definite
        // (Gershgorin bounds the spectrum by the max row sum), so power
        // iteration cannot oscillate between the +/-lambda pair of
        // bipartite-like blocks even when the weights make lambda_1 >> 1.
        // The eigenvectors are unchanged by the shift.
        double shift = 0.0;
        for (int node : comp) {
            double row = 0.0;
            for (const auto& a : g.und_arcs(node)) row += weighted ? a.weight : 1.0;
            shift = std::max(shift, row);
        }
        shift += 1.0;
        std::vector<double> v(m, 1.0 / std::sqrt(static_cast<double>(m)));
        std::vector<double> next(m);
        double delta = 0.0;
        bool converged = false;
        for (int iter = 0; iter < max_iter; ++iter) {
            for (std::size_t k = 0; k < m; ++k) {
                double s = shift * v[k];
                for (const auto& a : g.und_arcs(comp[k]))
                    s += (weighted ? a.weight : 1.0) * v[local[a.to]];
                next[k] = s;
            }
            double norm = 0.0;
            double lambda = 0.0;  // Rayleigh quotient v'(A + cI)v, v unit
            for (std::size_t k = 0; k < m; ++k) {
                norm += next[k] * next[k];
                lambda += next[k] * v[k];
            }
            norm = std::sqrt(norm);
            // Relative residual ||(A + cI)v - lambda v|| / lambda. When the
            // top two eigenvalues of a component are nearly equal, the
            // iterate stabilizes inside their span long before successive
            // iterates stop moving, so the residual is the reliable test.
            double resid = 0.0;
            delta = 0.0;
            for (std::size_t k = 0; k < m; ++k) {
                double r = next[k] - lambda * v[k];
                resid += r * r;
                next[k] /= norm;
                double d = next[k] - v[k];
                delta += d * d;
            }
            resid = std::sqrt(resid) / lambda;
            delta = std::sqrt(delta);
            v.swap(next);
            if (delta < tol || resid < tol) { converged = true; break; }
        }
        if (!converged) throw ConvergenceError(delta);
        for (std::size_t k = 0; k < m; ++k) result[comp[k]] = v[k];
    }
    return result;
}

double farness_centrality(const CommGraph& g, int node) {
    if (node < 0 || node >= g.num_nodes()) throw std::out_of_range("node index");
    if (g.und_arcs(node).empty()) return 0.0;
    std::vector<int> dist(g.num_nodes(), -1);
    std::deque<int> queue;
    dist[node] = 0;
    queue.push_back(node);
    double sum = 0.0;
    std::int64_t reached = 0;
    while (!queue.empty()) {
        int u = queue.front();
        queue.pop_front();
        for (const auto& a : g.und_arcs(u)) {
            if (dist[a.to] < 0) {
                dist[a.to] = dist[u] + 1;
                sum += dist[a.to];
                ++reached;
                queue.push_back(a.to);
            }
        }
    }
    return reached == 0 ? 0.0 : sum / static_cast<double>(reached);
}

std::vector<BorrowerGraphMetrics> metrics_table(const CommGraph& g,
                                                const MetricsOptions& opt) {
    auto borrowers = g.borrower_indices();
    std::vector<double> eigen;
    if (!borrowers.empty())
        eigen = eigenvector_centrality(g, opt.weighted_eigen, opt.eigen_tol,
                                       opt.eigen_max_iter);
    std::vector<BorrowerGraphMetrics> rows;
    rows.reserve(borrowers.size());
    for (int i : borrowers) {
        BorrowerGraphMetrics r;
        r.borrower_id = g.node_id(i);
        auto d = degree_metrics(g, i);
        r.out_edges = d.out_edges;
        r.in_edges = d.in_edges;
        r.dur = d.dur;
        r.triads = triad_count(g, i);
        r.eigen = eigen[i];
        r.farness = farness_centrality(g, i);
        rows.push_back(std::move(r));
    }
    std::sort(rows.begin(), rows.end(),
              [](const auto& a, const auto& b) { return a.borrower_id < b.borrower_id; });
    return rows;
}

void write_metrics_csv(const std::string& path,
                       const std::vector<BorrowerGraphMetrics>& rows) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "borrower_id,out_edges,in_edges,triads,eigen,farness,dur\n";
    f.precision(15);
    for (const auto& r : rows)
        f << r.borrower_id << ',' << r.out_edges << ',' << r.in_edges << ','
          << r.triads << ',' << r.eigen << ',' << r.farness << ',' << r.dur << '\n';
}

std::vector<BorrowerGraphMetrics> read_metrics_csv(const std::string& path) {
    auto t = csv::read_file(path);
    int cb = t.column("borrower_id"), co = t.column("out_edges"), ci = t.column("in_edges");
    int ct = t.column("triads"), ce = t.column("eigen"), cf = t.column("farness");
    int cd = t.column("dur");
    if (cb < 0 || co < 0 || ci < 0 || ct < 0 || ce < 0 || cf < 0 || cd < 0)
        throw std::runtime_error("metrics.csv: missing required column");
    std::vector<BorrowerGraphMetrics> rows;
    rows.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        BorrowerGraphMetrics r;
        r.borrower_id = row[cb];
        r.out_edges = std::stoll(row[co]);
        r.in_edges = std::stoll(row[ci]);
        r.triads = std::stoll(row[ct]);
        r.eigen = std::stod(row[ce]);
        r.farness = std::stod(row[cf]);
        r.dur = std::stod(row[cd]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace lendgraph::graph
