#include <doctest.h>

#include <cmath>
#include <random>
#include <set>

#include <Eigen/Dense>

#include "lendgraph/graph.hpp"

using namespace lendgraph;

namespace {

EdgeRecord edge(NodeId s, NodeId d, double w = 1.0, std::int64_t n = 1) {
    return {std::move(s), std::move(d), w, n};
}

graph::CommGraph star3() {
    // Hub H with leaves A, B, C.
    return graph::CommGraph::build(
        {edge("H", "A"), edge("H", "B"), edge("H", "C")}, {});
}

}  // namespace

TEST_CASE("degree metrics count distinct neighbors, dur sums both directions") {
    auto g = graph::CommGraph::build(
        {edge("A", "B", 100.0, 2), edge("B", "A", 50.0, 1), edge("A", "C", 10.0, 1)},
        {});
    int a = g.index_of("A");
    auto m = graph::degree_metrics(g, a);
    CHECK(m.out_edges == 2);
    CHECK(m.in_edges == 1);
    CHECK(m.dur == doctest::Approx(160.0));
    int c = g.index_of("C");
    auto mc = graph::degree_metrics(g, c);
    CHECK(mc.out_edges == 0);
    CHECK(mc.in_edges == 1);
    CHECK(mc.dur == doctest::Approx(10.0));
}

TEST_CASE("duplicate directed edge is rejected") {
    CHECK_THROWS(graph::CommGraph::build({edge("A", "B"), edge("A", "B")}, {}));
}

TEST_CASE("triads: triangle vs path") {
    auto tri = graph::CommGraph::build(
        {edge("A", "B"), edge("B", "C"), edge("C", "A")}, {});
    CHECK(graph::triad_count(tri, tri.index_of("A")) == 1);
    CHECK(graph::triangle_count(tri) == 1);

    auto path = graph::CommGraph::build({edge("A", "B"), edge("B", "C")}, {});
    CHECK(graph::triad_count(path, path.index_of("B")) == 0);
    CHECK(graph::triangle_count(path) == 0);
}

TEST_CASE("star eigenvector centrality") {
    auto g = star3();
    auto v = graph::eigenvector_centrality(g, /*weighted=*/false);
    double hub = 1.0 / std::sqrt(2.0);
    double leaf = 1.0 / std::sqrt(6.0);
    CHECK(v[g.index_of("H")] == doctest::Approx(hub).epsilon(1e-9));
    for (const char* id : {"A", "B", "C"})
        CHECK(v[g.index_of(id)] == doctest::Approx(leaf).epsilon(1e-9));
}

TEST_CASE("two-node cycle converges despite bipartite structure") {
    auto g = graph::CommGraph::build({edge("A", "B"), edge("B", "A")}, {});
    auto v = graph::eigenvector_centrality(g, false);
    CHECK(v[0] == doctest::Approx(1.0 / std::sqrt(2.0)));
    CHECK(v[1] == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("isolated borrower gets zero eigenvector centrality and farness") {
    LoanRecord loan;
    loan.borrower_id = "Z";
    auto g = graph::CommGraph::build({edge("A", "B")}, {loan});
    REQUIRE(g.contains("Z"));
    auto v = graph::eigenvector_centrality(g, false);
    CHECK(v[g.index_of("Z")] == 0.0);
    CHECK(graph::farness_centrality(g, g.index_of("Z")) == 0.0);
    CHECK(g.isolated_borrowers().size() == 1);
}

TEST_CASE("convergence error carries the last delta") {
    auto g = star3();
    CHECK_THROWS_AS(graph::eigenvector_centrality(g, false, 1e-30, 2),
                    graph::ConvergenceError);
}

TEST_CASE("farness on a path") {
    auto g = graph::CommGraph::build({edge("A", "B"), edge("B", "C")}, {});
    CHECK(graph::farness_centrality(g, g.index_of("A")) == doctest::Approx(1.5));
    CHECK(graph::farness_centrality(g, g.index_of("B")) == doctest::Approx(1.0));
}

TEST_CASE("weights do not change unweighted centrality but change weighted") {
    auto g1 = graph::CommGraph::build(
        {edge("A", "B", 1.0), edge("B", "C", 1.0), edge("C", "A", 1.0)}, {});
    auto g2 = graph::CommGraph::build(
        {edge("A", "B", 9.0), edge("B", "C", 1.0), edge("C", "A", 1.0)}, {});
    auto u1 = graph::eigenvector_centrality(g1, false);
    auto u2 = graph::eigenvector_centrality(g2, false);
    for (int i = 0; i < 3; ++i) CHECK(u1[i] == doctest::Approx(u2[i]));
    auto w2 = graph::eigenvector_centrality(g2, true);
    bool differs = false;
    for (int i = 0; i < 3; ++i)
        if (std::fabs(w2[i] - u2[i]) > 1e-6) differs = true;
    CHECK(differs);
}

TEST_CASE("component labels partition the graph") {
    auto g = graph::CommGraph::build(
        {edge("A", "B"), edge("C", "D"), edge("D", "E")}, {});
    CHECK(g.num_components() == 2);
    const auto& comp = g.component_of();
    CHECK(comp[g.index_of("A")] == comp[g.index_of("B")]);
    CHECK(comp[g.index_of("C")] == comp[g.index_of("E")]);
    CHECK(comp[g.index_of("A")] != comp[g.index_of("C")]);
}

TEST_CASE("metrics table rows are sorted and reconcile with loans") {
    LoanRecord l1, l2;
    l1.borrower_id = "00000000002";
    l2.borrower_id = "00000000001";
    auto g = graph::CommGraph::build(
        {edge("00000000001", "00000000002"), edge("00000000002", "00000000003")},
        {l1, l2});
    auto rows = graph::metrics_table(g);
    REQUIRE(rows.size() == 2);
    CHECK(rows[0].borrower_id == "00000000001");
    CHECK(rows[1].borrower_id == "00000000002");
    CHECK(rows[1].out_edges == 1);
    CHECK(rows[1].in_edges == 1);
}

TEST_CASE("metrics csv round trip") {
    LoanRecord l;
    l.borrower_id = "00000000001";
    auto g = graph::CommGraph::build(
        {edge("00000000001", "00000000002", 123.0, 4)}, {l});
    auto rows = graph::metrics_table(g);
    std::string path = "/tmp/lendgraph_test_metrics.csv";
    graph::write_metrics_csv(path, rows);
    auto back = graph::read_metrics_csv(path);
    REQUIRE(back.size() == rows.size());
    CHECK(back[0].borrower_id == rows[0].borrower_id);
    CHECK(back[0].eigen == doctest::Approx(rows[0].eigen));
    CHECK(back[0].dur == doctest::Approx(rows[0].dur));
}

TEST_CASE("random graphs match dense oracles") {
    std::mt19937_64 rng(4242);
    for (int iter = 0; iter < 30; ++iter) {
        int n = 3 + static_cast<int>(rng() % 12);
        std::uniform_real_distribution<double> w(0.5, 50.0);
        std::vector<EdgeRecord> edges;
        std::set<std::pair<int, int>> used;
        int m = n + static_cast<int>(rng() % (2 * n));
        for (int k = 0; k < m; ++k) {
            int a = static_cast<int>(rng() % n), b = static_cast<int>(rng() % n);
            if (a == b || used.count({a, b})) continue;
            used.insert({a, b});
            edges.push_back(edge("N" + std::to_string(a), "N" + std::to_string(b),
                                 w(rng), 1));
        }
        if (edges.empty()) continue;
        auto g = graph::CommGraph::build(edges, {});
        int nn = g.num_nodes();

        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(nn, nn);
        for (const auto& e : edges) {
            int i = g.index_of(e.src), j = g.index_of(e.dst);
            A(i, j) += e.weight_s;
            A(j, i) += e.weight_s;
        }
        // triads against dense undirected enumeration
        Eigen::MatrixXd B = (A.array() > 0.0).cast<double>();
        for (int i = 0; i < nn; ++i) {
            std::int64_t t = 0;
            for (int a = 0; a < nn; ++a)
                for (int b = a + 1; b < nn; ++b)
                    if (B(i, a) > 0 && B(i, b) > 0 && B(a, b) > 0) ++t;
            CHECK(graph::triad_count(g, i) == t);
        }
    }
}
