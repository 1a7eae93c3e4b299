#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include <Eigen/Dense>

#include "lendgraph/geo.hpp"
#include "lendgraph/graph.hpp"
#include "lendgraph/ols.hpp"
#include "lendgraph/synthgen.hpp"

namespace {

using namespace lendgraph;

synthgen::GenConfig bench_config() {
    auto cfg = synthgen::GenConfig::defaults();
    cfg.seed = 7;
    return cfg;
}

void BM_GenerateBaGraph(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto cfg = bench_config();
    for (auto _ : state) {
        auto edges = synthgen::generate_ba_graph(n, cfg.ba_m, 7, cfg);
        benchmark::DoNotOptimize(edges);
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_GenerateBaGraph)->Arg(1000)->Arg(10000)->Arg(100000);

void BM_MetricsTable(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    auto cfg = bench_config();
    cfg.n_contacts = n;
    cfg.n_borrowers = n / 4;
    auto edges = synthgen::generate_ba_graph(n, cfg.ba_m, 7, cfg);
    auto g0 = graph::CommGraph::build(edges, {});
    auto loans = synthgen::generate_loans(g0, cfg, 7);
    auto g = graph::CommGraph::build(edges, loans.loans);
    graph::MetricsOptions opt;
    opt.eigen_max_iter = 300000;
    for (auto _ : state) {
        auto rows = graph::metrics_table(g, opt);
        benchmark::DoNotOptimize(rows);
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_MetricsTable)->Arg(1000)->Arg(5000);

void BM_SpatialIndexQueries(benchmark::State& state) {
    const int n_pois = static_cast<int>(state.range(0));
    auto vocab = geo::Vocabulary::from_file(std::string(LENDGRAPH_DATA_DIR) +
                                            "/categories.txt");
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dlat(14.0, 15.0), dlon(120.0, 121.0);
    std::uniform_int_distribution<int> dcat(0, vocab.size() - 1);
    std::vector<PoiEntry> pois(n_pois);
    for (auto& p : pois) {
        p.lat = dlat(rng);
        p.lon = dlon(rng);
        p.category = vocab.names()[dcat(rng)];
    }
    geo::SpatialIndex index(pois, vocab);
    std::vector<geo::Point> queries(1000);
    for (auto& q : queries) q = {dlat(rng), dlon(rng)};
    for (auto _ : state) {
        std::int64_t total = 0;
        for (const auto& q : queries) {
            auto counts = index.counts_within(q, 200.0);
            total += counts[0];
        }
        benchmark::DoNotOptimize(total);
    }
    state.SetItemsProcessed(state.iterations() * queries.size());
}
BENCHMARK(BM_SpatialIndexQueries)->Arg(10000)->Arg(100000);

void BM_OlsFit(benchmark::State& state) {
    const int n = static_cast<int>(state.range(0));
    const int p = 40;
    std::mt19937_64 rng(5);
    std::normal_distribution<double> norm(0.0, 1.0);
    Eigen::MatrixXd X(n, p);
    Eigen::VectorXd y(n);
    for (int i = 0; i < n; ++i) {
        X(i, 0) = 1.0;
        for (int j = 1; j < p; ++j) X(i, j) = norm(rng);
        y(i) = X(i, 1) * 2.0 - X(i, 2) + norm(rng);
    }
    std::vector<std::string> names(p);
    for (int j = 0; j < p; ++j) names[j] = "x" + std::to_string(j);
    for (auto _ : state) {
        auto fit = stats::ols_fit(X, y, names);
        benchmark::DoNotOptimize(fit);
    }
    state.SetItemsProcessed(state.iterations() * n);
}
BENCHMARK(BM_OlsFit)->Arg(1000)->Arg(20000);

}  // namespace

BENCHMARK_MAIN();
