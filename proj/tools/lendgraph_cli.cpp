// lendgraph: command-line frontend for the credit-signal pipeline.
//
// Subcommands mirror the pipeline stages (ingest, graph, scalefree, geo,
// fit, select, cv, ziptest, influence, simulate) plus `run` for the whole
// sequence and `report` for rendering a completed run directory.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numeric>

#include <CLI11.hpp>
#include <json.hpp>

#include "lendgraph/geo.hpp"
#include "lendgraph/graph.hpp"
#include "lendgraph/ingest.hpp"
#include "lendgraph/join.hpp"
#include "lendgraph/pipeline.hpp"
#include "lendgraph/scalefree.hpp"
#include "lendgraph/synthgen.hpp"
#include "lendgraph/zinf.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace lendgraph;

namespace {

bool g_verbose = false;

void note(const std::string& msg) {
    if (g_verbose) std::cerr << "[lendgraph] " << msg << "\n";
}

void write_text(const std::string& path, const std::string& text) {
    fs::create_directories(fs::path(path).parent_path().empty()
                               ? fs::path(".")
                               : fs::path(path).parent_path());
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (text.empty() || text.back() != '\n') f << '\n';
}

void emit(const std::string& out_path, const std::string& text) {
    if (out_path.empty())
        std::cout << text << "\n";
    else
        write_text(out_path, text);
}

ingest::IdentifierRules load_rules(const std::string& path) {
    return path.empty() ? ingest::IdentifierRules::defaults()
                        : ingest::IdentifierRules::from_json_file(path);
}

stats::ObservationTable load_rows(const std::string& path) {
    note("loading rows from " + path);
    return stats::read_rows_csv(path);
}

// Resolves a named predictor set against the fixed rows.csv layout.
std::vector<int> spec_columns(const stats::ObservationTable& table,
                              const std::string& spec) {
    for (const auto& s : table.ladder_specs())
        if (s.name == spec) return s.columns;
    throw CLI::ValidationError("--spec", "unknown spec '" + spec + "'");
}

struct Design {
    Eigen::MatrixXd X;
    std::vector<std::string> names;
};

Design subset(const stats::ObservationTable& table, const std::vector<int>& cols) {
    Design d;
    d.X.resize(table.design.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        d.X.col(static_cast<Eigen::Index>(j)) = table.design.col(cols[j]);
        d.names.push_back(table.columns[cols[j]]);
    }
    return d;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"P2P lending credit-signal pipeline"};
    app.require_subcommand(1);
    app.add_flag("--verbose", g_verbose, "log stage progress to stderr");

    // ---- ingest ----------------------------------------------------------
    std::string in_comms, in_loans, rules_path, out_dir = "out";
    auto* c_ingest = app.add_subcommand("ingest", "clean raw comms and aggregate dyads");
    c_ingest->add_option("--comms", in_comms, "comms.csv path")->required();
    c_ingest->add_option("--loans", in_loans, "loans.csv path");
    c_ingest->add_option("--rules", rules_path, "identifier rules JSON");
    c_ingest->add_option("--out-dir", out_dir, "output directory");

    // ---- graph -----------------------------------------------------------
    std::string in_edges;
    bool unweighted_eigen = false;
    auto* c_graph = app.add_subcommand("graph", "borrower graph metrics from edges.csv");
    c_graph->add_option("--edges", in_edges, "edges.csv path")->required();
    c_graph->add_option("--loans", in_loans, "loans.csv (marks borrower nodes)")->required();
    c_graph->add_flag("--unweighted-eigen", unweighted_eigen,
                      "binary adjacency for eigenvector centrality");
    c_graph->add_option("--out-dir", out_dir, "output directory");

    // ---- scalefree ---------------------------------------------------------
    std::string degree_mode = "total", out_path;
    int trials = 0;
    double fraction = 0.1;
    std::uint64_t seed = 1;
    double xmin_fixed = 0.0;
    auto* c_sf = app.add_subcommand("scalefree", "power-law degree-tail fit");
    c_sf->add_option("--edges", in_edges, "edges.csv path")->required();
    c_sf->add_option("--mode", degree_mode, "total|in|out")
        ->check(CLI::IsMember({"total", "in", "out"}));
    c_sf->add_option("--xmin", xmin_fixed, "fix xmin instead of scanning");
    c_sf->add_option("--trials", trials, "node-removal perturbation trials");
    c_sf->add_option("--fraction", fraction, "removal fraction per trial");
    c_sf->add_option("--seed", seed, "RNG seed");
    c_sf->add_option("--out", out_path, "output JSON (default stdout)");

    // ---- geo ---------------------------------------------------------------
    std::string in_pings, in_pois, vocab_path;
    double radius_m = 50.0;
    auto* c_geo = app.add_subcommand("geo", "POI counts and timing per ping");
    c_geo->add_option("--pings", in_pings, "pings.csv path")->required();
    c_geo->add_option("--pois", in_pois, "pois.csv path")->required();
    c_geo->add_option("--loans", in_loans, "loans.csv path")->required();
    c_geo->add_option("--vocab", vocab_path, "category vocabulary file")->required();
    c_geo->add_option("--radius", radius_m, "count radius in meters");
    c_geo->add_option("--out-dir", out_dir, "output directory");

    // ---- fit ---------------------------------------------------------------
    std::string rows_path, spec_name = "all";
    auto* c_fit = app.add_subcommand("fit", "OLS on a named predictor set");
    c_fit->add_option("--rows", rows_path, "rows.csv path")->required();
    c_fit->add_option("--spec", spec_name,
                      "naive|graph|location|graph+location|loan|all|default");
    c_fit->add_option("--out", out_path, "output JSON (default stdout)");

    // ---- select -------------------------------------------------------------
    std::string direction = "backward";
    auto* c_sel = app.add_subcommand("select", "stepwise AIC feature selection");
    c_sel->add_option("--rows", rows_path, "rows.csv path")->required();
    c_sel->add_option("--direction", direction, "backward|forward")
        ->check(CLI::IsMember({"backward", "forward"}));
    c_sel->add_option("--out", out_path, "output JSON (default stdout)");

    // ---- cv -------------------------------------------------------------------
    int k_folds = 10;
    auto* c_cv = app.add_subcommand("cv", "k-fold cross-validated MSE");
    c_cv->add_option("--rows", rows_path, "rows.csv path")->required();
    c_cv->add_option("--spec", spec_name, "predictor set to evaluate");
    c_cv->add_option("--k", k_folds, "number of folds");
    c_cv->add_option("--seed", seed, "shuffle seed");
    c_cv->add_option("--out", out_path, "output JSON (default stdout)");

    // ---- ziptest ---------------------------------------------------------------
    auto* c_zip = app.add_subcommand("ziptest",
                                     "zero-inflated Poisson and Tobit intercept fits "
                                     "with Vuong comparisons");
    c_zip->add_option("--rows", rows_path, "rows.csv path")->required();
    c_zip->add_option("--out", out_path, "output JSON (default stdout)");

    // ---- influence ---------------------------------------------------------------
    int top_n = 40;
    auto* c_inf = app.add_subcommand("influence", "Cook's distance ranking");
    c_inf->add_option("--rows", rows_path, "rows.csv path")->required();
    c_inf->add_option("--top", top_n, "observations to report");
    c_inf->add_option("--out", out_path, "output JSON (default stdout)");

    // ---- simulate ---------------------------------------------------------------
    std::string gen_config_path;
    auto* c_sim = app.add_subcommand("simulate", "generate a synthetic input corpus");
    c_sim->add_option("--config", gen_config_path, "generator config JSON");
    c_sim->add_option("--vocab", vocab_path, "category vocabulary file")->required();
    c_sim->add_option("--seed", seed, "generator seed");
    c_sim->add_option("--out-dir", out_dir, "output directory");

    // ---- run ---------------------------------------------------------------------
    std::string pipe_config_path, input_dir;
    bool per_borrower = false;
    auto* c_run = app.add_subcommand("run", "full pipeline: inputs to reports");
    c_run->add_option("--config", pipe_config_path, "pipeline config JSON");
    c_run->add_option("--input-dir", input_dir,
                      "directory with comms/loans/pings/pois CSVs "
                      "(omit to synthesize inputs)");
    c_run->add_option("--gen-config", gen_config_path, "generator config JSON");
    c_run->add_option("--vocab", vocab_path, "category vocabulary file");
    c_run->add_option("--rules", rules_path, "identifier rules JSON");
    c_run->add_option("--radius", radius_m, "POI count radius in meters");
    c_run->add_flag("--per-borrower", per_borrower,
                    "aggregate location features to one row per borrower");
    c_run->add_option("--trials", trials, "scale-free perturbation trials");
    c_run->add_option("--seed", seed, "pipeline seed");
    c_run->add_option("--out-dir", out_dir, "run output directory");

    // ---- report ---------------------------------------------------------------------
    std::string run_dir;
    bool json_out = false;
    auto* c_rep = app.add_subcommand("report", "render ladder/CV/influence summary");
    c_rep->add_option("--run-dir", run_dir, "completed run directory")->required();
    c_rep->add_flag("--json", json_out, "emit JSON instead of text");
    c_rep->add_option("--out", out_path, "output path (default stdout)");

    // Let global flags like --verbose appear after the subcommand name.
    for (auto* sub : app.get_subcommands([](const CLI::App*) { return true; }))
        sub->fallthrough();

    CLI11_PARSE(app, argc, argv);

    try {
        if (*c_ingest) {
            auto rules = load_rules(rules_path);
            auto comms = ingest::parse_comms(csv::read_file(in_comms), rules);
            auto agg = ingest::aggregate_dyads(comms.events);
            comms.report.self_loops_dropped = agg.self_loops_dropped;
            fs::create_directories(out_dir);
            ingest::write_edges_csv(out_dir + "/edges.csv", agg.edges);
            write_text(out_dir + "/report.json", comms.report.to_json());
            if (!in_loans.empty()) {
                auto loans = ingest::parse_loans(csv::read_file(in_loans), rules);
                note("loans parsed: " + std::to_string(loans.loans.size()) +
                     " kept, " + std::to_string(loans.rejected) + " rejected");
            }
            note("edges: " + std::to_string(agg.edges.size()));
        } else if (*c_graph) {
            auto rules = load_rules(rules_path);
            auto edges = ingest::read_edges_csv(in_edges);
            auto loans = ingest::parse_loans(csv::read_file(in_loans), rules);
            auto g = graph::CommGraph::build(edges, loans.loans);
            graph::MetricsOptions opt;
            opt.weighted_eigen = !unweighted_eigen;
            opt.eigen_max_iter = 300000;
            auto metrics = graph::metrics_table(g, opt);
            fs::create_directories(out_dir);
            graph::write_metrics_csv(out_dir + "/metrics.csv", metrics);
            note("metrics rows: " + std::to_string(metrics.size()));
        } else if (*c_sf) {
            auto edges = ingest::read_edges_csv(in_edges);
            auto g = graph::CommGraph::build(edges, {});
            auto mode = degree_mode == "in"    ? scalefree::DegreeMode::In
                        : degree_mode == "out" ? scalefree::DegreeMode::Out
                                               : scalefree::DegreeMode::Total;
            scalefree::FitOptions opt;
            if (c_sf->count("--xmin")) opt.xmin = xmin_fixed;
            auto degrees = scalefree::degree_sequence(g, mode);
            auto fit = scalefree::fit_power_law(degrees, opt);
            json out;
            out["alpha"] = fit.alpha;
            out["xmin"] = fit.xmin;
            out["n_tail"] = fit.n_tail;
            out["ks_stat"] = fit.ks_stat;
            if (trials > 0) {
                auto pert = scalefree::perturb_exponent(g, mode, fraction, trials, seed);
                out["perturbed_alphas"] = pert.alphas;
                out["degenerate_trials"] = pert.degenerate_trials;
            }
            emit(out_path, out.dump(2));
        } else if (*c_geo) {
            auto rules = load_rules(rules_path);
            auto vocab = geo::Vocabulary::from_file(vocab_path);
            auto pings = geo::parse_pings(csv::read_file(in_pings));
            auto pois = geo::parse_pois(csv::read_file(in_pois));
            auto loans = ingest::parse_loans(csv::read_file(in_loans), rules);
            auto loc = geo::location_features(pings, pois, loans.loans, vocab, radius_m);
            fs::create_directories(out_dir);
            geo::write_locfeat_csv(out_dir + "/locfeat.csv", loc.rows, vocab);
            note("location rows: " + std::to_string(loc.rows.size()) +
                 ", rejected POIs: " + std::to_string(loc.rejected_pois));
        } else if (*c_fit) {
            auto table = load_rows(rows_path);
            if (spec_name == "default") {
                emit(out_path, pipeline::fit_json_text(stats::fit_default_model(table)));
            } else {
                auto d = subset(table, spec_columns(table, spec_name));
                emit(out_path,
                     pipeline::fit_json_text(stats::ols_fit(d.X, table.response, d.names)));
            }
        } else if (*c_sel) {
            auto table = load_rows(rows_path);
            auto d = subset(table, spec_columns(table, "all"));
            auto dir = direction == "forward" ? stats::StepDirection::Forward
                                              : stats::StepDirection::Backward;
            auto sel = stats::stepwise_aic(d.X, table.response, d.names, dir);
            json out;
            out["selected"] = json::array();
            for (int c : sel.selected) out["selected"].push_back(d.names[c]);
            out["removed"] = sel.removed;
            out["aic_trace"] = sel.aic_trace;
            out["fit"] = json::parse(pipeline::fit_json_text(sel.fit));
            emit(out_path, out.dump(2));
        } else if (*c_cv) {
            auto table = load_rows(rows_path);
            auto d = subset(table, spec_columns(table, spec_name));
            auto cv = stats::kfold_cv(d.X, table.response, d.names, k_folds, seed);
            json out;
            out["spec"] = spec_name;
            out["k"] = k_folds;
            out["seed"] = seed;
            out["fold_mse"] = cv.fold_mse;
            out["mean_mse"] = cv.mean_mse;
            out["small_fold_warning"] = cv.small_fold_warning;
            emit(out_path, out.dump(2));
        } else if (*c_zip) {
            auto table = load_rows(rows_path);
            std::vector<std::int64_t> counts(table.response.size());
            for (Eigen::Index i = 0; i < table.response.size(); ++i)
                counts[i] = static_cast<std::int64_t>(std::llround(table.response[i]));
            auto zip = stats::fit_zip_intercept_only(counts);
            double lam = std::accumulate(counts.begin(), counts.end(), 0.0) /
                         static_cast<double>(counts.size());
            std::vector<double> pois_ll(counts.size());
            for (std::size_t i = 0; i < counts.size(); ++i)
                pois_ll[i] = -lam + static_cast<double>(counts[i]) * std::log(lam) -
                             std::lgamma(static_cast<double>(counts[i]) + 1.0);
            auto vuong = stats::vuong_test(zip.pointwise_loglik, pois_ll);
            Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(table.response.size(), 1);
            auto tobit = stats::fit_tobit(ones, table.response);
            json out;
            out["zip"] = {{"log_lambda", zip.log_lambda},
                          {"logit_pi", zip.logit_pi},
                          {"se_log_lambda", zip.se_log_lambda},
                          {"se_logit_pi", zip.se_logit_pi},
                          {"loglik", zip.loglik},
                          {"pi_boundary", zip.pi_boundary}};
            out["vuong_zip_vs_poisson"] = {{"z", vuong.z},
                                           {"p", vuong.p_value},
                                           {"indeterminate", vuong.indeterminate}};
            out["tobit"] = {{"intercept", tobit.coef[0]},
                            {"log_scale", tobit.log_scale},
                            {"se_intercept", tobit.se[0]},
                            {"se_log_scale", tobit.se_log_scale},
                            {"loglik", tobit.loglik}};
            emit(out_path, out.dump(2));
        } else if (*c_inf) {
            auto table = load_rows(rows_path);
            auto d = subset(table, spec_columns(table, "all"));
            auto fit = stats::ols_fit(d.X, table.response, d.names);
            auto cooks = stats::cooks_distance(fit);
            std::vector<std::size_t> order(cooks.d.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(),
                             [&](std::size_t a, std::size_t b) {
                                 return cooks.d[a] > cooks.d[b];
                             });
            json out = json::array();
            for (std::size_t i = 0;
                 i < std::min<std::size_t>(static_cast<std::size_t>(top_n), order.size());
                 ++i)
                out.push_back({{"row", order[i]},
                               {"borrower_id", table.borrower_ids[order[i]]},
                               {"cooks_d", cooks.d[order[i]]}});
            emit(out_path, json({{"top_observations", out}}).dump(2));
        } else if (*c_sim) {
            auto cfg = gen_config_path.empty()
                           ? synthgen::GenConfig::defaults()
                           : synthgen::GenConfig::from_json_file(gen_config_path);
            if (c_sim->count("--seed")) cfg.seed = seed;
            auto vocab = geo::Vocabulary::from_file(vocab_path);
            note("generating graph: " + std::to_string(cfg.n_contacts) + " contacts");
            auto edges = synthgen::generate_ba_graph(cfg.n_contacts, cfg.ba_m,
                                                     cfg.seed, cfg);
            auto g = graph::CommGraph::build(edges, {});
            auto loans = synthgen::generate_loans(g, cfg, cfg.seed);
            auto geo_data = synthgen::generate_geo(loans.loans, loans.latent_stress,
                                                   vocab, cfg, cfg.seed);
            auto events = synthgen::expand_events(edges, cfg, cfg.seed);
            fs::create_directories(out_dir);
            synthgen::write_comms_csv(out_dir + "/comms.csv", events);
            synthgen::write_loans_csv(out_dir + "/loans.csv", loans.loans);
            synthgen::write_pings_csv(out_dir + "/pings.csv", geo_data.pings);
            synthgen::write_pois_csv(out_dir + "/pois.csv", geo_data.pois);
            note("events: " + std::to_string(events.size()) +
                 ", loans: " + std::to_string(loans.loans.size()));
        } else if (*c_run) {
            pipeline::PipelineConfig cfg;
            if (!pipe_config_path.empty()) {
                std::ifstream f(pipe_config_path);
                if (!f) throw std::runtime_error("cannot open " + pipe_config_path);
                json j;
                f >> j;
                cfg.input_dir = j.value("input_dir", "");
                cfg.out_dir = j.value("out_dir", "");
                cfg.rules_path = j.value("rules", "");
                cfg.vocab_path = j.value("vocab", "");
                cfg.radius_m = j.value("radius_m", 50.0);
                cfg.weighted_eigen = j.value("weighted_eigen", true);
                cfg.per_borrower = j.value("per_borrower", false);
                cfg.scalefree_perturb_trials = j.value("perturb_trials", 0);
                cfg.scalefree_perturb_fraction = j.value("perturb_fraction", 0.1);
                cfg.seed = j.value("seed", std::uint64_t{1});
                if (j.contains("gen")) {
                    if (j["gen"].is_string())
                        cfg.gen_config = synthgen::GenConfig::from_json_file(
                            j["gen"].get<std::string>());
                    else
                        cfg.gen_config = synthgen::GenConfig::defaults();
                }
            }
            if (c_run->count("--input-dir")) cfg.input_dir = input_dir;
            if (c_run->count("--out-dir") || cfg.out_dir.empty()) cfg.out_dir = out_dir;
            if (c_run->count("--rules")) cfg.rules_path = rules_path;
            if (c_run->count("--vocab")) cfg.vocab_path = vocab_path;
            if (c_run->count("--radius")) cfg.radius_m = radius_m;
            if (per_borrower) cfg.per_borrower = true;
            if (c_run->count("--trials")) cfg.scalefree_perturb_trials = trials;
            if (c_run->count("--seed")) cfg.seed = seed;
            if (c_run->count("--gen-config"))
                cfg.gen_config = synthgen::GenConfig::from_json_file(gen_config_path);
            if (cfg.input_dir.empty() && !cfg.gen_config)
                cfg.gen_config = synthgen::GenConfig::defaults();
            pipeline::run_pipeline(cfg);
            note("run complete: " + cfg.out_dir + "/manifest.json");
        } else if (*c_rep) {
            emit(out_path, pipeline::report_ladder(run_dir, json_out));
        }
    } catch (const std::exception& e) {
        std::cerr << "lendgraph: error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
