#include "lendgraph/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "lendgraph/ingest.hpp"
#include "lendgraph/join.hpp"
#include "lendgraph/scalefree.hpp"
#include "lendgraph/zinf.hpp"

namespace lendgraph::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const char* kVersion = "0.1.0";

std::string stars(double p) {
    if (p < 0.001) return "***";
    if (p < 0.01) return "**";
    if (p < 0.05) return "*";
    if (p < 0.1) return ".";
    return "";
}

json fit_to_json(const stats::OlsFit& fit) {
    json coeffs = json::array();
    for (std::size_t j = 0; j < fit.names.size(); ++j) {
        json row;
        row["predictor"] = fit.names[j];
        if (fit.dropped[j]) {
            row["estimate"] = nullptr;  // NA: exactly collinear column
            row["se"] = nullptr;
            row["t"] = nullptr;
            row["p"] = nullptr;
            row["stars"] = "";
        } else {
            row["estimate"] = fit.coef[j];
            row["se"] = fit.se[j];
            row["t"] = fit.t[j];
            row["p"] = fit.p[j];
            row["stars"] = stars(fit.p[j]);
        }
        coeffs.push_back(std::move(row));
    }
    json j;
    j["coefficients"] = std::move(coeffs);
    j["r_squared"] = fit.r2;
    j["adj_r_squared"] = fit.adj_r2;
    j["f_statistic"] = fit.f_stat;
    j["f_df1"] = fit.f_df1;
    j["f_df2"] = fit.f_df2;
    j["f_p_value"] = fit.f_p;
    j["n"] = fit.n;
    j["aic"] = fit.aic();
    j["degenerate_response"] = fit.degenerate_response;
    return j;
}

void write_text(const std::string& path, const std::string& text) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << text;
    if (text.empty() || text.back() != '\n') f << '\n';
}

json load_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open " + path);
    json j;
    f >> j;
    return j;
}

}  // namespace

std::string fit_json_text(const stats::OlsFit& fit) { return fit_to_json(fit).dump(2); }

std::string file_hash(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("hash: cannot open " + path);
    std::uint64_t h = 14695981039346656037ULL;
    char buf[1 << 16];
    while (f) {
        f.read(buf, sizeof(buf));
        for (std::streamsize i = 0; i < f.gcount(); ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 1099511628211ULL;
        }
    }
    char out[17];
    std::snprintf(out, sizeof(out), "%016llx", static_cast<unsigned long long>(h));
    return out;
}

std::string run_pipeline(const PipelineConfig& config) {
    if (config.out_dir.empty()) throw std::runtime_error("config error: out_dir required");
    if (config.vocab_path.empty() || !fs::exists(config.vocab_path))
        throw std::runtime_error("config error: vocabulary file missing");

    std::string in_dir = config.input_dir;
    if (!config.gen_config) {
        if (in_dir.empty()) throw std::runtime_error("config error: input_dir or gen config required");
        for (const char* name : {"comms.csv", "loans.csv", "pings.csv", "pois.csv"})
            if (!fs::exists(fs::path(in_dir) / name))
                throw std::runtime_error(std::string("config error: missing input ") + name);
    }
    if (!config.rules_path.empty() && !fs::exists(config.rules_path))
        throw std::runtime_error("config error: rules file missing");

    fs::create_directories(config.out_dir);
    auto out = [&](const std::string& name) {
        return (fs::path(config.out_dir) / name).string();
    };

    json manifest;
    manifest["version"] = kVersion;
    manifest["seed"] = config.seed;
    manifest["stages"] = json::array();
    json timings = json::array();

    auto vocab = geo::Vocabulary::from_file(config.vocab_path);
    auto rules = config.rules_path.empty()
                     ? ingest::IdentifierRules::defaults()
                     : ingest::IdentifierRules::from_json_file(config.rules_path);

    std::string failing;
    try {
        auto stage_clock = std::chrono::steady_clock::now();
        auto finish_stage = [&](const std::string& name, json counts) {
            auto now = std::chrono::steady_clock::now();
            double sec = std::chrono::duration<double>(now - stage_clock).count();
            stage_clock = now;
            json s;
            s["name"] = name;
            s["counts"] = std::move(counts);
            manifest["stages"].push_back(std::move(s));
            timings.push_back({{"name", name}, {"seconds", sec}});
        };

        // --- simulate ---------------------------------------------------
        if (config.gen_config) {
            failing = "simulate";
            auto cfg = *config.gen_config;
            cfg.seed = config.seed;
            auto edges = synthgen::generate_ba_graph(cfg.n_contacts, cfg.ba_m, cfg.seed, cfg);
            auto g0 = graph::CommGraph::build(edges, {});
            auto loans = synthgen::generate_loans(g0, cfg, cfg.seed);
            auto geo_data = synthgen::generate_geo(loans.loans, loans.latent_stress,
                                                   vocab, cfg, cfg.seed);
            auto events = synthgen::expand_events(edges, cfg, cfg.seed);
            fs::create_directories(out("inputs"));
            synthgen::write_comms_csv(out("inputs/comms.csv"), events);
            synthgen::write_loans_csv(out("inputs/loans.csv"), loans.loans);
            synthgen::write_pings_csv(out("inputs/pings.csv"), geo_data.pings);
            synthgen::write_pois_csv(out("inputs/pois.csv"), geo_data.pois);
            in_dir = out("inputs");
            finish_stage("simulate", {{"events", events.size()},
                                      {"loans", loans.loans.size()},
                                      {"pings", geo_data.pings.size()},
                                      {"pois", geo_data.pois.size()}});
        }
        auto in = [&](const std::string& name) {
            return (fs::path(in_dir) / name).string();
        };

        // --- ingest -----------------------------------------------------
        failing = "ingest";
        auto comms = ingest::parse_comms(csv::read_file(in("comms.csv")), rules);
        auto loans = ingest::parse_loans(csv::read_file(in("loans.csv")), rules);
        auto agg = ingest::aggregate_dyads(comms.events);
        comms.report.self_loops_dropped = agg.self_loops_dropped;
        ingest::write_edges_csv(out("edges.csv"), agg.edges);
        write_text(out("report.json"), comms.report.to_json());
        finish_stage("ingest", {{"raw_events", comms.report.raw_count},
                                {"kept_events", comms.report.kept_count},
                                {"edges", agg.edges.size()},
                                {"loans", loans.loans.size()},
                                {"loans_rejected", loans.rejected}});

        // --- graph ------------------------------------------------------
        failing = "graph";
        auto g = graph::CommGraph::build(agg.edges, loans.loans);
        graph::MetricsOptions mopt;
        mopt.weighted_eigen = config.weighted_eigen;
        mopt.eigen_max_iter = 300000;
        auto metrics = graph::metrics_table(g, mopt);
        graph::write_metrics_csv(out("metrics.csv"), metrics);
        finish_stage("graph", {{"nodes", g.num_nodes()},
                               {"edges", g.num_edges()},
                               {"borrowers", metrics.size()},
                               {"isolated_borrowers", g.isolated_borrowers().size()}});

        // --- scalefree ---------------------------------------------------
        failing = "scalefree";
        {
            auto degrees = scalefree::degree_sequence(g, scalefree::DegreeMode::Total);
            auto fit = scalefree::fit_power_law(degrees);
            json sf;
            sf["alpha"] = fit.alpha;
            sf["xmin"] = fit.xmin;
            sf["n_tail"] = fit.n_tail;
            sf["ks_stat"] = fit.ks_stat;
            sf["perturbed_alphas"] = json::array();
            if (config.scalefree_perturb_trials > 0) {
                auto pert = scalefree::perturb_exponent(
                    g, scalefree::DegreeMode::Total, config.scalefree_perturb_fraction,
                    config.scalefree_perturb_trials, config.seed);
                sf["perturbed_alphas"] = pert.alphas;
                sf["degenerate_trials"] = pert.degenerate_trials;
            }
            write_text(out("scalefree.json"), sf.dump(2));
        }
        finish_stage("scalefree", json::object());

        // --- geo ----------------------------------------------------------
        failing = "geo";
        auto pings = geo::parse_pings(csv::read_file(in("pings.csv")));
        auto pois = geo::parse_pois(csv::read_file(in("pois.csv")));
        auto loc = geo::location_features(pings, pois, loans.loans, vocab, config.radius_m);
        geo::write_locfeat_csv(out("locfeat.csv"), loc.rows, vocab);
        finish_stage("geo", {{"pings", pings.size()},
                             {"pois", pois.size()},
                             {"rows", loc.rows.size()},
                             {"pings_without_loan", loc.pings_without_loan},
                             {"rejected_pois", loc.rejected_pois}});

        // --- join ----------------------------------------------------------
        failing = "join";
        auto table = stats::join_observations(loans.loans, metrics, loc.rows, vocab,
                                              config.per_borrower);
        stats::write_rows_csv(out("rows.csv"), table);
        stats::write_rows_schema_json(out("rows_schema.json"), table);
        finish_stage("join", {{"rows", table.design.rows()},
                              {"columns", table.columns.size()}});

        // --- fits ----------------------------------------------------------
        failing = "fit";
        auto specs = table.ladder_specs();
        auto ladder = stats::compare_nested(table.design, table.response,
                                            table.columns, specs);
        {
            json l = json::array();
            for (const auto& e : ladder)
                l.push_back({{"spec", e.name}, {"r2", e.r2}, {"adj_r2", e.adj_r2}});
            write_text(out("ladder.json"), json({{"ladder", l}}).dump(2));
        }
        auto full_cols = specs.back().columns;
        Eigen::MatrixXd Xfull(table.design.rows(), full_cols.size());
        std::vector<std::string> full_names;
        for (std::size_t j = 0; j < full_cols.size(); ++j) {
            Xfull.col(j) = table.design.col(full_cols[j]);
            full_names.push_back(table.columns[full_cols[j]]);
        }
        auto full_fit = stats::ols_fit(Xfull, table.response, full_names);
        write_text(out("fit_all.json"), fit_to_json(full_fit).dump(2));
        write_text(out("default_model.json"),
                   fit_to_json(stats::fit_default_model(table)).dump(2));

        failing = "ziptest";
        {
            std::vector<std::int64_t> counts(table.response.size());
            for (Eigen::Index i = 0; i < table.response.size(); ++i)
                counts[i] = static_cast<std::int64_t>(std::llround(table.response[i]));
            auto zip = stats::fit_zip_intercept_only(counts);
            // Plain Poisson rival for the Vuong comparison.
            double lam = std::accumulate(counts.begin(), counts.end(), 0.0) /
                         static_cast<double>(counts.size());
            std::vector<double> pois_ll(counts.size());
            for (std::size_t i = 0; i < counts.size(); ++i)
                pois_ll[i] = -lam + counts[i] * std::log(lam) -
                             std::lgamma(static_cast<double>(counts[i]) + 1.0);
            auto vuong_zip = stats::vuong_test(zip.pointwise_loglik, pois_ll);

            Eigen::MatrixXd ones = Eigen::MatrixXd::Ones(table.response.size(), 1);
            auto tobit = stats::fit_tobit(ones, table.response);
            auto norm_fit = stats::ols_fit(ones, table.response, {"(Intercept)"});
            double s2 = norm_fit.rss / static_cast<double>(norm_fit.n);
            std::vector<double> norm_ll(norm_fit.residuals.size());
            for (std::size_t i = 0; i < norm_ll.size(); ++i)
                norm_ll[i] = -0.5 * (std::log(2.0 * M_PI * s2) +
                                     norm_fit.residuals[i] * norm_fit.residuals[i] / s2);
            auto vuong_tobit = stats::vuong_test(tobit.pointwise_loglik, norm_ll);

            json zt;
            zt["zip"] = {{"log_lambda", zip.log_lambda},
                         {"logit_pi", zip.logit_pi},
                         {"se_log_lambda", zip.se_log_lambda},
                         {"se_logit_pi", zip.se_logit_pi},
                         {"loglik", zip.loglik},
                         {"pi_boundary", zip.pi_boundary}};
            zt["vuong_zip_vs_poisson"] = {{"z", vuong_zip.z},
                                          {"p", vuong_zip.p_value},
                                          {"indeterminate", vuong_zip.indeterminate}};
            zt["tobit"] = {{"intercept", tobit.coef[0]},
                           {"log_scale", tobit.log_scale},
                           {"loglik", tobit.loglik}};
            zt["vuong_tobit_vs_normal"] = {{"z", vuong_tobit.z},
                                           {"p", vuong_tobit.p_value},
                                           {"indeterminate", vuong_tobit.indeterminate}};
            write_text(out("ziptest.json"), zt.dump(2));
        }

        failing = "select";
        auto sel = stats::stepwise_aic(Xfull, table.response, full_names,
                                       stats::StepDirection::Backward);
        {
            json s;
            s["selected"] = json::array();
            for (int c : sel.selected) s["selected"].push_back(full_names[c]);
            s["removed"] = sel.removed;
            s["aic_trace"] = sel.aic_trace;
            s["fit"] = fit_to_json(sel.fit);
            write_text(out("sel.json"), s.dump(2));
        }

        failing = "cv";
        {
            auto cv_full = stats::kfold_cv(Xfull, table.response, full_names, 10,
                                           config.seed);
            Eigen::MatrixXd Xsel(table.design.rows(), sel.selected.size());
            std::vector<std::string> sel_names;
            for (std::size_t j = 0; j < sel.selected.size(); ++j) {
                Xsel.col(j) = Xfull.col(sel.selected[j]);
                sel_names.push_back(full_names[sel.selected[j]]);
            }
            auto cv_sel = stats::kfold_cv(Xsel, table.response, sel_names, 10,
                                          config.seed);
            json c;
            c["full"] = {{"fold_mse", cv_full.fold_mse}, {"mean_mse", cv_full.mean_mse}};
            c["selected"] = {{"fold_mse", cv_sel.fold_mse}, {"mean_mse", cv_sel.mean_mse}};
            c["k"] = 10;
            c["seed"] = config.seed;
            write_text(out("cv.json"), c.dump(2));
        }

        failing = "influence";
        {
            auto cooks = stats::cooks_distance(full_fit);
            std::vector<std::size_t> order(cooks.d.size());
            std::iota(order.begin(), order.end(), 0);
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return cooks.d[a] > cooks.d[b];
            });
            json top = json::array();
            std::size_t limit = std::min<std::size_t>(40, order.size());
            for (std::size_t i = 0; i < limit; ++i) {
                std::size_t r = order[i];
                top.push_back({{"row", r},
                               {"borrower_id", table.borrower_ids[r]},
                               {"cooks_d", cooks.d[r]}});
            }
            // Table-style predictor view: category exposure among the most
            // influential observations.
            std::map<std::string, double> exposure;
            for (std::size_t i = 0; i < limit; ++i)
                for (int j = stats::ObservationTable::kFirstCategory;
                     j < static_cast<int>(table.columns.size()); ++j)
                    exposure[table.columns[j]] += table.design(order[i], j);
            std::vector<std::pair<std::string, double>> ranking(exposure.begin(),
                                                                exposure.end());
            std::stable_sort(ranking.begin(), ranking.end(),
                             [](const auto& a, const auto& b) { return a.second > b.second; });
            json rank = json::array();
            for (std::size_t i = 0; i < std::min<std::size_t>(20, ranking.size()); ++i)
                rank.push_back({{"predictor", ranking[i].first},
                                {"exposure", ranking[i].second}});
            write_text(out("influence.json"),
                       json({{"top_observations", top},
                             {"category_exposure", rank}}).dump(2));
        }
        finish_stage("analysis", {{"selected_predictors", sel.selected.size()}});
        failing.clear();
    } catch (...) {
        manifest["failed_stage"] = failing;
        write_text(out("manifest.json"), manifest.dump(2));
        throw;
    }

    // Content hashes over every artifact, sorted by name for stability.
    json hashes = json::object();
    std::vector<std::string> files;
    for (const auto& entry : fs::recursive_directory_iterator(config.out_dir))
        if (entry.is_regular_file() &&
            entry.path().filename() != "manifest.json" &&
            entry.path().filename() != "timings.json")
            files.push_back(fs::relative(entry.path(), config.out_dir).string());
    std::sort(files.begin(), files.end());
    for (const auto& f : files)
        hashes[f] = file_hash((fs::path(config.out_dir) / f).string());
    manifest["hashes"] = std::move(hashes);
    manifest["timings_file"] = "timings.json";

    std::string text = manifest.dump(2);
    write_text(out("manifest.json"), text);
    // Wall-clock timings live outside the manifest so reruns hash identically.
    write_text(out("timings.json"), timings.dump(2));
    return text;
}

std::string report_ladder(const std::string& run_dir, bool json_out) {
    auto at = [&](const char* name) {
        return (fs::path(run_dir) / name).string();
    };
    json ladder = load_json(at("ladder.json"));
    json cv = load_json(at("cv.json"));
    json influence = load_json(at("influence.json"));

    std::vector<json> rows(ladder["ladder"].begin(), ladder["ladder"].end());
    std::stable_sort(rows.begin(), rows.end(), [](const json& a, const json& b) {
        return a["adj_r2"].get<double>() < b["adj_r2"].get<double>();
    });

    if (json_out) {
        json out;
        out["ladder"] = rows;
        out["cv"] = cv;
        out["influence"] = influence;
        return out.dump(2);
    }

    std::ostringstream os;
    os << "Nested model comparison (adjusted R-squared, ascending)\n";
    os << "  spec                       adj R^2      R^2\n";
    for (const auto& r : rows) {
        char line[128];
        std::snprintf(line, sizeof(line), "  %-25s %8.4f %8.4f\n",
                      r["spec"].get<std::string>().c_str(),
                      r["adj_r2"].get<double>(), r["r2"].get<double>());
        os << line;
    }
    os << "\n10-fold cross validation (MSE)\n";
    char line[160];
    std::snprintf(line, sizeof(line), "  full model:     %.6g\n  selected model: %.6g\n",
                  cv["full"]["mean_mse"].get<double>(),
                  cv["selected"]["mean_mse"].get<double>());
    os << line;
    os << "\nMost influential observations (Cook's distance, top "
       << influence["top_observations"].size() << ")\n";
    for (const auto& t : influence["top_observations"]) {
        std::snprintf(line, sizeof(line), "  row %-8lld borrower %s  D = %.6g\n",
                      static_cast<long long>(t["row"].get<std::int64_t>()),
                      t["borrower_id"].get<std::string>().c_str(),
                      t["cooks_d"].get<double>());
        os << line;
    }
    return os.str();
}

}  // namespace lendgraph::pipeline
