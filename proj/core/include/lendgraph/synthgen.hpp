#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "lendgraph/geo.hpp"
#include "lendgraph/graph.hpp"
#include "lendgraph/types.hpp"

namespace lendgraph::synthgen {

// Planted association between a business category and the borrowers'
// latent financial-stress score: POIs of this category concentrate near
// anchors of borrowers whose score has the matching sign.
struct PlantedCategory {
    std::string category;
    double loading = 1.0;  // expected nearby POIs per unit of latent score
};

struct GenConfig {
    int n_contacts = 12000;      // total graph nodes
    int n_borrowers = 784;
    int ba_m = 2;
    double out_orientation_p = 0.5;  // P(edge oriented new -> existing)

    // per-event duration model
    double sms_share = 0.6;
    double voice_log_mean = 4.5;  // lognormal, seconds
    double voice_log_sd = 1.0;
    double mean_events_per_dyad = 2.0;

    // default link: logit = beta0 + beta_eigen*z(eigen) + beta_out*z(out)
    //               + beta_dur*z(dur) + beta_latent*stress, with z()
    //               standardized across borrowers and stress ~ N(0,1).
    //               beta0 is calibrated against the target rate.
    double beta_eigen = 1.2;
    double beta_out = -0.8;
    double beta_dur = 0.9;
    double beta_latent = 2.8;
    double target_default_rate = 0.1939;

    double amount_log_mean = 9.2;   // lognormal currency units
    double amount_log_sd = 0.6;
    double defaulter_amount_scale = 1.0;  // >1 skews value share toward defaults
    double interest_min = 0.10;
    double interest_max = 0.40;

    // geography
    double center_lat = 14.6;
    double center_lon = 121.0;
    double anchor_spread_m = 20000.0;
    double ping_jitter_m = 30.0;
    int pings_per_borrower = 103;
    double background_poi_rate = 0.05;  // expected background POIs near each anchor, per category
    std::vector<PlantedCategory> planted;  // defaults set in defaults()

    // study window
    std::string contract_start = "2012-12-15";
    std::string contract_end = "2014-08-11";
    std::string comm_start = "2014-01-01";
    std::string comm_end = "2015-06-27";

    std::uint64_t seed = 1;

    static GenConfig defaults();
    static GenConfig from_json_file(const std::string& path);
    std::string to_json() const;
};

// Preferential-attachment growth: nodes m+1..n-1 each attach m edges to
// existing nodes with probability proportional to degree; the first m+1
// nodes form a complete seed clique. Weights follow the per-event duration
// model. Deterministic under seed.
std::vector<EdgeRecord> generate_ba_graph(int n, int m, std::uint64_t seed,
                                          const GenConfig& cfg = GenConfig::defaults());

struct LoanGen {
    std::vector<LoanRecord> loans;
    std::vector<double> latent_stress;  // parallel to loans; drives geo planting
    double calibrated_beta0 = 0.0;
};

// Samples borrowers from the graph's nodes and draws defaults from the
// configured logistic link; beta0 is calibrated by bisection so the expected
// default rate hits the target.
LoanGen generate_loans(const graph::CommGraph& g, const GenConfig& cfg,
                       std::uint64_t seed);

struct GeoGen {
    std::vector<GeoPing> pings;
    std::vector<PoiEntry> pois;
};

GeoGen generate_geo(const std::vector<LoanRecord>& loans,
                    const std::vector<double>& latent_stress,
                    const geo::Vocabulary& vocab, const GenConfig& cfg,
                    std::uint64_t seed);

// Expands aggregated edges back into per-event communication records whose
// dyad aggregation reproduces the edge list exactly.
std::vector<CommEvent> expand_events(const std::vector<EdgeRecord>& edges,
                                     const GenConfig& cfg, std::uint64_t seed);

void write_comms_csv(const std::string& path, const std::vector<CommEvent>& events);
void write_loans_csv(const std::string& path, const std::vector<LoanRecord>& loans);
void write_pings_csv(const std::string& path, const std::vector<GeoPing>& pings);
void write_pois_csv(const std::string& path, const std::vector<PoiEntry>& pois);

// Canonical 11-digit identifier for a synthetic node index.
NodeId node_name(int index);

}  // namespace lendgraph::synthgen
