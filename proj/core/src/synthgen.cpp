#include "lendgraph/synthgen.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numeric>
#include <random>
#include <stdexcept>

#include <json.hpp>

#include "lendgraph/timeutil.hpp"

namespace lendgraph::synthgen {

namespace {

std::uint64_t fnv1a(std::uint64_t h, const std::string& s) {
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::mt19937_64 edge_rng(std::uint64_t seed, const NodeId& src, const NodeId& dst) {
    std::uint64_t h = fnv1a(fnv1a(14695981039346656037ULL ^ seed, src), "|" + dst);
    return std::mt19937_64(h);
}

std::int64_t parse_date(const std::string& s) {
    auto t = timeutil::parse_iso8601(s);
    if (!t) throw std::runtime_error("gen config: bad date " + s);
    return *t;
}

// One dyad's event profile: channels and integer durations. Re-derivable
// from (seed, src, dst) alone so edges.csv and comms.csv stay consistent.
struct EventProfile {
    std::vector<Channel> channels;
    std::vector<double> durations;
    double total = 0.0;
};

EventProfile draw_events(std::mt19937_64& rng, const GenConfig& cfg) {
    std::poisson_distribution<int> extra(std::max(0.0, cfg.mean_events_per_dyad - 1.0));
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::lognormal_distribution<double> voice(cfg.voice_log_mean, cfg.voice_log_sd);
    EventProfile p;
    int n = 1 + extra(rng);
    p.channels.reserve(n);
    p.durations.reserve(n);
    for (int i = 0; i < n; ++i) {
        if (unit(rng) < cfg.sms_share) {
            p.channels.push_back(Channel::Sms);
            p.durations.push_back(60.0);
        } else {
            p.channels.push_back(Channel::Voice);
            p.durations.push_back(std::max(1.0, std::round(voice(rng))));
        }
        p.total += p.durations.back();
    }
    return p;
}

}  // namespace

NodeId node_name(int index) {
    char buf[16];
    std::snprintf(buf, sizeof(buf), "09%09d", index);
    return buf;
}

GenConfig GenConfig::defaults() {
    GenConfig c;
    c.planted = {
        {"night_club", 1.2},  {"bus_station", 1.0},  {"city_hall", 0.8},
        {"dentist", -1.2},    {"pharmacy", -1.0},    {"library", -0.8},
    };
    return c;
}

GenConfig GenConfig::from_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("gen config: cannot open " + path);
    nlohmann::json j;
    f >> j;
    GenConfig c = defaults();
    auto get = [&](const char* key, auto& field) {
        if (j.contains(key)) field = j[key].get<std::decay_t<decltype(field)>>();
    };
    get("n_contacts", c.n_contacts);
    get("n_borrowers", c.n_borrowers);
    get("ba_m", c.ba_m);
    get("out_orientation_p", c.out_orientation_p);
    get("sms_share", c.sms_share);
    get("voice_log_mean", c.voice_log_mean);
    get("voice_log_sd", c.voice_log_sd);
    get("mean_events_per_dyad", c.mean_events_per_dyad);
    get("beta_eigen", c.beta_eigen);
    get("beta_out", c.beta_out);
    get("beta_dur", c.beta_dur);
    get("beta_latent", c.beta_latent);
    get("target_default_rate", c.target_default_rate);
    get("amount_log_mean", c.amount_log_mean);
    get("amount_log_sd", c.amount_log_sd);
    get("defaulter_amount_scale", c.defaulter_amount_scale);
    get("interest_min", c.interest_min);
    get("interest_max", c.interest_max);
    get("center_lat", c.center_lat);
    get("center_lon", c.center_lon);
    get("anchor_spread_m", c.anchor_spread_m);
    get("ping_jitter_m", c.ping_jitter_m);
    get("pings_per_borrower", c.pings_per_borrower);
    get("background_poi_rate", c.background_poi_rate);
    get("contract_start", c.contract_start);
    get("contract_end", c.contract_end);
    get("comm_start", c.comm_start);
    get("comm_end", c.comm_end);
    get("seed", c.seed);
    if (j.contains("planted")) {
        c.planted.clear();
        for (const auto& item : j["planted"])
            c.planted.push_back({item.at("category").get<std::string>(),
                                 item.at("loading").get<double>()});
    }
    if (c.n_borrowers < 1 || c.ba_m < 1 || c.n_contacts <= c.ba_m)
        throw std::runtime_error("gen config: need n_contacts > ba_m >= 1, n_borrowers >= 1");
    return c;
}

std::string GenConfig::to_json() const {
    nlohmann::json j;
    j["n_contacts"] = n_contacts;
    j["n_borrowers"] = n_borrowers;
    j["ba_m"] = ba_m;
    j["out_orientation_p"] = out_orientation_p;
    j["sms_share"] = sms_share;
    j["voice_log_mean"] = voice_log_mean;
    j["voice_log_sd"] = voice_log_sd;
    j["mean_events_per_dyad"] = mean_events_per_dyad;
    j["beta_eigen"] = beta_eigen;
    j["beta_out"] = beta_out;
    j["beta_dur"] = beta_dur;
    j["beta_latent"] = beta_latent;
    j["target_default_rate"] = target_default_rate;
    j["amount_log_mean"] = amount_log_mean;
    j["amount_log_sd"] = amount_log_sd;
    j["defaulter_amount_scale"] = defaulter_amount_scale;
    j["interest_min"] = interest_min;
    j["interest_max"] = interest_max;
    j["center_lat"] = center_lat;
    j["center_lon"] = center_lon;
    j["anchor_spread_m"] = anchor_spread_m;
    j["ping_jitter_m"] = ping_jitter_m;
    j["pings_per_borrower"] = pings_per_borrower;
    j["background_poi_rate"] = background_poi_rate;
    j["contract_start"] = contract_start;
    j["contract_end"] = contract_end;
    j["comm_start"] = comm_start;
    j["comm_end"] = comm_end;
    j["seed"] = seed;
    j["planted"] = nlohmann::json::array();
    for (const auto& p : planted)
        j["planted"].push_back({{"category", p.category}, {"loading", p.loading}});
    return j.dump(2);
}

std::vector<EdgeRecord> generate_ba_graph(int n, int m, std::uint64_t seed,
                                          const GenConfig& cfg) {
    if (!(n > m && m >= 1)) throw std::invalid_argument("ba: need n > m >= 1");
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ULL);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // (a, b) with a < b; orientation decided at emission time.
    std::vector<std::pair<int, int>> links;
    std::vector<int> degree_urn;  // node id repeated once per incident edge

    for (int a = 0; a < m + 1 && a < n; ++a)
        for (int b = a + 1; b < m + 1 && b < n; ++b) {
            links.emplace_back(a, b);
            degree_urn.push_back(a);
            degree_urn.push_back(b);
        }

    std::vector<int> targets;
    for (int v = m + 1; v < n; ++v) {
        targets.clear();
        while (static_cast<int>(targets.size()) < m) {
            std::uniform_int_distribution<std::size_t> pick(0, degree_urn.size() - 1);
            int t = degree_urn[pick(rng)];
            if (std::find(targets.begin(), targets.end(), t) == targets.end())
                targets.push_back(t);
        }
        for (int t : targets) {
            links.emplace_back(std::min(v, t), std::max(v, t));
            degree_urn.push_back(v);
            degree_urn.push_back(t);
        }
    }

    std::vector<EdgeRecord> edges;
    edges.reserve(links.size());
    for (const auto& [a, b] : links) {
        bool forward = unit(rng) < cfg.out_orientation_p;
        NodeId src = node_name(forward ? b : a);  // b is the newer endpoint
        NodeId dst = node_name(forward ? a : b);
        auto erng = edge_rng(seed, src, dst);
        EventProfile p = draw_events(erng, cfg);
        edges.push_back(
            {src, dst, p.total, static_cast<std::int64_t>(p.channels.size())});
    }
    std::sort(edges.begin(), edges.end(), [](const EdgeRecord& x, const EdgeRecord& y) {
        return std::tie(x.src, x.dst) < std::tie(y.src, y.dst);
    });
    return edges;
}

LoanGen generate_loans(const graph::CommGraph& g, const GenConfig& cfg,
                       std::uint64_t seed) {
    if (cfg.n_borrowers > g.num_nodes())
        throw std::invalid_argument("more borrowers than graph nodes");
    if (!(cfg.target_default_rate > 0.0 && cfg.target_default_rate < 1.0))
        throw std::runtime_error("calibration error: target rate must be in (0,1)");

    std::mt19937_64 rng(seed ^ 0x5bf03635ULL);

    // Sample borrowers without replacement, skipping the top-2% heaviest
    // nodes. Extreme hubs behave like aggregator lines rather than retail
    // borrowers, and their raw metrics would otherwise dominate the
    // planted-signal scale for some graph realizations.
    std::vector<double> wdeg(g.num_nodes(), 0.0);
    for (int i = 0; i < g.num_nodes(); ++i)
        for (const auto& a : g.und_arcs(i)) wdeg[i] += a.weight;
    std::vector<double> sorted_deg(wdeg);
    std::sort(sorted_deg.begin(), sorted_deg.end());
    const double deg_cut =
        sorted_deg[static_cast<std::size_t>(0.98 * (sorted_deg.size() - 1))];
    std::vector<int> pool;
    pool.reserve(g.num_nodes());
    for (int i = 0; i < g.num_nodes(); ++i)
        if (wdeg[i] <= deg_cut) pool.push_back(i);
    if (static_cast<int>(pool.size()) < cfg.n_borrowers)
        throw std::invalid_argument("more borrowers than eligible graph nodes");
    for (int i = 0; i < cfg.n_borrowers; ++i) {
        std::uniform_int_distribution<int> pick(i, static_cast<int>(pool.size()) - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    std::vector<int> idx(pool.begin(), pool.begin() + cfg.n_borrowers);
    std::sort(idx.begin(), idx.end());

    auto eigen = graph::eigenvector_centrality(g, /*weighted=*/true, 1e-10, 300000);

    // Standardized raw metrics, clamped in standardize() so hub outliers
    // cannot dominate the link. Planting on the raw scale keeps the linear
    // recovery regressions well calibrated across graph realizations.
    std::vector<double> ez(cfg.n_borrowers), oz(cfg.n_borrowers),
        dz(cfg.n_borrowers);
    for (int i = 0; i < cfg.n_borrowers; ++i) {
        ez[i] = eigen[idx[i]];
        oz[i] = static_cast<double>(g.out_arcs(idx[i]).size());
        double dur = 0.0;
        for (const auto& a : g.und_arcs(idx[i])) dur += a.weight;
        dz[i] = dur;
    }
    // Winsorize at the 2nd/98th percentile before standardizing so a few
    // hub nodes cannot dominate the scale; the z-scores then have unit
    // variance under every graph realization, which keeps the planted
    // signal size stable across seeds.
    auto standardize = [](std::vector<double>& v) {
        std::vector<double> sorted(v);
        std::sort(sorted.begin(), sorted.end());
        const std::size_t n = sorted.size();
        double lo = sorted[static_cast<std::size_t>(0.02 * (n - 1))];
        double hi = sorted[static_cast<std::size_t>(0.98 * (n - 1))];
        for (double& x : v) x = std::clamp(x, lo, hi);
        double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
        double var = 0.0;
        for (double x : v) var += (x - mean) * (x - mean);
        double sd = std::sqrt(var / std::max<std::size_t>(1, n - 1));
        for (double& x : v) x = sd > 0 ? (x - mean) / sd : 0.0;
    };
    standardize(ez);
    standardize(oz);
    standardize(dz);

    std::normal_distribution<double> stdnorm(0.0, 1.0);
    std::vector<double> stress(cfg.n_borrowers);
    for (auto& s : stress) s = std::clamp(stdnorm(rng), -3.0, 3.0);

    std::vector<double> link(cfg.n_borrowers);
    for (int i = 0; i < cfg.n_borrowers; ++i)
        link[i] = cfg.beta_eigen * ez[i] + cfg.beta_out * oz[i] +
                  cfg.beta_dur * dz[i] + cfg.beta_latent * stress[i];

    // Bisection on the intercept for the expected default rate.
    auto mean_rate = [&](double b0) {
        double s = 0.0;
        for (double l : link) s += 1.0 / (1.0 + std::exp(-(b0 + l)));
        return s / link.size();
    };
    double lo = -40.0, hi = 40.0;
    for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        (mean_rate(mid) < cfg.target_default_rate ? lo : hi) = mid;
    }
    double beta0 = 0.5 * (lo + hi);

    std::int64_t t0 = parse_date(cfg.contract_start);
    std::int64_t t1 = parse_date(cfg.contract_end);
    std::uniform_int_distribution<std::int64_t> when(t0, t1);
    std::lognormal_distribution<double> amount(cfg.amount_log_mean, cfg.amount_log_sd);
    std::uniform_real_distribution<double> interest(cfg.interest_min, cfg.interest_max);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    LoanGen out;
    out.calibrated_beta0 = beta0;
    out.loans.reserve(cfg.n_borrowers);
    out.latent_stress = stress;
    for (int i = 0; i < cfg.n_borrowers; ++i) {
        LoanRecord loan;
        loan.borrower_id = g.node_id(idx[i]);
        double p = 1.0 / (1.0 + std::exp(-(beta0 + link[i])));
        loan.defaulted = unit(rng) < p;
        loan.amount = amount(rng) * (loan.defaulted ? cfg.defaulter_amount_scale : 1.0);
        loan.interest = interest(rng);
        loan.contract_time = when(rng);
        out.loans.push_back(std::move(loan));
    }
    return out;
}

GeoGen generate_geo(const std::vector<LoanRecord>& loans,
                    const std::vector<double>& latent_stress,
                    const geo::Vocabulary& vocab, const GenConfig& cfg,
                    std::uint64_t seed) {
    if (loans.size() != latent_stress.size())
        throw std::invalid_argument("loans/stress size mismatch");
    std::mt19937_64 rng(seed ^ 0x6a09e667ULL);
    std::normal_distribution<double> stdnorm(0.0, 1.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    const double m_per_deg = geo::kMetersPerDegree;
    const double cos_lat = std::cos(cfg.center_lat * M_PI / 180.0);

    GeoGen out;
    for (std::size_t i = 0; i < loans.size(); ++i) {
        double anchor_lat = cfg.center_lat + stdnorm(rng) * cfg.anchor_spread_m / m_per_deg;
        double anchor_lon =
            cfg.center_lon + stdnorm(rng) * cfg.anchor_spread_m / (m_per_deg * cos_lat);

        // Planted categories cluster near high/low stress anchors.
        for (const auto& pc : cfg.planted) {
            if (vocab.index_of(pc.category) < 0) continue;
            double lam = std::exp(std::log(0.8) + pc.loading * latent_stress[i]);
            std::poisson_distribution<int> howmany(lam);
            int k = howmany(rng);
            for (int j = 0; j < k; ++j) {
                double r = 15.0 * std::sqrt(unit(rng));
                double th = 2.0 * M_PI * unit(rng);
                out.pois.push_back({pc.category,
                                    anchor_lat + r * std::cos(th) / m_per_deg,
                                    anchor_lon + r * std::sin(th) / (m_per_deg * cos_lat)});
            }
        }
        // Background noise POIs across the full vocabulary.
        for (const auto& name : vocab.names()) {
            std::poisson_distribution<int> howmany(cfg.background_poi_rate);
            int k = howmany(rng);
            for (int j = 0; j < k; ++j) {
                double r = 60.0 * std::sqrt(unit(rng));
                double th = 2.0 * M_PI * unit(rng);
                out.pois.push_back({name,
                                    anchor_lat + r * std::cos(th) / m_per_deg,
                                    anchor_lon + r * std::sin(th) / (m_per_deg * cos_lat)});
            }
        }

        std::uniform_int_distribution<std::int64_t> offset(0, 366LL * 86400 - 1);
        for (int j = 0; j < cfg.pings_per_borrower; ++j) {
            GeoPing ping;
            ping.borrower_id = loans[i].borrower_id;
            ping.lat = anchor_lat + stdnorm(rng) * cfg.ping_jitter_m / m_per_deg;
            ping.lon = anchor_lon + stdnorm(rng) * cfg.ping_jitter_m / (m_per_deg * cos_lat);
            ping.timestamp = loans[i].contract_time + offset(rng);
            out.pings.push_back(std::move(ping));
        }
    }
    return out;
}

std::vector<CommEvent> expand_events(const std::vector<EdgeRecord>& edges,
                                     const GenConfig& cfg, std::uint64_t seed) {
    std::int64_t t0 = parse_date(cfg.comm_start);
    std::int64_t t1 = parse_date(cfg.comm_end);
    std::vector<CommEvent> events;
    for (const auto& e : edges) {
        auto erng = edge_rng(seed, e.src, e.dst);
        EventProfile p = draw_events(erng, cfg);
        if (static_cast<std::int64_t>(p.channels.size()) != e.n_events ||
            p.total != e.weight_s)
            throw std::runtime_error("expand_events: edge profile mismatch (seed?)");
        std::uniform_int_distribution<std::int64_t> when(t0, t1);
        for (std::size_t i = 0; i < p.channels.size(); ++i) {
            CommEvent ev;
            ev.borrower_id = e.src;
            ev.counterparty_raw = e.dst;
            ev.direction = Direction::Outgoing;
            ev.channel = p.channels[i];
            ev.timestamp = when(erng);
            if (ev.channel == Channel::Voice) ev.duration_s = p.durations[i];
            events.push_back(std::move(ev));
        }
    }
    return events;
}

void write_comms_csv(const std::string& path, const std::vector<CommEvent>& events) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "borrower_id,counterparty,direction,channel,timestamp_iso8601,duration_s\n";
    for (const auto& e : events) {
        f << e.borrower_id << ',' << e.counterparty_raw << ','
          << (e.direction == Direction::Outgoing ? "outgoing" : "incoming") << ','
          << (e.channel == Channel::Voice ? "voice" : "sms") << ','
          << timeutil::format_iso8601(e.timestamp) << ',';
        if (e.channel == Channel::Voice) f << e.duration_s.value();
        f << '\n';
    }
}

void write_loans_csv(const std::string& path, const std::vector<LoanRecord>& loans) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "borrower_id,default,amount,interest,contract_time_iso8601\n";
    f.precision(15);
    for (const auto& l : loans)
        f << l.borrower_id << ',' << (l.defaulted ? 1 : 0) << ',' << l.amount << ','
          << l.interest << ',' << timeutil::format_iso8601(l.contract_time) << '\n';
}

void write_pings_csv(const std::string& path, const std::vector<GeoPing>& pings) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "borrower_id,lat,lon,timestamp_iso8601\n";
    f.precision(15);
    for (const auto& p : pings)
        f << p.borrower_id << ',' << p.lat << ',' << p.lon << ','
          << timeutil::format_iso8601(p.timestamp) << '\n';
}

void write_pois_csv(const std::string& path, const std::vector<PoiEntry>& pois) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "category,lat,lon\n";
    f.precision(15);
    for (const auto& p : pois)
        f << p.category << ',' << p.lat << ',' << p.lon << '\n';
}

}  // namespace lendgraph::synthgen
