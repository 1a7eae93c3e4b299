#include "lendgraph/geo.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <unordered_map>

#include "lendgraph/timeutil.hpp"

namespace lendgraph::geo {

namespace {

constexpr double kDegToRad = M_PI / 180.0;

void check_range(const Point& p) {
    if (p.lat < -90.0 || p.lat > 90.0 || p.lon < -180.0 || p.lon > 180.0)
        throw std::domain_error("coordinate out of range");
}

}  // namespace

double haversine(const Point& p, const Point& q) {
    check_range(p);
    check_range(q);
    double dlat = (q.lat - p.lat) * kDegToRad;
    double dlon = (q.lon - p.lon) * kDegToRad;
    double a = std::sin(dlat / 2) * std::sin(dlat / 2) +
               std::cos(p.lat * kDegToRad) * std::cos(q.lat * kDegToRad) *
                   std::sin(dlon / 2) * std::sin(dlon / 2);
    return 2.0 * kEarthRadiusM * std::asin(std::min(1.0, std::sqrt(a)));
}

Vocabulary Vocabulary::from_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("vocabulary: cannot open " + path);
    std::vector<std::string> names;
    std::string line;
    while (std::getline(f, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (!line.empty()) names.push_back(line);
    }
    return from_names(std::move(names));
}

Vocabulary Vocabulary::from_names(std::vector<std::string> names) {
    Vocabulary v;
    v.names_ = std::move(names);
    for (int i = 0; i < v.size(); ++i) {
        if (!v.index_.emplace(v.names_[i], i).second)
            throw std::runtime_error("vocabulary: duplicate category " + v.names_[i]);
    }
    return v;
}

int Vocabulary::index_of(const std::string& name) const {
    auto it = index_.find(name);
    return it == index_.end() ? -1 : it->second;
}

SpatialIndex::SpatialIndex(const std::vector<PoiEntry>& pois, const Vocabulary& vocab,
                           double cell_size_m)
    : vocab_(vocab), cell_deg_(cell_size_m / kMetersPerDegree) {
    for (const auto& poi : pois) {
        int cat = vocab_.index_of(poi.category);
        if (cat < 0) { ++rejected_; continue; }
        Point p{poi.lat, poi.lon};
        check_range(p);
        auto ci = static_cast<std::int64_t>(std::floor(p.lat / cell_deg_));
        auto cj = static_cast<std::int64_t>(std::floor(p.lon / cell_deg_));
        cells_[key(ci, cj)].push_back({p, cat});
    }
}

std::int64_t SpatialIndex::key(std::int64_t ci, std::int64_t cj) const {
    return ci * 0x100000000LL + cj;
}

std::vector<std::int64_t> SpatialIndex::counts_within(const Point& center,
                                                      double radius_m) const {
    check_range(center);
    std::vector<std::int64_t> counts(vocab_.size(), 0);
    auto ci = static_cast<std::int64_t>(std::floor(center.lat / cell_deg_));
    auto cj = static_cast<std::int64_t>(std::floor(center.lon / cell_deg_));

    std::int64_t lat_span = static_cast<std::int64_t>(
        std::ceil(radius_m / (cell_deg_ * kMetersPerDegree)));
    // Longitude degrees shrink with latitude; widen the scan accordingly.
    double cos_lat = std::cos(center.lat * kDegToRad);
    double lon_cell_m = cell_deg_ * kMetersPerDegree * std::max(cos_lat, 1e-9);
    std::int64_t lon_span = static_cast<std::int64_t>(std::ceil(radius_m / lon_cell_m)) + 1;

    for (std::int64_t di = -lat_span; di <= lat_span; ++di) {
        for (std::int64_t dj = -lon_span; dj <= lon_span; ++dj) {
            auto it = cells_.find(key(ci + di, cj + dj));
            if (it == cells_.end()) continue;
            for (const auto& cp : it->second)
                if (haversine(center, cp.p) <= radius_m) ++counts[cp.category];
        }
    }
    return counts;
}

DiffDayResult diff_day(const GeoPing& ping, const LoanRecord& loan,
                       double tolerance_days, double max_days) {
    DiffDayResult r;
    r.days = static_cast<double>(ping.timestamp - loan.contract_time) / 86400.0;
    r.out_of_window = r.days < -tolerance_days || r.days > max_days;
    return r;
}

std::vector<GeoPing> parse_pings(const csv::Table& table) {
    int cb = table.column("borrower_id"), cla = table.column("lat");
    int clo = table.column("lon"), ct = table.column("timestamp_iso8601");
    if (cb < 0 || cla < 0 || clo < 0 || ct < 0)
        throw std::runtime_error("pings.csv: missing required column");
    std::vector<GeoPing> pings;
    pings.reserve(table.rows.size());
    for (const auto& row : table.rows) {
        GeoPing p;
        p.borrower_id = row[cb];
        p.lat = std::stod(row[cla]);
        p.lon = std::stod(row[clo]);
        auto ts = timeutil::parse_iso8601(row[ct]);
        if (!ts) throw std::runtime_error("pings.csv: bad timestamp " + row[ct]);
        check_range({p.lat, p.lon});
        p.timestamp = *ts;
        pings.push_back(std::move(p));
    }
    return pings;
}

std::vector<PoiEntry> parse_pois(const csv::Table& table) {
    int cc = table.column("category"), cla = table.column("lat"), clo = table.column("lon");
    if (cc < 0 || cla < 0 || clo < 0)
        throw std::runtime_error("pois.csv: missing required column");
    std::vector<PoiEntry> pois;
    pois.reserve(table.rows.size());
    for (const auto& row : table.rows)
        pois.push_back({row[cc], std::stod(row[cla]), std::stod(row[clo])});
    return pois;
}

LocationResult location_features(const std::vector<GeoPing>& pings,
                                 const std::vector<PoiEntry>& pois,
                                 const std::vector<LoanRecord>& loans,
                                 const Vocabulary& vocab, double radius_m) {
    SpatialIndex index(pois, vocab, std::max(100.0, 2.0 * radius_m));
    std::unordered_map<NodeId, const LoanRecord*> by_borrower;
    for (const auto& l : loans) by_borrower[l.borrower_id] = &l;

    LocationResult out;
    out.rejected_pois = index.rejected_pois();
    out.rows.reserve(pings.size());
    for (const auto& ping : pings) {
        auto it = by_borrower.find(ping.borrower_id);
        if (it == by_borrower.end()) { ++out.pings_without_loan; continue; }
        LocationFeatures f;
        f.borrower_id = ping.borrower_id;
        f.timestamp = ping.timestamp;
        auto dd = diff_day(ping, *it->second);
        f.diff_day = dd.days;
        f.out_of_window = dd.out_of_window;
        f.counts = index.counts_within({ping.lat, ping.lon}, radius_m);
        out.rows.push_back(std::move(f));
    }
    return out;
}

void write_locfeat_csv(const std::string& path, const std::vector<LocationFeatures>& rows,
                       const Vocabulary& vocab) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "borrower_id,timestamp,diff_day";
    for (const auto& name : vocab.names()) f << ',' << name;
    f << '\n';
    f.precision(15);
    for (const auto& r : rows) {
        f << r.borrower_id << ',' << timeutil::format_iso8601(r.timestamp) << ','
          << r.diff_day;
        for (auto c : r.counts) f << ',' << c;
        f << '\n';
    }
}

}  // namespace lendgraph::geo
