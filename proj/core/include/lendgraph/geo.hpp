#pragma once

#include <cstdint>
#include <map>
#include <numbers>
#include <string>
#include <unordered_map>
#include <vector>

#include "lendgraph/csv.hpp"
#include "lendgraph/types.hpp"

namespace lendgraph::geo {

inline constexpr double kEarthRadiusM = 6'371'000.0;
inline constexpr double kMetersPerDegree = kEarthRadiusM * std::numbers::pi / 180.0;

struct Point {
    double lat = 0.0;
    double lon = 0.0;
};

// Great-circle distance in meters. Throws std::domain_error for coordinates
// outside [-90,90] x [-180,180].
double haversine(const Point& p, const Point& q);

// Category vocabulary: ordered list of business-type names loaded from a
// one-name-per-line file.
class Vocabulary {
public:
    static Vocabulary from_file(const std::string& path);
    static Vocabulary from_names(std::vector<std::string> names);

    int size() const { return static_cast<int>(names_.size()); }
    const std::vector<std::string>& names() const { return names_; }
    int index_of(const std::string& name) const;  // -1 if unknown

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, int> index_;
};

// Uniform lat/lon grid over POIs. Cells are square in degrees-latitude
// scale; queries widen the longitude span with latitude so radius queries
// stay exact everywhere (3x3 neighborhood near the equator).
class SpatialIndex {
public:
    SpatialIndex(const std::vector<PoiEntry>& pois, const Vocabulary& vocab,
                 double cell_size_m = 100.0);

    // Per-category counts of POIs within radius_m (boundary inclusive).
    std::vector<std::int64_t> counts_within(const Point& center, double radius_m) const;

    std::int64_t rejected_pois() const { return rejected_; }

private:
    struct CellPoi {
        Point p;
        int category;
    };
    const Vocabulary& vocab_;
    double cell_deg_;
    std::unordered_map<std::int64_t, std::vector<CellPoi>> cells_;
    std::int64_t rejected_ = 0;

    std::int64_t key(std::int64_t ci, std::int64_t cj) const;
};

struct DiffDayResult {
    double days = 0.0;
    bool out_of_window = false;
};

// Fractional days from loan contract to ping; flagged when negative beyond
// tolerance or past the study-window maximum.
DiffDayResult diff_day(const GeoPing& ping, const LoanRecord& loan,
                       double tolerance_days = 1.0 / 24.0,
                       double max_days = 366.0);

std::vector<GeoPing> parse_pings(const csv::Table& table);
std::vector<PoiEntry> parse_pois(const csv::Table& table);

struct LocationResult {
    std::vector<LocationFeatures> rows;
    std::int64_t pings_without_loan = 0;
    std::int64_t rejected_pois = 0;
};

// Full location-feature pass: 50 m POI counts and diff_day per ping.
LocationResult location_features(const std::vector<GeoPing>& pings,
                                 const std::vector<PoiEntry>& pois,
                                 const std::vector<LoanRecord>& loans,
                                 const Vocabulary& vocab, double radius_m = 50.0);

void write_locfeat_csv(const std::string& path, const std::vector<LocationFeatures>& rows,
                       const Vocabulary& vocab);

}  // namespace lendgraph::geo
