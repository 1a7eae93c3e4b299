#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "lendgraph/geo.hpp"

using namespace lendgraph;

namespace {

geo::Vocabulary small_vocab() {
    return geo::Vocabulary::from_names({"cafe", "library", "night_club"});
}

std::vector<std::int64_t> brute_force(const std::vector<PoiEntry>& pois,
                                      const geo::Vocabulary& vocab,
                                      const geo::Point& c, double radius) {
    std::vector<std::int64_t> counts(vocab.size(), 0);
    for (const auto& p : pois) {
        int idx = vocab.index_of(p.category);
        if (idx < 0) continue;
        if (geo::haversine(c, {p.lat, p.lon}) <= radius) ++counts[idx];
    }
    return counts;
}

}  // namespace

TEST_CASE("haversine identities") {
    geo::Point manila{14.5995, 120.9842};
    CHECK(geo::haversine(manila, manila) == 0.0);
    // one degree of latitude
    double d = geo::haversine({0.0, 0.0}, {1.0, 0.0});
    CHECK(std::fabs(d - 111195.0) < 1.0);
    // antipodal: half the great circle
    double half = geo::kEarthRadiusM * std::numbers::pi;
    CHECK(geo::haversine({0.0, 0.0}, {0.0, 180.0}) == doctest::Approx(half).epsilon(1e-9));
    // symmetry
    geo::Point q{15.1, 121.3};
    CHECK(geo::haversine(manila, q) == doctest::Approx(geo::haversine(q, manila)));
}

TEST_CASE("haversine rejects out-of-range coordinates") {
    CHECK_THROWS_AS(geo::haversine({91.0, 0.0}, {0.0, 0.0}), std::domain_error);
    CHECK_THROWS_AS(geo::haversine({0.0, 0.0}, {0.0, 181.0}), std::domain_error);
}

TEST_CASE("vocabulary lookup and duplicate rejection") {
    auto v = small_vocab();
    CHECK(v.size() == 3);
    CHECK(v.index_of("library") == 1);
    CHECK(v.index_of("zoo") == -1);
    CHECK_THROWS(geo::Vocabulary::from_names({"cafe", "cafe"}));
}

TEST_CASE("grid index equals brute force on random fixtures") {
    auto vocab = small_vocab();
    std::mt19937_64 rng(314);
    std::uniform_real_distribution<double> dlat(-0.02, 0.02);
    std::uniform_real_distribution<double> base_lat(-60.0, 60.0);
    const char* cats[] = {"cafe", "library", "night_club"};
    for (int iter = 0; iter < 40; ++iter) {
        double lat0 = base_lat(rng), lon0 = base_lat(rng);
        std::vector<PoiEntry> pois;
        for (int i = 0; i < 200; ++i)
            pois.push_back({cats[rng() % 3], lat0 + dlat(rng),
                            lon0 + dlat(rng) / std::cos(lat0 * std::numbers::pi / 180.0)});
        geo::SpatialIndex index(pois, vocab, 100.0);
        for (int q = 0; q < 25; ++q) {
            geo::Point c{lat0 + dlat(rng), lon0 + dlat(rng)};
            double radius = 25.0 + static_cast<double>(rng() % 200);
            CHECK(index.counts_within(c, radius) == brute_force(pois, vocab, c, radius));
        }
    }
}

TEST_CASE("boundary POI at exactly the radius is counted") {
    auto vocab = small_vocab();
    geo::Point c{10.0, 10.0};
    // place a POI ~50 m due north, then query with the exact distance
    double dlat = 50.0 / geo::kMetersPerDegree;
    std::vector<PoiEntry> pois = {{"cafe", 10.0 + dlat, 10.0}};
    double d = geo::haversine(c, {10.0 + dlat, 10.0});
    geo::SpatialIndex index(pois, vocab);
    auto counts = index.counts_within(c, d);
    CHECK(counts[0] == 1);
}

TEST_CASE("counts are monotone in the radius") {
    auto vocab = small_vocab();
    std::mt19937_64 rng(2718);
    std::uniform_real_distribution<double> d(-0.01, 0.01);
    std::vector<PoiEntry> pois;
    for (int i = 0; i < 300; ++i)
        pois.push_back({"library", 14.6 + d(rng), 121.0 + d(rng)});
    geo::SpatialIndex index(pois, vocab);
    geo::Point c{14.6, 121.0};
    std::int64_t prev = 0;
    for (double r : {10.0, 50.0, 100.0, 400.0, 2000.0}) {
        auto counts = index.counts_within(c, r);
        CHECK(counts[1] >= prev);
        prev = counts[1];
    }
}

TEST_CASE("unknown categories are rejected and counted") {
    auto vocab = small_vocab();
    std::vector<PoiEntry> pois = {{"cafe", 14.6, 121.0}, {"volcano", 14.6, 121.0}};
    geo::SpatialIndex index(pois, vocab);
    CHECK(index.rejected_pois() == 1);
}

TEST_CASE("diff_day tolerance and window flags") {
    LoanRecord loan;
    loan.borrower_id = "B";
    loan.contract_time = 1'000'000'000;
    GeoPing ping;
    ping.borrower_id = "B";

    ping.timestamp = loan.contract_time + 86400;  // one day later
    auto r = geo::diff_day(ping, loan);
    CHECK(r.days == doctest::Approx(1.0));
    CHECK_FALSE(r.out_of_window);

    ping.timestamp = loan.contract_time - 1800;  // 30 min early: inside tolerance
    r = geo::diff_day(ping, loan);
    CHECK_FALSE(r.out_of_window);

    ping.timestamp = loan.contract_time - 7200;  // 2 h early: flagged
    r = geo::diff_day(ping, loan);
    CHECK(r.out_of_window);

    ping.timestamp = loan.contract_time + 500 * 86400;  // past max window
    r = geo::diff_day(ping, loan);
    CHECK(r.out_of_window);
}

TEST_CASE("location_features joins pings to loans") {
    auto vocab = small_vocab();
    LoanRecord loan;
    loan.borrower_id = "00000000001";
    loan.contract_time = 0;
    std::vector<GeoPing> pings = {{"00000000001", 14.6, 121.0, 86400},
                                  {"00000000099", 14.6, 121.0, 86400}};
    std::vector<PoiEntry> pois = {{"cafe", 14.6, 121.0}};
    auto res = geo::location_features(pings, pois, {loan}, vocab, 50.0);
    REQUIRE(res.rows.size() == 1);
    CHECK(res.pings_without_loan == 1);
    CHECK(res.rows[0].counts[0] == 1);
    CHECK(res.rows[0].diff_day == doctest::Approx(1.0));
}
