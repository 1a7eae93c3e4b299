#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lendgraph {

using NodeId = std::string;  // canonical 11-digit identifier

enum class Direction { Outgoing, Incoming };
enum class Channel { Voice, Sms };

// One raw communication record, after parsing but before dyad aggregation.
struct CommEvent {
    NodeId borrower_id;
    std::string counterparty_raw;
    Direction direction = Direction::Outgoing;
    Channel channel = Channel::Voice;
    std::int64_t timestamp = 0;  // unix seconds, UTC
    std::optional<double> duration_s;
};

// One aggregated caller->receiver dyad. weight_s is the summed duration
// ("information") proxy; SMS events contribute a fixed duration.
struct EdgeRecord {
    NodeId src;
    NodeId dst;
    double weight_s = 0.0;
    std::int64_t n_events = 0;
};

struct LoanRecord {
    NodeId borrower_id;
    bool defaulted = false;
    double amount = 0.0;
    double interest = 0.0;        // annual rate fraction
    std::int64_t contract_time = 0;  // unix seconds, UTC
};

struct GeoPing {
    NodeId borrower_id;
    double lat = 0.0;
    double lon = 0.0;
    std::int64_t timestamp = 0;
};

struct PoiEntry {
    std::string category;
    double lat = 0.0;
    double lon = 0.0;
};

// Per-borrower graph metric vector used as regression predictors.
struct BorrowerGraphMetrics {
    NodeId borrower_id;
    std::int64_t out_edges = 0;
    std::int64_t in_edges = 0;
    std::int64_t triads = 0;
    double eigen = 0.0;
    double farness = 0.0;
    double dur = 0.0;  // total incident communication seconds
};

// Location features for one ping: time since contract plus per-category
// counts of businesses within the query radius.
struct LocationFeatures {
    NodeId borrower_id;
    std::int64_t timestamp = 0;
    double diff_day = 0.0;
    bool out_of_window = false;
    std::vector<std::int64_t> counts;  // parallel to the category vocabulary
};

}  // namespace lendgraph
