#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "lendgraph/csv.hpp"
#include "lendgraph/types.hpp"

namespace lendgraph::ingest {

enum class Rejection { ShortCode, ServiceNumber, Malformed };

const char* rejection_name(Rejection r);

// Country-specific identifier canonicalization rules. The canonical form is
// a fixed-length all-digit national number; international prefixes are
// folded onto the national trunk prefix.
struct IdentifierRules {
    int canonical_length = 11;
    // ordered: first match wins. {"+63" -> "0"} turns +639171234567 into 09171234567
    std::vector<std::pair<std::string, std::string>> prefix_folds;
    int short_code_max_length = 6;
    std::vector<std::string> service_prefixes;

    static IdentifierRules from_json_file(const std::string& path);
    static IdentifierRules defaults();
};

using CleanResult = std::variant<NodeId, Rejection>;

// Canonicalizes a raw identifier token or classifies it as a rejection.
// Rejections are data, not errors; callers tally them in a CleaningReport.
CleanResult clean_identifier(const std::string& raw, const IdentifierRules& rules);

// Fixed information-equivalent duration assigned to an SMS.
// Precondition: event.channel == Sms.
double sms_duration(const CommEvent& event, double sms_duration_s = 60.0);

struct AggregateResult {
    std::vector<EdgeRecord> edges;  // sorted by (src, dst)
    std::int64_t self_loops_dropped = 0;
};

AggregateResult aggregate_dyads(const std::vector<CommEvent>& events,
                                double sms_duration_s = 60.0);

struct CleaningReport {
    std::int64_t raw_count = 0;
    std::int64_t kept_count = 0;
    std::map<std::string, std::int64_t> rejection_histogram;
    std::int64_t self_loops_dropped = 0;

    std::int64_t rejected_total() const;
    // raw = kept + sum(rejections); throws std::logic_error if violated.
    void check_reconciles() const;
    std::string to_json() const;
};

struct ParsedComms {
    std::vector<CommEvent> events;
    CleaningReport report;
};

// Parses comms.csv rows, canonicalizing both endpoints. A row is kept only
// if borrower and counterparty both canonicalize and the remaining fields
// parse; otherwise it is tallied under the first rejection encountered.
ParsedComms parse_comms(const csv::Table& table, const IdentifierRules& rules);

struct ParsedLoans {
    std::vector<LoanRecord> loans;
    std::int64_t rejected = 0;
};

// Parses loans.csv; enforces amount > 0, 0 <= interest < 10, unique borrower.
ParsedLoans parse_loans(const csv::Table& table, const IdentifierRules& rules);

void write_edges_csv(const std::string& path, const std::vector<EdgeRecord>& edges);
std::vector<EdgeRecord> read_edges_csv(const std::string& path);

}  // namespace lendgraph::ingest
