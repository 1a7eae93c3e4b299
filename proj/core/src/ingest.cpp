#include "lendgraph/ingest.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "lendgraph/timeutil.hpp"

namespace lendgraph::ingest {

const char* rejection_name(Rejection r) {
    switch (r) {
        case Rejection::ShortCode: return "short_code";
        case Rejection::ServiceNumber: return "service_number";
        case Rejection::Malformed: return "malformed";
    }
    return "unknown";
}

IdentifierRules IdentifierRules::defaults() {
    IdentifierRules r;
    r.canonical_length = 11;
    r.prefix_folds = {{"+63", "0"}, {"0063", "0"}, {"63", "0"}};
    r.short_code_max_length = 6;
    r.service_prefixes = {"1800", "000"};
    return r;
}

IdentifierRules IdentifierRules::from_json_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("rules: cannot open " + path);
    nlohmann::json j;
    f >> j;
    IdentifierRules r;
    r.canonical_length = j.value("canonical_length", 11);
    r.short_code_max_length = j.value("short_code_max_length", 6);
    if (j.contains("prefix_folds"))
        for (const auto& item : j["prefix_folds"])
            r.prefix_folds.emplace_back(item.at("match").get<std::string>(),
                                        item.at("replace").get<std::string>());
    if (j.contains("service_prefixes"))
        for (const auto& item : j["service_prefixes"])
            r.service_prefixes.push_back(item.get<std::string>());
    return r;
}

CleanResult clean_identifier(const std::string& raw, const IdentifierRules& rules) {
    // Strip common separators; keep a leading '+'.
    std::string s;
    s.reserve(raw.size());
    for (std::size_t i = 0; i < raw.size(); ++i) {
        char c = raw[i];
        if (c == ' ' || c == '-' || c == '_' || c == '(' || c == ')' || c == '.')
            continue;
        if (c == '+' && s.empty()) { s.push_back(c); continue; }
        if (c < '0' || c > '9') return Rejection::Malformed;
        s.push_back(c);
    }
    if (s.empty()) return Rejection::Malformed;

    for (const auto& [match, replace] : rules.prefix_folds) {
        if (s.size() > match.size() && s.compare(0, match.size(), match) == 0) {
            s = replace + s.substr(match.size());
            break;
        }
    }
    if (!s.empty() && s[0] == '+') return Rejection::Malformed;

    for (const auto& p : rules.service_prefixes)
        if (s.size() >= p.size() && s.compare(0, p.size(), p) == 0)
            return Rejection::ServiceNumber;

    if (static_cast<int>(s.size()) == rules.canonical_length) return NodeId(s);
    if (static_cast<int>(s.size()) <= rules.short_code_max_length)
        return Rejection::ShortCode;
    return Rejection::Malformed;
}

double sms_duration(const CommEvent& event, double sms_duration_s) {
    if (event.channel != Channel::Sms)
        throw std::logic_error("sms_duration called on a voice event");
    return sms_duration_s;  // any parsed duration field is ignored
}

AggregateResult aggregate_dyads(const std::vector<CommEvent>& events,
                                double sms_duration_s) {
    struct Acc { double weight = 0.0; std::int64_t n = 0; };
    std::map<std::pair<NodeId, NodeId>, Acc> acc;
    std::int64_t self_loops = 0;
    for (const auto& e : events) {
        // Canonical identifiers are required here; the counterparty_raw field
        // holds the already-cleaned id after parse_comms.
        const NodeId& other = e.counterparty_raw;
        NodeId src = e.direction == Direction::Outgoing ? e.borrower_id : other;
        NodeId dst = e.direction == Direction::Outgoing ? other : e.borrower_id;
        if (src == dst) { ++self_loops; continue; }
        double d = e.channel == Channel::Sms ? sms_duration(e, sms_duration_s)
                                             : e.duration_s.value_or(0.0);
        auto& a = acc[{src, dst}];
        a.weight += d;
        a.n += 1;
    }
    AggregateResult out;
    out.self_loops_dropped = self_loops;
    out.edges.reserve(acc.size());
    for (const auto& [key, a] : acc)
        out.edges.push_back({key.first, key.second, a.weight, a.n});
    return out;
}

std::int64_t CleaningReport::rejected_total() const {
    std::int64_t s = 0;
    for (const auto& [k, v] : rejection_histogram) s += v;
    return s;
}

void CleaningReport::check_reconciles() const {
    if (raw_count != kept_count + rejected_total())
        throw std::logic_error("cleaning report does not reconcile");
}

std::string CleaningReport::to_json() const {
    nlohmann::json j;
    j["raw_count"] = raw_count;
    j["kept_count"] = kept_count;
    j["rejected_total"] = rejected_total();
    j["rejections"] = rejection_histogram;
    j["self_loops_dropped"] = self_loops_dropped;
    return j.dump(2);
}

namespace {

std::optional<double> parse_double(const std::string& s) {
    if (s.empty()) return std::nullopt;
    char* end = nullptr;
    double v = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(v)) return std::nullopt;
    return v;
}

}  // namespace

ParsedComms parse_comms(const csv::Table& table, const IdentifierRules& rules) {
    int c_borrower = table.column("borrower_id");
    int c_party = table.column("counterparty");
    int c_dir = table.column("direction");
    int c_chan = table.column("channel");
    int c_ts = table.column("timestamp_iso8601");
    int c_dur = table.column("duration_s");
    if (c_borrower < 0 || c_party < 0 || c_dir < 0 || c_chan < 0 || c_ts < 0 || c_dur < 0)
        throw std::runtime_error("comms.csv: missing required column");

    ParsedComms out;
    out.report.raw_count = static_cast<std::int64_t>(table.rows.size());
    auto reject = [&](Rejection r) {
        out.report.rejection_histogram[rejection_name(r)] += 1;
    };
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) { reject(Rejection::Malformed); continue; }
        auto b = clean_identifier(row[c_borrower], rules);
        if (std::holds_alternative<Rejection>(b)) { reject(std::get<Rejection>(b)); continue; }
        auto p = clean_identifier(row[c_party], rules);
        if (std::holds_alternative<Rejection>(p)) { reject(std::get<Rejection>(p)); continue; }

        CommEvent e;
        e.borrower_id = std::get<NodeId>(b);
        e.counterparty_raw = std::get<NodeId>(p);
        if (row[c_dir] == "outgoing") e.direction = Direction::Outgoing;
        else if (row[c_dir] == "incoming") e.direction = Direction::Incoming;
        else { reject(Rejection::Malformed); continue; }
        if (row[c_chan] == "voice") e.channel = Channel::Voice;
        else if (row[c_chan] == "sms") e.channel = Channel::Sms;
        else { reject(Rejection::Malformed); continue; }
        auto ts = timeutil::parse_iso8601(row[c_ts]);
        if (!ts) { reject(Rejection::Malformed); continue; }
        e.timestamp = *ts;
        if (e.channel == Channel::Voice) {
            auto d = parse_double(row[c_dur]);
            if (!d || *d < 0) { reject(Rejection::Malformed); continue; }
            e.duration_s = *d;
        } else if (!row[c_dur].empty()) {
            e.duration_s = parse_double(row[c_dur]);  // present but ignored
        }
        out.events.push_back(std::move(e));
    }
    out.report.kept_count = static_cast<std::int64_t>(out.events.size());
    out.report.check_reconciles();
    return out;
}

ParsedLoans parse_loans(const csv::Table& table, const IdentifierRules& rules) {
    int c_b = table.column("borrower_id");
    int c_def = table.column("default");
    int c_amt = table.column("amount");
    int c_int = table.column("interest");
    int c_ct = table.column("contract_time_iso8601");
    if (c_b < 0 || c_def < 0 || c_amt < 0 || c_int < 0 || c_ct < 0)
        throw std::runtime_error("loans.csv: missing required column");

    ParsedLoans out;
    std::set<NodeId> seen;
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) { ++out.rejected; continue; }
        auto b = clean_identifier(row[c_b], rules);
        if (!std::holds_alternative<NodeId>(b)) { ++out.rejected; continue; }
        LoanRecord loan;
        loan.borrower_id = std::get<NodeId>(b);
        if (row[c_def] == "0") loan.defaulted = false;
        else if (row[c_def] == "1") loan.defaulted = true;
        else { ++out.rejected; continue; }
        auto amt = parse_double(row[c_amt]);
        auto rate = parse_double(row[c_int]);
        auto ct = timeutil::parse_iso8601(row[c_ct]);
        if (!amt || *amt <= 0 || !rate || *rate < 0 || *rate >= 10 || !ct) {
            ++out.rejected;
            continue;
        }
        if (!seen.insert(loan.borrower_id).second) { ++out.rejected; continue; }
        loan.amount = *amt;
        loan.interest = *rate;
        loan.contract_time = *ct;
        out.loans.push_back(std::move(loan));
    }
    return out;
}

void write_edges_csv(const std::string& path, const std::vector<EdgeRecord>& edges) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "src,dst,weight_s,n_events\n";
    std::ostringstream buf;
    buf.precision(15);
    for (const auto& e : edges) {
        buf.str("");
        buf << e.src << ',' << e.dst << ',' << e.weight_s << ',' << e.n_events << '\n';
        f << buf.str();
    }
}

std::vector<EdgeRecord> read_edges_csv(const std::string& path) {
    auto t = csv::read_file(path);
    int c_src = t.column("src"), c_dst = t.column("dst");
    int c_w = t.column("weight_s"), c_n = t.column("n_events");
    if (c_src < 0 || c_dst < 0 || c_w < 0 || c_n < 0)
        throw std::runtime_error("edges.csv: missing required column");
    std::vector<EdgeRecord> edges;
    edges.reserve(t.rows.size());
    for (const auto& row : t.rows) {
        EdgeRecord e;
        e.src = row[c_src];
        e.dst = row[c_dst];
        e.weight_s = std::stod(row[c_w]);
        e.n_events = std::stoll(row[c_n]);
        edges.push_back(std::move(e));
    }
    return edges;
}

}  // namespace lendgraph::ingest
