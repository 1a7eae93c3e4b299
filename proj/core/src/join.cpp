#include "lendgraph/join.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <stdexcept>
#include <unordered_map>

#include <json.hpp>

#include "lendgraph/csv.hpp"

namespace lendgraph::stats {

double synthetic_profit(const LoanRecord& loan) {
    return loan.defaulted ? 0.0 : loan.amount * loan.interest;
}

std::vector<int> ObservationTable::location_columns() const {
    std::vector<int> cols{kDiffDay};
    for (int j = kFirstCategory; j < static_cast<int>(columns.size()); ++j)
        cols.push_back(j);
    return cols;
}

std::vector<int> ObservationTable::all_columns() const {
    std::vector<int> cols;
    for (int j = 1; j < static_cast<int>(columns.size()); ++j) cols.push_back(j);
    return cols;
}

std::vector<ModelSpec> ObservationTable::ladder_specs() const {
    auto with_intercept = [](std::vector<int> cols) {
        cols.insert(cols.begin(), kIntercept);
        return cols;
    };
    auto concat = [](std::vector<int> a, const std::vector<int>& b) {
        a.insert(a.end(), b.begin(), b.end());
        return a;
    };
    return {
        {"naive", {kIntercept}},
        {"graph", with_intercept(graph_columns())},
        {"location", with_intercept(location_columns())},
        {"graph+location", with_intercept(concat(graph_columns(), location_columns()))},
        {"loan", with_intercept(loan_columns())},
        {"loan+graph+location",
         with_intercept(concat(concat(loan_columns(), graph_columns()),
                               location_columns()))},
    };
}

ObservationTable join_observations(const std::vector<LoanRecord>& loans,
                                   const std::vector<BorrowerGraphMetrics>& metrics,
                                   const std::vector<LocationFeatures>& locfeat,
                                   const geo::Vocabulary& vocab, bool per_borrower) {
    std::unordered_map<NodeId, const LoanRecord*> loan_by_id;
    for (const auto& l : loans) loan_by_id[l.borrower_id] = &l;
    std::unordered_map<NodeId, const BorrowerGraphMetrics*> metric_by_id;
    for (const auto& m : metrics) metric_by_id[m.borrower_id] = &m;

    struct Row {
        NodeId id;
        double diff_day;
        std::vector<double> counts;
    };
    std::vector<Row> rows;
    if (per_borrower) {
        std::map<NodeId, std::pair<std::vector<double>, std::int64_t>> acc;
        std::map<NodeId, double> dd;
        for (const auto& f : locfeat) {
            auto& [sums, n] = acc[f.borrower_id];
            if (sums.empty()) sums.assign(vocab.size(), 0.0);
            for (int j = 0; j < vocab.size(); ++j) sums[j] += f.counts[j];
            dd[f.borrower_id] += f.diff_day;
            ++n;
        }
        for (auto& [id, val] : acc) {
            Row r;
            r.id = id;
            auto& [sums, n] = val;
            r.counts.resize(vocab.size());
            for (int j = 0; j < vocab.size(); ++j)
                r.counts[j] = sums[j] / static_cast<double>(n);
            r.diff_day = dd[id] / static_cast<double>(n);
            rows.push_back(std::move(r));
        }
    } else {
        rows.reserve(locfeat.size());
        for (const auto& f : locfeat) {
            Row r;
            r.id = f.borrower_id;
            r.diff_day = f.diff_day;
            r.counts.assign(f.counts.begin(), f.counts.end());
            rows.push_back(std::move(r));
        }
    }

    ObservationTable t;
    t.columns = {"(Intercept)", "amt", "int", "def", "out", "ins",
                 "triad", "eigen", "far", "dur", "diff_day"};
    for (const auto& name : vocab.names()) t.columns.push_back(name);

    std::vector<Eigen::Index> keep;
    for (std::size_t i = 0; i < rows.size(); ++i)
        if (loan_by_id.count(rows[i].id) && metric_by_id.count(rows[i].id))
            keep.push_back(static_cast<Eigen::Index>(i));

    t.design.resize(keep.size(), t.columns.size());
    t.response.resize(keep.size());
    t.borrower_ids.reserve(keep.size());
    for (std::size_t i = 0; i < keep.size(); ++i) {
        const Row& r = rows[keep[i]];
        const LoanRecord& loan = *loan_by_id.at(r.id);
        const BorrowerGraphMetrics& m = *metric_by_id.at(r.id);
        t.borrower_ids.push_back(r.id);
        t.response[i] = synthetic_profit(loan);
        t.design(i, ObservationTable::kIntercept) = 1.0;
        t.design(i, ObservationTable::kAmt) = loan.amount;
        t.design(i, ObservationTable::kInt) = loan.interest;
        t.design(i, ObservationTable::kDef) = loan.defaulted ? 1.0 : 0.0;
        t.design(i, ObservationTable::kOut) = static_cast<double>(m.out_edges);
        t.design(i, ObservationTable::kIns) = static_cast<double>(m.in_edges);
        t.design(i, ObservationTable::kTriad) = static_cast<double>(m.triads);
        t.design(i, ObservationTable::kEigen) = m.eigen;
        t.design(i, ObservationTable::kFar) = m.farness;
        t.design(i, ObservationTable::kDur) = m.dur;
        t.design(i, ObservationTable::kDiffDay) = r.diff_day;
        for (int j = 0; j < vocab.size(); ++j)
            t.design(i, ObservationTable::kFirstCategory + j) = r.counts[j];
    }
    return t;
}

void write_rows_csv(const std::string& path, const ObservationTable& t) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << "borrower_id,response";
    for (std::size_t j = 1; j < t.columns.size(); ++j) f << ',' << t.columns[j];
    f << '\n';
    f.precision(15);
    for (Eigen::Index i = 0; i < t.design.rows(); ++i) {
        f << t.borrower_ids[i] << ',' << t.response[i];
        for (Eigen::Index j = 1; j < t.design.cols(); ++j) f << ',' << t.design(i, j);
        f << '\n';
    }
}

ObservationTable read_rows_csv(const std::string& path) {
    auto table = csv::read_file(path);
    if (table.header.size() < 2 || table.header[0] != "borrower_id" ||
        table.header[1] != "response")
        throw std::runtime_error("rows.csv: unexpected header");
    ObservationTable t;
    t.columns = {"(Intercept)"};
    for (std::size_t j = 2; j < table.header.size(); ++j)
        t.columns.push_back(table.header[j]);
    t.design.resize(table.rows.size(), t.columns.size());
    t.response.resize(table.rows.size());
    for (std::size_t i = 0; i < table.rows.size(); ++i) {
        const auto& row = table.rows[i];
        if (row.size() != table.header.size())
            throw std::runtime_error("rows.csv: ragged row");
        t.borrower_ids.push_back(row[0]);
        t.response[i] = std::stod(row[1]);
        t.design(i, 0) = 1.0;
        for (std::size_t j = 2; j < row.size(); ++j)
            t.design(i, j - 1) = std::stod(row[j]);
    }
    return t;
}

void write_rows_schema_json(const std::string& path, const ObservationTable& t) {
    nlohmann::json j;
    j["rows"] = t.design.rows();
    j["response"] = "synthetic_profit";
    j["columns"] = t.columns;
    std::ofstream f(path);
    if (!f) throw std::runtime_error("cannot write " + path);
    f << j.dump(2) << '\n';
}

OlsFit fit_default_model(const ObservationTable& t) {
    using T = ObservationTable;
    std::vector<int> cols{T::kIntercept, T::kOut, T::kIns, T::kTriad, T::kDur,
                          T::kAmt, T::kInt, T::kEigen, T::kFar};
    Eigen::MatrixXd X(t.design.rows(), cols.size());
    std::vector<std::string> names;
    for (std::size_t j = 0; j < cols.size(); ++j) {
        X.col(j) = t.design.col(cols[j]);
        names.push_back(t.columns[cols[j]]);
    }
    Eigen::VectorXd def = t.design.col(T::kDef);
    return ols_fit(X, def, std::move(names));
}

}  // namespace lendgraph::stats
