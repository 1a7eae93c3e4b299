#pragma once

#include <string>
#include <vector>

#include <Eigen/Dense>

#include "lendgraph/geo.hpp"
#include "lendgraph/ols.hpp"
#include "lendgraph/types.hpp"

namespace lendgraph::stats {

// Annual synthetic profitability: principal x interest for a performing
// loan, exactly zero for a default.
double synthetic_profit(const LoanRecord& loan);

// The joined regression matrix. Fixed column layout:
//   0 (Intercept), 1 amt, 2 int, 3 def, 4 out, 5 ins, 6 triad, 7 eigen,
//   8 far, 9 dur, 10 diff_day, 11.. one column per vocabulary category.
// The response (synthetic profit) is kept separately.
struct ObservationTable {
    std::vector<std::string> columns;   // design column names
    Eigen::MatrixXd design;
    Eigen::VectorXd response;
    std::vector<NodeId> borrower_ids;   // one per row

    static constexpr int kIntercept = 0;
    static constexpr int kAmt = 1;
    static constexpr int kInt = 2;
    static constexpr int kDef = 3;
    static constexpr int kOut = 4;
    static constexpr int kIns = 5;
    static constexpr int kTriad = 6;
    static constexpr int kEigen = 7;
    static constexpr int kFar = 8;
    static constexpr int kDur = 9;
    static constexpr int kDiffDay = 10;
    static constexpr int kFirstCategory = 11;

    std::vector<int> loan_columns() const { return {kAmt, kInt, kDef}; }
    std::vector<int> graph_columns() const {
        return {kOut, kIns, kTriad, kEigen, kFar, kDur};
    }
    std::vector<int> location_columns() const;  // diff_day + categories
    std::vector<int> all_columns() const;       // everything but the intercept

    // Named predictor sets for the nested-model comparison, in ascending
    // expected explanatory power: naive, graph, location, graph+location,
    // loan, all. Each spec includes the intercept.
    std::vector<ModelSpec> ladder_specs() const;
};

// Joins loans x graph metrics x location features into per-ping observation
// rows (one row per location-feature record). When per_borrower is set,
// location counts and diff_day are mean-aggregated to one row per borrower.
ObservationTable join_observations(const std::vector<LoanRecord>& loans,
                                   const std::vector<BorrowerGraphMetrics>& metrics,
                                   const std::vector<LocationFeatures>& locfeat,
                                   const geo::Vocabulary& vocab,
                                   bool per_borrower = false);

void write_rows_csv(const std::string& path, const ObservationTable& table);
ObservationTable read_rows_csv(const std::string& path);
void write_rows_schema_json(const std::string& path, const ObservationTable& table);

// Linear-probability OLS of default on {out, ins, triad, dur, amt, int,
// eigen, far}.
OlsFit fit_default_model(const ObservationTable& table);

}  // namespace lendgraph::stats
