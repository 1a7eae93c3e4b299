#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lendgraph::stats {

struct OlsFit {
    std::vector<std::string> names;   // design columns, intercept first
    std::vector<double> coef;         // NaN where dropped
    std::vector<double> se;
    std::vector<double> t;
    std::vector<double> p;
    std::vector<bool> dropped;        // exactly-collinear columns, reported NA

    double r2 = 0.0;
    double adj_r2 = 0.0;
    double f_stat = 0.0;
    double f_p = 1.0;
    std::int64_t f_df1 = 0;           // predictors (excl. intercept)
    std::int64_t f_df2 = 0;           // residual df
    double sigma2 = 0.0;              // residual mean square
    bool degenerate_response = false; // zero total variance

    std::int64_t n = 0;
    std::int64_t n_params = 0;        // estimated coefficients, incl. intercept

    std::vector<double> residuals;
    std::vector<double> fitted;
    std::vector<double> hat;          // leverage h_ii

    double rss = 0.0;
    double loglik() const;            // Gaussian, sigma2_mle = rss / n
    double aic() const;               // 2k - 2 ln L with k = n_params

    Eigen::VectorXd predict(const Eigen::MatrixXd& X) const;
};

// QR least squares with exact-collinearity detection: rank-deficient columns
// are dropped from the fit and reported NA, the rest refit cleanly.
// Throws std::invalid_argument when n <= number of columns.
OlsFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               std::vector<std::string> names);

struct CooksVector {
    std::vector<double> d;            // D_i, +inf at exact leverage points
    std::vector<std::int64_t> infinite;  // indices with h_ii == 1
};

CooksVector cooks_distance(const OlsFit& fit);

struct CvResult {
    std::vector<double> fold_mse;
    double mean_mse = 0.0;
    std::uint64_t seed = 0;
    int k = 0;
    bool small_fold_warning = false;  // some fold's training set has n < params
};

CvResult kfold_cv(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const std::vector<std::string>& names, int k, std::uint64_t seed);

enum class StepDirection { Backward, Forward };

struct StepwiseResult {
    std::vector<int> selected;        // column indices of X kept (incl. intercept)
    OlsFit fit;                       // final model
    std::vector<double> aic_trace;    // AIC after each accepted step
    std::vector<std::string> removed; // or added, in order, for the log
};

// Greedy single-feature stepwise selection on AIC. The intercept (column 0)
// is never a candidate. Ties break on lexicographic feature name.
StepwiseResult stepwise_aic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const std::vector<std::string>& names,
                            StepDirection direction = StepDirection::Backward);

// exp((aic1 - aic2) / 2)
double relative_likelihood(double aic1, double aic2);

struct LadderEntry {
    std::string name;
    double r2 = 0.0;
    double adj_r2 = 0.0;
};

struct ModelSpec {
    std::string name;
    std::vector<int> columns;  // into the shared design matrix; 0 = intercept
};

// Fits each spec on the same rows; entries come back in input order.
std::vector<LadderEntry> compare_nested(const Eigen::MatrixXd& X,
                                        const Eigen::VectorXd& y,
                                        const std::vector<std::string>& names,
                                        const std::vector<ModelSpec>& specs);

}  // namespace lendgraph::stats
