#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace lendgraph::stats {

struct ZipFit {
    double log_lambda = 0.0;    // count model coefficient (log link)
    double logit_pi = 0.0;      // zero-inflation coefficient (logit link)
    double se_log_lambda = 0.0;
    double se_logit_pi = 0.0;
    double loglik = 0.0;
    bool pi_boundary = false;   // no zeros observed; pi pinned at 0
    std::vector<double> pointwise_loglik;

    double lambda() const;
    double pi() const;
};

// Intercept-only zero-inflated Poisson MLE,
//   P(0) = pi + (1-pi) e^-lambda,  P(k) = (1-pi) e^-lambda lambda^k / k!
// Newton iterations on (logit pi, log lambda).
ZipFit fit_zip_intercept_only(const std::vector<std::int64_t>& y);

struct TobitFit {
    std::vector<double> coef;     // location coefficients
    std::vector<double> se;
    double log_scale = 0.0;
    double se_log_scale = 0.0;
    double loglik = 0.0;
    int iterations = 0;
    std::vector<double> pointwise_loglik;
};

struct TobitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Left-censored-at-zero latent normal regression, y = max(0, X b + eps).
// Newton with backtracking line search on the full likelihood.
TobitFit fit_tobit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   int max_iter = 200, double grad_tol = 1e-8);

struct VuongResult {
    double z = 0.0;
    double p_value = 1.0;
    bool indeterminate = false;  // pointwise log-likelihoods identical
    int direction = 0;           // sign of z: +1 favors model 1
};

VuongResult vuong_test(const std::vector<double>& loglik1,
                       const std::vector<double>& loglik2);

}  // namespace lendgraph::stats
