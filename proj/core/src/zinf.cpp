#include "lendgraph/zinf.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "lendgraph/dist.hpp"

namespace lendgraph::stats {

namespace {

double logistic(double x) { return 1.0 / (1.0 + std::exp(-x)); }

}  // namespace

double ZipFit::lambda() const { return std::exp(log_lambda); }
double ZipFit::pi() const { return pi_boundary ? 0.0 : logistic(logit_pi); }

namespace {

// Log-likelihood of the intercept-only ZIP at (g = logit pi, b = log lambda),
// summarized through (n0, n_pos, sum_pos).
double zip_loglik(double g, double b, std::int64_t n0, std::int64_t n_pos,
                  double sum_pos, double sum_lgamma) {
    double pi = logistic(g), lam = std::exp(b);
    double ll = 0.0;
    if (n0 > 0) ll += n0 * std::log(pi + (1.0 - pi) * std::exp(-lam));
    ll += n_pos * (std::log1p(-pi) - lam) + sum_pos * b - sum_lgamma;
    return ll;
}

}  // namespace

ZipFit fit_zip_intercept_only(const std::vector<std::int64_t>& y) {
    if (y.empty()) throw std::invalid_argument("zip: empty sample");
    std::int64_t n0 = 0, n_pos = 0;
    double sum_pos = 0.0, sum_lgamma = 0.0;
    for (auto v : y) {
        if (v < 0) throw std::invalid_argument("zip: negative count");
        if (v == 0) ++n0;
        else {
            ++n_pos;
            sum_pos += static_cast<double>(v);
            sum_lgamma += std::lgamma(static_cast<double>(v) + 1.0);
        }
    }
    if (n_pos == 0) throw std::invalid_argument("zip: no positive counts");

    ZipFit fit;
    const auto n = static_cast<double>(y.size());

    if (n0 == 0) {
        // Zero-inflation mass unidentified at the boundary.
        fit.pi_boundary = true;
        fit.logit_pi = -std::numeric_limits<double>::infinity();
        fit.log_lambda = std::log(sum_pos / n);
        fit.se_logit_pi = std::numeric_limits<double>::quiet_NaN();
        fit.se_log_lambda = 1.0 / std::sqrt(sum_pos);
        double lam = sum_pos / n;
        fit.loglik = -n * lam + sum_pos * std::log(lam) - sum_lgamma;
        fit.pointwise_loglik.reserve(y.size());
        for (auto v : y)
            fit.pointwise_loglik.push_back(-lam + v * std::log(lam) -
                                           std::lgamma(static_cast<double>(v) + 1.0));
        return fit;
    }

    // Start from the moment heuristic: lambda from the positive mean, pi from
    // the excess zero share.
    double lam0 = std::max(sum_pos / static_cast<double>(n_pos), 1e-6);
    double p0 = std::clamp(static_cast<double>(n0) / n - std::exp(-lam0), 1e-4, 0.999);
    double g = std::log(p0 / (1.0 - p0));
    double b = std::log(lam0);

    auto ll = [&](double gg, double bb) {
        return zip_loglik(gg, bb, n0, n_pos, sum_pos, sum_lgamma);
    };
    const double h = 1e-5;
    double cur = ll(g, b);
    for (int iter = 0; iter < 200; ++iter) {
        double dg = (ll(g + h, b) - ll(g - h, b)) / (2 * h);
        double db = (ll(g, b + h) - ll(g, b - h)) / (2 * h);
        double dgg = (ll(g + h, b) - 2 * cur + ll(g - h, b)) / (h * h);
        double dbb = (ll(g, b + h) - 2 * cur + ll(g, b - h)) / (h * h);
        double dgb = (ll(g + h, b + h) - ll(g + h, b - h) - ll(g - h, b + h) +
                      ll(g - h, b - h)) / (4 * h * h);
        double det = dgg * dbb - dgb * dgb;
        double step_g, step_b;
        if (det > 0 && dgg < 0) {  // Hessian negative definite: Newton
            step_g = -(dbb * dg - dgb * db) / det;
            step_b = -(dgg * db - dgb * dg) / det;
        } else {  // fall back to gradient ascent
            step_g = dg;
            step_b = db;
        }
        double t = 1.0;
        while (t > 1e-10 && ll(g + t * step_g, b + t * step_b) < cur) t /= 2;
        g += t * step_g;
        b += t * step_b;
        double next = ll(g, b);
        bool converged = std::fabs(next - cur) < 1e-12 * (1.0 + std::fabs(cur)) &&
                         std::hypot(dg, db) < 1e-6 * (1.0 + std::fabs(cur));
        cur = next;
        if (converged) break;
    }

    fit.logit_pi = g;
    fit.log_lambda = b;
    fit.loglik = cur;

    // Standard errors from the observed information (numeric Hessian).
    {
        double dgg = (ll(g + h, b) - 2 * cur + ll(g - h, b)) / (h * h);
        double dbb = (ll(g, b + h) - 2 * cur + ll(g, b - h)) / (h * h);
        double dgb = (ll(g + h, b + h) - ll(g + h, b - h) - ll(g - h, b + h) +
                      ll(g - h, b - h)) / (4 * h * h);
        double det = dgg * dbb - dgb * dgb;
        fit.se_logit_pi = std::sqrt(std::max(0.0, -dbb / det));
        fit.se_log_lambda = std::sqrt(std::max(0.0, -dgg / det));
    }

    double pi = logistic(g), lam = std::exp(b);
    double lp0 = std::log(pi + (1.0 - pi) * std::exp(-lam));
    fit.pointwise_loglik.reserve(y.size());
    for (auto v : y) {
        if (v == 0) fit.pointwise_loglik.push_back(lp0);
        else
            fit.pointwise_loglik.push_back(std::log1p(-pi) - lam +
                                           v * std::log(lam) -
                                           std::lgamma(static_cast<double>(v) + 1.0));
    }
    return fit;
}

namespace {

struct TobitObjective {
    const Eigen::MatrixXd& X;
    const Eigen::VectorXd& y;

    // theta = (beta..., log sigma)
    double loglik(const Eigen::VectorXd& theta,
                  std::vector<double>* pointwise = nullptr) const {
        const auto p = X.cols();
        double logsig = theta[p];
        double sig = std::exp(logsig);
        Eigen::VectorXd mu = X * theta.head(p);
        double ll = 0.0;
        if (pointwise) pointwise->resize(X.rows());
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            double li;
            if (y[i] > 0.0) {
                double z = (y[i] - mu[i]) / sig;
                li = -logsig + std::log(dist::normal_pdf(z));
            } else {
                double u = -mu[i] / sig;
                li = std::log(std::max(dist::normal_cdf(u), 1e-300));
            }
            ll += li;
            if (pointwise) (*pointwise)[i] = li;
        }
        return ll;
    }

    Eigen::VectorXd gradient(const Eigen::VectorXd& theta) const {
        const auto p = X.cols();
        double logsig = theta[p];
        double sig = std::exp(logsig);
        Eigen::VectorXd mu = X * theta.head(p);
        Eigen::VectorXd g = Eigen::VectorXd::Zero(p + 1);
        for (Eigen::Index i = 0; i < X.rows(); ++i) {
            if (y[i] > 0.0) {
                double z = (y[i] - mu[i]) / sig;
                g.head(p) += X.row(i).transpose() * (z / sig);
                g[p] += z * z - 1.0;
            } else {
                double u = -mu[i] / sig;
                double mills = dist::normal_pdf(u) / std::max(dist::normal_cdf(u), 1e-300);
                g.head(p) -= X.row(i).transpose() * (mills / sig);
                g[p] += mills * (-u);
            }
        }
        return g;
    }
};

}  // namespace

TobitFit fit_tobit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                   int max_iter, double grad_tol) {
    const auto n = X.rows();
    const auto p = X.cols();
    if (n <= p) throw TobitError("tobit: insufficient data");
    {
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(X);
        qr.setThreshold(1e-10);
        if (qr.rank() < p) throw TobitError("tobit: design matrix is rank deficient");
    }
    if ((y.array() > 0.0).count() == 0) throw TobitError("tobit: all responses censored");

    TobitObjective obj{X, y};

    // OLS start.
    Eigen::VectorXd theta(p + 1);
    theta.head(p) = X.householderQr().solve(y);
    double rss = (y - X * theta.head(p)).squaredNorm();
    theta[p] = 0.5 * std::log(std::max(rss / static_cast<double>(n), 1e-12));

    double cur = obj.loglik(theta);
    const double h = 1e-6;
    int iter = 0;
    Eigen::VectorXd g;
    for (; iter < max_iter; ++iter) {
        g = obj.gradient(theta);
        if (g.lpNorm<Eigen::Infinity>() < grad_tol * (1.0 + std::fabs(cur))) break;

        // Finite-difference Hessian of the analytic gradient.
        Eigen::MatrixXd H(p + 1, p + 1);
        for (Eigen::Index j = 0; j <= p; ++j) {
            Eigen::VectorXd tp = theta, tm = theta;
            tp[j] += h;
            tm[j] -= h;
            H.col(j) = (obj.gradient(tp) - obj.gradient(tm)) / (2 * h);
        }
        H = 0.5 * (H + H.transpose().eval());

        Eigen::VectorXd step = (-H).ldlt().solve(g);
        if (!step.allFinite() || step.dot(g) <= 0) step = g;  // ascent fallback

        double t = 1.0;
        while (t > 1e-12 && obj.loglik(theta + t * step) < cur) t /= 2;
        if (t <= 1e-12) break;
        theta += t * step;
        cur = obj.loglik(theta);
    }
    g = obj.gradient(theta);
    if (g.lpNorm<Eigen::Infinity>() >= grad_tol * (1.0 + std::fabs(cur)) * 100)
        throw TobitError("tobit: no convergence, gradient norm " +
                         std::to_string(g.lpNorm<Eigen::Infinity>()));

    TobitFit fit;
    fit.iterations = iter;
    fit.coef.assign(theta.data(), theta.data() + p);
    fit.log_scale = theta[p];
    fit.loglik = obj.loglik(theta, &fit.pointwise_loglik);

    Eigen::MatrixXd H(p + 1, p + 1);
    for (Eigen::Index j = 0; j <= p; ++j) {
        Eigen::VectorXd tp = theta, tm = theta;
        tp[j] += h;
        tm[j] -= h;
        H.col(j) = (obj.gradient(tp) - obj.gradient(tm)) / (2 * h);
    }
    Eigen::MatrixXd cov = (-H).inverse();
    fit.se.resize(p);
    for (Eigen::Index j = 0; j < p; ++j)
        fit.se[j] = std::sqrt(std::max(0.0, cov(j, j)));
    fit.se_log_scale = std::sqrt(std::max(0.0, cov(p, p)));
    return fit;
}

VuongResult vuong_test(const std::vector<double>& loglik1,
                       const std::vector<double>& loglik2) {
    if (loglik1.size() != loglik2.size() || loglik1.empty())
        throw std::invalid_argument("vuong: mismatched log-likelihood vectors");
    const auto n = static_cast<double>(loglik1.size());
    double mean = 0.0;
    for (std::size_t i = 0; i < loglik1.size(); ++i)
        mean += loglik1[i] - loglik2[i];
    mean /= n;
    double var = 0.0;
    for (std::size_t i = 0; i < loglik1.size(); ++i) {
        double d = loglik1[i] - loglik2[i] - mean;
        var += d * d;
    }
    var /= (n - 1.0);

    VuongResult r;
    if (var <= 0.0) {
        r.indeterminate = true;
        return r;
    }
    r.z = std::sqrt(n) * mean / std::sqrt(var);
    r.p_value = 2.0 * (1.0 - dist::normal_cdf(std::fabs(r.z)));
    r.direction = r.z > 0 ? 1 : (r.z < 0 ? -1 : 0);
    return r;
}

}  // namespace lendgraph::stats
