#include "lendgraph/ols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>

#include "lendgraph/dist.hpp"

namespace lendgraph::stats {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

double OlsFit::loglik() const {
    if (n == 0) return kNaN;
    double s2 = std::max(rss / static_cast<double>(n),
                         std::numeric_limits<double>::min());
    return -0.5 * static_cast<double>(n) * (std::log(2.0 * M_PI * s2) + 1.0);
}

double OlsFit::aic() const { return 2.0 * static_cast<double>(n_params) - 2.0 * loglik(); }

Eigen::VectorXd OlsFit::predict(const Eigen::MatrixXd& X) const {
    Eigen::VectorXd b(X.cols());
    for (int j = 0; j < X.cols(); ++j)
        b[j] = dropped[j] ? 0.0 : coef[j];
    return X * b;
}

OlsFit ols_fit(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
               std::vector<std::string> names) {
    const auto n = X.rows();
    const auto p = X.cols();
    if (static_cast<std::size_t>(p) != names.size())
        throw std::invalid_argument("ols: names/columns mismatch");
    if (n <= p) throw std::invalid_argument("ols: insufficient data (n <= k)");

    // Left-to-right rank detection: a column exactly collinear with earlier
    // ones is the one reported NA, matching the convention that the first
    // occurrence of a direction wins. Re-orthogonalized Gram-Schmidt against
    // the basis of kept columns.
    std::vector<int> kept;
    {
        Eigen::MatrixXd Q(n, std::min(n, p));
        Eigen::Index r = 0;
        for (int j = 0; j < p; ++j) {
            Eigen::VectorXd v = X.col(j);
            const double orig = v.norm();
            if (orig == 0.0) continue;
            for (int pass = 0; pass < 2 && r > 0; ++pass)
                v -= Q.leftCols(r) * (Q.leftCols(r).transpose() * v);
            if (v.norm() > 1e-10 * orig) {
                Q.col(r) = v / v.norm();
                kept.push_back(j);
                ++r;
            }
        }
    }

    Eigen::MatrixXd Xk(n, kept.size());
    for (std::size_t j = 0; j < kept.size(); ++j) Xk.col(j) = X.col(kept[j]);

    Eigen::HouseholderQR<Eigen::MatrixXd> qr(Xk);
    Eigen::VectorXd beta = qr.solve(y);
    Eigen::VectorXd fitted = Xk * beta;
    Eigen::VectorXd resid = y - fitted;

    OlsFit fit;
    fit.names = std::move(names);
    fit.n = n;
    fit.n_params = static_cast<std::int64_t>(kept.size());
    fit.coef.assign(p, kNaN);
    fit.se.assign(p, kNaN);
    fit.t.assign(p, kNaN);
    fit.p.assign(p, kNaN);
    fit.dropped.assign(p, true);

    fit.rss = resid.squaredNorm();
    const double df_resid = static_cast<double>(n - fit.n_params);
    fit.sigma2 = fit.rss / df_resid;

    // (X'X)^-1 diagonal through the triangular factor.
    Eigen::MatrixXd R = qr.matrixQR()
                            .topLeftCorner(kept.size(), kept.size())
                            .triangularView<Eigen::Upper>();
    Eigen::MatrixXd Rinv = R.inverse();
    Eigen::MatrixXd XtXinv = Rinv * Rinv.transpose();

    for (std::size_t j = 0; j < kept.size(); ++j) {
        int col = kept[j];
        fit.dropped[col] = false;
        fit.coef[col] = beta[j];
        fit.se[col] = std::sqrt(fit.sigma2 * XtXinv(j, j));
        fit.t[col] = beta[j] / fit.se[col];
        fit.p[col] = dist::t_pvalue(fit.t[col], df_resid);
    }

    const double ymean = y.mean();
    const double tss = (y.array() - ymean).square().sum();
    if (tss <= 0.0) {
        fit.degenerate_response = true;
        fit.r2 = 0.0;
        fit.adj_r2 = 0.0;
    } else {
        fit.r2 = 1.0 - fit.rss / tss;
        fit.adj_r2 = 1.0 - (1.0 - fit.r2) * static_cast<double>(n - 1) / df_resid;
    }
    fit.f_df1 = fit.n_params - 1;
    fit.f_df2 = n - fit.n_params;
    if (fit.f_df1 > 0 && !fit.degenerate_response) {
        fit.f_stat = (fit.r2 / static_cast<double>(fit.f_df1)) /
                     ((1.0 - fit.r2) / df_resid);
        fit.f_p = dist::f_sf(fit.f_stat, static_cast<double>(fit.f_df1), df_resid);
    }

    fit.residuals.assign(resid.data(), resid.data() + n);
    fit.fitted.assign(fitted.data(), fitted.data() + n);

    // h_ii = || R^-T x_i ||^2
    fit.hat.resize(n);
    Eigen::MatrixXd RinvT = Rinv.transpose();
    for (Eigen::Index i = 0; i < n; ++i)
        fit.hat[i] = (RinvT * Xk.row(i).transpose()).squaredNorm();
    return fit;
}

CooksVector cooks_distance(const OlsFit& fit) {
    CooksVector out;
    out.d.resize(fit.hat.size());
    const double k = static_cast<double>(fit.n_params);
    for (std::size_t i = 0; i < fit.hat.size(); ++i) {
        double h = fit.hat[i];
        if (h >= 1.0 - 1e-12) {
            out.d[i] = std::numeric_limits<double>::infinity();
            out.infinite.push_back(static_cast<std::int64_t>(i));
            continue;
        }
        double e = fit.residuals[i];
        out.d[i] = (e * e / (k * fit.sigma2)) * (h / ((1.0 - h) * (1.0 - h)));
    }
    return out;
}

CvResult kfold_cv(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const std::vector<std::string>& names, int k, std::uint64_t seed) {
    const auto n = X.rows();
    if (n < k) throw std::invalid_argument("cv: n < k");
    std::vector<Eigen::Index> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(seed);
    std::shuffle(order.begin(), order.end(), rng);

    CvResult out;
    out.k = k;
    out.seed = seed;
    for (int fold = 0; fold < k; ++fold) {
        std::vector<Eigen::Index> test, train;
        for (Eigen::Index i = 0; i < n; ++i)
            (static_cast<int>(i % k) == fold ? test : train).push_back(order[i]);
        if (static_cast<Eigen::Index>(train.size()) <= X.cols())
            out.small_fold_warning = true;

        Eigen::MatrixXd Xtr(train.size(), X.cols());
        Eigen::VectorXd ytr(train.size());
        for (std::size_t i = 0; i < train.size(); ++i) {
            Xtr.row(i) = X.row(train[i]);
            ytr[i] = y[train[i]];
        }
        OlsFit fit = ols_fit(Xtr, ytr, names);

        Eigen::MatrixXd Xte(test.size(), X.cols());
        Eigen::VectorXd yte(test.size());
        for (std::size_t i = 0; i < test.size(); ++i) {
            Xte.row(i) = X.row(test[i]);
            yte[i] = y[test[i]];
        }
        double mse = (yte - fit.predict(Xte)).squaredNorm() /
                     static_cast<double>(test.size());
        out.fold_mse.push_back(mse);
    }
    out.mean_mse = std::accumulate(out.fold_mse.begin(), out.fold_mse.end(), 0.0) /
                   static_cast<double>(out.fold_mse.size());
    return out;
}

namespace {

OlsFit fit_subset(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                  const std::vector<std::string>& names,
                  const std::vector<int>& cols) {
    Eigen::MatrixXd Xs(X.rows(), cols.size());
    std::vector<std::string> ns;
    ns.reserve(cols.size());
    for (std::size_t j = 0; j < cols.size(); ++j) {
        Xs.col(j) = X.col(cols[j]);
        ns.push_back(names[cols[j]]);
    }
    return ols_fit(Xs, y, std::move(ns));
}

// Sufficient statistics for cheap subset refits: any column subset's RSS
// comes from the Gram matrix in O(p^3) instead of O(n p^2).
struct GramCache {
    Eigen::MatrixXd xtx;   // column-equilibrated: D X'X D with D = diag(1/||x_j||)
    Eigen::VectorXd xty;   // D X'y
    Eigen::VectorXd scale; // 1/||x_j|| (1 for zero columns)
    double yty = 0.0;
    double tss = 0.0;
    Eigen::Index n = 0;

    // Columns are normalized to unit length before forming the Gram matrix;
    // RSS and rank are invariant while the condition number drops enough to
    // keep normal-equation subset solves usable on mixed-scale designs.
    GramCache(const Eigen::MatrixXd& X, const Eigen::VectorXd& y)
        : yty(y.squaredNorm()), tss((y.array() - y.mean()).square().sum()),
          n(X.rows()) {
        scale.resize(X.cols());
        for (Eigen::Index j = 0; j < X.cols(); ++j) {
            double norm = X.col(j).norm();
            scale[j] = norm > 0.0 ? 1.0 / norm : 1.0;
        }
        xtx = scale.asDiagonal() * (X.transpose() * X) * scale.asDiagonal();
        xty = scale.asDiagonal() * (X.transpose() * y);
    }

    // Returns RSS; rank_out gets the numerical rank of the subset design.
    double subset_rss(const std::vector<int>& cols, Eigen::Index& rank_out) const {
        const auto p = static_cast<Eigen::Index>(cols.size());
        Eigen::MatrixXd G(p, p);
        Eigen::VectorXd g(p);
        for (Eigen::Index a = 0; a < p; ++a) {
            g[a] = xty[cols[a]];
            for (Eigen::Index b = 0; b < p; ++b) G(a, b) = xtx(cols[a], cols[b]);
        }
        Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(G);
        cod.setThreshold(1e-10);
        rank_out = cod.rank();
        Eigen::VectorXd beta = cod.solve(g);
        // Quadratic evaluated at beta: never below the true minimum, so a
        // slightly inexact solve can only overstate RSS, never blow up R^2.
        double rss = yty - 2.0 * beta.dot(g) + beta.dot(G * beta);
        return std::max(rss, 0.0);
    }

    double subset_aic(const std::vector<int>& cols) const {
        Eigen::Index rank = 0;
        double rss = subset_rss(cols, rank);
        double s2 = std::max(rss / static_cast<double>(n),
                             std::numeric_limits<double>::min());
        double ll = -0.5 * static_cast<double>(n) * (std::log(2.0 * M_PI * s2) + 1.0);
        return 2.0 * static_cast<double>(rank) - 2.0 * ll;
    }
};

}  // namespace

StepwiseResult stepwise_aic(const Eigen::MatrixXd& X, const Eigen::VectorXd& y,
                            const std::vector<std::string>& names,
                            StepDirection direction) {
    StepwiseResult res;
    std::vector<int> current;
    std::vector<int> pool;  // candidates not in the model (forward only)
    if (direction == StepDirection::Backward) {
        for (int j = 0; j < X.cols(); ++j) current.push_back(j);
    } else {
        current.push_back(0);
        for (int j = 1; j < X.cols(); ++j) pool.push_back(j);
    }

    GramCache gram(X, y);
    double best_aic = gram.subset_aic(current);
    res.aic_trace.push_back(best_aic);

    while (true) {
        double step_aic = best_aic;
        int step_idx = -1;  // position in current (backward) or pool (forward)
        std::string step_name;
        const auto& candidates = direction == StepDirection::Backward ? current : pool;
        for (std::size_t i = 0; i < candidates.size(); ++i) {
            int col = candidates[i];
            if (col == 0) continue;  // intercept stays
            std::vector<int> trial = current;
            if (direction == StepDirection::Backward)
                trial.erase(std::find(trial.begin(), trial.end(), col));
            else
                trial.push_back(col);
            double aic = gram.subset_aic(trial);
            bool better = aic < step_aic - 1e-12 ||
                          (std::fabs(aic - step_aic) <= 1e-12 && step_idx >= 0 &&
                           names[col] < step_name);
            if (better) {
                step_aic = aic;
                step_idx = static_cast<int>(i);
                step_name = names[col];
            }
        }
        if (step_idx < 0) break;
        int col = candidates[step_idx];
        if (direction == StepDirection::Backward) {
            current.erase(std::find(current.begin(), current.end(), col));
        } else {
            pool.erase(pool.begin() + step_idx);
            current.push_back(col);
        }
        res.removed.push_back(names[col]);
        best_aic = step_aic;
        res.aic_trace.push_back(best_aic);
    }

    std::sort(current.begin(), current.end());
    res.selected = current;
    res.fit = fit_subset(X, y, names, current);
    return res;
}

double relative_likelihood(double aic1, double aic2) {
    return std::exp((aic1 - aic2) / 2.0);
}

std::vector<LadderEntry> compare_nested(const Eigen::MatrixXd& X,
                                        const Eigen::VectorXd& y,
                                        const std::vector<std::string>& names,
                                        const std::vector<ModelSpec>& specs) {
    if (!names.empty() && static_cast<Eigen::Index>(names.size()) != X.cols())
        throw std::invalid_argument("compare_nested: names/columns mismatch");
    std::vector<LadderEntry> out;
    out.reserve(specs.size());
    // Few specs, so each gets a full QR fit: exact R^2 regardless of column
    // scaling, unlike the Gram shortcut used inside stepwise search.
    for (const auto& spec : specs) {
        auto fit = fit_subset(X, y, names, spec.columns);
        LadderEntry e;
        e.name = spec.name;
        e.r2 = fit.r2;
        e.adj_r2 = fit.adj_r2;
        out.push_back(e);
    }
    return out;
}

}  // namespace lendgraph::stats
