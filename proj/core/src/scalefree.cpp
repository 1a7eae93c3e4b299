#include "lendgraph/scalefree.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace lendgraph::scalefree {

DegreeMode degree_mode_from_string(const std::string& s) {
    if (s == "total") return DegreeMode::Total;
    if (s == "in") return DegreeMode::In;
    if (s == "out") return DegreeMode::Out;
    throw std::invalid_argument("unknown degree mode: " + s);
}

std::vector<std::int64_t> degree_sequence(const graph::CommGraph& g, DegreeMode mode) {
    std::vector<std::int64_t> deg(g.num_nodes());
    for (int i = 0; i < g.num_nodes(); ++i) {
        switch (mode) {
            case DegreeMode::Total: deg[i] = static_cast<std::int64_t>(g.und_arcs(i).size()); break;
            case DegreeMode::In: deg[i] = static_cast<std::int64_t>(g.in_arcs(i).size()); break;
            case DegreeMode::Out: deg[i] = static_cast<std::int64_t>(g.out_arcs(i).size()); break;
        }
    }
    return deg;
}

std::map<std::int64_t, std::int64_t> degree_distribution(const graph::CommGraph& g,
                                                         DegreeMode mode) {
    std::map<std::int64_t, std::int64_t> hist;
    for (auto d : degree_sequence(g, mode)) hist[d] += 1;
    return hist;
}

namespace {

struct TailFit {
    double alpha;
    double ks;
};

// MLE + KS on the suffix sorted[from..end) of an ascending-sorted sequence.
TailFit fit_tail(const std::vector<std::int64_t>& sorted, std::size_t from,
                 const std::vector<double>& suffix_log, double x0) {
    const std::size_t n = sorted.size() - from;
    const double sum_log = suffix_log[from] - static_cast<double>(n) * std::log(x0);
    const double alpha = 1.0 + static_cast<double>(n) / sum_log;
    double ks = 0.0;
    for (std::size_t i = from; i < sorted.size(); ++i) {
        double fitted = 1.0 - std::pow(static_cast<double>(sorted[i]) / x0, -(alpha - 1.0));
        double lo = static_cast<double>(i - from) / static_cast<double>(n);
        double hi = static_cast<double>(i - from + 1) / static_cast<double>(n);
        ks = std::max(ks, std::max(std::fabs(fitted - lo), std::fabs(fitted - hi)));
    }
    return {alpha, ks};
}

}  // namespace

PowerLawFit fit_power_law(const std::vector<std::int64_t>& degrees,
                          const FitOptions& opt) {
    std::vector<std::int64_t> sorted;
    sorted.reserve(degrees.size());
    for (auto d : degrees)
        if (d > 0) sorted.push_back(d);
    std::sort(sorted.begin(), sorted.end());

    auto shift = [&](double xmin) {
        return opt.discrete_shift ? xmin - 0.5 : xmin;
    };

    // suffix_log[i] = sum of ln(sorted[j]) for j >= i
    std::vector<double> suffix_log(sorted.size() + 1, 0.0);
    for (std::size_t i = sorted.size(); i-- > 0;)
        suffix_log[i] = suffix_log[i + 1] + std::log(static_cast<double>(sorted[i]));

    auto fit_at = [&](double xmin) -> PowerLawFit {
        auto it = std::lower_bound(sorted.begin(), sorted.end(),
                                   static_cast<std::int64_t>(std::ceil(xmin)));
        std::size_t from = static_cast<std::size_t>(it - sorted.begin());
        std::int64_t n_tail = static_cast<std::int64_t>(sorted.size() - from);
        if (n_tail < 2) throw InsufficientData();
        if (sorted[from] == sorted.back()) throw DegenerateTail();
        auto tf = fit_tail(sorted, from, suffix_log, shift(xmin));
        return {tf.alpha, xmin, n_tail, tf.ks};
    };

    if (opt.xmin) return fit_at(*opt.xmin);

    // KS scan over unique degree values with an admissible tail size.
    std::vector<std::int64_t> candidates(sorted.begin(), sorted.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

    std::optional<PowerLawFit> best;
    for (int pass = 0; pass < 2 && !best; ++pass) {
        // Second pass relaxes the tail-size floor for tiny datasets.
        std::int64_t floor_n = pass == 0 ? std::max<std::int64_t>(opt.min_tail, 2) : 2;
        for (auto xmin : candidates) {
            PowerLawFit f;
            try {
                f = fit_at(static_cast<double>(xmin));
            } catch (const FitError&) {
                continue;
            }
            if (f.n_tail < floor_n) continue;
            if (!best || f.ks_stat < best->ks_stat) best = f;
        }
    }
    if (!best) {
        if (sorted.size() < 2) throw InsufficientData();
        throw DegenerateTail();
    }
    return *best;
}

PerturbResult perturb_exponent(const graph::CommGraph& g, DegreeMode mode,
                               double removal_fraction, int trials,
                               std::uint64_t seed, const FitOptions& opt) {
    if (!(removal_fraction > 0.0 && removal_fraction < 1.0))
        throw std::invalid_argument("removal_fraction must be in (0, 1)");
    const int n = g.num_nodes();
    const int k = static_cast<int>(removal_fraction * n);

    PerturbResult out;
    out.alphas.reserve(trials);
    for (int t = 0; t < trials; ++t) {
        std::seed_seq seq{seed, static_cast<std::uint64_t>(t)};
        std::mt19937_64 rng(seq);

        std::vector<char> removed(n, 0);
        // partial Fisher-Yates over node indices
        std::vector<int> idx(n);
        for (int i = 0; i < n; ++i) idx[i] = i;
        for (int i = 0; i < k; ++i) {
            std::uniform_int_distribution<int> pick(i, n - 1);
            std::swap(idx[i], idx[pick(rng)]);
            removed[idx[i]] = 1;
        }

        std::vector<std::int64_t> deg;
        deg.reserve(n - k);
        for (int i = 0; i < n; ++i) {
            if (removed[i]) continue;
            std::int64_t d = 0;
            switch (mode) {
                case DegreeMode::Total:
                    for (const auto& a : g.und_arcs(i)) d += !removed[a.to];
                    break;
                case DegreeMode::In:
                    for (const auto& a : g.in_arcs(i)) d += !removed[a.to];
                    break;
                case DegreeMode::Out:
                    for (const auto& a : g.out_arcs(i)) d += !removed[a.to];
                    break;
            }
            deg.push_back(d);
        }
        try {
            out.alphas.push_back(fit_power_law(deg, opt).alpha);
        } catch (const FitError&) {
            ++out.degenerate_trials;
        }
    }
    return out;
}

}  // namespace lendgraph::scalefree
