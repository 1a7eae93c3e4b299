#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "lendgraph/graph.hpp"

namespace lendgraph::scalefree {

enum class DegreeMode { Total, In, Out };

DegreeMode degree_mode_from_string(const std::string& s);

std::map<std::int64_t, std::int64_t> degree_distribution(const graph::CommGraph& g,
                                                         DegreeMode mode);

std::vector<std::int64_t> degree_sequence(const graph::CommGraph& g, DegreeMode mode);

struct PowerLawFit {
    double alpha = 0.0;   // exponent estimate, > 1
    double xmin = 0.0;    // lower bound of the scaling regime
    std::int64_t n_tail = 0;
    double ks_stat = 0.0;
};

struct FitOptions {
    std::optional<double> xmin;    // fixed lower bound; scanned when unset
    bool discrete_shift = true;    // use (xmin - 0.5) in the continuous MLE
    std::int64_t min_tail = 50;    // smallest tail admitted in the xmin scan
};

struct FitError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct DegenerateTail : FitError {
    DegenerateTail() : FitError("all tail values equal: alpha diverges") {}
};
struct InsufficientData : FitError {
    InsufficientData() : FitError("fewer than 2 observations in the tail") {}
};

// Continuous-approximation MLE alpha = 1 + n / sum(ln(x_i / x0)) with
// x0 = xmin - 0.5 (discrete shift) or xmin. When xmin is not given, candidate
// values are scanned and the one minimizing the KS distance between the
// empirical and fitted tail CDFs wins.
PowerLawFit fit_power_law(const std::vector<std::int64_t>& degrees,
                          const FitOptions& opt = {});

struct PerturbResult {
    std::vector<double> alphas;         // one per successful trial
    std::int64_t degenerate_trials = 0; // refits that hit a FitError
};

// Removes a uniform random fraction of nodes per trial, refits the degree
// power law on the induced subgraph. Per-trial RNG streams are derived from
// (seed, trial) so results are independent of evaluation order.
PerturbResult perturb_exponent(const graph::CommGraph& g, DegreeMode mode,
                               double removal_fraction, int trials,
                               std::uint64_t seed, const FitOptions& opt = {});

}  // namespace lendgraph::scalefree
