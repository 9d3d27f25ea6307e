#ifndef RDTK_METRICS_HPP
#define RDTK_METRICS_HPP

#include <cmath>
#include <cstddef>
#include <limits>
#include <ostream>
#include <vector>

#include "rdtk/errors.hpp"
#include "rdtk/histogram.hpp"

namespace rdtk {

/// Normalized L1 distance between two histograms: the summed absolute
/// per-bin difference (first-touch counters included as one extra bin)
/// divided by the reference histogram's total mass.
inline double histogram_error(const RealHistogram& model, const RealHistogram& truth) {
    if (model.cutoff() != truth.cutoff())
        throw IntegrityError("histogram cutoffs differ");
    const double denom = truth.total();
    double diff = std::abs(model.cold() - truth.cold());
    for (std::size_t i = 0; i <= model.cutoff(); ++i)
        diff += std::abs(model[i] - truth[i]);
    if (denom <= 0.0)
        return diff == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return diff / denom;
}

inline double histogram_error(const RealHistogram& model, const CountHistogram& truth) {
    return histogram_error(model, to_real(truth));
}

/// Model-versus-simulation agreement for one cache configuration.
struct ComparisonReport {
    double histogram_error = 0.0;
    double model_miss_rate = 0.0;
    double oracle_miss_rate = 0.0;
    double miss_rate_error = 0.0; // absolute difference
};

inline ComparisonReport compare_prediction(const RealHistogram& model_rdh,
                                           const CountHistogram& oracle_rdh,
                                           double model_miss_rate,
                                           double oracle_miss_rate) {
    ComparisonReport rep;
    rep.histogram_error = histogram_error(model_rdh, oracle_rdh);
    rep.model_miss_rate = model_miss_rate;
    rep.oracle_miss_rate = oracle_miss_rate;
    rep.miss_rate_error = std::abs(model_miss_rate - oracle_miss_rate);
    return rep;
}

/// Absolute miss-rate errors across a sweep plus their mean.
struct ErrorSummary {
    std::vector<double> per_config;
    double mean = 0.0;
};

inline ErrorSummary miss_rate_errors(const std::vector<std::pair<double, double>>& rates) {
    ErrorSummary s;
    s.per_config.reserve(rates.size());
    double sum = 0.0;
    for (const auto& [model, oracle] : rates) {
        const double e = std::abs(model - oracle);
        s.per_config.push_back(e);
        sum += e;
    }
    if (!rates.empty()) s.mean = sum / static_cast<double>(rates.size());
    return s;
}

/// Side-by-side histogram dump; one row per bin plus a trailing cold row.
inline void write_histogram_csv(std::ostream& os, const RealHistogram& model,
                                const RealHistogram& truth) {
    if (model.cutoff() != truth.cutoff())
        throw IntegrityError("histogram cutoffs differ");
    os << "bin,model,truth\n";
    for (std::size_t i = 0; i <= model.cutoff(); ++i)
        os << i << ',' << model[i] << ',' << truth[i] << '\n';
    os << "cold," << model.cold() << ',' << truth.cold() << '\n';
}

} // namespace rdtk

#endif // RDTK_METRICS_HPP
