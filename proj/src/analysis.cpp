#include "guppy/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include <boost/math/distributions/chi_squared.hpp>

#include "guppy/model.hpp"

namespace guppy {

namespace {

// Uniform in [0,1) from the top 53 bits; fixed so seeds reproduce across
// platforms (distribution adapters in the standard library are not
// implementation-stable).
double next_uniform(std::mt19937_64& eng) {
    return static_cast<double>(eng() >> 11) * 0x1.0p-53;
}

} // namespace

Extension classify_extension(double mu_a, double mu_b, double mu_ab) {
    double lo = std::min(mu_a, mu_b);
    double hi = std::max(mu_a, mu_b);
    if (mu_ab > hi) return Extension::double_overextended;
    if (mu_ab > lo) return Extension::overextended;
    return Extension::none;
}

double pearson(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size() || x.size() < 2)
        throw Error(errc::invalid_argument, "pearson needs two equal-length columns");
    double n = static_cast<double>(x.size());
    double mx = std::accumulate(x.begin(), x.end(), 0.0) / n;
    double my = std::accumulate(y.begin(), y.end(), 0.0) / n;
    double sxx = 0, syy = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double dx = x[i] - mx, dy = y[i] - my;
        sxx += dx * dx;
        syy += dy * dy;
        sxy += dx * dy;
    }
    if (sxx == 0.0 || syy == 0.0)
        throw Error(errc::degenerate_column, "zero variance in a correlated column");
    return sxy / std::sqrt(sxx * syy);
}

std::vector<double> classical_mixture_baseline(const ProbabilityTable& table) {
    std::vector<double> avg(table.size());
    for (std::size_t k = 0; k < table.size(); ++k)
        avg[k] = 0.5 * (table.mu_a[k] + table.mu_b[k]);
    return avg;
}

std::vector<bool> check_overextension_equivalence(const ProbabilityTable& table,
                                                  const std::vector<double>& interference_terms) {
    if (interference_terms.size() != table.size())
        throw Error(errc::invalid_argument, "interference terms length does not match table");
    std::vector<bool> agree(table.size());
    for (std::size_t k = 0; k < table.size(); ++k) {
        double lo = std::min(table.mu_a[k], table.mu_b[k]);
        double hi = std::max(table.mu_a[k], table.mu_b[k]);
        double avg = 0.5 * (table.mu_a[k] + table.mu_b[k]);
        bool direct = table.mu_ab[k] > lo;
        bool rearranged = hi > avg - interference_terms[k];
        agree[k] = (direct == rearranged);
    }
    return agree;
}

AnalysisReport classicality_stats(const ProbabilityTable& table) {
    std::size_t n = table.size();
    if (table.mu_a.size() != n || table.mu_b.size() != n || table.mu_ab.size() != n || n < 2)
        throw Error(errc::validation_error, "malformed table");
    std::vector<double> avg = classical_mixture_baseline(table);
    std::vector<double> min_col(n);
    for (std::size_t k = 0; k < n; ++k)
        min_col[k] = std::min(table.mu_a[k], table.mu_b[k]);

    AnalysisReport rep;
    double dev_avg = 0, dev_min = 0;
    rep.per_exemplar.resize(n);
    std::vector<double> terms(n);
    for (std::size_t k = 0; k < n; ++k) {
        terms[k] = table.mu_ab[k] - avg[k];
        dev_avg += std::abs(table.mu_ab[k] - avg[k]);
        dev_min += std::abs(table.mu_ab[k] - min_col[k]);
        rep.per_exemplar[k].interference_term = terms[k];
        rep.per_exemplar[k].classification =
            classify_extension(table.mu_a[k], table.mu_b[k], table.mu_ab[k]);
    }
    std::vector<bool> agree = check_overextension_equivalence(table, terms);
    for (std::size_t k = 0; k < n; ++k) rep.per_exemplar[k].equivalence_ok = agree[k];

    rep.mean_abs_dev_from_average = dev_avg / static_cast<double>(n);
    rep.mean_abs_dev_from_minimum = dev_min / static_cast<double>(n);
    rep.corr_with_average = pearson(table.mu_ab, avg);
    rep.corr_with_minimum = pearson(table.mu_ab, min_col);
    return rep;
}

std::vector<double> monte_carlo_simulate(const std::vector<double>& distribution,
                                         std::uint64_t samples, std::uint64_t seed) {
    if (distribution.empty())
        throw Error(errc::invalid_argument, "empty distribution");
    if (samples < 1)
        throw Error(errc::invalid_argument, "need at least 1 sample");
    double sum = std::accumulate(distribution.begin(), distribution.end(), 0.0);
    if (std::abs(sum - 1.0) > 1e-9)
        throw Error(errc::validation_error, "distribution sums to " + std::to_string(sum) +
                                                ", expected 1 within 1e-9");
    for (double p : distribution)
        if (p < 0)
            throw Error(errc::validation_error, "negative probability in distribution");

    std::vector<double> cdf(distribution.size());
    std::partial_sum(distribution.begin(), distribution.end(), cdf.begin());
    cdf.back() = 1.0; // absorb accumulation dust so every draw lands

    std::vector<std::uint64_t> counts(distribution.size(), 0);
    std::mt19937_64 eng(seed);
    for (std::uint64_t i = 0; i < samples; ++i) {
        double u = next_uniform(eng);
        std::size_t idx =
            std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin();
        if (idx >= counts.size()) idx = counts.size() - 1;
        ++counts[idx];
    }
    std::vector<double> freq(distribution.size());
    for (std::size_t k = 0; k < freq.size(); ++k)
        freq[k] = static_cast<double>(counts[k]) / static_cast<double>(samples);
    return freq;
}

double total_variation(const std::vector<double>& p, const std::vector<double>& q) {
    if (p.size() != q.size())
        throw Error(errc::invalid_argument, "distribution sizes disagree");
    double s = 0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return 0.5 * s;
}

ChiSquareResult chi_square_gof(const std::vector<double>& observed_freq,
                               const std::vector<double>& expected_dist,
                               std::uint64_t samples) {
    if (observed_freq.size() != expected_dist.size())
        throw Error(errc::invalid_argument, "distribution sizes disagree");
    ChiSquareResult res;
    double ns = static_cast<double>(samples);
    std::size_t cells = 0;
    bool impossible = false;
    for (std::size_t k = 0; k < observed_freq.size(); ++k) {
        double expected = ns * expected_dist[k];
        double observed = ns * observed_freq[k];
        if (expected <= 0.0) {
            if (observed > 0.0) impossible = true;
            continue;
        }
        ++cells;
        double d = observed - expected;
        res.statistic += d * d / expected;
    }
    if (impossible) {
        // observed mass in a cell the expected distribution forbids: the
        // hypothesis is rejected outright, no dof bookkeeping needed
        res.dof = cells > 0 ? cells - 1 : 0;
        res.statistic = std::numeric_limits<double>::infinity();
        res.p_value = 0.0;
        return res;
    }
    if (cells < 2)
        throw Error(errc::degenerate_column, "chi-square needs at least 2 supported cells");
    res.dof = cells - 1;
    boost::math::chi_squared_distribution<double> dist(static_cast<double>(res.dof));
    res.p_value = boost::math::cdf(boost::math::complement(dist, res.statistic));
    return res;
}

} // namespace guppy
