#ifndef GUPPY_ANALYSIS_HPP
#define GUPPY_ANALYSIS_HPP

#include <cstdint>
#include <vector>

#include "guppy/types.hpp"

namespace guppy {

enum class Extension { none, overextended, double_overextended };

struct ExemplarAnalysis {
    double interference_term = 0;
    Extension classification = Extension::none;
    bool equivalence_ok = false;
};

// Aggregate (non)classicality measures of a conjunction table against the
// two classical candidates: the average (mixture) and the minimum
// (fuzzy-set conjunction).
struct AnalysisReport {
    double mean_abs_dev_from_average = 0;
    double mean_abs_dev_from_minimum = 0;
    double corr_with_average = 0;
    double corr_with_minimum = 0;
    std::vector<ExemplarAnalysis> per_exemplar;
};

// Strictly above the min of the two memberships: overextended; strictly
// above the max: double-overextended. Symmetric in (mu_a, mu_b).
Extension classify_extension(double mu_a, double mu_b, double mu_ab);

// Mean |mu_ab - avg|, mean |mu_ab - min|, and Pearson correlations of the
// conjunction column with the average and minimum columns. Per-exemplar
// entries carry the interference term, classification, and the
// inequality-form agreement below.
// Throws Error(degenerate_column) when a correlated column has zero
// variance.
AnalysisReport classicality_stats(const ProbabilityTable& table);

// Overextension can be written two ways:
//   mu_ab > min(mu_a, mu_b)
//   max(mu_a, mu_b) > (mu_a + mu_b)/2 - interference_term
// Given interference_term = mu_ab - avg these are the same inequality;
// returns per exemplar whether the two evaluations agree (always true).
std::vector<bool> check_overextension_equivalence(const ProbabilityTable& table,
                                                  const std::vector<double>& interference_terms);

// The no-interference prediction (mu_a + mu_b)/2 per exemplar.
std::vector<double> classical_mixture_baseline(const ProbabilityTable& table);

// Draws `samples` i.i.d. categorical draws from `distribution` (must sum to
// 1 within 1e-9) and returns empirical frequencies. The generator is fixed
// (mt19937_64; uniforms built as (x >> 11) * 2^-53; inverse-CDF scan), so a
// seed reproduces bit-identical frequencies on every platform.
std::vector<double> monte_carlo_simulate(const std::vector<double>& distribution,
                                         std::uint64_t samples, std::uint64_t seed);

// Pearson correlation coefficient; throws Error(degenerate_column) on zero
// variance.
double pearson(const std::vector<double>& x, const std::vector<double>& y);

// (1/2) sum |p_i - q_i|.
double total_variation(const std::vector<double>& p, const std::vector<double>& q);

// Goodness-of-fit of observed frequencies (from `samples` draws) against
// an expected distribution. Cells with zero expectation and zero
// observation are dropped; nonzero observation there forces p = 0.
struct ChiSquareResult {
    double statistic = 0;
    std::size_t dof = 0;
    double p_value = 1;
};

ChiSquareResult chi_square_gof(const std::vector<double>& observed_freq,
                               const std::vector<double>& expected_dist,
                               std::uint64_t samples);

} // namespace guppy

#endif
