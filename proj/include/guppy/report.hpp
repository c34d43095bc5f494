#ifndef GUPPY_REPORT_HPP
#define GUPPY_REPORT_HPP

#include <string>

#include "guppy/analysis.hpp"
#include "guppy/field.hpp"
#include "guppy/model.hpp"
#include "guppy/types.hpp"

namespace guppy {

// Model file: {n, pivot_m, c_m, lambda, phase_deg, vec_a, vec_b} with
// amplitudes as {mag, phase_deg} objects. pivot_m is 1-based in the file
// (matching the row numbering used in reports); in-memory indices stay
// 0-based.
std::string model_to_json(const InterferenceSolution& solution,
                          const ConceptStateVectors& vectors);

struct ParsedModel {
    InterferenceSolution solution;
    ConceptStateVectors vectors;
};

ParsedModel parse_model_json(const std::string& text);

// Rebuilds the probability table implied by a model file: mu_a from vec_a,
// mu_b from vec_b (pivot: scaled amplitude plus the extra-dimension
// deficit), mu_ab by reconstruction. Lets a bare model file be verified
// without its source table; exemplars are named by row number.
ProbabilityTable table_from_model(const ParsedModel& model);

// Analysis output: aggregate stats plus per-exemplar rows.
std::string analysis_to_json(const ProbabilityTable& table, const AnalysisReport& report);
std::string analysis_to_markdown(const ProbabilityTable& table, const AnalysisReport& report);

// Full result table: probabilities, average, theta (unsigned angle),
// lambda, beta (signed angle), classification.
std::string result_table_markdown(const ProbabilityTable& table,
                                  const InterferenceSolution& solution,
                                  const AnalysisReport& analysis);

std::string verification_to_text(const VerificationReport& report);

std::string scene_to_json(const GaussianScene& scene);

// Binary PGM (P5, maxval 255).
std::string encode_pgm(const IntensityImage& image);

// Binary PPM (P6) through a fixed 5-anchor colormap (dark blue, blue,
// cyan, warm yellow, white at t = 0, 0.25, 0.5, 0.75, 1).
std::string encode_ppm(const IntensityImage& image);

// Simulation payload: exact distribution, empirical frequencies, max-norm
// error, total-variation distance to the classical baseline, and the
// chi-square detectability of the draw against that baseline.
std::string simulation_to_json(const ProbabilityTable& table, std::uint64_t samples,
                               std::uint64_t seed);

} // namespace guppy

#endif
