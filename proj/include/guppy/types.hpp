#ifndef GUPPY_TYPES_HPP
#define GUPPY_TYPES_HPP

#include <array>
#include <stdexcept>
#include <string>
#include <vector>

namespace guppy {

enum class errc {
    parse_error,
    validation_error,
    degenerate_participant,
    degenerate_column,
    degenerate_bounds,
    infeasible_exemplar,
    pivot_infeasible,
    fit_infeasible,
    io_error,
    invalid_argument,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
    errc code() const { return code_; }

private:
    errc code_;
};

// Good-example probabilities for two concepts and their conjunction.
// Each column sums to 1 up to a tolerance chosen by the producer
// (published 3-decimal data carries a larger rounding slack than
// internally computed tables).
struct ProbabilityTable {
    std::vector<std::string> exemplar_names;
    std::vector<double> mu_a;
    std::vector<double> mu_b;
    std::vector<double> mu_ab;

    std::size_t size() const { return exemplar_names.size(); }
};

// Per-participant typicality ratings for the three concepts.
// ratings[p][c][k]: participant p, concept c (0 = A, 1 = B, 2 = conjunction),
// exemplar k. Raw scores live on a [-3, +3] scale; rescaling shifts them
// to [0, 6].
struct RawTypicalityTable {
    std::vector<std::string> exemplar_names;
    std::vector<std::string> participant_ids;
    std::vector<std::array<std::vector<double>, 3>> ratings;

    std::size_t exemplar_count() const { return exemplar_names.size(); }
    std::size_t participant_count() const { return participant_ids.size(); }
};

// Throws Error(validation_error) unless every entry is a probability,
// every column sums to 1 within column_tol, and n >= 2.
void validate_table(const ProbabilityTable& table, double column_tol);

} // namespace guppy

#endif
