#ifndef GUPPY_MODEL_HPP
#define GUPPY_MODEL_HPP

#include <complex>
#include <cstddef>
#include <vector>

#include "guppy/types.hpp"

namespace guppy {

// Degree-argument trig, exact at multiples of 90 so that right-angle
// phases produce interference terms that are exactly zero.
double sin_deg(double deg);
double cos_deg(double deg);

// One amplitude of a complex vector, kept in polar form.
struct Amplitude {
    double mag;
    double phase_deg;

    std::complex<double> to_complex() const {
        return {mag * cos_deg(phase_deg), mag * sin_deg(phase_deg)};
    }
};

// Interference decomposition of a conjunction table:
//   mu_ab_k = (mu_a_k + mu_b_k)/2 + c_k sqrt(mu_a_k mu_b_k) cos(beta_k)
// with c_k = 1 for k != pivot_m and c_pivot = c_m. lambda holds the signed
// sine components; phase_deg the signed angles beta_k.
struct InterferenceSolution {
    std::vector<double> lambda;
    std::size_t pivot_m = 0;
    double c_m = 1.0;
    std::vector<double> phase_deg;
    std::vector<double> interference_term;
};

// Unit vectors in an (n+1)-dimensional complex space representing the two
// concepts. vec_a is real nonnegative with last entry 0; vec_b carries the
// phases, with the pivot's amplitude scaled by c_m and the deficit
// sqrt(mu_b_m (1 - c_m^2)) stored in the extra dimension.
struct ConceptStateVectors {
    std::size_t dim = 0;
    std::vector<Amplitude> vec_a;
    std::vector<Amplitude> vec_b;
};

struct SignChoice {
    std::vector<int> signs; // +1 or -1 per entry
    std::size_t pivot_m = 0;
};

// Deviation of the conjunction from the classical average:
// mu_ab_k - (mu_a_k + mu_b_k)/2.
double interference_term(const ProbabilityTable& table, std::size_t k);

// Unsigned sine-component budget sqrt(mu_a_k mu_b_k - interference_term_k^2).
// Throws Error(infeasible_exemplar) when the radicand is negative: the
// exemplar deviates more than sqrt(mu_a mu_b) allows.
double lambda_magnitude(const ProbabilityTable& table, std::size_t k);

// Assigns +/- signs so the total signed sum stays nonnegative. The pivot is
// the exact argmax of the magnitudes (lowest index on ties) and always gets
// plus. The rest are processed in descending order of magnitude rounded to
// 3 decimals (ties by ascending index; the rounding mirrors the precision
// of the published data this ordering reproduces): each entry gets minus
// when the running sum stays nonnegative, else plus. Every prefix of the
// processing order has a nonnegative running sum.
SignChoice choose_signs(const std::vector<double>& magnitudes);

// Scale for the pivot amplitude restoring orthogonality:
//   c_m = sqrt(((sum_{k != m} lambda_k)^2 + interference_term_m^2)
//              / (mu_a_m mu_b_m)).
// Must land in [0, 1]; values within 1e-12 above 1 are clamped. Beyond
// that the pivot cannot absorb the imbalance and Error(pivot_infeasible)
// is thrown; its message lists which alternative pivots (if any) would be
// feasible. The choice of pivot is never changed silently.
double pivot_correction(const ProbabilityTable& table,
                        const std::vector<double>& lambda_signed,
                        std::size_t pivot_m);

// Signed angles in degrees:
//   beta_k = sign_k * acos((2 mu_ab_k - mu_a_k - mu_b_k) / (2 c_k sqrt(mu_a_k mu_b_k)))
// with c_k = 1 except c_pivot = c_m. Arguments within 1e-12 outside [-1,1]
// are clamped; beyond that Error(infeasible_exemplar). A zero numerator
// over a zero denominator yields beta_k = 0 by convention.
std::vector<double> compute_phases(const ProbabilityTable& table, double c_m,
                                   std::size_t pivot_m, const std::vector<int>& signs);

// Full pipeline: interference terms, magnitudes, signs, pivot scale, phases.
InterferenceSolution solve_interference(const ProbabilityTable& table);

// Explicit vectors:
//   vec_a = (sqrt(mu_a_1), ..., sqrt(mu_a_n), 0), all real;
//   vec_b_k = sqrt(mu_b_k) e^{i beta_k} for k != m,
//   vec_b_m = c_m sqrt(mu_b_m) e^{i beta_m},
//   vec_b_{n+1} = sqrt(mu_b_m (1 - c_m^2)).
ConceptStateVectors build_state_vectors(const ProbabilityTable& table,
                                        const InterferenceSolution& solution);

// Recovers the conjunction column as (1/2)|P_k(vec_a + vec_b)|^2, where P_k
// projects onto coordinate k for k != m and onto coordinates {m, n+1} for
// the pivot. Identity on the input mu_ab up to float precision.
std::vector<double> reconstruct_mu_and(const ConceptStateVectors& vectors,
                                       double c_m, std::size_t pivot_m);

// Consistency checks for a constructed model. The inner product of the two
// vectors is forced by the data to equal (sum of mu_ab - 1) in its real
// part, which vanishes for exactly normalized columns but equals 1e-3 for
// the bundled 3-decimal data. The orthogonality flag therefore measures
// the construction residual, i.e. the distance of <A|B> from that
// data-forced offset, so exact tables are held to |<A|B>| < 1e-10 while
// rounded published data still verifies. Raw values are always reported.
struct VerificationReport {
    double norm_a = 0;
    double norm_b = 0;
    double inner_abs = 0;                // |<A|B>|
    double inner_re = 0;
    double inner_im = 0;
    double column_excess = 0;            // sum(mu_ab) - 1
    double cos_balance_residual = 0;     // Re<A|B> - column_excess
    double sine_balance_residual = 0;    // |c_m sqrt(mu_a_m mu_b_m) sin(beta_m) + sum_{k != m} lambda_k|
    double max_reconstruction_error = 0;
    bool norms_ok = false;               // both norms within 1e-10 of 1
    bool orthogonality_ok = false;       // construction residual < 1e-10
    bool reconstruction_ok = false;      // max error < 1e-12
    bool all_ok = false;
};

VerificationReport verify_model(const ProbabilityTable& table,
                                const InterferenceSolution& solution,
                                const ConceptStateVectors& vectors);

} // namespace guppy

#endif
