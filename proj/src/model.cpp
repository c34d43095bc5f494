#include "guppy/model.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace guppy {

namespace {

constexpr double pi = 3.14159265358979323846;

double deg_to_rad(double deg) { return deg * (pi / 180.0); }
double rad_to_deg(double rad) { return rad * (180.0 / pi); }

// Quantize a magnitude to 3 decimals for ordering decisions.
long long quantized(double mag) { return std::llround(mag * 1000.0); }

void check_index(const ProbabilityTable& table, std::size_t k) {
    if (k >= table.size())
        throw Error(errc::invalid_argument, "exemplar index out of range");
}

// Greedy minus-if-possible pass over `order`, starting from running sum
// `start`. Signs for entries in `order` are written into `signs`.
double greedy_assign(const std::vector<double>& mags, const std::vector<std::size_t>& order,
                     double start, std::vector<int>& signs) {
    double sum = start;
    for (std::size_t idx : order) {
        if (sum - mags[idx] >= 0.0) {
            signs[idx] = -1;
            sum -= mags[idx];
        } else {
            signs[idx] = +1;
            sum += mags[idx];
        }
    }
    return sum;
}

std::vector<std::size_t> processing_order(const std::vector<double>& mags, std::size_t skip) {
    std::vector<std::size_t> order;
    order.reserve(mags.size());
    for (std::size_t k = 0; k < mags.size(); ++k)
        if (k != skip) order.push_back(k);
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        long long qa = quantized(mags[a]), qb = quantized(mags[b]);
        if (qa != qb) return qa > qb;
        return a < b;
    });
    return order;
}

// c value for a hypothetical pivot given magnitudes: run the greedy pass
// with that pivot and evaluate the correction formula.
double correction_for_pivot(const ProbabilityTable& table, const std::vector<double>& mags,
                            std::size_t pivot) {
    std::vector<int> signs(mags.size(), +1);
    greedy_assign(mags, processing_order(mags, pivot), mags[pivot], signs);
    double rest = 0;
    for (std::size_t k = 0; k < mags.size(); ++k)
        if (k != pivot) rest += signs[k] * mags[k];
    double delta = interference_term(table, pivot);
    double prod = table.mu_a[pivot] * table.mu_b[pivot];
    if (prod <= 0.0) return std::numeric_limits<double>::infinity();
    return std::sqrt((rest * rest + delta * delta) / prod);
}

} // namespace

double sin_deg(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r == 0.0 || r == 180.0 || r == -180.0) return 0.0;
    if (r == 90.0 || r == -270.0) return 1.0;
    if (r == -90.0 || r == 270.0) return -1.0;
    return std::sin(deg_to_rad(r));
}

double cos_deg(double deg) {
    double r = std::fmod(deg, 360.0);
    if (r == 90.0 || r == -90.0 || r == 270.0 || r == -270.0) return 0.0;
    if (r == 0.0) return 1.0;
    if (r == 180.0 || r == -180.0) return -1.0;
    return std::cos(deg_to_rad(r));
}

double interference_term(const ProbabilityTable& table, std::size_t k) {
    check_index(table, k);
    return table.mu_ab[k] - 0.5 * (table.mu_a[k] + table.mu_b[k]);
}

double lambda_magnitude(const ProbabilityTable& table, std::size_t k) {
    check_index(table, k);
    double delta = interference_term(table, k);
    double radicand = table.mu_a[k] * table.mu_b[k] - delta * delta;
    if (radicand < 0.0) {
        if (radicand > -1e-15) return 0.0;
        throw Error(errc::infeasible_exemplar,
                    "exemplar \"" + table.exemplar_names[k] +
                        "\": deviation from the classical average exceeds "
                        "sqrt(mu_a mu_b); the interference model cannot represent it");
    }
    return std::sqrt(radicand);
}

SignChoice choose_signs(const std::vector<double>& magnitudes) {
    if (magnitudes.size() < 2)
        throw Error(errc::invalid_argument, "need at least 2 magnitudes");
    std::size_t pivot = 0;
    for (std::size_t k = 1; k < magnitudes.size(); ++k)
        if (magnitudes[k] > magnitudes[pivot]) pivot = k;
    if (magnitudes[pivot] == 0.0)
        throw Error(errc::invalid_argument, "all magnitudes are zero");

    SignChoice choice;
    choice.pivot_m = pivot;
    choice.signs.assign(magnitudes.size(), +1);
    greedy_assign(magnitudes, processing_order(magnitudes, pivot), magnitudes[pivot],
                  choice.signs);
    return choice;
}

double pivot_correction(const ProbabilityTable& table, const std::vector<double>& lambda_signed,
                        std::size_t pivot_m) {
    check_index(table, pivot_m);
    if (lambda_signed.size() != table.size())
        throw Error(errc::invalid_argument, "lambda length does not match table");
    double rest = 0;
    for (std::size_t k = 0; k < lambda_signed.size(); ++k)
        if (k != pivot_m) rest += lambda_signed[k];
    double delta = interference_term(table, pivot_m);
    double prod = table.mu_a[pivot_m] * table.mu_b[pivot_m];
    if (prod <= 0.0)
        throw Error(errc::infeasible_exemplar,
                    "pivot \"" + table.exemplar_names[pivot_m] +
                        "\" has mu_a mu_b = 0; no amplitude available to balance the model");
    double c = std::sqrt((rest * rest + delta * delta) / prod);
    if (c > 1.0 + 1e-12) {
        std::vector<double> mags(lambda_signed.size());
        for (std::size_t k = 0; k < mags.size(); ++k) mags[k] = std::abs(lambda_signed[k]);
        std::ostringstream msg;
        msg << "pivot \"" << table.exemplar_names[pivot_m] << "\" infeasible: c = " << c
            << " > 1; feasible alternative pivots:";
        bool any = false;
        for (std::size_t j = 0; j < mags.size(); ++j) {
            if (j == pivot_m) continue;
            if (correction_for_pivot(table, mags, j) <= 1.0 + 1e-12) {
                msg << (any ? ", \"" : " \"") << table.exemplar_names[j] << "\"";
                any = true;
            }
        }
        if (!any) msg << " none";
        throw Error(errc::pivot_infeasible, msg.str());
    }
    return std::min(c, 1.0);
}

std::vector<double> compute_phases(const ProbabilityTable& table, double c_m,
                                   std::size_t pivot_m, const std::vector<int>& signs) {
    check_index(table, pivot_m);
    if (signs.size() != table.size())
        throw Error(errc::invalid_argument, "sign vector length does not match table");
    std::vector<double> phases(table.size());
    for (std::size_t k = 0; k < table.size(); ++k) {
        double ck = (k == pivot_m) ? c_m : 1.0;
        double num = 2.0 * table.mu_ab[k] - table.mu_a[k] - table.mu_b[k];
        double denom = 2.0 * ck * std::sqrt(table.mu_a[k] * table.mu_b[k]);
        if (denom == 0.0) {
            // 0/0: any phase satisfies the model; pick 0.
            if (std::abs(num) <= 1e-15) {
                phases[k] = 0.0;
                continue;
            }
            throw Error(errc::infeasible_exemplar,
                        "exemplar \"" + table.exemplar_names[k] +
                            "\": zero amplitude cannot carry a nonzero interference term");
        }
        double x = num / denom;
        if (x > 1.0) {
            if (x > 1.0 + 1e-12)
                throw Error(errc::infeasible_exemplar,
                            "exemplar \"" + table.exemplar_names[k] +
                                "\": cos(beta) argument " + std::to_string(x) + " above 1");
            x = 1.0;
        } else if (x < -1.0) {
            if (x < -1.0 - 1e-12)
                throw Error(errc::infeasible_exemplar,
                            "exemplar \"" + table.exemplar_names[k] +
                                "\": cos(beta) argument " + std::to_string(x) + " below -1");
            x = -1.0;
        }
        phases[k] = signs[k] * rad_to_deg(std::acos(x));
    }
    return phases;
}

InterferenceSolution solve_interference(const ProbabilityTable& table) {
    std::size_t n = table.size();
    if (n < 2) throw Error(errc::validation_error, "need at least 2 exemplars");

    InterferenceSolution sol;
    sol.interference_term.resize(n);
    std::vector<double> mags(n);
    for (std::size_t k = 0; k < n; ++k) {
        sol.interference_term[k] = interference_term(table, k);
        mags[k] = lambda_magnitude(table, k);
    }
    SignChoice signs = choose_signs(mags);
    sol.pivot_m = signs.pivot_m;
    sol.lambda.resize(n);
    for (std::size_t k = 0; k < n; ++k) sol.lambda[k] = signs.signs[k] * mags[k];
    sol.c_m = pivot_correction(table, sol.lambda, sol.pivot_m);
    sol.phase_deg = compute_phases(table, sol.c_m, sol.pivot_m, signs.signs);
    return sol;
}

ConceptStateVectors build_state_vectors(const ProbabilityTable& table,
                                        const InterferenceSolution& solution) {
    std::size_t n = table.size();
    ConceptStateVectors v;
    v.dim = n + 1;
    v.vec_a.resize(n + 1);
    v.vec_b.resize(n + 1);
    for (std::size_t k = 0; k < n; ++k) {
        v.vec_a[k] = {std::sqrt(table.mu_a[k]), 0.0};
        double mag = std::sqrt(table.mu_b[k]);
        if (k == solution.pivot_m) mag *= solution.c_m;
        v.vec_b[k] = {mag, solution.phase_deg[k]};
    }
    v.vec_a[n] = {0.0, 0.0};
    double deficit = table.mu_b[solution.pivot_m] * (1.0 - solution.c_m * solution.c_m);
    v.vec_b[n] = {std::sqrt(std::max(0.0, deficit)), 0.0};
    return v;
}

std::vector<double> reconstruct_mu_and(const ConceptStateVectors& vectors, double c_m,
                                       std::size_t pivot_m) {
    (void)c_m; // the scale is already inside the pivot amplitude
    if (vectors.dim < 2) throw Error(errc::invalid_argument, "vectors too small");
    std::size_t n = vectors.dim - 1;
    std::vector<double> mu(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> s = vectors.vec_a[k].to_complex() + vectors.vec_b[k].to_complex();
        double val = 0.5 * std::norm(s);
        if (k == pivot_m) {
            std::complex<double> extra =
                vectors.vec_a[n].to_complex() + vectors.vec_b[n].to_complex();
            val += 0.5 * std::norm(extra);
        }
        mu[k] = val;
    }
    return mu;
}

VerificationReport verify_model(const ProbabilityTable& table,
                                const InterferenceSolution& solution,
                                const ConceptStateVectors& vectors) {
    VerificationReport rep;
    double norm2_a = 0, norm2_b = 0;
    std::complex<double> inner = 0;
    for (std::size_t i = 0; i < vectors.dim; ++i) {
        std::complex<double> a = vectors.vec_a[i].to_complex();
        std::complex<double> b = vectors.vec_b[i].to_complex();
        norm2_a += std::norm(a);
        norm2_b += std::norm(b);
        inner += std::conj(a) * b;
    }
    rep.norm_a = std::sqrt(norm2_a);
    rep.norm_b = std::sqrt(norm2_b);
    rep.inner_re = inner.real();
    rep.inner_im = inner.imag();
    rep.inner_abs = std::abs(inner);

    rep.column_excess = std::accumulate(table.mu_ab.begin(), table.mu_ab.end(), 0.0) - 1.0;
    rep.cos_balance_residual = rep.inner_re - rep.column_excess;

    double rest = 0;
    for (std::size_t k = 0; k < solution.lambda.size(); ++k)
        if (k != solution.pivot_m) rest += solution.lambda[k];
    double prod_m = table.mu_a[solution.pivot_m] * table.mu_b[solution.pivot_m];
    rep.sine_balance_residual = std::abs(
        solution.c_m * std::sqrt(prod_m) * sin_deg(solution.phase_deg[solution.pivot_m]) + rest);

    std::vector<double> recon = reconstruct_mu_and(vectors, solution.c_m, solution.pivot_m);
    for (std::size_t k = 0; k < recon.size() && k < table.mu_ab.size(); ++k)
        rep.max_reconstruction_error =
            std::max(rep.max_reconstruction_error, std::abs(recon[k] - table.mu_ab[k]));

    rep.norms_ok = std::abs(rep.norm_a - 1.0) < 1e-10 && std::abs(rep.norm_b - 1.0) < 1e-10;
    rep.orthogonality_ok =
        std::hypot(rep.cos_balance_residual, rep.inner_im) < 1e-10;
    rep.reconstruction_ok = rep.max_reconstruction_error < 1e-12;
    rep.all_ok = rep.norms_ok && rep.orthogonality_ok && rep.reconstruction_ok;
    return rep;
}

} // namespace guppy
