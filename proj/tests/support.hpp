#ifndef GUPPY_TESTS_SUPPORT_HPP
#define GUPPY_TESTS_SUPPORT_HPP

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "guppy/types.hpp"

namespace guppy_tests {

// Deterministic generator of random feasible probability tables: all three
// columns sum to 1 to float precision, and the conjunction column stays
// within sqrt(mu_a mu_b) of the classical average per exemplar so the
// interference construction always succeeds.
struct TableGen {
    std::mt19937_64 eng;

    explicit TableGen(std::uint64_t seed) : eng(seed) {}

    double uniform() { return static_cast<double>(eng() >> 11) * 0x1.0p-53; }

    std::vector<double> simplex(std::size_t n) {
        std::vector<double> v(n);
        double sum = 0;
        for (double& x : v) {
            x = -std::log(1.0 - uniform());
            sum += x;
        }
        for (double& x : v) x /= sum;
        return v;
    }

    guppy::ProbabilityTable make(std::size_t n) {
        guppy::ProbabilityTable t;
        t.mu_a = simplex(n);
        t.mu_b = simplex(n);
        for (std::size_t k = 0; k < n; ++k)
            t.exemplar_names.push_back("ex" + std::to_string(k + 1));

        // Bounded deviations t_k with an exact zero-sum correction that
        // keeps |t_k| <= sqrt(mu_a_k mu_b_k).
        std::vector<double> dev(n), bound(n);
        double s = 0, bsum = 0;
        for (std::size_t k = 0; k < n; ++k) {
            bound[k] = std::sqrt(t.mu_a[k] * t.mu_b[k]);
            dev[k] = (2.0 * uniform() - 1.0) * bound[k];
            s += dev[k];
            bsum += bound[k];
        }
        if (s >= 0) {
            double m = s + bsum;
            for (std::size_t k = 0; k < n; ++k) dev[k] -= s * (dev[k] + bound[k]) / m;
        } else {
            double m = s - bsum;
            for (std::size_t k = 0; k < n; ++k) dev[k] -= s * (dev[k] - bound[k]) / m;
        }
        t.mu_ab.resize(n);
        for (std::size_t k = 0; k < n; ++k)
            t.mu_ab[k] = 0.5 * (t.mu_a[k] + t.mu_b[k]) + dev[k];
        return t;
    }

    std::vector<std::size_t> permutation(std::size_t n) {
        std::vector<std::size_t> p(n);
        for (std::size_t i = 0; i < n; ++i) p[i] = i;
        for (std::size_t i = n; i > 1; --i) {
            std::size_t j = eng() % i;
            std::swap(p[i - 1], p[j]);
        }
        return p;
    }
};

} // namespace guppy_tests

#endif
