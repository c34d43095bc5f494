#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <set>

#include "guppy/dataset.hpp"
#include "guppy/model.hpp"
#include "support.hpp"

using namespace guppy;

namespace {

// Full-precision expectations for the bundled dataset, computed once with
// an independent implementation and frozen here.
const std::vector<double> expected_lambda = {
    -0.05615825852000755, 0.05506359959174481,  -0.04163832369344376, 0.06259193238748904,
    -0.06552671211040578, 0.06572480505866868,  -0.03396689564855758, 0.04841229182759271,
    0.03998749804626441,  0.03120496755325985,  -0.024243555844801316, -0.05161152971962757,
    0.06988383217883805,  -0.07111785992280702, -0.06523610963262601, 0.0745637311298194};

const std::vector<double> expected_beta = {
    -87.45104384522372, 83.78130552308632,  -111.61691524925932, 70.22794766070206,
    -79.19990622668381, 94.78349507084897,  -100.83330991101276, 104.47751218592994,
    102.68421972089011, 106.93227864838741, -120.88352070316068, -108.73033436644415,
    85.49998115466816,  -80.03125515129415, -80.856446173645,    60.766629881660194};

const double expected_cm = 0.5428203059521118;
const double expected_rest_sum = -0.03663031844841902;

const std::vector<double> expected_b_mags = {
    0.2,                 0.34351128074635334, 0.34351128074635334, 0.2810693864511039,
    0.22360679774997896, 0.24083189157584592, 0.15165750888103102, 0.15811388300841897,
    0.1414213562373095,  0.13784048752090222, 0.11832159566199232, 0.17320508075688773,
    0.3420526275297414,  0.2810693864511039,  0.34351128074635334, 0.16464555074147275,
    0.25473877329734695};

std::complex<double> inner_product(const ConceptStateVectors& v) {
    std::complex<double> s = 0;
    for (std::size_t i = 0; i < v.dim; ++i)
        s += std::conj(v.vec_a[i].to_complex()) * v.vec_b[i].to_complex();
    return s;
}

double norm(const std::vector<Amplitude>& vec) {
    double s = 0;
    for (const auto& a : vec) s += a.mag * a.mag;
    return std::sqrt(s);
}

} // namespace

TEST_CASE("degree trig is exact at right angles") {
    CHECK(sin_deg(90.0) == 1.0);
    CHECK(sin_deg(-90.0) == -1.0);
    CHECK(sin_deg(180.0) == 0.0);
    CHECK(sin_deg(0.0) == 0.0);
    CHECK(cos_deg(90.0) == 0.0);
    CHECK(cos_deg(-90.0) == 0.0);
    CHECK(cos_deg(270.0) == 0.0);
    CHECK(cos_deg(180.0) == -1.0);
    CHECK(cos_deg(450.0) == 0.0);
    CHECK(cos_deg(60.0) == doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("interference terms on bundled data") {
    ProbabilityTable t = load_bundled_dataset();
    CHECK(interference_term(t, 15) == doctest::Approx(0.0205).epsilon(1e-12)); // TV
    CHECK(interference_term(t, 0) == doctest::Approx(0.0025).epsilon(1e-12));  // Filing Cabinet
    ProbabilityTable avg = t;
    avg.mu_ab[3] = 0.5 * (t.mu_a[3] + t.mu_b[3]);
    CHECK(interference_term(avg, 3) == 0.0);
}

TEST_CASE("lambda magnitudes on bundled data") {
    ProbabilityTable t = load_bundled_dataset();
    CHECK(lambda_magnitude(t, 15) == doctest::Approx(0.0745).epsilon(2e-3)); // TV
    CHECK(lambda_magnitude(t, 13) == doctest::Approx(0.0710).epsilon(2e-3)); // Desk Lamp
    CHECK(lambda_magnitude(t, 12) == doctest::Approx(0.0698).epsilon(2e-3)); // Fridge
    for (std::size_t k = 0; k < 16; ++k)
        CHECK(lambda_magnitude(t, k) == doctest::Approx(std::abs(expected_lambda[k])).epsilon(1e-13));
}

TEST_CASE("zero product with matching average gives zero lambda") {
    ProbabilityTable t;
    t.exemplar_names = {"z", "rest"};
    t.mu_a = {0.0, 1.0};
    t.mu_b = {0.4, 0.6};
    t.mu_ab = {0.2, 0.8};
    CHECK(lambda_magnitude(t, 0) == 0.0);
}

TEST_CASE("infeasible exemplar is reported by name") {
    ProbabilityTable t;
    t.exemplar_names = {"broken", "rest"};
    t.mu_a = {0.0, 1.0};
    t.mu_b = {0.5, 0.5};
    t.mu_ab = {0.5, 0.5}; // deviation 0.25 with zero product
    try {
        lambda_magnitude(t, 0);
        FAIL("expected infeasibility");
    } catch (const Error& e) {
        CHECK(e.code() == errc::infeasible_exemplar);
        CHECK(std::string(e.what()).find("broken") != std::string::npos);
    }
}

TEST_CASE("sign choice reproduces the published pattern") {
    ProbabilityTable t = load_bundled_dataset();
    std::vector<double> mags(16);
    for (std::size_t k = 0; k < 16; ++k) mags[k] = lambda_magnitude(t, k);
    SignChoice choice = choose_signs(mags);
    CHECK(choice.pivot_m == 15); // TV
    const int expected_signs[16] = {-1, +1, -1, +1, -1, +1, -1, +1,
                                    +1, +1, -1, -1, +1, -1, -1, +1};
    for (std::size_t k = 0; k < 16; ++k) CHECK(choice.signs[k] == expected_signs[k]);
}

TEST_CASE("sign choice hand-traced examples") {
    SignChoice two = choose_signs({0.5, 0.5});
    CHECK(two.pivot_m == 0);
    CHECK(two.signs[0] == +1);
    CHECK(two.signs[1] == -1);

    SignChoice four = choose_signs({0.9, 0.5, 0.3, 0.2});
    CHECK(four.pivot_m == 0);
    CHECK(four.signs[0] == +1);
    CHECK(four.signs[1] == -1);
    CHECK(four.signs[2] == -1);
    CHECK(four.signs[3] == +1);
    double total = 0.9 - 0.5 - 0.3 + 0.2;
    CHECK(total == doctest::Approx(0.3).epsilon(1e-12));
}

TEST_CASE("greedy prefix sums stay nonnegative") {
    guppy_tests::TableGen gen(31337);
    for (int rep = 0; rep < 200; ++rep) {
        ProbabilityTable t = gen.make(2 + rep % 31);
        std::vector<double> mags(t.size());
        for (std::size_t k = 0; k < t.size(); ++k) mags[k] = lambda_magnitude(t, k);
        bool all_zero = true;
        for (double m : mags)
            if (m != 0) all_zero = false;
        if (all_zero) continue;
        SignChoice choice = choose_signs(mags);

        // replay in processing order: pivot first, then quantized-descending
        std::vector<std::size_t> order;
        for (std::size_t k = 0; k < mags.size(); ++k)
            if (k != choice.pivot_m) order.push_back(k);
        std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
            long long qa = std::llround(mags[a] * 1000.0);
            long long qb = std::llround(mags[b] * 1000.0);
            if (qa != qb) return qa > qb;
            return a < b;
        });
        double sum = mags[choice.pivot_m];
        CHECK(sum >= 0);
        for (std::size_t idx : order) {
            sum += choice.signs[idx] * mags[idx];
            CHECK(sum >= 0);
        }
    }
}

TEST_CASE("pivot correction on bundled data") {
    ProbabilityTable t = load_bundled_dataset();
    InterferenceSolution sol = solve_interference(t);
    double rest = 0;
    for (std::size_t k = 0; k < 16; ++k)
        if (k != sol.pivot_m) rest += sol.lambda[k];
    CHECK(rest == doctest::Approx(expected_rest_sum).epsilon(1e-12));
    CHECK(sol.c_m == doctest::Approx(expected_cm).epsilon(1e-13));
    CHECK(sol.c_m > 0);
    CHECK(sol.c_m <= 1.0);
}

TEST_CASE("pivot correction extreme: zero rest sum and saturated deviation") {
    // mu_ab = avg + sqrt(mu_a mu_b) at the pivot makes lambda_m = 0 there;
    // use a table where the OTHER rows cancel exactly.
    ProbabilityTable t;
    t.exemplar_names = {"p", "q", "r"};
    t.mu_a = {0.5, 0.25, 0.25};
    t.mu_b = {0.5, 0.25, 0.25};
    double gm = 0.5; // sqrt(0.25)
    t.mu_ab = {0.5 + 0.0, 0.25, 0.25};
    (void)gm;
    std::vector<double> lambda_signed = {0.5, 0.25, -0.25}; // rest cancels
    double c = pivot_correction(t, lambda_signed, 0);
    // rest = 0 and interference term 0 at the pivot: c = 0 (degenerate)
    CHECK(c == 0.0);

    // saturated pivot deviation: interference = sqrt(mu_a mu_b)
    ProbabilityTable s;
    s.exemplar_names = {"p", "q", "r"};
    s.mu_a = {0.5, 0.25, 0.25};
    s.mu_b = {0.5, 0.25, 0.25};
    s.mu_ab = {0.5 + 0.0, 0.25, 0.25};
    s.mu_ab[0] = 0.5; // avg
    std::vector<double> ls = {0.0, 0.25, -0.25};
    s.mu_ab[0] = 0.5 + 0.5; // avg + sqrt(prod) = 1.0: saturated
    c = pivot_correction(s, ls, 0);
    CHECK(c == 1.0);
}

TEST_CASE("infeasible pivot reports feasible alternatives") {
    ProbabilityTable t;
    t.exemplar_names = {"big", "mid", "small"};
    t.mu_a = {0.6, 0.2, 0.2};
    t.mu_b = {0.6, 0.2, 0.2};
    t.mu_ab = {0.6, 0.2, 0.2};
    // hand-made signed lambdas violating the greedy structure: everything plus
    std::vector<double> forced = {0.3, 0.2, 0.2};
    try {
        pivot_correction(t, forced, 2); // pivot with tiny amplitude
        FAIL("expected pivot infeasibility");
    } catch (const Error& e) {
        CHECK(e.code() == errc::pivot_infeasible);
        std::string msg = e.what();
        CHECK(msg.find("small") != std::string::npos);
        CHECK(msg.find("big") != std::string::npos); // a feasible alternative is named
    }
}

TEST_CASE("phases on bundled data match the frozen expectations") {
    ProbabilityTable t = load_bundled_dataset();
    InterferenceSolution sol = solve_interference(t);
    REQUIRE(sol.phase_deg.size() == 16);
    for (std::size_t k = 0; k < 16; ++k)
        CHECK(sol.phase_deg[k] == doctest::Approx(expected_beta[k]).epsilon(1e-12));
    // signs follow lambda
    for (std::size_t k = 0; k < 16; ++k)
        if (sol.lambda[k] != 0)
            CHECK(std::signbit(sol.phase_deg[k]) == std::signbit(sol.lambda[k]));
}

TEST_CASE("lambda values on bundled data match the frozen expectations") {
    ProbabilityTable t = load_bundled_dataset();
    InterferenceSolution sol = solve_interference(t);
    for (std::size_t k = 0; k < 16; ++k)
        CHECK(sol.lambda[k] == doctest::Approx(expected_lambda[k]).epsilon(1e-13));
    CHECK(sol.pivot_m == 15);
}

TEST_CASE("classical average table gives right-angle phases") {
    ProbabilityTable t;
    t.exemplar_names = {"u", "v"};
    t.mu_a = {0.5, 0.5};
    t.mu_b = {0.5, 0.5};
    t.mu_ab = {0.5, 0.5};
    InterferenceSolution sol = solve_interference(t);
    CHECK(std::abs(sol.phase_deg[0]) == 90.0);
    CHECK(std::abs(sol.phase_deg[1]) == 90.0);
}

TEST_CASE("state vectors on bundled data") {
    ProbabilityTable t = load_bundled_dataset();
    InterferenceSolution sol = solve_interference(t);
    ConceptStateVectors v = build_state_vectors(t, sol);
    REQUIRE(v.dim == 17);
    // vec_a: real, nonnegative, last entry zero
    for (std::size_t i = 0; i < 17; ++i) {
        CHECK(v.vec_a[i].phase_deg == 0.0);
        CHECK(v.vec_a[i].mag >= 0.0);
    }
    CHECK(v.vec_a[16].mag == 0.0);
    for (std::size_t k = 0; k < 16; ++k)
        CHECK(v.vec_a[k].mag == doctest::Approx(std::sqrt(t.mu_a[k])).epsilon(1e-15));
    for (std::size_t i = 0; i < 17; ++i)
        CHECK(v.vec_b[i].mag == doctest::Approx(expected_b_mags[i]).epsilon(1e-13));
    CHECK(norm(v.vec_a) == doctest::Approx(1.0).epsilon(2e-3)); // bundled columns sum to ~1
    CHECK(norm(v.vec_b) == doctest::Approx(1.0).epsilon(2e-3));
    // the construction's imaginary balance is exact even on rounded data
    CHECK(std::abs(inner_product(v).imag()) < 1e-15);
    // the real part is pinned to the column excess
    CHECK(inner_product(v).real() == doctest::Approx(0.001).epsilon(1e-9));
}

TEST_CASE("c_m = 1 leaves no deficit in the extra dimension") {
    ProbabilityTable t;
    t.exemplar_names = {"p", "q"};
    t.mu_a = {0.5, 0.5};
    t.mu_b = {0.5, 0.5};
    t.mu_ab = {0.5, 0.5};
    InterferenceSolution sol = solve_interference(t);
    CHECK(sol.c_m == doctest::Approx(1.0).epsilon(1e-12));
    ConceptStateVectors v = build_state_vectors(t, sol);
    CHECK(v.vec_b[2].mag == doctest::Approx(0.0).epsilon(1e-8));
    CHECK(norm(v.vec_b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("three-exemplar synthetic table is exactly orthogonal") {
    ProbabilityTable t;
    t.exemplar_names = {"x", "y", "z"};
    t.mu_a = {0.5, 0.3, 0.2};
    t.mu_b = {0.2, 0.3, 0.5};
    t.mu_ab = {0.35, 0.30, 0.35};
    InterferenceSolution sol = solve_interference(t);
    ConceptStateVectors v = build_state_vectors(t, sol);
    CHECK(std::abs(inner_product(v)) < 1e-10);
    CHECK(norm(v.vec_a) == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(norm(v.vec_b) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("reconstruction is the identity on bundled data") {
    ProbabilityTable t = load_bundled_dataset();
    InterferenceSolution sol = solve_interference(t);
    ConceptStateVectors v = build_state_vectors(t, sol);
    std::vector<double> recon = reconstruct_mu_and(v, sol.c_m, sol.pivot_m);
    REQUIRE(recon.size() == 16);
    CHECK(recon[15] == doctest::Approx(0.099).epsilon(1e-12));
    for (std::size_t k = 0; k < 16; ++k)
        CHECK(std::abs(recon[k] - t.mu_ab[k]) < 1e-12);
}

TEST_CASE("verification passes on bundled data and flags corruption") {
    ProbabilityTable t = load_bundled_dataset();
    InterferenceSolution sol = solve_interference(t);
    ConceptStateVectors v = build_state_vectors(t, sol);
    VerificationReport rep = verify_model(t, sol, v);
    CHECK(rep.norms_ok);
    CHECK(rep.orthogonality_ok);
    CHECK(rep.reconstruction_ok);
    CHECK(rep.all_ok);
    CHECK(rep.column_excess == doctest::Approx(0.001).epsilon(1e-9));
    CHECK(rep.inner_abs == doctest::Approx(0.001).epsilon(1e-9));
    CHECK(rep.sine_balance_residual < 1e-15);

    ConceptStateVectors bad = v;
    bad.vec_b[3].mag += 0.005;
    VerificationReport broken = verify_model(t, sol, bad);
    CHECK_FALSE(broken.orthogonality_ok);
    CHECK_FALSE(broken.all_ok);
}

TEST_CASE("two-exemplar symmetric table verifies with right-angle phases") {
    ProbabilityTable t;
    t.exemplar_names = {"p", "q"};
    t.mu_a = {0.5, 0.5};
    t.mu_b = {0.5, 0.5};
    t.mu_ab = {0.5, 0.5};
    InterferenceSolution sol = solve_interference(t);
    ConceptStateVectors v = build_state_vectors(t, sol);
    VerificationReport rep = verify_model(t, sol, v);
    CHECK(rep.all_ok);
    CHECK(std::abs(sol.phase_deg[0]) == 90.0);
}

TEST_CASE("model identities hold on random feasible tables") {
    guppy_tests::TableGen gen(424242);
    int built = 0;
    for (int rep = 0; built < 300; ++rep) {
        REQUIRE(rep < 3000);
        ProbabilityTable t = gen.make(2 + rep % 31);
        InterferenceSolution sol;
        try {
            sol = solve_interference(t);
        } catch (const Error&) {
            continue; // infeasible draws are discarded
        }
        ++built;
        ConceptStateVectors v = build_state_vectors(t, sol);
        CHECK(std::abs(norm(v.vec_a) - 1.0) < 1e-10);
        CHECK(std::abs(norm(v.vec_b) - 1.0) < 1e-10);
        CHECK(std::abs(inner_product(v)) < 1e-9);
        std::vector<double> recon = reconstruct_mu_and(v, sol.c_m, sol.pivot_m);
        for (std::size_t k = 0; k < t.size(); ++k)
            CHECK(std::abs(recon[k] - t.mu_ab[k]) < 1e-12);
        // lambda identity away from the pivot
        for (std::size_t k = 0; k < t.size(); ++k) {
            if (k == sol.pivot_m) continue;
            double lhs = sol.lambda[k] * sol.lambda[k] +
                         sol.interference_term[k] * sol.interference_term[k];
            CHECK(lhs == doctest::Approx(t.mu_a[k] * t.mu_b[k]).epsilon(1e-10));
        }
        VerificationReport rp = verify_model(t, sol, v);
        CHECK(rp.all_ok);
    }
}

TEST_CASE("permuting rows permutes the solution") {
    guppy_tests::TableGen gen(777);
    int tested = 0;
    for (int rep = 0; tested < 60; ++rep) {
        REQUIRE(rep < 3000);
        std::size_t n = 2 + rep % 7;
        ProbabilityTable t = gen.make(n);
        std::vector<double> mags(n);
        bool feasible = true;
        try {
            for (std::size_t k = 0; k < n; ++k) mags[k] = lambda_magnitude(t, k);
        } catch (const Error&) {
            feasible = false;
        }
        if (!feasible) continue;
        // ordering ties between distinct rows would make the comparison
        // order-dependent; skip those draws
        std::set<long long> quantized;
        bool tie = false;
        for (double m : mags)
            if (!quantized.insert(std::llround(m * 1000.0)).second) tie = true;
        if (tie) continue;

        InterferenceSolution base;
        try {
            base = solve_interference(t);
        } catch (const Error&) {
            continue;
        }
        std::vector<std::size_t> perm = gen.permutation(n);
        ProbabilityTable p;
        p.exemplar_names.resize(n);
        p.mu_a.resize(n);
        p.mu_b.resize(n);
        p.mu_ab.resize(n);
        for (std::size_t k = 0; k < n; ++k) {
            p.exemplar_names[k] = t.exemplar_names[perm[k]];
            p.mu_a[k] = t.mu_a[perm[k]];
            p.mu_b[k] = t.mu_b[perm[k]];
            p.mu_ab[k] = t.mu_ab[perm[k]];
        }
        InterferenceSolution permuted;
        try {
            permuted = solve_interference(p);
        } catch (const Error&) {
            continue;
        }
        ++tested;
        CHECK(p.exemplar_names[permuted.pivot_m] == t.exemplar_names[base.pivot_m]);
        CHECK(permuted.c_m == doctest::Approx(base.c_m).epsilon(1e-12));
        for (std::size_t k = 0; k < n; ++k) {
            CHECK(permuted.lambda[k] == doctest::Approx(base.lambda[perm[k]]).epsilon(1e-12));
            CHECK(permuted.phase_deg[k] ==
                  doctest::Approx(base.phase_deg[perm[k]]).epsilon(1e-12));
        }
    }
}
