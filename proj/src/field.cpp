#include "guppy/field.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace guppy {

namespace {

constexpr double pi = 3.14159265358979323846;

struct Candidate {
    double sigma_a = 0;
    double sigma_b = 0;
    double total_gap = 0;
    double ampl_b = 0;
    bool valid = false;
};

double circle_radius(double sigma, double amplitude, double mu) {
    // amplitude * exp(-r^2 / (2 sigma^2)) = mu
    return sigma * std::sqrt(2.0 * std::log(amplitude / mu));
}

// Sum over exemplars of how far the two circles are from intersecting.
double total_circle_gap(const ProbabilityTable& table, std::size_t anchor, double ampl_a,
                        double ampl_b, double sigma_a, double sigma_b, double d) {
    double total = 0;
    for (std::size_t k = 0; k < table.size(); ++k) {
        if (table.mu_a[k] <= 0.0 || table.mu_b[k] <= 0.0) continue; // unplaceable; handled later
        double ra = circle_radius(sigma_a, ampl_a, table.mu_a[k]);
        double rb = circle_radius(sigma_b, ampl_b, table.mu_b[k]);
        if (ra + rb < d)
            total += d - (ra + rb);
        else if (std::abs(ra - rb) > d)
            total += std::abs(ra - rb) - d;
    }
    (void)anchor;
    return total;
}

} // namespace

double Gaussian2D::value(double x, double y) const {
    double dx = x - cx, dy = y - cy;
    return amplitude * std::exp(-(dx * dx + dy * dy) / (2.0 * sigma * sigma));
}

GaussianScene fit_scene(const ProbabilityTable& table, const InterferenceSolution& solution) {
    std::size_t n = table.size();
    if (solution.phase_deg.size() != n)
        throw Error(errc::invalid_argument, "solution does not match table");

    // Anchor A: the mu_a argmax exemplar, placed at the center of gauss_a.
    std::size_t anchor = 0;
    for (std::size_t k = 1; k < n; ++k)
        if (table.mu_a[k] > table.mu_a[anchor]) anchor = k;
    double ampl_a = table.mu_a[anchor];
    if (ampl_a <= 0.0)
        throw Error(errc::fit_infeasible, "mu_a is all zero; nothing to place");
    if (table.mu_b[anchor] <= 0.0)
        throw Error(errc::fit_infeasible,
                    "anchor exemplar \"" + table.exemplar_names[anchor] +
                        "\" has mu_b = 0; the envelope of concept B cannot pass through it");

    const double bx = 10.0, by = 4.0;
    double d = std::hypot(bx, by);
    double mu_b_max = *std::max_element(table.mu_b.begin(), table.mu_b.end());

    // Width search: total clamped circle gap, widest scene among zero-gap
    // pairs. ampl_b follows from the exact-fit constraint at the anchor,
    // which sits at distance d from the gauss_b center.
    Candidate best;
    for (double sa = 0.5; sa <= 12.0 + 1e-9; sa += 0.25) {
        for (double sb = 0.5; sb <= 6.5 + 1e-9; sb += 0.25) {
            double ampl_b = table.mu_b[anchor] * std::exp(d * d / (2.0 * sb * sb));
            if (ampl_b <= mu_b_max * (1.0 + 1e-9)) continue;
            double gap = total_circle_gap(table, anchor, ampl_a, ampl_b, sa, sb, d);
            bool better;
            if (!best.valid)
                better = true;
            else if (std::abs(gap - best.total_gap) > 1e-12)
                better = gap < best.total_gap;
            else if (sa + sb != best.sigma_a + best.sigma_b)
                better = sa + sb > best.sigma_a + best.sigma_b;
            else
                better = sa > best.sigma_a;
            if (better) best = {sa, sb, gap, ampl_b, true};
        }
    }
    if (!best.valid)
        throw Error(errc::fit_infeasible,
                    "no envelope width gives concept B an amplitude above every mu_b");

    GaussianScene scene;
    scene.gauss_a = {0.0, 0.0, best.sigma_a, ampl_a};
    scene.gauss_b = {bx, by, best.sigma_b, best.ampl_b};
    scene.aux_point_x = {bx, by};
    scene.exemplar_names = table.exemplar_names;
    scene.phase_at_placements = solution.phase_deg;
    scene.pivot_m = solution.pivot_m;
    scene.placements.resize(n);
    scene.residual_a.resize(n);
    scene.residual_b.resize(n);

    // Unit vector along the center line and its perpendicular.
    double ux = bx / d, uy = by / d;
    double vx = -uy, vy = ux;

    for (std::size_t k = 0; k < n; ++k) {
        if (table.mu_a[k] <= 0.0 || table.mu_b[k] <= 0.0)
            throw Error(errc::fit_infeasible,
                        "exemplar \"" + table.exemplar_names[k] +
                            "\" has a zero probability; it cannot sit on both envelopes");
        double ra = circle_radius(best.sigma_a, ampl_a, table.mu_a[k]);
        double rb = circle_radius(best.sigma_b, best.ampl_b, table.mu_b[k]);
        // Clamp non-intersecting circles to tangency, sharing the gap.
        if (ra + rb < d) {
            double gap = d - (ra + rb);
            ra += 0.5 * gap;
            rb += 0.5 * gap;
        } else if (ra - rb > d) {
            ra = rb + d;
        } else if (rb - ra > d) {
            rb = ra + d;
        }
        double along = (ra * ra - rb * rb + d * d) / (2.0 * d);
        double h2 = ra * ra - along * along;
        double h = std::sqrt(std::max(0.0, h2));
        double x1 = along * ux + h * vx, y1 = along * uy + h * vy;
        double x2 = along * ux - h * vx, y2 = along * uy - h * vy;
        // lo has the smaller y
        double lox = x1, loy = y1, hix = x2, hiy = y2;
        if (y2 < y1) {
            lox = x2; loy = y2; hix = x1; hiy = y1;
        }
        double px, py;
        if (hiy < 0.0) {
            px = hix; py = hiy; // both below the axis: least negative
        } else if (loy >= 0.0) {
            // both usable: alternate sides for visual spread
            if (k % 2 == 0) { px = lox; py = loy; }
            else { px = hix; py = hiy; }
        } else {
            px = hix; py = hiy; // only one nonnegative
        }
        scene.placements[k] = {px, py};
        scene.residual_a[k] = std::abs(scene.gauss_a.value(px, py) - table.mu_a[k]);
        scene.residual_b[k] = std::abs(scene.gauss_b.value(px, py) - table.mu_b[k]);
    }

    double worst = 0;
    std::size_t worst_k = 0;
    for (std::size_t k = 0; k < n; ++k) {
        double r = std::max(scene.residual_a[k], scene.residual_b[k]);
        if (r > worst) { worst = r; worst_k = k; }
    }
    if (worst > fit_tolerance) {
        std::ostringstream msg;
        msg << "scene fit residual " << worst << " at exemplar \""
            << table.exemplar_names[worst_k] << "\" exceeds " << fit_tolerance
            << " (best widths sigma_a = " << best.sigma_a << ", sigma_b = " << best.sigma_b
            << ", total gap = " << best.total_gap << ")";
        throw Error(errc::fit_infeasible, msg.str());
    }

    // The field carries no per-exemplar amplitude scale, so the pivot's
    // scaled amplitude is approximated with scale 1; report the deviation.
    std::size_t m = solution.pivot_m;
    scene.pivot_field_deviation = (1.0 - solution.c_m) *
                                  std::sqrt(table.mu_a[m] * table.mu_b[m]) *
                                  cos_deg(solution.phase_deg[m]);
    return scene;
}

double interpolate_phase(const GaussianScene& scene, double x, double y) {
    double sx = 0, sy = 0;
    for (std::size_t k = 0; k < scene.placements.size(); ++k) {
        double dx = x - scene.placements[k][0];
        double dy = y - scene.placements[k][1];
        double d2 = dx * dx + dy * dy;
        if (d2 < 1e-18) return scene.phase_at_placements[k]; // exact at nodes
        double w = 1.0 / d2;
        sx += w * cos_deg(scene.phase_at_placements[k]);
        sy += w * sin_deg(scene.phase_at_placements[k]);
    }
    if (sx == 0.0 && sy == 0.0) return 0.0; // cancelling directions
    if (sx == 0.0) return sy > 0.0 ? 90.0 : -90.0;
    return std::atan2(sy, sx) * (180.0 / pi);
}

double evaluate_field(const GaussianScene& scene, double x, double y) {
    double ga = scene.gauss_a.value(x, y);
    double gb = scene.gauss_b.value(x, y);
    double theta = interpolate_phase(scene, x, y);
    double v = 0.5 * (ga + gb) + std::sqrt(ga * gb) * cos_deg(theta);
    return std::max(0.0, v); // analytic value is >= 0; guard float dust
}

namespace {

void check_grid(const GaussianScene& scene, std::size_t width, std::size_t height,
                double x_min, double x_max, double y_min, double y_max) {
    if (width < 1 || height < 1)
        throw Error(errc::invalid_argument, "image dimensions must be positive");
    if (!(x_max > x_min) || !(y_max > y_min))
        throw Error(errc::degenerate_bounds, "bounds enclose no area");
    for (std::size_t k = 0; k < scene.placements.size(); ++k) {
        double px = scene.placements[k][0], py = scene.placements[k][1];
        if (px < x_min || px > x_max || py < y_min || py > y_max)
            throw Error(errc::validation_error,
                        "bounds exclude placement of \"" + scene.exemplar_names[k] + "\"");
    }
}

double grid_coord(double lo, double hi, std::size_t count, std::size_t idx) {
    if (count == 1) return 0.5 * (lo + hi);
    return lo + static_cast<double>(idx) * (hi - lo) / static_cast<double>(count - 1);
}

template <typename F>
IntensityImage render_grid(std::size_t width, std::size_t height, double x_min, double x_max,
                           double y_min, double y_max, F&& value_at) {
    IntensityImage img;
    img.width = width;
    img.height = height;
    img.x_min = x_min;
    img.x_max = x_max;
    img.y_min = y_min;
    img.y_max = y_max;
    img.pixels.resize(width * height);
    for (std::size_t j = 0; j < height; ++j) {
        double y = grid_coord(y_min, y_max, height, height - 1 - j); // row 0 at y_max
        for (std::size_t i = 0; i < width; ++i) {
            double x = grid_coord(x_min, x_max, width, i);
            img.pixels[j * width + i] = value_at(x, y);
        }
    }
    double peak = *std::max_element(img.pixels.begin(), img.pixels.end());
    if (peak > 0.0) {
        img.peak = peak;
        for (double& p : img.pixels) p /= peak;
    }
    return img;
}

} // namespace

IntensityImage render_image(const GaussianScene& scene, std::size_t width, std::size_t height,
                            double x_min, double x_max, double y_min, double y_max) {
    check_grid(scene, width, height, x_min, x_max, y_min, y_max);
    return render_grid(width, height, x_min, x_max, y_min, y_max,
                       [&](double x, double y) { return evaluate_field(scene, x, y); });
}

IntensityImage render_average_image(const GaussianScene& scene, std::size_t width,
                                    std::size_t height, double x_min, double x_max,
                                    double y_min, double y_max) {
    check_grid(scene, width, height, x_min, x_max, y_min, y_max);
    return render_grid(width, height, x_min, x_max, y_min, y_max, [&](double x, double y) {
        double ga = scene.gauss_a.value(x, y);
        double gb = scene.gauss_b.value(x, y);
        return 0.5 * (ga + gb);
    });
}

std::array<double, 4> default_bounds(const GaussianScene& scene, double pad) {
    double x_lo = scene.gauss_a.cx, x_hi = scene.gauss_a.cx;
    double y_lo = scene.gauss_a.cy, y_hi = scene.gauss_a.cy;
    auto absorb = [&](double x, double y) {
        x_lo = std::min(x_lo, x);
        x_hi = std::max(x_hi, x);
        y_lo = std::min(y_lo, y);
        y_hi = std::max(y_hi, y);
    };
    absorb(scene.gauss_b.cx, scene.gauss_b.cy);
    for (const auto& p : scene.placements) absorb(p[0], p[1]);
    double dx = x_hi - x_lo, dy = y_hi - y_lo;
    if (dx <= 0.0) dx = 1.0;
    if (dy <= 0.0) dy = 1.0;
    return {x_lo - pad * dx, x_hi + pad * dx, y_lo - pad * dy, y_hi + pad * dy};
}

} // namespace guppy
