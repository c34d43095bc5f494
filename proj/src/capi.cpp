#include "guppy.h"

#include <cstring>
#include <exception>
#include <stdexcept>
#include <string>
#include <array>
#include <vector>

#include "guppy/analysis.hpp"
#include "guppy/dataset.hpp"
#include "guppy/field.hpp"
#include "guppy/ingest.hpp"
#include "guppy/model.hpp"
#include "guppy/report.hpp"
#include "guppy/types.hpp"

struct guppy_table {
    guppy::ProbabilityTable t;
};

struct guppy_model {
    guppy::ParsedModel m;
};

struct guppy_scene {
    guppy::GaussianScene s;
};

namespace {

thread_local std::string g_last_error;

guppy_status map_code(guppy::errc code) {
    using guppy::errc;
    switch (code) {
        case errc::parse_error: return GUPPY_ERR_PARSE;
        case errc::validation_error: return GUPPY_ERR_VALIDATION;
        case errc::degenerate_participant: return GUPPY_ERR_DEGENERATE;
        case errc::degenerate_column: return GUPPY_ERR_DEGENERATE;
        case errc::degenerate_bounds: return GUPPY_ERR_BOUNDS;
        case errc::infeasible_exemplar: return GUPPY_ERR_INFEASIBLE;
        case errc::pivot_infeasible: return GUPPY_ERR_PIVOT_INFEASIBLE;
        case errc::fit_infeasible: return GUPPY_ERR_FIT;
        case errc::io_error: return GUPPY_ERR_IO;
        case errc::invalid_argument: return GUPPY_ERR_INVALID_ARGUMENT;
    }
    return GUPPY_ERR_UNKNOWN;
}

guppy_status fail(guppy_status status, const char* message) {
    g_last_error = message;
    return status;
}

// Runs body under the exception-to-status mapping. body must be noexcept
// in its argument handling; only guppy::Error / std::exception escape.
template <typename Fn>
guppy_status wrap(Fn&& body) {
    try {
        std::forward<Fn>(body)();
        return GUPPY_OK;
    } catch (const guppy::Error& e) {
        g_last_error = e.what();
        return map_code(e.code());
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return GUPPY_ERR_UNKNOWN;
    } catch (...) {
        g_last_error = "unknown failure";
        return GUPPY_ERR_UNKNOWN;
    }
}

char* copy_string(const std::string& s) {
    char* out = static_cast<char*>(::operator new(s.size() + 1));
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

unsigned char* copy_bytes(const std::string& s) {
    unsigned char* out = static_cast<unsigned char*>(::operator new(s.size()));
    std::memcpy(out, s.data(), s.size());
    return out;
}

bool null_arg(const void* p) { return p == nullptr; }

constexpr const char* null_message = "null pointer argument";

guppy_status render_common(const guppy_scene* s, size_t width, size_t height,
                           const double* bounds, unsigned char** bytes, size_t* len,
                           bool color) {
    if (null_arg(s) || null_arg(bytes) || null_arg(len))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] {
        std::array<double, 4> box{};
        if (bounds)
            box = {bounds[0], bounds[1], bounds[2], bounds[3]};
        else
            box = guppy::default_bounds(s->s);
        const double x0 = box[0], x1 = box[1], y0 = box[2], y1 = box[3];
        guppy::IntensityImage img =
            guppy::render_image(s->s, width, height, x0, x1, y0, y1);
        std::string data = color ? guppy::encode_ppm(img) : guppy::encode_pgm(img);
        *bytes = copy_bytes(data);
        *len = data.size();
    });
}

} // namespace

extern "C" {

const char* guppy_version(void) { return "1.0.0"; }

const char* guppy_last_error(void) { return g_last_error.c_str(); }

void guppy_string_free(char* s) { ::operator delete(s); }
void guppy_bytes_free(unsigned char* p) { ::operator delete(p); }
void guppy_table_free(guppy_table* t) { delete t; }
void guppy_model_free(guppy_model* m) { delete m; }
void guppy_scene_free(guppy_scene* s) { delete s; }

guppy_status guppy_table_bundled(guppy_table** out) {
    if (null_arg(out)) return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] { *out = new guppy_table{guppy::load_bundled_dataset()}; });
}

guppy_status guppy_table_parse(const char* text, size_t len, int format,
                               guppy_table** out) {
    if (null_arg(text) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] {
        std::string input(text, len);
        guppy::ProbabilityTable table;
        switch (format) {
            case GUPPY_FORMAT_CSV:
                table = guppy::parse_table(input, guppy::TableFormat::csv);
                break;
            case GUPPY_FORMAT_JSON:
                table = guppy::parse_table(input, guppy::TableFormat::json);
                break;
            case GUPPY_FORMAT_RAW_TYPICALITY: {
                guppy::RawTypicalityTable raw = guppy::parse_raw_typicality_csv(input);
                guppy::RawTypicalityTable scaled = guppy::rescale_typicality(raw);
                table = guppy::normalize_and_aggregate(scaled);
                break;
            }
            default:
                throw guppy::Error(guppy::errc::invalid_argument,
                                   "unknown table format code");
        }
        *out = new guppy_table{std::move(table)};
    });
}

guppy_status guppy_table_to_csv(const guppy_table* t, int decimal_comma, char** out) {
    if (null_arg(t) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] { *out = copy_string(guppy::table_to_csv(t->t, decimal_comma != 0)); });
}

guppy_status guppy_table_to_json(const guppy_table* t, char** out) {
    if (null_arg(t) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] { *out = copy_string(guppy::table_to_json(t->t)); });
}

guppy_status guppy_table_size(const guppy_table* t, size_t* out) {
    if (null_arg(t) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    *out = t->t.size();
    return GUPPY_OK;
}

guppy_status guppy_table_entry(const guppy_table* t, size_t k, const char** name,
                               double* mu_a, double* mu_b, double* mu_ab) {
    if (null_arg(t)) return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    if (k >= t->t.size())
        return fail(GUPPY_ERR_INVALID_ARGUMENT, "exemplar index out of range");
    if (name) *name = t->t.exemplar_names[k].c_str();
    if (mu_a) *mu_a = t->t.mu_a[k];
    if (mu_b) *mu_b = t->t.mu_b[k];
    if (mu_ab) *mu_ab = t->t.mu_ab[k];
    return GUPPY_OK;
}

guppy_status guppy_model_build(const guppy_table* t, guppy_model** out) {
    if (null_arg(t) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] {
        guppy::ParsedModel m;
        m.solution = guppy::solve_interference(t->t);
        m.vectors = guppy::build_state_vectors(t->t, m.solution);
        *out = new guppy_model{std::move(m)};
    });
}

guppy_status guppy_model_to_json(const guppy_model* m, char** out) {
    if (null_arg(m) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] { *out = copy_string(guppy::model_to_json(m->m.solution, m->m.vectors)); });
}

guppy_status guppy_model_parse(const char* text, size_t len, guppy_model** out,
                               guppy_table** table_out) {
    if (null_arg(text) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] {
        guppy::ParsedModel parsed = guppy::parse_model_json(std::string(text, len));
        guppy_table* table_handle = nullptr;
        if (table_out)
            table_handle = new guppy_table{guppy::table_from_model(parsed)};
        *out = new guppy_model{std::move(parsed)};
        if (table_out) *table_out = table_handle;
    });
}

guppy_status guppy_model_dim(const guppy_model* m, size_t* out) {
    if (null_arg(m) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    *out = m->m.vectors.dim;
    return GUPPY_OK;
}

guppy_status guppy_model_pivot(const guppy_model* m, size_t* out) {
    if (null_arg(m) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    *out = m->m.solution.pivot_m;
    return GUPPY_OK;
}

guppy_status guppy_model_cm(const guppy_model* m, double* out) {
    if (null_arg(m) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    *out = m->m.solution.c_m;
    return GUPPY_OK;
}

guppy_status guppy_model_lambda(const guppy_model* m, size_t k, double* out) {
    if (null_arg(m) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    if (k >= m->m.solution.lambda.size())
        return fail(GUPPY_ERR_INVALID_ARGUMENT, "exemplar index out of range");
    *out = m->m.solution.lambda[k];
    return GUPPY_OK;
}

guppy_status guppy_model_phase_deg(const guppy_model* m, size_t k, double* out) {
    if (null_arg(m) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    if (k >= m->m.solution.phase_deg.size())
        return fail(GUPPY_ERR_INVALID_ARGUMENT, "exemplar index out of range");
    *out = m->m.solution.phase_deg[k];
    return GUPPY_OK;
}

guppy_status guppy_model_amplitude(const guppy_model* m, int which, size_t idx,
                                   double* mag, double* phase_deg) {
    if (null_arg(m)) return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    if (which != 0 && which != 1)
        return fail(GUPPY_ERR_INVALID_ARGUMENT, "vector selector must be 0 or 1");
    if (idx >= m->m.vectors.dim)
        return fail(GUPPY_ERR_INVALID_ARGUMENT, "component index out of range");
    const guppy::Amplitude& a =
        which == 0 ? m->m.vectors.vec_a[idx] : m->m.vectors.vec_b[idx];
    if (mag) *mag = a.mag;
    if (phase_deg) *phase_deg = a.phase_deg;
    return GUPPY_OK;
}

guppy_status guppy_model_verify(const guppy_table* t, const guppy_model* m,
                                guppy_verification* out) {
    if (null_arg(t) || null_arg(m) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] {
        guppy::VerificationReport r =
            guppy::verify_model(t->t, m->m.solution, m->m.vectors);
        out->norm_a = r.norm_a;
        out->norm_b = r.norm_b;
        out->inner_abs = r.inner_abs;
        out->inner_re = r.inner_re;
        out->inner_im = r.inner_im;
        out->column_excess = r.column_excess;
        out->cos_balance_residual = r.cos_balance_residual;
        out->sine_balance_residual = r.sine_balance_residual;
        out->max_reconstruction_error = r.max_reconstruction_error;
        out->norms_ok = r.norms_ok ? 1 : 0;
        out->orthogonality_ok = r.orthogonality_ok ? 1 : 0;
        out->reconstruction_ok = r.reconstruction_ok ? 1 : 0;
        out->all_ok = r.all_ok ? 1 : 0;
    });
}

guppy_status guppy_analyze(const guppy_table* t, guppy_classicality* out) {
    if (null_arg(t) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] {
        guppy::AnalysisReport r = guppy::classicality_stats(t->t);
        out->mean_abs_dev_from_average = r.mean_abs_dev_from_average;
        out->mean_abs_dev_from_minimum = r.mean_abs_dev_from_minimum;
        out->corr_with_average = r.corr_with_average;
        out->corr_with_minimum = r.corr_with_minimum;
        out->n_overextended = 0;
        out->n_double_overextended = 0;
        for (const auto& e : r.per_exemplar) {
            if (e.classification == guppy::Extension::overextended)
                ++out->n_overextended;
            if (e.classification == guppy::Extension::double_overextended)
                ++out->n_double_overextended;
        }
    });
}

guppy_status guppy_analysis_json(const guppy_table* t, char** out) {
    if (null_arg(t) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] {
        guppy::AnalysisReport r = guppy::classicality_stats(t->t);
        *out = copy_string(guppy::analysis_to_json(t->t, r));
    });
}

guppy_status guppy_analysis_markdown(const guppy_table* t, char** out) {
    if (null_arg(t) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] {
        guppy::AnalysisReport r = guppy::classicality_stats(t->t);
        *out = copy_string(guppy::analysis_to_markdown(t->t, r));
    });
}

int guppy_classify(double mu_a, double mu_b, double mu_ab) {
    switch (guppy::classify_extension(mu_a, mu_b, mu_ab)) {
        case guppy::Extension::none: return 0;
        case guppy::Extension::overextended: return 1;
        case guppy::Extension::double_overextended: return 2;
    }
    return 0;
}

guppy_status guppy_report_markdown(const guppy_table* t, char** out) {
    if (null_arg(t) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] {
        guppy::InterferenceSolution sol = guppy::solve_interference(t->t);
        guppy::AnalysisReport r = guppy::classicality_stats(t->t);
        *out = copy_string(guppy::result_table_markdown(t->t, sol, r));
    });
}

guppy_status guppy_scene_fit(const guppy_table* t, const guppy_model* m,
                             guppy_scene** out) {
    if (null_arg(t) || null_arg(m) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] { *out = new guppy_scene{guppy::fit_scene(t->t, m->m.solution)}; });
}

guppy_status guppy_scene_to_json(const guppy_scene* s, char** out) {
    if (null_arg(s) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] { *out = copy_string(guppy::scene_to_json(s->s)); });
}

guppy_status guppy_scene_phase(const guppy_scene* s, double x, double y, double* out) {
    if (null_arg(s) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] { *out = guppy::interpolate_phase(s->s, x, y); });
}

guppy_status guppy_scene_field(const guppy_scene* s, double x, double y, double* out) {
    if (null_arg(s) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] { *out = guppy::evaluate_field(s->s, x, y); });
}

guppy_status guppy_render_pgm(const guppy_scene* s, size_t width, size_t height,
                              const double* bounds, unsigned char** bytes,
                              size_t* len) {
    return render_common(s, width, height, bounds, bytes, len, false);
}

guppy_status guppy_render_ppm(const guppy_scene* s, size_t width, size_t height,
                              const double* bounds, unsigned char** bytes,
                              size_t* len) {
    return render_common(s, width, height, bounds, bytes, len, true);
}

guppy_status guppy_simulate(const double* dist, size_t n, size_t samples,
                            uint64_t seed, double* freq_out) {
    if (null_arg(dist) || null_arg(freq_out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] {
        std::vector<double> d(dist, dist + n);
        std::vector<double> freq = guppy::monte_carlo_simulate(d, samples, seed);
        std::memcpy(freq_out, freq.data(), n * sizeof(double));
    });
}

guppy_status guppy_simulation_json(const guppy_table* t, size_t samples,
                                   uint64_t seed, char** out) {
    if (null_arg(t) || null_arg(out))
        return fail(GUPPY_ERR_INVALID_ARGUMENT, null_message);
    return wrap([&] { *out = copy_string(guppy::simulation_to_json(t->t, samples, seed)); });
}

} // extern "C"
