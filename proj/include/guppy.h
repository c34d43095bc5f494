/* C interface to the interference-model library.
 *
 * Conventions:
 *   - Every fallible function returns a guppy_status; GUPPY_OK is 0.
 *   - On failure, guppy_last_error() returns a thread-local message that
 *     stays valid until the next failing call on the same thread.
 *   - Output strings and byte buffers are heap-allocated; release them
 *     with guppy_string_free / guppy_bytes_free. Handles have their own
 *     _free functions. Freeing NULL is a no-op.
 *   - const char* values returned through guppy_table_entry are owned by
 *     the table handle and die with it.
 */
#ifndef GUPPY_H
#define GUPPY_H

#include <stddef.h>
#include <stdint.h>

#if defined(__GNUC__)
#define GUPPY_API __attribute__((visibility("default")))
#else
#define GUPPY_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum guppy_status {
    GUPPY_OK = 0,
    GUPPY_ERR_PARSE = 1,            /* malformed input text */
    GUPPY_ERR_VALIDATION = 2,       /* structurally valid but inconsistent data */
    GUPPY_ERR_DEGENERATE = 3,       /* degenerate participant or column */
    GUPPY_ERR_INFEASIBLE = 4,       /* an exemplar deviation exceeds its bound */
    GUPPY_ERR_PIVOT_INFEASIBLE = 5, /* the pivot correction leaves the unit ball */
    GUPPY_ERR_FIT = 6,              /* no Gaussian geometry reproduces the weights */
    GUPPY_ERR_BOUNDS = 7,           /* empty or degenerate image bounds */
    GUPPY_ERR_IO = 8,               /* file read/write failure */
    GUPPY_ERR_INVALID_ARGUMENT = 9, /* null pointer, bad enum value, bad size */
    GUPPY_ERR_UNKNOWN = 10
} guppy_status;

/* Input formats for guppy_table_parse. */
enum {
    GUPPY_FORMAT_CSV = 0,            /* header + per-exemplar weight rows */
    GUPPY_FORMAT_JSON = 1,
    GUPPY_FORMAT_RAW_TYPICALITY = 2  /* per-participant ratings; normalized on load */
};

typedef struct guppy_table guppy_table;  /* per-exemplar weight columns */
typedef struct guppy_model guppy_model;  /* solved phases, weights, state vectors */
typedef struct guppy_scene guppy_scene;  /* fitted planar Gaussian geometry */

/* Library version as "major.minor.patch"; static storage, never freed. */
GUPPY_API const char* guppy_version(void);

/* Message for the most recent failure on this thread; static empty string
 * when nothing failed yet. */
GUPPY_API const char* guppy_last_error(void);

GUPPY_API void guppy_string_free(char* s);
GUPPY_API void guppy_bytes_free(unsigned char* p);
GUPPY_API void guppy_table_free(guppy_table* t);
GUPPY_API void guppy_model_free(guppy_model* m);
GUPPY_API void guppy_scene_free(guppy_scene* s);

/* ---- tables ---- */

/* The sixteen-exemplar membership dataset shipped with the library. */
GUPPY_API guppy_status guppy_table_bundled(guppy_table** out);

/* Parses text in one of the GUPPY_FORMAT_* layouts. Raw typicality data is
 * rescaled and aggregated into weights. len is the byte length of text. */
GUPPY_API guppy_status guppy_table_parse(const char* text, size_t len, int format,
                                         guppy_table** out);

GUPPY_API guppy_status guppy_table_to_csv(const guppy_table* t, int decimal_comma,
                                          char** out);
GUPPY_API guppy_status guppy_table_to_json(const guppy_table* t, char** out);

GUPPY_API guppy_status guppy_table_size(const guppy_table* t, size_t* out);

/* Row k: exemplar name plus the three weights. Any output pointer may be
 * NULL to skip that field. The name stays owned by the table. */
GUPPY_API guppy_status guppy_table_entry(const guppy_table* t, size_t k,
                                         const char** name, double* mu_a,
                                         double* mu_b, double* mu_ab);

/* ---- model ---- */

/* Solves the interference construction for a table. */
GUPPY_API guppy_status guppy_model_build(const guppy_table* t, guppy_model** out);

GUPPY_API guppy_status guppy_model_to_json(const guppy_model* m, char** out);

/* Parses a model serialized by guppy_model_to_json. When table_out is not
 * NULL it also receives the weight table implied by the model's state
 * vectors, suitable for re-verification. */
GUPPY_API guppy_status guppy_model_parse(const char* text, size_t len,
                                         guppy_model** out, guppy_table** table_out);

/* Vector dimension (number of exemplars + 1). */
GUPPY_API guppy_status guppy_model_dim(const guppy_model* m, size_t* out);

/* Zero-based index of the corrected exemplar. */
GUPPY_API guppy_status guppy_model_pivot(const guppy_model* m, size_t* out);

/* Amplitude correction factor at the pivot, in [0, 1]. */
GUPPY_API guppy_status guppy_model_cm(const guppy_model* m, double* out);

/* Signed interference weight of exemplar k. */
GUPPY_API guppy_status guppy_model_lambda(const guppy_model* m, size_t k, double* out);

/* Signed relative phase of exemplar k, degrees. */
GUPPY_API guppy_status guppy_model_phase_deg(const guppy_model* m, size_t k,
                                             double* out);

/* Component idx (0 .. dim-1) of one state vector: which = 0 for the first
 * concept, 1 for the second. Either output may be NULL. */
GUPPY_API guppy_status guppy_model_amplitude(const guppy_model* m, int which,
                                             size_t idx, double* mag,
                                             double* phase_deg);

typedef struct guppy_verification {
    double norm_a;
    double norm_b;
    double inner_abs;      /* |<A|B>| */
    double inner_re;
    double inner_im;
    double column_excess;  /* sum of the conjunction column minus 1 */
    double cos_balance_residual;  /* inner_re minus column_excess */
    double sine_balance_residual; /* imaginary balance of the construction */
    double max_reconstruction_error;
    int norms_ok;
    int orthogonality_ok;
    int reconstruction_ok;
    int all_ok;
} guppy_verification;

/* Checks unit norms, orthogonality up to the column excess, and exact
 * reconstruction of the conjunction column. */
GUPPY_API guppy_status guppy_model_verify(const guppy_table* t, const guppy_model* m,
                                          guppy_verification* out);

/* ---- classicality analysis ---- */

typedef struct guppy_classicality {
    double mean_abs_dev_from_average;
    double mean_abs_dev_from_minimum;
    double corr_with_average;
    double corr_with_minimum;
    size_t n_overextended;
    size_t n_double_overextended;
} guppy_classicality;

GUPPY_API guppy_status guppy_analyze(const guppy_table* t, guppy_classicality* out);
GUPPY_API guppy_status guppy_analysis_json(const guppy_table* t, char** out);
GUPPY_API guppy_status guppy_analysis_markdown(const guppy_table* t, char** out);

/* 0 = within classical bounds, 1 = above the smaller weight,
 * 2 = above both weights. Pure function, never fails. */
GUPPY_API int guppy_classify(double mu_a, double mu_b, double mu_ab);

/* Per-exemplar result table in markdown. */
GUPPY_API guppy_status guppy_report_markdown(const guppy_table* t, char** out);

/* ---- planar field ---- */

GUPPY_API guppy_status guppy_scene_fit(const guppy_table* t, const guppy_model* m,
                                       guppy_scene** out);
GUPPY_API guppy_status guppy_scene_to_json(const guppy_scene* s, char** out);

/* Interpolated phase (degrees) at a point. */
GUPPY_API guppy_status guppy_scene_phase(const guppy_scene* s, double x, double y,
                                         double* out);

/* Interference field intensity at a point (unnormalized, clamped at 0). */
GUPPY_API guppy_status guppy_scene_field(const guppy_scene* s, double x, double y,
                                         double* out);

/* Renders the field to an 8-bit grayscale PGM (P5) or false-color PPM (P6).
 * bounds is {x_min, x_max, y_min, y_max}, or NULL for automatic bounds
 * around the scene. The buffer lands in *bytes with its length in *len;
 * release with guppy_bytes_free. */
GUPPY_API guppy_status guppy_render_pgm(const guppy_scene* s, size_t width,
                                        size_t height, const double* bounds,
                                        unsigned char** bytes, size_t* len);
GUPPY_API guppy_status guppy_render_ppm(const guppy_scene* s, size_t width,
                                        size_t height, const double* bounds,
                                        unsigned char** bytes, size_t* len);

/* ---- sampling ---- */

/* Draws `samples` outcomes from dist (length n, nonnegative, summing to 1)
 * with a fixed-seed deterministic generator; writes observed frequencies
 * to freq_out (length n). Identical seeds give identical frequencies on
 * every platform. */
GUPPY_API guppy_status guppy_simulate(const double* dist, size_t n, size_t samples,
                                      uint64_t seed, double* freq_out);

/* Samples the (normalized) conjunction column of a table and reports the
 * frequencies together with distance measures against the classical
 * mixture baseline, as JSON. */
GUPPY_API guppy_status guppy_simulation_json(const guppy_table* t, size_t samples,
                                             uint64_t seed, char** out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* GUPPY_H */
