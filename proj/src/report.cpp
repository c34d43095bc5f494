#include "guppy/report.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace guppy {

namespace {

std::string fixed(double v, int decimals) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*f", decimals, v);
    return buf;
}

const char* extension_name(Extension e) {
    switch (e) {
    case Extension::none: return "none";
    case Extension::overextended: return "overextended";
    default: return "double-overextended";
    }
}

nlohmann::json amplitudes_to_json(const std::vector<Amplitude>& vec) {
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& a : vec) arr.push_back({{"mag", a.mag}, {"phase_deg", a.phase_deg}});
    return arr;
}

std::vector<Amplitude> amplitudes_from_json(const nlohmann::json& arr, const char* which) {
    if (!arr.is_array())
        throw Error(errc::parse_error, std::string("model field ") + which + " is not an array");
    std::vector<Amplitude> vec;
    for (const auto& item : arr) {
        if (!item.is_object() || !item.contains("mag") || !item.contains("phase_deg"))
            throw Error(errc::parse_error,
                        std::string("model field ") + which + " needs {mag, phase_deg} entries");
        vec.push_back({item["mag"].get<double>(), item["phase_deg"].get<double>()});
    }
    return vec;
}

std::vector<double> doubles_from_json(const nlohmann::json& arr, const char* which) {
    if (!arr.is_array())
        throw Error(errc::parse_error, std::string("model field ") + which + " is not an array");
    std::vector<double> vec;
    for (const auto& item : arr) vec.push_back(item.get<double>());
    return vec;
}

unsigned char to_byte(double t) {
    double v = std::clamp(t, 0.0, 1.0) * 255.0;
    return static_cast<unsigned char>(std::lround(v));
}

} // namespace

std::string model_to_json(const InterferenceSolution& solution,
                          const ConceptStateVectors& vectors) {
    nlohmann::json doc;
    doc["n"] = solution.lambda.size();
    doc["pivot_m"] = solution.pivot_m + 1; // rows are numbered from 1 in reports
    doc["c_m"] = solution.c_m;
    doc["lambda"] = solution.lambda;
    doc["phase_deg"] = solution.phase_deg;
    doc["interference_term"] = solution.interference_term;
    doc["vec_a"] = amplitudes_to_json(vectors.vec_a);
    doc["vec_b"] = amplitudes_to_json(vectors.vec_b);
    return doc.dump(2) + "\n";
}

ParsedModel parse_model_json(const std::string& text) {
    nlohmann::json doc = nlohmann::json::parse(text, nullptr, false);
    if (doc.is_discarded()) throw Error(errc::parse_error, "malformed model json");
    for (const char* key : {"n", "pivot_m", "c_m", "lambda", "phase_deg", "vec_a", "vec_b"})
        if (!doc.contains(key))
            throw Error(errc::parse_error, std::string("model json missing field ") + key);

    ParsedModel model;
    std::size_t n = doc["n"].get<std::size_t>();
    std::size_t pivot = doc["pivot_m"].get<std::size_t>();
    if (pivot < 1 || pivot > n)
        throw Error(errc::parse_error, "pivot_m out of range (1-based)");
    model.solution.pivot_m = pivot - 1;
    model.solution.c_m = doc["c_m"].get<double>();
    model.solution.lambda = doubles_from_json(doc["lambda"], "lambda");
    model.solution.phase_deg = doubles_from_json(doc["phase_deg"], "phase_deg");
    if (doc.contains("interference_term"))
        model.solution.interference_term =
            doubles_from_json(doc["interference_term"], "interference_term");
    model.vectors.vec_a = amplitudes_from_json(doc["vec_a"], "vec_a");
    model.vectors.vec_b = amplitudes_from_json(doc["vec_b"], "vec_b");
    model.vectors.dim = model.vectors.vec_a.size();
    if (model.solution.lambda.size() != n || model.solution.phase_deg.size() != n ||
        model.vectors.vec_a.size() != n + 1 || model.vectors.vec_b.size() != n + 1)
        throw Error(errc::parse_error, "model json field lengths disagree with n");
    return model;
}

ProbabilityTable table_from_model(const ParsedModel& model) {
    std::size_t n = model.vectors.dim - 1;
    std::size_t m = model.solution.pivot_m;
    ProbabilityTable table;
    for (std::size_t k = 0; k < n; ++k) {
        table.exemplar_names.push_back("row " + std::to_string(k + 1));
        table.mu_a.push_back(model.vectors.vec_a[k].mag * model.vectors.vec_a[k].mag);
        double bmag = model.vectors.vec_b[k].mag;
        double mu_b = bmag * bmag;
        if (k == m) {
            double extra = model.vectors.vec_b[n].mag;
            mu_b += extra * extra; // the deficit dimension completes the pivot's share
        }
        table.mu_b.push_back(mu_b);
    }
    table.mu_ab = reconstruct_mu_and(model.vectors, model.solution.c_m, m);
    return table;
}

std::string analysis_to_json(const ProbabilityTable& table, const AnalysisReport& report) {
    nlohmann::json doc;
    doc["mean_abs_dev_from_average"] = report.mean_abs_dev_from_average;
    doc["mean_abs_dev_from_minimum"] = report.mean_abs_dev_from_minimum;
    doc["corr_with_average"] = report.corr_with_average;
    doc["corr_with_minimum"] = report.corr_with_minimum;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < report.per_exemplar.size(); ++k) {
        const auto& e = report.per_exemplar[k];
        rows.push_back({{"exemplar", table.exemplar_names[k]},
                        {"mu_a", table.mu_a[k]},
                        {"mu_b", table.mu_b[k]},
                        {"mu_ab", table.mu_ab[k]},
                        {"interference_term", e.interference_term},
                        {"classification", extension_name(e.classification)},
                        {"equivalence_ok", e.equivalence_ok}});
    }
    doc["per_exemplar"] = rows;
    return doc.dump(2) + "\n";
}

std::string analysis_to_markdown(const ProbabilityTable& table, const AnalysisReport& report) {
    std::ostringstream out;
    out << "| exemplar | mu_a | mu_b | mu_ab | avg | min | interference | classification |\n";
    out << "|---|---|---|---|---|---|---|---|\n";
    for (std::size_t k = 0; k < report.per_exemplar.size(); ++k) {
        const auto& e = report.per_exemplar[k];
        double avg = 0.5 * (table.mu_a[k] + table.mu_b[k]);
        double lo = std::min(table.mu_a[k], table.mu_b[k]);
        out << "| " << table.exemplar_names[k] << " | " << fixed(table.mu_a[k], 3) << " | "
            << fixed(table.mu_b[k], 3) << " | " << fixed(table.mu_ab[k], 3) << " | "
            << fixed(avg, 4) << " | " << fixed(lo, 3) << " | " << fixed(e.interference_term, 4)
            << " | " << extension_name(e.classification) << " |\n";
    }
    out << "\n";
    out << "- mean |mu_ab - avg| = " << fixed(report.mean_abs_dev_from_average, 4) << "\n";
    out << "- mean |mu_ab - min| = " << fixed(report.mean_abs_dev_from_minimum, 4) << "\n";
    out << "- corr(mu_ab, avg) = " << fixed(report.corr_with_average, 3) << "\n";
    out << "- corr(mu_ab, min) = " << fixed(report.corr_with_minimum, 3) << "\n";
    return out.str();
}

std::string result_table_markdown(const ProbabilityTable& table,
                                  const InterferenceSolution& solution,
                                  const AnalysisReport& analysis) {
    std::ostringstream out;
    out << "| k | exemplar | mu_a | mu_b | mu_ab | avg | theta_deg | lambda | beta_deg | "
           "classification |\n";
    out << "|---|---|---|---|---|---|---|---|---|---|\n";
    for (std::size_t k = 0; k < table.size(); ++k) {
        double avg = 0.5 * (table.mu_a[k] + table.mu_b[k]);
        out << "| " << (k + 1) << " | " << table.exemplar_names[k] << " | "
            << fixed(table.mu_a[k], 3) << " | " << fixed(table.mu_b[k], 3) << " | "
            << fixed(table.mu_ab[k], 3) << " | " << fixed(avg, 4) << " | "
            << fixed(std::abs(solution.phase_deg[k]), 2) << " | " << fixed(solution.lambda[k], 4)
            << " | " << fixed(solution.phase_deg[k], 2) << " | "
            << extension_name(analysis.per_exemplar[k].classification) << " |\n";
    }
    out << "\n";
    out << "- pivot: row " << (solution.pivot_m + 1) << " ("
        << table.exemplar_names[solution.pivot_m] << "), c = " << fixed(solution.c_m, 6) << "\n";
    return out.str();
}

std::string verification_to_text(const VerificationReport& r) {
    std::ostringstream out;
    auto line = [&out](const char* label, double value, const char* note) {
        char buf[64];
        std::snprintf(buf, sizeof buf, "%.3e", value);
        out << label << buf;
        if (note) out << "  " << note;
        out << "\n";
    };
    out << "norm |A|                 = " << fixed(r.norm_a, 15) << "\n";
    out << "norm |B|                 = " << fixed(r.norm_b, 15) << "\n";
    line("|<A|B>|                  = ", r.inner_abs, nullptr);
    line("column excess (sum-1)    = ", r.column_excess, "(data-forced part of <A|B>)");
    line("cos-balance residual     = ", r.cos_balance_residual, nullptr);
    line("sine-balance residual    = ", r.sine_balance_residual, nullptr);
    line("max reconstruction error = ", r.max_reconstruction_error, nullptr);
    out << "check norms:          " << (r.norms_ok ? "ok" : "FAILED") << "\n";
    out << "check orthogonality:  " << (r.orthogonality_ok ? "ok" : "FAILED") << "\n";
    out << "check reconstruction: " << (r.reconstruction_ok ? "ok" : "FAILED") << "\n";
    out << "verdict: " << (r.all_ok ? "PASS" : "FAIL") << "\n";
    return out.str();
}

std::string scene_to_json(const GaussianScene& scene) {
    nlohmann::json doc;
    doc["gauss_a"] = {{"center", {scene.gauss_a.cx, scene.gauss_a.cy}},
                      {"sigma", scene.gauss_a.sigma},
                      {"amplitude", scene.gauss_a.amplitude}};
    doc["gauss_b"] = {{"center", {scene.gauss_b.cx, scene.gauss_b.cy}},
                      {"sigma", scene.gauss_b.sigma},
                      {"amplitude", scene.gauss_b.amplitude}};
    doc["aux_point_x"] = {scene.aux_point_x[0], scene.aux_point_x[1]};
    doc["scale_a"] = scene.scale_a;
    doc["scale_b"] = scene.scale_b;
    doc["pivot_m"] = scene.pivot_m + 1;
    doc["pivot_field_deviation"] = scene.pivot_field_deviation;
    nlohmann::json rows = nlohmann::json::array();
    for (std::size_t k = 0; k < scene.placements.size(); ++k)
        rows.push_back({{"exemplar", scene.exemplar_names[k]},
                        {"x", scene.placements[k][0]},
                        {"y", scene.placements[k][1]},
                        {"phase_deg", scene.phase_at_placements[k]},
                        {"residual_a", scene.residual_a[k]},
                        {"residual_b", scene.residual_b[k]}});
    doc["placements"] = rows;
    return doc.dump(2) + "\n";
}

std::string encode_pgm(const IntensityImage& image) {
    std::string out = "P5\n" + std::to_string(image.width) + " " +
                      std::to_string(image.height) + "\n255\n";
    out.reserve(out.size() + image.pixels.size());
    for (double p : image.pixels) out.push_back(static_cast<char>(to_byte(p)));
    return out;
}

std::string encode_ppm(const IntensityImage& image) {
    // 5-anchor colormap: dark blue, blue, cyan, warm yellow, white.
    static const double anchors[5][3] = {
        {0, 0, 48}, {24, 64, 176}, {64, 160, 255}, {255, 224, 128}, {255, 255, 255}};
    std::string out = "P6\n" + std::to_string(image.width) + " " +
                      std::to_string(image.height) + "\n255\n";
    out.reserve(out.size() + image.pixels.size() * 3);
    for (double p : image.pixels) {
        double t = std::clamp(p, 0.0, 1.0) * 4.0;
        std::size_t seg = std::min<std::size_t>(3, static_cast<std::size_t>(t));
        double f = t - static_cast<double>(seg);
        for (int c = 0; c < 3; ++c) {
            double v = anchors[seg][c] + f * (anchors[seg + 1][c] - anchors[seg][c]);
            out.push_back(static_cast<char>(static_cast<unsigned char>(std::lround(v))));
        }
    }
    return out;
}

std::string simulation_to_json(const ProbabilityTable& table, std::uint64_t samples,
                               std::uint64_t seed) {
    std::size_t n = table.size();
    double sum = 0;
    for (double p : table.mu_ab) sum += p;
    if (sum <= 0) throw Error(errc::validation_error, "mu_ab column is all zero");
    std::vector<double> exact(n);
    for (std::size_t k = 0; k < n; ++k) exact[k] = table.mu_ab[k] / sum;

    std::vector<double> freq = monte_carlo_simulate(exact, samples, seed);
    double max_err = 0;
    for (std::size_t k = 0; k < n; ++k)
        max_err = std::max(max_err, std::abs(freq[k] - exact[k]));

    std::vector<double> baseline = classical_mixture_baseline(table);
    double bsum = 0;
    for (double p : baseline) bsum += p;
    for (double& p : baseline) p /= bsum;

    ChiSquareResult chi = chi_square_gof(freq, baseline, samples);

    nlohmann::json doc;
    doc["samples"] = samples;
    doc["seed"] = seed;
    doc["exemplars"] = table.exemplar_names;
    doc["distribution"] = exact;
    doc["frequencies"] = freq;
    doc["max_abs_error"] = max_err;
    doc["baseline"] = baseline;
    doc["tv_distance_to_baseline"] = total_variation(exact, baseline);
    doc["chi_square_vs_baseline"] = {{"statistic", chi.statistic},
                                     {"dof", chi.dof},
                                     {"p_value", chi.p_value}};
    return doc.dump(2) + "\n";
}

} // namespace guppy
