// Command-line front end. Talks to the library exclusively through the C
// interface in guppy.h; all file I/O lives here.
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "guppy.h"

namespace {

// Exit codes: 0 success, 1 bad input data, 2 model/geometry infeasibility
// or a failed verification, 3 file I/O failure, 4 internal error.
int exit_code_for(guppy_status s) {
    switch (s) {
        case GUPPY_OK: return 0;
        case GUPPY_ERR_PARSE:
        case GUPPY_ERR_VALIDATION:
        case GUPPY_ERR_DEGENERATE:
        case GUPPY_ERR_INVALID_ARGUMENT: return 1;
        case GUPPY_ERR_INFEASIBLE:
        case GUPPY_ERR_PIVOT_INFEASIBLE:
        case GUPPY_ERR_FIT:
        case GUPPY_ERR_BOUNDS: return 2;
        case GUPPY_ERR_IO: return 3;
        default: return 4;
    }
}

// Failure report and exit code for a library call that returned `s`.
[[noreturn]] void die(guppy_status s, const std::string& context) {
    std::cerr << "guppy: " << context << ": " << guppy_last_error() << "\n";
    std::exit(exit_code_for(s));
}

[[noreturn]] void die_io(const std::string& message) {
    std::cerr << "guppy: " << message << "\n";
    std::exit(3);
}

std::string read_input(const std::string& path) {
    if (path.empty() || path == "-") {
        std::ostringstream ss;
        ss << std::cin.rdbuf();
        return ss.str();
    }
    std::ifstream in(path, std::ios::binary);
    if (!in) die_io("cannot open \"" + path + "\" for reading");
    std::ostringstream ss;
    ss << in.rdbuf();
    if (in.bad()) die_io("read failure on \"" + path + "\"");
    return ss.str();
}

void write_output(const std::string& path, const std::string& data) {
    if (path.empty() || path == "-") {
        std::cout << data;
        if (!data.empty() && data.back() != '\n' && data.find('\0') == std::string::npos)
            std::cout << '\n';
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) die_io("cannot open \"" + path + "\" for writing");
    out << data;
    out.close();
    if (!out) die_io("write failure on \"" + path + "\"");
}

struct TableGuard {
    guppy_table* t = nullptr;
    ~TableGuard() { guppy_table_free(t); }
};

struct ModelGuard {
    guppy_model* m = nullptr;
    ~ModelGuard() { guppy_model_free(m); }
};

struct SceneGuard {
    guppy_scene* s = nullptr;
    ~SceneGuard() { guppy_scene_free(s); }
};

std::string take_string(char* s) {
    std::string out = s ? s : "";
    guppy_string_free(s);
    return out;
}

bool looks_like_json(const std::string& text) {
    for (char c : text) {
        if (c == ' ' || c == '\t' || c == '\n' || c == '\r') continue;
        return c == '{' || c == '[';
    }
    return false;
}

bool looks_like_raw_typicality(const std::string& text) {
    std::string head = text.substr(0, text.find('\n'));
    for (char& c : head) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return head.find("participant") != std::string::npos;
}

int detect_format(const std::string& text, const std::string& requested) {
    if (requested == "csv") return GUPPY_FORMAT_CSV;
    if (requested == "json") return GUPPY_FORMAT_JSON;
    if (requested == "raw") return GUPPY_FORMAT_RAW_TYPICALITY;
    if (looks_like_json(text)) return GUPPY_FORMAT_JSON;
    if (looks_like_raw_typicality(text)) return GUPPY_FORMAT_RAW_TYPICALITY;
    return GUPPY_FORMAT_CSV;
}

// Loads the table for a subcommand: the file at `input` when given,
// otherwise the bundled dataset.
void load_table(const std::string& input, const std::string& input_format,
                TableGuard& table) {
    guppy_status s;
    if (input.empty()) {
        s = guppy_table_bundled(&table.t);
        if (s != GUPPY_OK) die(s, "bundled dataset");
        return;
    }
    std::string text = read_input(input);
    int format = detect_format(text, input_format);
    s = guppy_table_parse(text.c_str(), text.size(), format, &table.t);
    if (s != GUPPY_OK) die(s, "parsing \"" + (input == "-" ? "stdin" : input) + "\"");
}

bool ends_with(const std::string& s, const std::string& suffix) {
    return s.size() >= suffix.size() &&
           s.compare(s.size() - suffix.size(), suffix.size(), suffix) == 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Interference-model toolkit for concept conjunction data"};
    app.require_subcommand(1);
    app.set_version_flag("--version", std::string(guppy_version()));

    std::string input, output, input_format = "auto";
    std::string format;
    std::uint64_t seed = 1;
    std::size_t samples = 100000;
    std::size_t width = 400, height = 300;
    std::vector<double> bounds;
    bool decimal_comma = false;

    auto add_input = [&](CLI::App* cmd) {
        cmd->add_option("-i,--input", input,
                        "Input file (\"-\" for stdin; omit for the bundled dataset)");
        cmd->add_option("--input-format", input_format,
                        "Input layout: auto, csv, json, raw")
            ->check(CLI::IsMember({"auto", "csv", "json", "raw"}));
    };
    auto add_output = [&](CLI::App* cmd) {
        cmd->add_option("-o,--output", output, "Output file (default stdout)");
    };

    CLI::App* ingest = app.add_subcommand(
        "ingest", "Validate a dataset and rewrite it in a chosen layout");
    add_input(ingest);
    add_output(ingest);
    ingest->add_option("-f,--format", format, "Output layout: csv or json")
        ->check(CLI::IsMember({"csv", "json"}));
    ingest->add_flag("--decimal-comma", decimal_comma,
                     "Write CSV with European decimal commas");

    CLI::App* build = app.add_subcommand(
        "build", "Solve the interference model and write it as JSON");
    add_input(build);
    add_output(build);

    CLI::App* verify = app.add_subcommand(
        "verify", "Check model identities; accepts a dataset or a model file");
    add_input(verify);
    add_output(verify);

    CLI::App* analyze = app.add_subcommand(
        "analyze", "Classicality statistics for a dataset");
    add_input(analyze);
    add_output(analyze);
    analyze->add_option("-f,--format", format, "Output layout: md or json")
        ->check(CLI::IsMember({"md", "json"}));

    CLI::App* report = app.add_subcommand(
        "report", "Per-exemplar result table in markdown");
    add_input(report);
    add_output(report);

    CLI::App* render = app.add_subcommand(
        "render", "Render the planar interference field to an image");
    add_input(render);
    render->add_option("-o,--output", output,
                       "Image file; .ppm gets false color, anything else "
                       "grayscale (default interference.pgm)");
    render->add_option("--width", width, "Pixels per row")->check(CLI::PositiveNumber);
    render->add_option("--height", height, "Pixel rows")->check(CLI::PositiveNumber);
    render->add_option("--bounds", bounds,
                       "x_min,x_max,y_min,y_max (default: fitted scene plus margin)")
        ->delimiter(',')
        ->expected(4);
    render->add_option("-f,--format", format,
                       "\"json\" writes the fitted scene instead of an image")
        ->check(CLI::IsMember({"json"}));

    CLI::App* simulate = app.add_subcommand(
        "simulate", "Sample the conjunction distribution and compare baselines");
    add_input(simulate);
    add_output(simulate);
    simulate->add_option("--samples", samples, "Number of draws")
        ->check(CLI::PositiveNumber);
    simulate->add_option("--seed", seed, "Generator seed");

    CLI11_PARSE(app, argc, argv);

    if (ingest->parsed()) {
        TableGuard table;
        load_table(input, input_format, table);
        char* text = nullptr;
        guppy_status s;
        if (format == "json")
            s = guppy_table_to_json(table.t, &text);
        else
            s = guppy_table_to_csv(table.t, decimal_comma ? 1 : 0, &text);
        if (s != GUPPY_OK) die(s, "serializing table");
        write_output(output, take_string(text));
        return 0;
    }

    if (build->parsed()) {
        TableGuard table;
        load_table(input, input_format, table);
        ModelGuard model;
        guppy_status s = guppy_model_build(table.t, &model.m);
        if (s != GUPPY_OK) die(s, "building model");
        char* text = nullptr;
        s = guppy_model_to_json(model.m, &text);
        if (s != GUPPY_OK) die(s, "serializing model");
        write_output(output, take_string(text));
        return 0;
    }

    if (verify->parsed()) {
        TableGuard table;
        ModelGuard model;
        guppy_status s;
        bool from_model_file = false;
        if (!input.empty()) {
            std::string text = read_input(input);
            // a model file is a JSON object carrying "pivot_m"
            if (looks_like_json(text) && text.find("\"pivot_m\"") != std::string::npos) {
                from_model_file = true;
                s = guppy_model_parse(text.c_str(), text.size(), &model.m, &table.t);
                if (s != GUPPY_OK) die(s, "parsing model file");
            } else {
                int fmt = detect_format(text, input_format);
                s = guppy_table_parse(text.c_str(), text.size(), fmt, &table.t);
                if (s != GUPPY_OK) die(s, "parsing table");
            }
        } else {
            s = guppy_table_bundled(&table.t);
            if (s != GUPPY_OK) die(s, "bundled dataset");
        }
        if (!from_model_file) {
            s = guppy_model_build(table.t, &model.m);
            if (s != GUPPY_OK) die(s, "building model");
        }
        guppy_verification v{};
        s = guppy_model_verify(table.t, model.m, &v);
        if (s != GUPPY_OK) die(s, "verifying model");
        std::ostringstream text;
        auto flag = [](int ok) { return ok ? "ok" : "FAILED"; };
        char buf[512];
        std::snprintf(buf, sizeof buf,
                      "norm |A>               %.15f  %s\n"
                      "norm |B>               %.15f  %s\n"
                      "|<A|B>|                %.6e\n"
                      "column excess          %.6e\n"
                      "orthogonality residual %.6e  %s\n"
                      "imaginary balance      %.6e\n"
                      "reconstruction error   %.6e  %s\n",
                      v.norm_a, flag(v.norms_ok), v.norm_b, flag(v.norms_ok),
                      v.inner_abs, v.column_excess, v.cos_balance_residual,
                      flag(v.orthogonality_ok), v.sine_balance_residual,
                      v.max_reconstruction_error, flag(v.reconstruction_ok));
        text << buf << "verdict: " << (v.all_ok ? "PASS" : "FAIL") << "\n";
        write_output(output, text.str());
        return v.all_ok ? 0 : 2;
    }

    if (analyze->parsed()) {
        TableGuard table;
        load_table(input, input_format, table);
        char* text = nullptr;
        guppy_status s;
        if (format == "json")
            s = guppy_analysis_json(table.t, &text);
        else
            s = guppy_analysis_markdown(table.t, &text);
        if (s != GUPPY_OK) die(s, "analyzing table");
        write_output(output, take_string(text));
        return 0;
    }

    if (report->parsed()) {
        TableGuard table;
        load_table(input, input_format, table);
        char* text = nullptr;
        guppy_status s = guppy_report_markdown(table.t, &text);
        if (s != GUPPY_OK) die(s, "building report");
        write_output(output, take_string(text));
        return 0;
    }

    if (render->parsed()) {
        TableGuard table;
        load_table(input, input_format, table);
        ModelGuard model;
        guppy_status s = guppy_model_build(table.t, &model.m);
        if (s != GUPPY_OK) die(s, "building model");
        SceneGuard scene;
        s = guppy_scene_fit(table.t, model.m, &scene.s);
        if (s != GUPPY_OK) die(s, "fitting scene");
        if (format == "json") {
            char* text = nullptr;
            s = guppy_scene_to_json(scene.s, &text);
            if (s != GUPPY_OK) die(s, "serializing scene");
            write_output(output, take_string(text));
            return 0;
        }
        if (output.empty()) output = "interference.pgm";
        const double* box = bounds.empty() ? nullptr : bounds.data();
        unsigned char* bytes = nullptr;
        std::size_t len = 0;
        if (ends_with(output, ".ppm"))
            s = guppy_render_ppm(scene.s, width, height, box, &bytes, &len);
        else
            s = guppy_render_pgm(scene.s, width, height, box, &bytes, &len);
        if (s != GUPPY_OK) die(s, "rendering image");
        std::string data(reinterpret_cast<const char*>(bytes), len);
        guppy_bytes_free(bytes);
        write_output(output, data);
        return 0;
    }

    if (simulate->parsed()) {
        TableGuard table;
        load_table(input, input_format, table);
        char* text = nullptr;
        guppy_status s = guppy_simulation_json(table.t, samples, seed, &text);
        if (s != GUPPY_OK) die(s, "sampling distribution");
        write_output(output, take_string(text));
        return 0;
    }

    return 0;
}
