#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>

namespace {

struct RunResult {
    int exit_code = -1;
    std::string output; // stdout + stderr interleaved
};

// Runs the CLI with the given arguments, capturing combined output.
RunResult run(const std::string& args) {
    std::string cmd = std::string(GUPPY_CLI_PATH) + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    RunResult res;
    char buf[4096];
    size_t got;
    while ((got = fread(buf, 1, sizeof buf, pipe)) > 0) res.output.append(buf, got);
    int status = pclose(pipe);
    res.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return res;
}

std::string temp_path(const std::string& name) {
    static const std::string dir = [] {
        char tmpl[] = "/tmp/guppy_cli_XXXXXX";
        char* d = mkdtemp(tmpl);
        REQUIRE(d != nullptr);
        return std::string(d);
    }();
    return dir + "/" + name;
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const std::string& path, const std::string& data) {
    std::ofstream out(path, std::ios::binary);
    REQUIRE(out.good());
    out << data;
}

} // namespace

TEST_CASE("version flag") {
    RunResult r = run("--version");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("1.0.0") != std::string::npos);
}

TEST_CASE("no subcommand is an error") {
    RunResult r = run("");
    CHECK(r.exit_code != 0);
}

TEST_CASE("every text subcommand runs on the bundled dataset") {
    for (const char* sub : {"ingest", "build", "verify", "analyze", "report", "simulate"}) {
        RunResult r = run(sub);
        CHECK_MESSAGE(r.exit_code == 0, sub, ": ", r.output.substr(0, 200));
        CHECK(!r.output.empty());
    }
}

TEST_CASE("verify prints the checklist and a verdict") {
    RunResult r = run("verify");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("norm |A>") != std::string::npos);
    CHECK(r.output.find("verdict: PASS") != std::string::npos);
}

TEST_CASE("build output is deterministic and round trips through verify") {
    std::string model1 = temp_path("model1.json");
    std::string model2 = temp_path("model2.json");
    CHECK(run("build -o " + model1).exit_code == 0);
    CHECK(run("build -o " + model2).exit_code == 0);
    CHECK(slurp(model1) == slurp(model2));

    RunResult v = run("verify -i " + model1);
    CHECK(v.exit_code == 0);
    CHECK(v.output.find("verdict: PASS") != std::string::npos);
}

TEST_CASE("tampered model files fail verification with exit 2") {
    std::string model = temp_path("tampered.json");
    CHECK(run("build -o " + model).exit_code == 0);
    std::string text = slurp(model);
    // nudge one stored magnitude without breaking the JSON
    std::size_t pos = text.find("\"mag\":");
    REQUIRE(pos != std::string::npos);
    std::size_t end = text.find(',', pos);
    REQUIRE(end != std::string::npos);
    text.replace(pos, end - pos, "\"mag\": 0.31");
    spit(model, text);
    RunResult v = run("verify -i " + model);
    CHECK(v.exit_code == 2);
    CHECK(v.output.find("FAILED") != std::string::npos);
    CHECK(v.output.find("verdict: FAIL") != std::string::npos);
}

TEST_CASE("ingest round trips csv and json layouts") {
    std::string csv = temp_path("table.csv");
    std::string json = temp_path("table.json");
    std::string back = temp_path("back.csv");
    CHECK(run("ingest -o " + csv).exit_code == 0);
    CHECK(run("ingest -f json -i " + csv + " -o " + json).exit_code == 0);
    CHECK(run("ingest -i " + json + " -o " + back).exit_code == 0);
    CHECK(slurp(csv) == slurp(back));
    CHECK(slurp(json).find("\"exemplar\"") != std::string::npos);
}

TEST_CASE("decimal comma output uses semicolons and commas") {
    RunResult r = run("ingest --decimal-comma");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find(';') != std::string::npos);
    CHECK(r.output.find("0,079") != std::string::npos);
    // and it parses back
    std::string path = temp_path("comma.csv");
    spit(path, r.output);
    RunResult back = run("ingest -i " + path);
    CHECK(back.exit_code == 0);
    CHECK(back.output.find("0.079") != std::string::npos);
}

TEST_CASE("raw typicality ingestion from a file") {
    std::string path = temp_path("raw.csv");
    spit(path,
         "participant,concept,exemplar,rating\n"
         "p1,A,Desk,2\n"
         "p1,B,Desk,-1\n"
         "p1,AB,Desk,1\n"
         "p1,A,Bed,0\n"
         "p1,B,Bed,3\n"
         "p1,AB,Bed,1\n");
    RunResult r = run("ingest -i " + path);
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("Desk") != std::string::npos);
    CHECK(r.output.find("0.625") != std::string::npos); // 5/8
}

TEST_CASE("parse errors exit 1 and name the problem") {
    std::string path = temp_path("bad.csv");
    spit(path, "exemplar,mu_a\nonly,0.5\n");
    RunResult r = run("build -i " + path);
    CHECK(r.exit_code == 1);
    CHECK(r.output.find("guppy:") != std::string::npos);
}

TEST_CASE("missing input file exits 3") {
    RunResult r = run("analyze -i /nonexistent/nowhere.csv");
    CHECK(r.exit_code == 3);
}

TEST_CASE("render writes deterministic images in both formats") {
    std::string pgm1 = temp_path("a.pgm");
    std::string pgm2 = temp_path("b.pgm");
    std::string ppm = temp_path("c.ppm");
    CHECK(run("render --width 80 --height 60 -o " + pgm1).exit_code == 0);
    CHECK(run("render --width 80 --height 60 -o " + pgm2).exit_code == 0);
    std::string data = slurp(pgm1);
    CHECK(data == slurp(pgm2));
    CHECK(data.substr(0, 3) == "P5\n");
    CHECK(data.find("80 60") != std::string::npos);

    CHECK(run("render --width 32 --height 24 -o " + ppm).exit_code == 0);
    CHECK(slurp(ppm).substr(0, 3) == "P6\n");
}

TEST_CASE("render with explicit bounds and scene json") {
    std::string pgm = temp_path("bounded.pgm");
    RunResult r = run("render --bounds -6 23 -4 16 --width 40 --height 30 -o " + pgm);
    CHECK(r.exit_code == 0);
    CHECK(slurp(pgm).substr(0, 3) == "P5\n");

    // the comma-joined spelling produces the same image
    std::string pgm2 = temp_path("bounded2.pgm");
    RunResult r2 = run("render --bounds=-6,23,-4,16 --width 40 --height 30 -o " + pgm2);
    CHECK(r2.exit_code == 0);
    CHECK(slurp(pgm2) == slurp(pgm));

    RunResult bad = run("render --bounds 1 1 -4 16 -o " + temp_path("never.pgm"));
    CHECK(bad.exit_code == 2);

    RunResult scene = run("render -f json");
    CHECK(scene.exit_code == 0);
    CHECK(scene.output.find("\"placements\"") != std::string::npos);
    CHECK(scene.output.find("Coffee Table") != std::string::npos);
}

TEST_CASE("simulate respects seed and sample count") {
    RunResult a = run("simulate --samples 20000 --seed 5");
    RunResult b = run("simulate --samples 20000 --seed 5");
    RunResult c = run("simulate --samples 20000 --seed 6");
    CHECK(a.exit_code == 0);
    CHECK(a.output == b.output);
    CHECK(a.output != c.output);
    CHECK(a.output.find("\"chi_square_vs_baseline\"") != std::string::npos);
}

TEST_CASE("report contains the solved columns") {
    RunResult r = run("report");
    CHECK(r.exit_code == 0);
    CHECK(r.output.find("| 16 | TV |") != std::string::npos);
    CHECK(r.output.find("0.0746") != std::string::npos);
    CHECK(r.output.find("double-overextended") != std::string::npos);
}
