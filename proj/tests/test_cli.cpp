#define DOCTEST_CONFIG_IMPLEMENT
#include "doctest.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

std::string g_cli;
fs::path g_dir;

int run_cmd(const std::string& args) {
    std::string cmd = g_cli + " " + args + " > /dev/null 2>&1";
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void spit(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

const char* kBaseConfig = R"({
  "schema": 1,
  "problem": {"kind": "quadratic_simplex", "n": 4, "spectrum": "identity", "scale": 1.0},
  "rule": {"kind": "standard"},
  "iters": 30,
  "prestart": true,
  "output": {"trace": "trace.csv", "summary": "summary.json"}
})";

}  // namespace

TEST_CASE("run writes the documented trace format") {
    fs::path dir = g_dir / "run1";
    fs::create_directories(dir);
    spit(dir / "cfg.json", kBaseConfig);
    CHECK(run_cmd("run " + (dir / "cfg.json").string()) == 0);

    std::string csv = slurp(dir / "trace.csv");
    CHECK(csv.find("k,stepsize,h_lambda,Bw,Bo,Bbest,G,C_k,delta_k,support\n") != std::string::npos);
    int data_rows = 0;
    std::istringstream ss(csv);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'k') ++data_rows;
    CHECK(data_rows == 31);  // pre-start row + 30 iterations

    std::string summary = slurp(dir / "summary.json");
    CHECK(summary.find("\"status\"") != std::string::npos);
    CHECK(summary.find("\"curvature_used\": 2.0") != std::string::npos);
}

TEST_CASE("degenerate run length") {
    fs::path dir = g_dir / "run0";
    fs::create_directories(dir);
    std::string cfg = kBaseConfig;
    cfg.replace(cfg.find("\"iters\": 30"), 11, "\"iters\": 0");
    spit(dir / "cfg.json", cfg);
    CHECK(run_cmd("run " + (dir / "cfg.json").string()) == 0);
    std::string csv = slurp(dir / "trace.csv");
    std::istringstream ss(csv);
    std::string line;
    int data_rows = 0;
    std::string first_data;
    while (std::getline(ss, line))
        if (!line.empty() && line[0] != '#' && line[0] != 'k') {
            if (data_rows == 0) first_data = line;
            ++data_rows;
        }
    CHECK(data_rows == 1);
    CHECK(first_data.substr(0, 2) == "0,");
}

TEST_CASE("repeat runs are byte-identical") {
    fs::path dir = g_dir / "det";
    fs::create_directories(dir);
    spit(dir / "cfg.json", kBaseConfig);
    REQUIRE(run_cmd("run " + (dir / "cfg.json").string()) == 0);
    std::string first = slurp(dir / "trace.csv");
    REQUIRE(run_cmd("run " + (dir / "cfg.json").string()) == 0);
    CHECK(slurp(dir / "trace.csv") == first);
}

TEST_CASE("config validation failures exit with the usage code") {
    fs::path dir = g_dir / "badcfg";
    fs::create_directories(dir);
    spit(dir / "notjson.json", "{nope");
    CHECK(run_cmd("run " + (dir / "notjson.json").string()) == 1);

    spit(dir / "unknown.json",
         R"({"schema":1,"problem":{"kind":"quadratic_simplex","n":3},"rule":{"kind":"standard"},"iters":5,"typo_key":true})");
    CHECK(run_cmd("run " + (dir / "unknown.json").string()) == 1);

    spit(dir / "badschema.json",
         R"({"schema":2,"problem":{"kind":"quadratic_simplex","n":3},"rule":{"kind":"standard"},"iters":5})");
    CHECK(run_cmd("run " + (dir / "badschema.json").string()) == 1);

    CHECK(run_cmd("run " + (dir / "missing.json").string()) == 1);
}

TEST_CASE("check verdicts and exit codes") {
    fs::path dir = g_dir / "check";
    fs::create_directories(dir);
    spit(dir / "cfg.json", kBaseConfig);
    REQUIRE(run_cmd("run " + (dir / "cfg.json").string()) == 0);

    CHECK(run_cmd("check " + (dir / "trace.csv").string() + " --bounds thm21,bound31") == 0);
    CHECK(run_cmd("check " + (dir / "trace.csv").string() + " --curvature lipschitz") == 0);

    // Selector that does not apply to an exact trace.
    CHECK(run_cmd("check " + (dir / "trace.csv").string() + " --bounds thm53") == 1);

    // Hand-corrupt the best-bound column of one row: claim a tighter bound
    // than the run achieved.
    std::string csv = slurp(dir / "trace.csv");
    std::istringstream ss(csv);
    std::ostringstream out;
    std::string line;
    while (std::getline(ss, line)) {
        if (line.rfind("5,", 0) == 0) {
            // Columns: k,stepsize,h_lambda,Bw,Bo,Bbest,G,C_k,delta_k,support
            std::vector<std::string> cells;
            std::string cell;
            std::istringstream ls(line);
            while (std::getline(ls, cell, ',')) cells.push_back(cell);
            cells[5] = "1e9";  // Bbest far above the Wolfe bound: invalid trace
            cells[3] = "1e9";
            std::string rebuilt;
            for (std::size_t i = 0; i < cells.size(); ++i)
                rebuilt += (i ? "," : "") + cells[i];
            line = rebuilt;
        }
        out << line << "\n";
    }
    spit(dir / "corrupt.csv", out.str());
    CHECK(run_cmd("check " + (dir / "corrupt.csv").string()) == 3);

    CHECK(run_cmd("check " + (dir / "no_such.csv").string()) == 1);
}

TEST_CASE("sweep fans out and aggregates") {
    fs::path dir = g_dir / "sweep";
    fs::create_directories(dir);
    const char* rules[] = {R"({"kind":"standard"})", R"({"kind":"averaging"})",
                           R"({"kind":"optimized_constant","k_total":20})",
                           R"({"kind":"line_search"})"};
    const char* names[] = {"r1", "r2", "r3", "r4"};
    for (int i = 0; i < 4; ++i) {
        std::string text = std::string(R"({"schema":1,)") +
               R"("problem":{"kind":"quadratic_simplex","n":6,"spectrum":"diagonal","eigenvalues":[1,2,3,4,5,6]},)" +
               "\"rule\":" + rules[i] + ",\"iters\":40,\"output\":{\"trace\":\"" + names[i] +
               ".csv\"}}";
        spit(dir / (std::string(names[i]) + ".json"), text);
    }
    CHECK(run_cmd("sweep " + dir.string() + " -j 4") == 0);
    for (const char* n : names) CHECK(fs::exists(dir / (std::string(n) + ".csv")));

    std::string summary = slurp(dir / "sweep_summary.csv");
    int rows = -1;  // discount header
    std::istringstream ss(summary);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 4);

    // Parallelism does not change outputs.
    std::string t1 = slurp(dir / "r1.csv");
    REQUIRE(run_cmd("sweep " + dir.string() + " -j 1") == 0);
    CHECK(slurp(dir / "r1.csv") == t1);
    CHECK(slurp(dir / "sweep_summary.csv") == summary);

    fs::path empty = g_dir / "sweep_empty";
    fs::create_directories(empty);
    CHECK(run_cmd("sweep " + empty.string()) == 0);
    std::string es = slurp(empty / "sweep_summary.csv");
    CHECK(es == "config,problem,rule,status,iterations,final_gap,min_margin\n");
}

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: test_cli <path-to-cli>\n");
        return 2;
    }
    g_cli = argv[1];
    g_dir = fs::temp_directory_path() / "fwcli_test";
    fs::remove_all(g_dir);
    fs::create_directories(g_dir);
    doctest::Context ctx;
    ctx.applyCommandLine(1, argv);
    return ctx.run();
}
