// Command-line front end: run configured solves, check traces against the
// convergence guarantees, and sweep config directories.
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "json.hpp"

#include "fw/config.hpp"
#include "fw/guarantees.hpp"
#include "fw/problems.hpp"
#include "fw/solver.hpp"
#include "fw/trace.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitRuntime = 2;
constexpr int kExitViolation = 3;

std::string read_file(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    if (!in) throw std::invalid_argument("cannot read " + p.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_file(const fs::path& p, const std::string& text) {
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    std::ofstream out(p, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + p.string());
    out << text;
}

double curvature_for_summary(const fw::Problem& problem) {
    auto info = fw::curvature_info_for(problem);
    return info.chosen();
}

// Executes one config file; returns {exit code, one-line status}.  Output
// paths in the config resolve relative to the config file's directory.
std::pair<int, std::string> run_one(const fs::path& config_path) {
    fw::RunConfig cfg;
    try {
        cfg = fw::parse_run_config(read_file(config_path));
    } catch (const std::invalid_argument& e) {
        return {kExitUsage, e.what()};
    }
    try {
        fw::RunTrace trace = fw::execute_run_config(cfg);
        fw::Problem problem = fw::problem_from_json(cfg.problem_json);
        double c = curvature_for_summary(problem);

        fs::path base = config_path.parent_path();
        fs::path trace_path = cfg.trace_path.empty()
                                  ? config_path.parent_path() / (config_path.stem().string() + ".trace.csv")
                                  : (fs::path(cfg.trace_path).is_absolute() ? fs::path(cfg.trace_path)
                                                                            : base / cfg.trace_path);
        write_file(trace_path, fw::trace_to_csv(trace));
        if (!cfg.summary_path.empty()) {
            fs::path summary_path = fs::path(cfg.summary_path).is_absolute()
                                        ? fs::path(cfg.summary_path)
                                        : base / cfg.summary_path;
            write_file(summary_path, fw::run_summary_json(trace, c));
        }
        std::ostringstream line;
        line << trace.problem_id << " status=" << fw::to_string(trace.status)
             << " trace=" << trace_path.string();
        return {kExitOk, line.str()};
    } catch (const std::invalid_argument& e) {
        return {kExitUsage, e.what()};
    } catch (const std::exception& e) {
        return {kExitRuntime, e.what()};
    }
}

int cmd_run(const std::string& config_path) {
    auto [code, msg] = run_one(config_path);
    std::cout << msg << "\n";
    return code;
}

int cmd_check(const std::string& trace_path, const std::string& bounds_csv,
              const std::string& curvature_mode, const std::string& report_path) {
    fw::RunTrace trace;
    try {
        trace = fw::trace_from_csv(read_file(trace_path));
    } catch (const std::exception& e) {
        std::cerr << "check: " << e.what() << "\n";
        return kExitUsage;
    }

    std::set<std::string> selector;
    if (!bounds_csv.empty()) {
        std::stringstream ss(bounds_csv);
        std::string item;
        while (std::getline(ss, item, ','))
            if (!item.empty()) selector.insert(item);
    }

    try {
        // Curvature comes from the problem reconstructed out of the embedded
        // config, per the requested mode.
        if (trace.config_json.empty())
            throw std::invalid_argument("trace has no embedded config; cannot recover the problem");
        json cfg = json::parse(trace.config_json);
        fw::Problem problem = fw::problem_from_json(cfg.at("problem").dump());
        auto info = fw::curvature_info_for(problem);

        fw::CurvatureInfo used;
        if (curvature_mode == "exact") {
            if (!info.exact) throw std::invalid_argument("no exact curvature for this problem");
            used.exact = info.exact;
        } else if (curvature_mode == "lipschitz") {
            if (!info.lipschitz_upper)
                throw std::invalid_argument("no Lipschitz curvature bound for this problem");
            used.exact = info.lipschitz_upper;
        } else if (curvature_mode == "sampled") {
            // Diagnostic mode: a sampled lower bound is not a certified C.
            used.exact = info.sampled_lower;
        } else {
            throw std::invalid_argument("curvature mode must be exact|lipschitz|sampled");
        }

        fw::GuaranteeReport report = fw::audit(trace, used, selector);
        if (!report_path.empty()) write_file(report_path, report.to_json());
        std::cout << "bounds checked: " << report.rows.size() << " rows, min margin "
                  << fw::format_double(report.min_margin) << "\n";
        if (!report.all_pass) {
            const auto& v = *report.first_violation;
            std::cout << "VIOLATION " << v.bound << " at k=" << v.k
                      << ": empirical=" << fw::format_double(v.empirical)
                      << " rhs=" << fw::format_double(v.rhs) << "\n";
            return kExitViolation;
        }
        std::cout << "all bounds hold\n";
        return kExitOk;
    } catch (const std::invalid_argument& e) {
        std::cerr << "check: " << e.what() << "\n";
        return kExitUsage;
    } catch (const std::exception& e) {
        std::cerr << "check: " << e.what() << "\n";
        return kExitRuntime;
    }
}

int cmd_sweep(const std::string& dir, int jobs) {
    std::vector<fs::path> configs;
    try {
        for (const auto& e : fs::directory_iterator(dir))
            if (e.is_regular_file() && e.path().extension() == ".json") configs.push_back(e.path());
    } catch (const std::exception& e) {
        std::cerr << "sweep: " << e.what() << "\n";
        return kExitUsage;
    }
    std::sort(configs.begin(), configs.end());

    struct Row {
        std::string config, problem, rule, status;
        int iterations = 0;
        std::string final_gap, min_margin;
        int exit_code = 0;
        std::string message;
    };
    std::vector<Row> rows(configs.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            std::size_t i = next.fetch_add(1);
            if (i >= configs.size()) return;
            Row& row = rows[i];
            row.config = configs[i].filename().string();
            auto [code, msg] = run_one(configs[i]);
            row.exit_code = code;
            row.message = msg;
            if (code != kExitOk) {
                row.status = "error";
                continue;
            }
            try {
                fw::RunConfig cfg = fw::parse_run_config(read_file(configs[i]));
                fw::RunTrace trace = fw::execute_run_config(cfg);
                fw::Problem problem = fw::problem_from_json(cfg.problem_json);
                row.problem = trace.problem_id;
                row.rule = json::parse(trace.rule_descriptor).at("kind").get<std::string>();
                row.status = fw::to_string(trace.status);
                row.iterations = std::max(0, trace.last_k());
                if (!trace.records.empty())
                    row.final_gap = fw::format_double(trace.records.back().bbest - trace.final_h);
                auto report = fw::audit(trace, fw::curvature_info_for(problem));
                row.min_margin = fw::format_double(report.min_margin);
                if (!report.all_pass) {
                    row.exit_code = kExitViolation;
                    row.message = "bound violation";
                }
            } catch (const std::exception& e) {
                row.exit_code = kExitRuntime;
                row.message = e.what();
                row.status = "error";
            }
        }
    };

    std::vector<std::thread> pool;
    int n = std::max(1, jobs);
    for (int t = 0; t < n; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    std::ostringstream summary;
    summary << "config,problem,rule,status,iterations,final_gap,min_margin\n";
    for (const auto& r : rows)
        summary << r.config << "," << r.problem << "," << r.rule << "," << r.status << ","
                << r.iterations << "," << r.final_gap << "," << r.min_margin << "\n";
    try {
        write_file(fs::path(dir) / "sweep_summary.csv", summary.str());
    } catch (const std::exception& e) {
        std::cerr << "sweep: " << e.what() << "\n";
        return kExitRuntime;
    }

    int worst = kExitOk;
    for (const auto& r : rows) {
        std::cout << r.config << ": "
                  << (r.exit_code == kExitOk ? "ok" : "FAIL(" + std::to_string(r.exit_code) + ")")
                  << " " << r.message << "\n";
        worst = std::max(worst, r.exit_code);
    }
    return worst;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Projection-free solver with convergence-guarantee auditing"};
    app.require_subcommand(1);

    std::string config_path;
    auto* run = app.add_subcommand("run", "Execute a configured run; write trace CSV and summary");
    run->add_option("config", config_path, "Run config (JSON, schema 1)")->required();

    std::string trace_path, bounds, curvature = "exact", report_path;
    auto* check = app.add_subcommand("check", "Audit a trace against the applicable bounds");
    check->add_option("trace", trace_path, "Trace CSV produced by `run`")->required();
    check->add_option("--bounds", bounds, "Comma-separated bound names (default: all applicable)");
    check->add_option("--curvature", curvature, "Curvature source: exact|lipschitz|sampled")
        ->check(CLI::IsMember({"exact", "lipschitz", "sampled"}));
    check->add_option("--report", report_path, "Write the JSON report here");

    std::string sweep_dir;
    int jobs = 1;
    auto* sweep = app.add_subcommand("sweep", "Run every config in a directory");
    sweep->add_option("dir", sweep_dir, "Directory of run configs")->required();
    sweep->add_option("-j,--jobs", jobs, "Worker threads");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    if (run->parsed()) return cmd_run(config_path);
    if (check->parsed()) return cmd_check(trace_path, bounds, curvature, report_path);
    if (sweep->parsed()) return cmd_sweep(sweep_dir, jobs);
    return kExitUsage;
}
