#include "fw/trace.hpp"

#include <charconv>
#include <sstream>
#include <stdexcept>

namespace fw {

std::string to_string(RunStatus s) {
    switch (s) {
        case RunStatus::MaxIters: return "max_iters";
        case RunStatus::GapTolMet: return "gap_tol_met";
        case RunStatus::FwGapTolMet: return "fwgap_tol_met";
        case RunStatus::AlreadyOptimal: return "already_optimal";
        case RunStatus::Aborted: return "aborted";
    }
    return "unknown";
}

static RunStatus status_from_string(const std::string& s) {
    if (s == "max_iters") return RunStatus::MaxIters;
    if (s == "gap_tol_met") return RunStatus::GapTolMet;
    if (s == "fwgap_tol_met") return RunStatus::FwGapTolMet;
    if (s == "already_optimal") return RunStatus::AlreadyOptimal;
    if (s == "aborted") return RunStatus::Aborted;
    throw std::invalid_argument("unknown run status: " + s);
}

std::string format_double(double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::vector<double> RunTrace::steps_from_1(int k) const {
    std::vector<double> steps;
    steps.reserve(static_cast<std::size_t>(std::max(0, k)));
    for (int i = 1; i <= k; ++i) steps.push_back(record(i).stepsize);
    return steps;
}

namespace {

constexpr const char* kHeader = "k,stepsize,h_lambda,Bw,Bo,Bbest,G,C_k,delta_k,support";

std::string opt_field(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string();
}

std::optional<double> parse_opt(const std::string& s) {
    if (s.empty()) return std::nullopt;
    return std::stod(s);
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

}  // namespace

std::string trace_to_csv(const RunTrace& trace) {
    std::ostringstream out;
    out << "# schema=1\n";
    out << "# problem_id=" << trace.problem_id << "\n";
    out << "# rule=" << trace.rule_descriptor << "\n";
    out << "# inexactness=" << trace.inexactness_descriptor << "\n";
    out << "# status=" << to_string(trace.status) << "\n";
    out << "# final_h=" << format_double(trace.final_h) << "\n";
    out << "# doublings=" << trace.doublings << "\n";
    if (!trace.config_json.empty()) out << "# config=" << trace.config_json << "\n";
    out << kHeader << "\n";
    for (const auto& r : trace.records) {
        out << r.k << ',' << format_double(r.stepsize) << ',' << format_double(r.h) << ','
            << format_double(r.bw) << ',' << opt_field(r.bo) << ',' << format_double(r.bbest)
            << ',' << opt_field(r.fwgap) << ',' << opt_field(r.ck) << ',' << opt_field(r.delta)
            << ',' << r.support_size << "\n";
    }
    return out.str();
}

RunTrace trace_from_csv(const std::string& text) {
    RunTrace trace;
    std::istringstream in(text);
    std::string line;
    bool header_seen = false;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# ", 0) == 0) {
            std::string body = line.substr(2);
            std::size_t eq = body.find('=');
            if (eq == std::string::npos) continue;
            std::string key = body.substr(0, eq);
            std::string value = body.substr(eq + 1);
            if (key == "problem_id") trace.problem_id = value;
            else if (key == "rule") trace.rule_descriptor = value;
            else if (key == "inexactness") trace.inexactness_descriptor = value;
            else if (key == "status") trace.status = status_from_string(value);
            else if (key == "final_h") trace.final_h = std::stod(value);
            else if (key == "doublings") trace.doublings = std::stoi(value);
            else if (key == "config") trace.config_json = value;
            continue;
        }
        if (!header_seen) {
            if (line != kHeader) throw std::invalid_argument("trace_from_csv: bad header: " + line);
            header_seen = true;
            continue;
        }
        auto fields = split(line, ',');
        if (fields.size() != 10)
            throw std::invalid_argument("trace_from_csv: expected 10 fields: " + line);
        IterationRecord r;
        r.k = std::stoi(fields[0]);
        r.stepsize = std::stod(fields[1]);
        r.h = std::stod(fields[2]);
        r.bw = std::stod(fields[3]);
        r.bo = parse_opt(fields[4]);
        r.bbest = std::stod(fields[5]);
        r.fwgap = parse_opt(fields[6]);
        r.ck = parse_opt(fields[7]);
        r.delta = parse_opt(fields[8]);
        r.support_size = std::stoi(fields[9]);
        trace.records.push_back(std::move(r));
    }
    if (!header_seen) throw std::invalid_argument("trace_from_csv: missing header");
    for (std::size_t i = 1; i < trace.records.size(); ++i)
        if (trace.records[i].k != trace.records[i - 1].k + 1)
            throw std::invalid_argument("trace_from_csv: non-contiguous iteration indices");
    return trace;
}

}  // namespace fw
