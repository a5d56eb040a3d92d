#include "istail/report_io.hpp"

#include <cstdio>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace istail::io {

namespace {

std::string g17(double x) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", x);
    return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> out;
    std::string field;
    std::istringstream ss(line);
    while (std::getline(ss, field, ',')) out.push_back(field);
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw std::runtime_error("CSV parse: bad numeric field '" + s + "'");
    return v;
}

long parse_long(const std::string& s) {
    char* end = nullptr;
    const long v = std::strtol(s.c_str(), &end, 10);
    if (end == s.c_str() || *end != '\0')
        throw std::runtime_error("CSV parse: bad integer field '" + s + "'");
    return v;
}

void expect_header(std::istream& in, const std::string& expected) {
    std::string line;
    if (!std::getline(in, line) || line != expected)
        throw std::runtime_error("CSV parse: expected header '" + expected + "'");
}

constexpr const char* kReportHeader =
    "level_p,lambda,mean_estimate,std_dev,mass_deficit_count,replications";
constexpr const char* kTableHeader =
    "n,one_minus_p,true_value,approx,sm_mean,sm_std,dlw_mean,dlw_std,mc_mean,mc_std,avg_time_s";

}  // namespace

void write_report_csv(std::ostream& out, const ExperimentReport& report) {
    out << kReportHeader << '\n';
    for (const auto& lvl : report.levels) {
        out << g17(lvl.level_p) << ',' << g17(lvl.lambda) << ',' << g17(lvl.mean_estimate) << ','
            << g17(lvl.std_dev) << ',' << lvl.mass_deficit_count << ','
            << report.config.replications << '\n';
    }
}

std::vector<ReportRow> read_report_csv(std::istream& in) {
    expect_header(in, kReportHeader);
    std::vector<ReportRow> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 6) throw std::runtime_error("CSV parse: report row needs 6 fields");
        ReportRow r;
        r.level_p = parse_double(f[0]);
        r.lambda = parse_double(f[1]);
        r.mean_estimate = parse_double(f[2]);
        r.std_dev = parse_double(f[3]);
        r.mass_deficit_count = static_cast<int>(parse_long(f[4]));
        r.replications = static_cast<int>(parse_long(f[5]));
        rows.push_back(r);
    }
    return rows;
}

void write_report_table(std::ostream& out, const ExperimentReport& report) {
    const auto& cfg = report.config;
    out << "algorithm: " << algorithm_name(cfg.algorithm) << "  mode: " << mode_name(cfg.mode)
        << "  alpha: " << cfg.alpha << "  n: " << cfg.n << "  N: " << cfg.num_samples
        << "  reps: " << cfg.replications << "  seed: " << cfg.seed << '\n';
    char buf[160];
    std::snprintf(buf, sizeof(buf), "%-12s %-12s %-14s %-12s %-12s %s\n", "1-p", "lambda",
                  "estimate", "std_dev", "time_s", "deficits");
    out << buf;
    for (const auto& lvl : report.levels) {
        std::snprintf(buf, sizeof(buf), "%-12.4g %-12.6g %-14.6g %-12.4g %-12.4g %d\n",
                      1.0 - lvl.level_p, lvl.lambda, lvl.mean_estimate, lvl.std_dev,
                      lvl.avg_time_s, lvl.mass_deficit_count);
        out << buf;
    }
}

void write_table_csv(std::ostream& out, const TableRun& run) {
    out << kTableHeader << '\n';
    for (const auto& c : run.cells) {
        out << c.n << ',' << g17(c.one_minus_p) << ',' << g17(c.true_value) << ','
            << g17(c.approx) << ',' << g17(c.sm_mean) << ',' << g17(c.sm_std) << ','
            << g17(c.dlw_mean) << ',' << g17(c.dlw_std) << ',' << g17(c.mc_mean) << ','
            << g17(c.mc_std) << ',' << g17(c.avg_time_s) << '\n';
    }
}

std::vector<TableCell> read_table_csv(std::istream& in) {
    expect_header(in, kTableHeader);
    std::vector<TableCell> cells;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto f = split_csv_line(line);
        if (f.size() != 11) throw std::runtime_error("CSV parse: table row needs 11 fields");
        TableCell c;
        c.n = static_cast<int>(parse_long(f[0]));
        c.one_minus_p = parse_double(f[1]);
        c.true_value = parse_double(f[2]);
        c.approx = parse_double(f[3]);
        c.sm_mean = parse_double(f[4]);
        c.sm_std = parse_double(f[5]);
        c.dlw_mean = parse_double(f[6]);
        c.dlw_std = parse_double(f[7]);
        c.mc_mean = parse_double(f[8]);
        c.mc_std = parse_double(f[9]);
        c.avg_time_s = parse_double(f[10]);
        cells.push_back(c);
    }
    return cells;
}

void write_table_text(std::ostream& out, const TableRun& run) {
    out << "table " << run.table_id << ": " << (run.mode == Mode::VaR ? "quantile" : "shortfall")
        << " estimates, alpha = " << run.alpha << ", N = " << run.num_samples
        << ", reps = " << run.replications << ", seed = " << run.seed << '\n';
    char buf[200];
    std::snprintf(buf, sizeof(buf), "%-4s %-8s %-10s %-10s %-16s %-16s %-16s %s\n", "n", "1-p",
                  "true", "approx", "SM (std)", "DLW (std)", "MC (std)", "time_s");
    out << buf;
    for (const auto& c : run.cells) {
        char sm[40], dlw[40], mc[40];
        std::snprintf(sm, sizeof(sm), "%.5g (%.3g)", c.sm_mean, c.sm_std);
        std::snprintf(dlw, sizeof(dlw), "%.5g (%.3g)", c.dlw_mean, c.dlw_std);
        std::snprintf(mc, sizeof(mc), "%.5g (%.3g)", c.mc_mean, c.mc_std);
        std::snprintf(buf, sizeof(buf), "%-4d %-8.0e %-10.5g %-10.5g %-16s %-16s %-16s %.3g\n",
                      c.n, c.one_minus_p, c.true_value, c.approx, sm, dlw, mc, c.avg_time_s);
        out << buf;
    }
}

}  // namespace istail::io
