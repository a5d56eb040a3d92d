#pragma once

#include <iosfwd>
#include <vector>

#include "istail/harness.hpp"

namespace istail::io {

/// One parsed row of an experiment-report CSV.  Wall-clock timing is
/// deliberately absent: the estimate CSV must be byte-identical across runs
/// of the same config+seed.  Timing appears in the text rendering and in
/// the table CSV only.
struct ReportRow {
    double level_p = 0.0;
    double lambda = 0.0;
    double mean_estimate = 0.0;
    double std_dev = 0.0;
    int mass_deficit_count = 0;
    int replications = 0;
};

/// CSV emission uses %.17g, so a parse of the output recovers every double
/// bit for bit.
void write_report_csv(std::ostream& out, const ExperimentReport& report);
std::vector<ReportRow> read_report_csv(std::istream& in);

void write_report_table(std::ostream& out, const ExperimentReport& report);

void write_table_csv(std::ostream& out, const TableRun& run);
std::vector<TableCell> read_table_csv(std::istream& in);

void write_table_text(std::ostream& out, const TableRun& run);

}  // namespace istail::io
