#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "epsweep/config.hpp"
#include "epsweep/sweep.hpp"

namespace epsweep {

/// Column names for an N-level result, in file order:
/// a, E[i], G2[i], r[i], A[i], b2[i][j] (1-based), filtered by `sel`.
std::vector<std::string> csv_header(std::size_t n, const OutputSelection& sel = {});

/// One row per grid point. Missing values (failed normalization) are empty
/// fields. Numbers use the shortest round-trip form; lines end in LF.
/// Returns the number of data rows written.
std::size_t emit_csv(const SweepResult& result, std::ostream& out, const OutputSelection& sel = {});

/// kind,a_start,a_end,branch_i,branch_j with 1-based branches.
void emit_events_csv(const SweepResult& result, std::ostream& out);

struct CsvFiles {
    std::filesystem::path data;
    std::filesystem::path events;
};

/// Writes <dir>/<stem>.csv and <dir>/<stem>.events.csv, creating `dir`.
CsvFiles write_csv(const SweepResult& result, const std::filesystem::path& dir, const std::string& stem,
                   const OutputSelection& sel = {});

struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<std::optional<double>>> rows;

    /// Throws ValidationError if absent.
    std::size_t column(const std::string& name) const;
};

/// Reads a numeric table written by emit_csv. Throws ValidationError on
/// ragged rows or unparsable fields.
CsvTable read_csv(std::istream& in);

struct EventRow {
    std::string kind;
    double a_start;
    double a_end;
    std::size_t branch_i; // 1-based
    std::size_t branch_j;
};

std::vector<EventRow> read_events_csv(std::istream& in);

} // namespace epsweep
