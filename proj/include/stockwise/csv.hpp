#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace stockwise {

/// Column-oriented demand history: one named column per product, one
/// nonnegative integer observation per row.
struct DemandHistory {
    std::vector<std::string> columns;
    std::vector<std::vector<std::int64_t>> observations;  // parallel to columns

    /// nullptr when no column has that name.
    const std::vector<std::int64_t>* find_column(const std::string& name) const;
};

/// Parse the demand-history CSV format: UTF-8, a header row of product
/// names, then rows of comma-separated nonnegative integers. CRLF line
/// endings and a leading byte-order mark are tolerated; blank lines are
/// skipped. Malformed input throws CsvError carrying the 1-based
/// physical row number.
DemandHistory read_demand_history(std::istream& in);
DemandHistory read_demand_history_file(const std::string& path);

}  // namespace stockwise
