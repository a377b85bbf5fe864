#include "stockwise/csv.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <set>
#include <sstream>

#include "stockwise/errors.hpp"

namespace stockwise {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    for (;;) {
        std::size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(trim(line.substr(start)));
            return fields;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
}

std::int64_t parse_count(const std::string& cell, std::size_t row) {
    if (cell.empty()) {
        throw CsvError(row, "empty cell, expected a nonnegative integer");
    }
    std::int64_t value = 0;
    auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), value);
    if (ec == std::errc::result_out_of_range) {
        throw CsvError(row, "value '" + cell + "' is too large");
    }
    if (ec != std::errc() || ptr != cell.data() + cell.size() || value < 0) {
        throw CsvError(row, "cell '" + cell + "' is not a nonnegative integer");
    }
    return value;
}

}  // namespace

const std::vector<std::int64_t>* DemandHistory::find_column(const std::string& name) const {
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (columns[c] == name) return &observations[c];
    }
    return nullptr;
}

DemandHistory read_demand_history(std::istream& in) {
    DemandHistory history;
    std::string line;
    std::size_t row = 0;
    bool saw_header = false;
    while (std::getline(in, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (row == 1 && line.size() >= 3 && static_cast<unsigned char>(line[0]) == 0xEF &&
            static_cast<unsigned char>(line[1]) == 0xBB &&
            static_cast<unsigned char>(line[2]) == 0xBF) {
            line.erase(0, 3);
        }
        if (line.empty()) continue;

        std::vector<std::string> fields = split_fields(line);
        if (!saw_header) {
            std::set<std::string> seen;
            for (const std::string& name : fields) {
                if (name.empty()) {
                    throw CsvError(row, "header has an empty product name");
                }
                if (!seen.insert(name).second) {
                    throw CsvError(row, "duplicate product name '" + name + "' in header");
                }
            }
            history.columns = fields;
            history.observations.resize(fields.size());
            saw_header = true;
            continue;
        }
        if (fields.size() != history.columns.size()) {
            throw CsvError(row, "expected " + std::to_string(history.columns.size()) +
                                    " fields, got " + std::to_string(fields.size()));
        }
        for (std::size_t c = 0; c < fields.size(); ++c) {
            history.observations[c].push_back(parse_count(fields[c], row));
        }
    }
    if (!saw_header) {
        throw CsvError(1, "missing header row");
    }
    return history;
}

DemandHistory read_demand_history_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw CsvError(1, "cannot open '" + path + "'");
    }
    return read_demand_history(in);
}

}  // namespace stockwise
