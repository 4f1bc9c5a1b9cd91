#pragma once

// CSV output with a `# meta:` first line recording the command, the full
// settings and the version, so every file can be regenerated.

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <ostream>
#include <string>
#include <variant>
#include <vector>

#include "scnperf/config.hpp"
#include "scnperf/errors.hpp"

namespace scnperf {

using CsvCell = std::variant<double, std::int64_t, std::string>;

class CsvWriter {
public:
    CsvWriter(std::ostream& os, const std::string& command, const RunSettings& settings, const std::string& extra = {})
        : os_(&os) {
        *os_ << "# meta: version=" << kVersion << ";command=" << command << ';' << settings.describe();
        if (!extra.empty()) *os_ << ';' << extra;
        *os_ << '\n';
    }

    void header(const std::vector<std::string>& columns) {
        columns_ = columns.size();
        write_line(columns);
    }

    void row(const std::vector<CsvCell>& cells) {
        detail::require_domain(cells.size() == columns_, "CSV: row width does not match the header");
        std::vector<std::string> text;
        text.reserve(cells.size());
        for (const auto& c : cells) {
            if (const auto* d = std::get_if<double>(&c)) text.push_back(format_number(*d));
            else if (const auto* i = std::get_if<std::int64_t>(&c)) text.push_back(std::to_string(*i));
            else text.push_back(std::get<std::string>(c));
        }
        write_line(text);
    }

private:
    void write_line(const std::vector<std::string>& fields) {
        for (std::size_t i = 0; i < fields.size(); ++i) *os_ << (i ? "," : "") << fields[i];
        *os_ << '\n';
        if (!*os_) throw IoError("CSV: write failed");
    }

    std::ostream* os_;
    std::size_t columns_ = 0;
};

}  // namespace scnperf
