#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace hiact::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;
    std::vector<std::size_t> line_numbers;  // source line of each row

    int column(const std::string& name) const;
};

/// Plain comma-separated text without quoting; blank lines are skipped.
Table read(const std::filesystem::path& path);
Table parse(const std::string& text);

long to_long(const std::string& field, std::size_t line);
double to_double(const std::string& field, std::size_t line);

}  // namespace hiact::csv
