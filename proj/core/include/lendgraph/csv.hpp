#pragma once

#include <string>
#include <vector>

namespace lendgraph::csv {

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<std::string>> rows;

    int column(const std::string& name) const;  // -1 if absent
};

// Reads a comma-separated file with a mandatory header row. Fields are
// taken verbatim (no quoting; the pipeline's formats never need it).
Table read_file(const std::string& path);
Table read_string(const std::string& data);

void write_file(const std::string& path, const Table& table);

std::vector<std::string> split_line(const std::string& line);

}  // namespace lendgraph::csv
