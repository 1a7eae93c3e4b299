#include "lendgraph/csv.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace lendgraph::csv {

int Table::column(const std::string& name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return static_cast<int>(i);
    return -1;
}

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(',', start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            break;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
    return out;
}

static Table parse(std::istream& in, const std::string& origin) {
    Table t;
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("csv: empty input: " + origin);
    if (!line.empty() && line.back() == '\r') line.pop_back();
    t.header = split_line(line);
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        t.rows.push_back(split_line(line));
    }
    return t;
}

Table read_file(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("csv: cannot open " + path);
    return parse(f, path);
}

Table read_string(const std::string& data) {
    std::istringstream s(data);
    return parse(s, "<string>");
}

void write_file(const std::string& path, const Table& table) {
    std::ofstream f(path);
    if (!f) throw std::runtime_error("csv: cannot write " + path);
    for (std::size_t i = 0; i < table.header.size(); ++i)
        f << (i ? "," : "") << table.header[i];
    f << '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            f << (i ? "," : "") << row[i];
        f << '\n';
    }
}

}  // namespace lendgraph::csv
