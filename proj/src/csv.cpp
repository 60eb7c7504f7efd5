#include "stormgrid/csv.hpp"

#include <fstream>
#include <sstream>

#include "stormgrid/errors.hpp"
#include "stormgrid/util.hpp"

namespace stormgrid::csv {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> fields;
    size_t start = 0;
    while (true) {
        size_t comma = line.find(',', start);
        if (comma == std::string::npos) {
            fields.push_back(util::trim(line.substr(start)));
            break;
        }
        fields.push_back(util::trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

Table read_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open " + path.string());
    }
    Table table;
    std::string line;
    size_t line_number = 0;
    while (std::getline(in, line)) {
        ++line_number;
        if (!line.empty() && line.back() == '\r') {
            line.pop_back();
        }
        if (util::trim(line).empty()) {
            continue;
        }
        auto fields = split_line(line);
        if (table.header.empty()) {
            table.header = std::move(fields);
            continue;
        }
        if (fields.size() != table.header.size()) {
            std::ostringstream msg;
            msg << path.string() << ":" << line_number << ": expected " << table.header.size()
                << " fields, got " << fields.size();
            throw ParseError(msg.str());
        }
        table.rows.push_back(Row{line_number, std::move(fields)});
    }
    if (table.header.empty()) {
        throw ParseError(path.string() + ": missing header row");
    }
    return table;
}

Table read_file(const std::filesystem::path& path, const std::vector<std::string>& expected) {
    Table table = read_file(path);
    if (table.header != expected) {
        std::string want = join(expected);
        std::string got = join(table.header);
        throw ParseError(path.string() + ": header mismatch; expected '" + want + "', got '" +
                         got + "'");
    }
    return table;
}

std::string join(const std::vector<std::string>& fields) {
    std::string out;
    for (size_t i = 0; i < fields.size(); ++i) {
        if (i != 0) {
            out += ',';
        }
        out += fields[i];
    }
    return out;
}

} // namespace stormgrid::csv
