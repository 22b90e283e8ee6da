#include "txlab/table.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include <json.hpp>

namespace txlab {

std::string format_value(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void Table::append_row(std::vector<double> row) {
    if (row.size() != columns.size())
        throw DeclarationError("table: row width does not match the header");
    rows.push_back(std::move(row));
}

std::string Table::to_csv() const {
    std::ostringstream os;
    for (std::size_t c = 0; c < columns.size(); ++c) {
        if (c) os << ',';
        os << columns[c];
    }
    os << '\n';
    for (const auto& row : rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c) os << ',';
            os << format_value(row[c]);
        }
        os << '\n';
    }
    return os.str();
}

std::string Table::to_json() const {
    nlohmann::json out = nlohmann::json::array();
    for (const auto& row : rows) {
        nlohmann::json rec = nlohmann::json::object();
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (std::isnan(row[c]))
                rec[columns[c]] = nullptr;
            else
                rec[columns[c]] = row[c];
        }
        out.push_back(std::move(rec));
    }
    return out.dump(2) + "\n";
}

} // namespace txlab
