#pragma once

#include <ostream>
#include <string>
#include <vector>

#include "txlab/errors.hpp"

namespace txlab {

// Numeric result table with fully qualified, unit-suffixed column names.
// CSV serialization uses 17 significant digits so values reload exactly.
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    void append_row(std::vector<double> row);
    std::string to_csv() const;
    std::string to_json() const;
};

// One double with 17 significant digits; NaN renders as "nan".
std::string format_value(double v);

} // namespace txlab
