#pragma once

#include <array>
#include <charconv>
#include <ostream>
#include <string>
#include <system_error>

#include "mpjcm/timeseries.hpp"

namespace mpjcm {

/// Shortest decimal text that reads back to exactly `value`.
inline std::string format_number(double value) {
    std::array<char, 64> buf{};
    const auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), value);
    if (ec != std::errc{}) return "nan";
    return {buf.data(), end};
}

/// Metadata as "# key = value" lines, then "T,<name>,..." and one row per
/// grid point.
inline void write_csv(std::ostream& out, const TimeSeries& series) {
    for (const auto& [key, value] : series.metadata) out << "# " << key << " = " << value << '\n';
    out << 'T';
    for (const auto& [name, values] : series.columns) out << ',' << name;
    out << '\n';
    for (std::size_t i = 0; i < series.t_grid.size(); ++i) {
        out << format_number(series.t_grid[i]);
        for (const auto& [name, values] : series.columns) out << ',' << format_number(values[i]);
        out << '\n';
    }
}

}  // namespace mpjcm
