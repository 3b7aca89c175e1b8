#pragma once

#include "lagcast/date.hpp"

#include <istream>
#include <optional>
#include <string>
#include <vector>

namespace lagcast {

/// One data row of a JHU CSSE global time-series file.
struct RegionRecord {
    std::optional<std::string> province_state;
    std::string country_region;
    std::optional<double> latitude;
    std::optional<double> longitude;
    std::vector<double> cumulative;  // aligned to the shared date header
};

struct JhuTable {
    std::vector<Date> dates;
    std::vector<RegionRecord> records;
};

/// Split one CSV line into fields, honoring double-quote quoting ("" escapes a
/// quote, commas inside quotes are literal). Trailing CR is stripped.
std::vector<std::string> split_csv_line(const std::string& line);

/// Parse a `Province/State,Country/Region,Lat,Long,<M/D/YY...>` table.
/// Blank count cells are an error: the format has no blanks, so one signals
/// corruption rather than a zero.
JhuTable parse_jhu_csv(std::istream& in);

} // namespace lagcast
