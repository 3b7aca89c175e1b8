#include "lagcast/csv.hpp"

#include "lagcast/error.hpp"

#include <charconv>

namespace lagcast {

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> fields;
    std::string current;
    bool quoted = false;
    std::size_t end = line.size();
    if (end > 0 && line[end - 1] == '\r') --end;

    for (std::size_t i = 0; i < end; ++i) {
        char c = line[i];
        if (quoted) {
            if (c == '"') {
                if (i + 1 < end && line[i + 1] == '"') {
                    current.push_back('"');
                    ++i;
                } else {
                    quoted = false;
                }
            } else {
                current.push_back(c);
            }
        } else if (c == '"') {
            quoted = true;
        } else if (c == ',') {
            fields.push_back(std::move(current));
            current.clear();
        } else {
            current.push_back(c);
        }
    }
    fields.push_back(std::move(current));
    return fields;
}

namespace {

std::optional<double> parse_optional_double(const std::string& field) {
    if (field.empty()) return std::nullopt;
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size()) return std::nullopt;
    return value;
}

double parse_count(const std::string& field, std::size_t row, std::size_t col) {
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (field.empty() || ec != std::errc{} || ptr != field.data() + field.size()) {
        throw Error(ErrorCode::UnparseableCount, "row " + std::to_string(row) + ", column " +
                                                     std::to_string(col) + ": '" + field + "'");
    }
    return value;
}

} // namespace

JhuTable parse_jhu_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line)) {
        throw Error(ErrorCode::MalformedHeader, "empty input");
    }
    std::vector<std::string> header = split_csv_line(line);
    if (header.size() < 5 || header[0] != "Province/State" || header[1] != "Country/Region" ||
        header[2] != "Lat" || header[3] != "Long") {
        throw Error(ErrorCode::MalformedHeader,
                    "expected 'Province/State,Country/Region,Lat,Long,<dates...>'");
    }

    JhuTable table;
    table.dates.reserve(header.size() - 4);
    for (std::size_t i = 4; i < header.size(); ++i) {
        table.dates.push_back(Date::parse_mdy(header[i]));
    }

    std::size_t row_number = 1;
    while (std::getline(in, line)) {
        ++row_number;
        if (line.empty() || line == "\r") continue;
        std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != header.size()) {
            throw Error(ErrorCode::RaggedRow,
                        "row " + std::to_string(row_number) + " has " +
                            std::to_string(fields.size()) + " fields, header has " +
                            std::to_string(header.size()));
        }
        RegionRecord record;
        if (!fields[0].empty()) record.province_state = fields[0];
        record.country_region = fields[1];
        record.latitude = parse_optional_double(fields[2]);
        record.longitude = parse_optional_double(fields[3]);
        record.cumulative.reserve(table.dates.size());
        for (std::size_t i = 4; i < fields.size(); ++i) {
            record.cumulative.push_back(parse_count(fields[i], row_number, i + 1));
        }
        table.records.push_back(std::move(record));
    }
    return table;
}

} // namespace lagcast
