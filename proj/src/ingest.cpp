#include "lagcast/ingest.hpp"

#include "lagcast/error.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

#include <httplib.h>

#include <ctime>

namespace lagcast {

TimeSeries aggregate_global(const JhuTable& table, const Role& role) {
    if (table.records.empty() || table.dates.empty()) {
        throw Error(ErrorCode::EmptyInput, "no records to aggregate");
    }
    for (std::size_t i = 1; i < table.dates.size(); ++i) {
        if (table.dates[i] - table.dates[i - 1] != 1) {
            throw Error(ErrorCode::MalformedHeader,
                        "date header is not consecutive at " + table.dates[i].to_iso());
        }
    }
    TimeSeries out{role, table.dates.front(), std::vector<double>(table.dates.size(), 0.0)};
    for (const auto& record : table.records) {
        if (record.cumulative.size() != table.dates.size()) {
            throw Error(ErrorCode::RaggedRow, "record not aligned to header");
        }
        for (std::size_t i = 0; i < record.cumulative.size(); ++i) {
            out.values[i] += record.cumulative[i];
        }
    }
    return out;
}

TimeSeries clip(const TimeSeries& s, Date first, Date last) {
    Date lo = std::max(first, s.start_date);
    Date hi = std::min(last, s.end_date());
    if (hi < lo) {
        throw Error(ErrorCode::EmptyIntersection,
                    "window [" + first.to_iso() + ", " + last.to_iso() + "] misses the series");
    }
    std::size_t offset = static_cast<std::size_t>(lo - s.start_date);
    std::size_t count = static_cast<std::size_t>(hi - lo) + 1;
    TimeSeries out{s.role, lo, {s.values.begin() + offset, s.values.begin() + offset + count}};
    return out;
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw Error(ErrorCode::NetworkError, "cannot open '" + path + "'");
    }
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

std::string http_get(const std::string& url) {
    auto scheme_end = url.find("://");
    if (scheme_end == std::string::npos) {
        throw Error(ErrorCode::NetworkError, "unsupported url '" + url + "'");
    }
    auto path_start = url.find('/', scheme_end + 3);
    std::string origin = path_start == std::string::npos ? url : url.substr(0, path_start);
    std::string path = path_start == std::string::npos ? "/" : url.substr(path_start);

#ifndef LAGCAST_HAVE_OPENSSL
    if (origin.rfind("https://", 0) == 0) {
        throw Error(ErrorCode::NetworkError, "built without TLS support; cannot fetch " + url);
    }
#endif
    httplib::Client client(origin);
    client.set_connection_timeout(30);
    client.set_read_timeout(60);
    client.set_follow_location(true);
    auto res = client.Get(path);
    if (!res) {
        throw Error(ErrorCode::NetworkError, "request to " + url + " failed");
    }
    if (res->status != 200) {
        throw Error(ErrorCode::HttpStatusError,
                    url + " returned status " + std::to_string(res->status));
    }
    return res->body;
}

std::string today_stamp() {
    std::time_t now = std::time(nullptr);
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[16];
    std::strftime(buf, sizeof(buf), "%Y%m%d", &tm);
    return buf;
}

} // namespace

std::map<Role, TimeSeries> fetch(const SnapshotManifest& manifest) {
    if (manifest.sources.empty()) {
        throw Error(ErrorCode::InvalidConfig, "manifest names no sources");
    }
    std::map<Role, TimeSeries> out;
    for (const auto& [role, source] : manifest.sources) {
        std::string text;
        if (source.kind == SnapshotSource::Kind::LocalFile) {
            text = read_file(source.location);
        } else {
            if (manifest.offline) {
                throw Error(ErrorCode::InvalidConfig,
                            "offline mode forbids fetching " + source.location);
            }
            text = http_get(source.location);
            std::filesystem::create_directories(manifest.cache_dir);
            std::string cached = manifest.cache_dir + "/" + role.name() + "_" + today_stamp() + ".csv";
            std::ofstream(cached, std::ios::binary) << text;
        }
        std::istringstream stream(text);
        JhuTable table = parse_jhu_csv(stream);
        TimeSeries series = aggregate_global(table, role);
        if (manifest.date_window) {
            series = clip(series, manifest.date_window->first, manifest.date_window->second);
        }
        out.emplace(role, std::move(series));
    }
    return out;
}

} // namespace lagcast
