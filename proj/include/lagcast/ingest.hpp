#pragma once

#include "lagcast/csv.hpp"
#include "lagcast/series.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace lagcast {

struct SnapshotSource {
    enum class Kind { LocalFile, RemoteUrl };
    Kind kind = Kind::LocalFile;
    std::string location;

    static SnapshotSource local(std::string path) {
        return {Kind::LocalFile, std::move(path)};
    }
    static SnapshotSource remote(std::string url) {
        return {Kind::RemoteUrl, std::move(url)};
    }
};

/// Where each role's cumulative file comes from, plus an optional date clip.
/// Remote fetches write a cached copy under cache_dir before parsing, so a run
/// can be replayed offline.
struct SnapshotManifest {
    std::map<Role, SnapshotSource> sources;
    std::optional<std::pair<Date, Date>> date_window;
    std::string cache_dir = ".lagcast-cache";
    bool offline = false;
};

/// Element-wise sum across all records; start date is the first header date.
TimeSeries aggregate_global(const JhuTable& table, const Role& role);

/// Load, aggregate and clip every role named in the manifest. Returned series
/// are cumulative counts.
std::map<Role, TimeSeries> fetch(const SnapshotManifest& manifest);

/// Restrict a series to [first, last] inclusive, intersected with its range.
TimeSeries clip(const TimeSeries& s, Date first, Date last);

} // namespace lagcast
