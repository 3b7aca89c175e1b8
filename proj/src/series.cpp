#include "lagcast/series.hpp"

#include "lagcast/error.hpp"

#include <algorithm>
#include <cmath>

namespace lagcast {

Role Role::from_name(const std::string& name) {
    if (name == "deaths") return deaths();
    if (name == "recovered") return recovered();
    if (name == "confirmed") return confirmed();
    return other(name);
}

std::string Role::label_prefix() const {
    switch (kind_) {
        case RoleKind::Deaths: return "Yt";
        case RoleKind::Confirmed: return "Ct";
        case RoleKind::Recovered: return "Rt";
        case RoleKind::Other: break;
    }
    std::string prefix;
    for (char c : name_) {
        if (std::isalnum(static_cast<unsigned char>(c))) prefix.push_back(c);
    }
    return prefix.empty() ? "Xt" : prefix + "t";
}

namespace {

void require_non_empty(const TimeSeries& s) {
    if (s.values.empty()) {
        throw Error(ErrorCode::EmptyInput, "series '" + s.role.name() + "' is empty");
    }
}

} // namespace

TimeSeries cumulative_to_daily(const TimeSeries& cum) {
    require_non_empty(cum);
    TimeSeries out{cum.role, cum.start_date, {}};
    out.values.reserve(cum.values.size());
    out.values.push_back(cum.values.front());
    for (std::size_t t = 1; t < cum.values.size(); ++t) {
        out.values.push_back(cum.values[t] - cum.values[t - 1]);
    }
    return out;
}

TimeSeries daily_to_cumulative(const TimeSeries& daily) {
    require_non_empty(daily);
    TimeSeries out{daily.role, daily.start_date, {}};
    out.values.reserve(daily.values.size());
    double running = 0.0;
    for (double v : daily.values) {
        running += v;
        out.values.push_back(running);
    }
    return out;
}

TimeSeries clamp_negative(const TimeSeries& s) {
    TimeSeries out = s;
    for (double& v : out.values) v = std::max(v, 0.0);
    return out;
}

std::vector<TimeSeries> align(const std::vector<TimeSeries>& series) {
    if (series.empty()) {
        throw Error(ErrorCode::EmptyInput, "nothing to align");
    }
    for (const auto& s : series) require_non_empty(s);

    Date lo = series.front().start_date;
    Date hi = series.front().end_date();
    for (const auto& s : series) {
        lo = std::max(lo, s.start_date);
        hi = std::min(hi, s.end_date());
    }
    if (hi < lo) {
        throw Error(ErrorCode::EmptyIntersection, "date ranges do not overlap");
    }

    std::vector<TimeSeries> out;
    out.reserve(series.size());
    for (const auto& s : series) {
        std::size_t offset = static_cast<std::size_t>(lo - s.start_date);
        std::size_t count = static_cast<std::size_t>(hi - lo) + 1;
        TimeSeries clipped{s.role, lo, {}};
        clipped.values.assign(s.values.begin() + offset, s.values.begin() + offset + count);
        out.push_back(std::move(clipped));
    }
    return out;
}

std::pair<TimeSeries, TimeSeries> split(const TimeSeries& s, const SplitSpec& spec) {
    require_non_empty(s);
    std::size_t n = s.values.size();
    std::size_t n_train = 0;
    if (spec.mode == SplitSpec::Mode::Ratio) {
        if (!(spec.train_fraction > 0.0 && spec.train_fraction < 1.0)) {
            throw Error(ErrorCode::InvalidConfig, "train_fraction must lie in (0, 1)");
        }
        n_train = static_cast<std::size_t>(std::floor(double(n) * spec.train_fraction));
    } else {
        if (spec.boundary < s.start_date || s.end_date() < spec.boundary) {
            throw Error(ErrorCode::DegenerateSplit,
                        "boundary " + spec.boundary.to_iso() + " outside series range");
        }
        n_train = static_cast<std::size_t>(spec.boundary - s.start_date) + 1;
    }
    if (n_train == 0 || n_train >= n) {
        throw Error(ErrorCode::DegenerateSplit, "both parts must be non-empty");
    }

    TimeSeries train{s.role, s.start_date, {s.values.begin(), s.values.begin() + n_train}};
    TimeSeries test{s.role, s.start_date + static_cast<int>(n_train),
                    {s.values.begin() + n_train, s.values.end()}};
    return {std::move(train), std::move(test)};
}

} // namespace lagcast
