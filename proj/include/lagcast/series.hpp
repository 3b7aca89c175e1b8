#pragma once

#include "lagcast/date.hpp"

#include <string>
#include <utility>
#include <vector>

namespace lagcast {

enum class RoleKind { Deaths, Recovered, Confirmed, Other };

/// Which epidemic series a value stream represents. Other roles carry a name.
class Role {
public:
    Role() : kind_(RoleKind::Other), name_("other") {}

    static Role deaths() { return Role(RoleKind::Deaths, "deaths"); }
    static Role recovered() { return Role(RoleKind::Recovered, "recovered"); }
    static Role confirmed() { return Role(RoleKind::Confirmed, "confirmed"); }
    static Role other(std::string name) { return Role(RoleKind::Other, std::move(name)); }

    /// Parse "deaths" / "recovered" / "confirmed"; anything else becomes Other(name).
    static Role from_name(const std::string& name);

    RoleKind kind() const { return kind_; }
    const std::string& name() const { return name_; }

    /// Prefix used in regression term labels: deaths "Yt", confirmed "Ct", recovered "Rt".
    std::string label_prefix() const;

    bool operator==(const Role& o) const { return kind_ == o.kind_ && name_ == o.name_; }
    bool operator<(const Role& o) const {
        return kind_ != o.kind_ ? kind_ < o.kind_ : name_ < o.name_;
    }

private:
    Role(RoleKind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

    RoleKind kind_;
    std::string name_;
};

/// Daily-frequency series: dates are implied by start_date + index, no gaps.
/// Values are reals so the same type carries counts, predictions and residuals.
/// Immutable by convention once constructed.
struct TimeSeries {
    Role role;
    Date start_date;
    std::vector<double> values;

    std::size_t size() const { return values.size(); }
    Date date_at(std::size_t i) const { return start_date + static_cast<int>(i); }
    Date end_date() const { return start_date + static_cast<int>(values.size()) - 1; }
};

struct SplitSpec {
    enum class Mode { Ratio, DateBoundary };
    Mode mode = Mode::Ratio;
    double train_fraction = 0.8;
    Date boundary;  // last training date, DateBoundary mode only

    static SplitSpec ratio(double fraction) {
        SplitSpec s;
        s.mode = Mode::Ratio;
        s.train_fraction = fraction;
        return s;
    }
    static SplitSpec date_boundary(Date last_train_date) {
        SplitSpec s;
        s.mode = Mode::DateBoundary;
        s.boundary = last_train_date;
        return s;
    }
};

/// First differences with the first value passed through. Negative daily
/// increments (upstream corrections) are preserved.
TimeSeries cumulative_to_daily(const TimeSeries& cum);

/// Running sum; exact inverse of cumulative_to_daily.
TimeSeries daily_to_cumulative(const TimeSeries& daily);

/// Clamp negative values to zero. Opt-in; see cumulative_to_daily.
TimeSeries clamp_negative(const TimeSeries& s);

/// Truncate all series to the intersection of their date ranges.
std::vector<TimeSeries> align(const std::vector<TimeSeries>& series);

/// Chronological, contiguous split. Ratio mode trains on floor(n * fraction) points.
std::pair<TimeSeries, TimeSeries> split(const TimeSeries& s, const SplitSpec& spec);

} // namespace lagcast
