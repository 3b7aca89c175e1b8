#pragma once

#include <chrono>
#include <compare>
#include <string>

namespace lagcast {

/// Calendar day backed by a count of days since the civil epoch.
/// Arithmetic is plain day arithmetic; there are no gaps or time zones.
class Date {
public:
    Date() = default;
    Date(int year, unsigned month, unsigned day);
    explicit Date(std::chrono::sys_days days) : days_(days) {}

    static Date parse_iso(const std::string& text);  // YYYY-MM-DD
    static Date parse_mdy(const std::string& text);  // M/D/YY, two-digit years read as 20YY

    std::string to_iso() const;
    std::string to_mdy() const;  // M/D/YY without zero padding, as in the JHU headers

    int year() const;
    unsigned month() const;
    unsigned day() const;

    std::chrono::sys_days sys() const { return days_; }

    Date operator+(int n) const { return Date(days_ + std::chrono::days{n}); }
    Date operator-(int n) const { return Date(days_ - std::chrono::days{n}); }
    /// Number of days from other to *this.
    int operator-(Date other) const { return static_cast<int>((days_ - other.days_).count()); }

    auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days days_{};
};

} // namespace lagcast
