#pragma once

#include "epigrowth/error.hpp"

#include <chrono>
#include <compare>
#include <cstdio>
#include <string>
#include <string_view>

namespace epigrowth
{

/// A calendar day (proleptic Gregorian), the simulation's time step.
class Date
{
public:
    constexpr Date() = default;

    constexpr Date(int y, unsigned m, unsigned d)
        : m_days(std::chrono::sys_days{std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d}})
    {
    }

    constexpr explicit Date(std::chrono::sys_days days)
        : m_days(days)
    {
    }

    /// Parses YYYY-MM-DD. Throws InvalidArgument on anything else.
    static Date parse(std::string_view text)
    {
        int y = 0;
        unsigned m = 0, d = 0;
        char tail = 0;
        std::string s(text);
        if (s.size() != 10 || s[4] != '-' || s[7] != '-' ||
            std::sscanf(s.c_str(), "%4d-%2u-%2u%c", &y, &m, &d, &tail) != 3) {
            throw InvalidArgument("not an ISO-8601 date (YYYY-MM-DD): '" + s + "'");
        }
        auto ymd = std::chrono::year{y} / std::chrono::month{m} / std::chrono::day{d};
        if (!ymd.ok()) {
            throw InvalidArgument("invalid calendar date: '" + s + "'");
        }
        return Date(std::chrono::sys_days{ymd});
    }

    std::string to_string() const
    {
        std::chrono::year_month_day ymd{m_days};
        char buf[16];
        std::snprintf(buf, sizeof(buf), "%04d-%02u-%02u", int(ymd.year()), unsigned(ymd.month()),
                      unsigned(ymd.day()));
        return buf;
    }

    int year() const
    {
        return int(std::chrono::year_month_day{m_days}.year());
    }

    constexpr std::chrono::sys_days sys_days() const
    {
        return m_days;
    }

    constexpr Date operator+(long days) const
    {
        return Date(m_days + std::chrono::days{days});
    }
    constexpr Date operator-(long days) const
    {
        return Date(m_days - std::chrono::days{days});
    }
    constexpr Date& operator+=(long days)
    {
        m_days += std::chrono::days{days};
        return *this;
    }

    /// Signed number of days from `other` to `*this`.
    constexpr long operator-(const Date& other) const
    {
        return long((m_days - other.m_days).count());
    }

    constexpr auto operator<=>(const Date&) const = default;

private:
    std::chrono::sys_days m_days{};
};

} // namespace epigrowth
