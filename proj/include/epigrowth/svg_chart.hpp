#pragma once

#include "epigrowth/date.hpp"
#include "epigrowth/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

namespace epigrowth::svg
{

inline constexpr const char* renderer_version = "epigrowth-svg 1.0";

struct Series {
    std::string name;
    std::vector<Date> dates;
    std::vector<double> values;
};

struct LineChart {
    std::string title;
    std::string y_label;
    std::vector<Series> series;
    int width = 800;
    int height = 480;
};

namespace detail
{

inline std::string num(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

inline std::string escape(const std::string& s)
{
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&':
            out += "&amp;";
            break;
        case '<':
            out += "&lt;";
            break;
        case '>':
            out += "&gt;";
            break;
        case '"':
            out += "&quot;";
            break;
        default:
            out += c;
        }
    }
    return out;
}

inline std::string tick_label(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4g", v);
    return buf;
}

/// Step of the form {1, 2, 5} x 10^k giving about `target` intervals.
inline double nice_step(double span, int target)
{
    if (!(span > 0)) {
        return 1;
    }
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double f : {1.0, 2.0, 5.0}) {
        if (f * mag >= raw) {
            return f * mag;
        }
    }
    return 10 * mag;
}

inline const char* palette(std::size_t i)
{
    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd",
                                   "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};
    return colors[i % 10];
}

} // namespace detail

/**
 * @brief Renders a dated line chart. Output depends only on the chart
 * contents, so identical inputs give byte-identical files.
 */
inline std::string render(const LineChart& chart)
{
    if (chart.series.empty()) {
        throw InvalidArgument("chart '" + chart.title + "' has no series");
    }
    Date x_lo, x_hi;
    double y_lo = std::numeric_limits<double>::infinity();
    double y_hi = -y_lo;
    bool any = false;
    for (const Series& s : chart.series) {
        if (s.dates.size() != s.values.size()) {
            throw InvalidArgument("series '" + s.name + "' has mismatched dates and values");
        }
        for (std::size_t i = 0; i < s.dates.size(); ++i) {
            if (!any || s.dates[i] < x_lo) {
                x_lo = s.dates[i];
            }
            if (!any || s.dates[i] > x_hi) {
                x_hi = s.dates[i];
            }
            any = true;
            if (std::isfinite(s.values[i])) {
                y_lo = std::min(y_lo, s.values[i]);
                y_hi = std::max(y_hi, s.values[i]);
            }
        }
    }
    if (!any || !std::isfinite(y_lo)) {
        throw InvalidArgument("chart '" + chart.title + "' has no finite data");
    }
    if (y_lo == y_hi) {
        const double pad = y_lo == 0 ? 1 : std::abs(y_lo) * 0.05;
        y_lo -= pad;
        y_hi += pad;
    }
    const double y_step = detail::nice_step(y_hi - y_lo, 5);
    y_lo = std::floor(y_lo / y_step) * y_step;
    y_hi = std::ceil(y_hi / y_step) * y_step;

    const double left = 80, right = 160, top = 40, bottom = 50;
    const double pw = chart.width - left - right;
    const double ph = chart.height - top - bottom;
    const double x_span = std::max<double>(double(x_hi - x_lo), 1);
    auto px = [&](const Date& d) {
        return left + pw * double(d - x_lo) / x_span;
    };
    auto py = [&](double v) {
        return top + ph * (1 - (v - y_lo) / (y_hi - y_lo));
    };

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(chart.width) + "\" height=\"" +
           std::to_string(chart.height) + "\" viewBox=\"0 0 " + std::to_string(chart.width) + " " +
           std::to_string(chart.height) + "\" font-family=\"sans-serif\" font-size=\"11\">\n";
    out += "<!-- " + std::string(renderer_version) + " -->\n";
    out += "<metadata>" + std::string(renderer_version) + "</metadata>\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + detail::num(left + pw / 2) + "\" y=\"20\" text-anchor=\"middle\" font-size=\"14\">" +
           detail::escape(chart.title) + "</text>\n";

    out += "<g stroke=\"#dddddd\" stroke-width=\"1\">\n";
    for (double v = y_lo; v <= y_hi + 0.5 * y_step; v += y_step) {
        out += "<line x1=\"" + detail::num(left) + "\" y1=\"" + detail::num(py(v)) + "\" x2=\"" +
               detail::num(left + pw) + "\" y2=\"" + detail::num(py(v)) + "\"/>\n";
    }
    out += "</g>\n<g text-anchor=\"end\">\n";
    for (double v = y_lo; v <= y_hi + 0.5 * y_step; v += y_step) {
        out += "<text x=\"" + detail::num(left - 6) + "\" y=\"" + detail::num(py(v) + 4) + "\">" +
               detail::tick_label(std::abs(v) < 1e-12 * y_step ? 0.0 : v) + "</text>\n";
    }
    out += "</g>\n";

    const int years = x_hi.year() - x_lo.year() + 1;
    const int year_step = years <= 12 ? 1 : years <= 30 ? 5 : 10;
    out += "<g text-anchor=\"middle\">\n";
    if (years <= 2) {
        for (Date d = x_lo; d <= x_hi; d += 1) {
            const auto ymd = std::chrono::year_month_day{d.sys_days()};
            if (unsigned(ymd.day()) == 1) {
                out += "<line x1=\"" + detail::num(px(d)) + "\" y1=\"" + detail::num(top + ph) + "\" x2=\"" +
                       detail::num(px(d)) + "\" y2=\"" + detail::num(top + ph + 5) + "\" stroke=\"black\"/>\n";
                out += "<text x=\"" + detail::num(px(d)) + "\" y=\"" + detail::num(top + ph + 18) + "\">" +
                       d.to_string().substr(0, 7) + "</text>\n";
            }
        }
    }
    else {
        for (int y = x_lo.year(); y <= x_hi.year(); ++y) {
            const Date d(y, 1, 1);
            if (y % year_step != 0 || d < x_lo) {
                continue;
            }
            out += "<line x1=\"" + detail::num(px(d)) + "\" y1=\"" + detail::num(top + ph) + "\" x2=\"" +
                   detail::num(px(d)) + "\" y2=\"" + detail::num(top + ph + 5) + "\" stroke=\"black\"/>\n";
            out += "<text x=\"" + detail::num(px(d)) + "\" y=\"" + detail::num(top + ph + 18) + "\">" +
                   std::to_string(y) + "</text>\n";
        }
    }
    out += "</g>\n";
    out += "<rect x=\"" + detail::num(left) + "\" y=\"" + detail::num(top) + "\" width=\"" + detail::num(pw) +
           "\" height=\"" + detail::num(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";
    out += "<text transform=\"translate(16," + detail::num(top + ph / 2) +
           ") rotate(-90)\" text-anchor=\"middle\">" + detail::escape(chart.y_label) + "</text>\n";

    for (std::size_t k = 0; k < chart.series.size(); ++k) {
        const Series& s = chart.series[k];
        out += "<polyline fill=\"none\" stroke=\"" + std::string(detail::palette(k)) +
               "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.dates.size(); ++i) {
            if (!std::isfinite(s.values[i])) {
                continue;
            }
            out += (i ? " " : "") + detail::num(px(s.dates[i])) + "," + detail::num(py(s.values[i]));
        }
        out += "\"/>\n";
        const double ly = top + 12 + 16 * double(k);
        out += "<line x1=\"" + detail::num(left + pw + 10) + "\" y1=\"" + detail::num(ly) + "\" x2=\"" +
               detail::num(left + pw + 30) + "\" y2=\"" + detail::num(ly) + "\" stroke=\"" + detail::palette(k) +
               "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + detail::num(left + pw + 34) + "\" y=\"" + detail::num(ly + 4) + "\">" +
               detail::escape(s.name) + "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

} // namespace epigrowth::svg
