// mspc/report.hpp - chart CSV format and SVG control-chart rendering
//
// The chart CSV is the interface between `monitor` and `report`: comment
// lines carry the control limits, the header row names the columns, and
// each data row is one batch. Charts are drawn on a logarithmic axis with
// decade ticks and dashed warning/alarm rules.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "mspc/charts.hpp"
#include "mspc/errors.hpp"
#include "mspc/signal.hpp"

namespace mspc {

struct ChartDocument {
    ControlLimits limits;
    std::vector<std::string> column_names;  // feature columns for contributions
    std::vector<ChartPoint> points;
};

struct StatusCounts {
    long in_control = 0;
    long warning = 0;
    long alarm = 0;
    long total() const { return in_control + warning + alarm; }
};

struct RunReport {
    std::string chart_csv_path;
    StatusCounts t2;
    StatusCounts spex;
    std::vector<std::string> svg_paths;
};

inline StatusCounts count_statuses(const std::vector<ChartPoint>& points, bool use_t2) {
    StatusCounts counts;
    for (const auto& p : points) {
        switch (use_t2 ? p.t2_status : p.spex_status) {
            case ChartStatus::InControl: ++counts.in_control; break;
            case ChartStatus::Warning: ++counts.warning; break;
            case ChartStatus::Alarm: ++counts.alarm; break;
        }
    }
    return counts;
}

namespace reportdetail {

inline std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline ChartStatus parse_status(const std::string& text) {
    if (text == "alarm") return ChartStatus::Alarm;
    if (text == "warning") return ChartStatus::Warning;
    if (text == "in-control") return ChartStatus::InControl;
    throw CorruptModel("unknown chart status '" + text + "'");
}

}  // namespace reportdetail

inline void write_chart_csv(const ChartDocument& doc, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open for writing: " + path);
    using reportdetail::fmt;
    out << "# t2_warning=" << fmt(doc.limits.t2_warning) << '\n';
    out << "# t2_alarm=" << fmt(doc.limits.t2_alarm) << '\n';
    out << "# spex_warning=" << fmt(doc.limits.spex_warning) << '\n';
    out << "# spex_alarm=" << fmt(doc.limits.spex_alarm) << '\n';
    out << "batch_index,t2,t2_status,spex,spex_status";
    for (const auto& name : doc.column_names) out << ",t2_contrib_" << name;
    for (const auto& name : doc.column_names) out << ",spex_contrib_" << name;
    out << '\n';
    for (const auto& p : doc.points) {
        out << p.batch_index << ',' << fmt(p.t2) << ',' << to_string(p.t2_status) << ','
            << fmt(p.spex) << ',' << to_string(p.spex_status);
        for (long j = 0; j < p.t2_contrib.size(); ++j) out << ',' << fmt(p.t2_contrib[j]);
        for (long j = 0; j < p.spex_contrib.size(); ++j) out << ',' << fmt(p.spex_contrib[j]);
        out << '\n';
    }
    if (!out) throw IoFailure("write failed: " + path);
}

inline ChartDocument read_chart_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path);
    ChartDocument doc;
    std::string line;
    bool header_seen = false;
    long contrib_cols = 0;
    while (std::getline(in, line)) {
        auto trimmed = std::string(detail::trim(line));
        if (trimmed.empty()) continue;
        if (trimmed.front() == '#') {
            const auto eq = trimmed.find('=');
            if (eq == std::string::npos) continue;
            const std::string key = std::string(detail::trim(trimmed.substr(1, eq - 1)));
            const auto value = detail::parse_finite(trimmed.substr(eq + 1));
            if (!value) throw CorruptModel("bad limit line in " + path);
            if (key == "t2_warning") doc.limits.t2_warning = *value;
            else if (key == "t2_alarm") doc.limits.t2_alarm = *value;
            else if (key == "spex_warning") doc.limits.spex_warning = *value;
            else if (key == "spex_alarm") doc.limits.spex_alarm = *value;
            continue;
        }
        auto fields = detail::split_csv_line(trimmed);
        if (!header_seen) {
            header_seen = true;
            if (fields.size() < 5 || fields[0] != "batch_index")
                throw CorruptModel("unexpected chart header in " + path);
            constexpr const char* prefix = "t2_contrib_";
            for (std::size_t j = 5; j < fields.size(); ++j) {
                if (fields[j].rfind(prefix, 0) == 0)
                    doc.column_names.push_back(fields[j].substr(std::string(prefix).size()));
                else
                    break;
            }
            contrib_cols = static_cast<long>(doc.column_names.size());
            if (fields.size() != 5 + 2 * static_cast<std::size_t>(contrib_cols))
                throw CorruptModel("chart header contribution columns inconsistent");
            continue;
        }
        if (fields.size() != 5 + 2 * static_cast<std::size_t>(contrib_cols))
            throw CorruptModel("chart row width inconsistent in " + path);
        ChartPoint p;
        p.batch_index = std::stol(fields[0]);
        auto t2 = detail::parse_finite(fields[1]);
        auto spex = detail::parse_finite(fields[3]);
        if (!t2 || !spex) throw CorruptModel("non-numeric statistic in " + path);
        p.t2 = *t2;
        p.spex = *spex;
        p.t2_status = reportdetail::parse_status(fields[2]);
        p.spex_status = reportdetail::parse_status(fields[4]);
        p.t2_contrib.resize(contrib_cols);
        p.spex_contrib.resize(contrib_cols);
        for (long j = 0; j < contrib_cols; ++j) {
            auto a = detail::parse_finite(fields[static_cast<std::size_t>(5 + j)]);
            auto b = detail::parse_finite(fields[static_cast<std::size_t>(5 + contrib_cols + j)]);
            if (!a || !b) throw CorruptModel("non-numeric contribution in " + path);
            p.t2_contrib[j] = *a;
            p.spex_contrib[j] = *b;
        }
        doc.points.push_back(std::move(p));
    }
    if (!header_seen || doc.points.empty()) throw EmptyChart(path);
    return doc;
}

// ---- SVG rendering ------------------------------------------------------

namespace reportdetail {

struct LogAxis {
    int decade_lo = 0;
    int decade_hi = 1;
    double y0 = 0.0;       // pixel of decade_lo
    double y1 = 0.0;       // pixel of decade_hi
    double clamp = 1e-12;  // floor for nonpositive values

    double y_of(double value) const {
        const double lv = std::log10(std::max(value, clamp));
        const double f = (lv - decade_lo) / (decade_hi - decade_lo);
        return y0 + f * (y1 - y0);
    }
};

inline const char* status_color(ChartStatus s) {
    switch (s) {
        case ChartStatus::InControl: return "#2e7d32";
        case ChartStatus::Warning: return "#ef6c00";
        case ChartStatus::Alarm: return "#c62828";
    }
    return "#2e7d32";
}

}  // namespace reportdetail

/// One statistic as a log-scale control chart with warning/alarm rules.
inline std::string render_chart_svg(const std::string& title, const std::vector<long>& batch_index,
                                    const std::vector<double>& values,
                                    const std::vector<ChartStatus>& statuses, double warning,
                                    double alarm) {
    if (values.empty()) throw EmptyChart(title);
    const double width = 900.0, height = 420.0;
    const double left = 70.0, right = 30.0, top = 40.0, bottom = 40.0;

    double lo = std::min(warning, alarm), hi = std::max(warning, alarm);
    for (double v : values) {
        if (v > 0.0) lo = std::min(lo, v);
        hi = std::max(hi, v);
    }
    lo = std::max(lo, 1e-12);
    hi = std::max(hi, lo * 10.0);
    reportdetail::LogAxis axis;
    axis.decade_lo = static_cast<int>(std::floor(std::log10(lo)));
    axis.decade_hi = static_cast<int>(std::ceil(std::log10(hi)));
    if (axis.decade_hi <= axis.decade_lo) axis.decade_hi = axis.decade_lo + 1;
    axis.y0 = height - bottom;
    axis.y1 = top;
    axis.clamp = std::pow(10.0, axis.decade_lo);

    const long n = static_cast<long>(values.size());
    const auto x_of = [&](long i) {
        if (n == 1) return left + (width - left - right) / 2.0;
        return left + (width - left - right) * static_cast<double>(i) / static_cast<double>(n - 1);
    };

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n";
    svg << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    svg << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-family=\"sans-serif\""
        << " font-size=\"16\">" << title << "</text>\n";

    // decade grid and tick labels
    for (int d = axis.decade_lo; d <= axis.decade_hi; ++d) {
        const double y = axis.y_of(std::pow(10.0, d));
        svg << "<line x1=\"" << left << "\" y1=\"" << y << "\" x2=\"" << width - right
            << "\" y2=\"" << y << "\" stroke=\"#dddddd\" stroke-width=\"1\"/>\n";
        svg << "<text x=\"" << left - 8 << "\" y=\"" << y + 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"12\" class=\"tick\">1e"
            << d << "</text>\n";
    }

    // control rules
    const auto rule = [&](double value, const char* color, const char* name) {
        const double y = axis.y_of(value);
        svg << "<line class=\"" << name << "-rule\" x1=\"" << left << "\" y1=\"" << y << "\" x2=\""
            << width - right << "\" y2=\"" << y << "\" stroke=\"" << color
            << "\" stroke-width=\"1.5\" stroke-dasharray=\"6,4\"/>\n";
        svg << "<text x=\"" << width - right << "\" y=\"" << y - 4
            << "\" text-anchor=\"end\" font-family=\"sans-serif\" font-size=\"11\" fill=\"" << color
            << "\">" << name << "</text>\n";
    };
    rule(warning, "#ef6c00", "warning");
    rule(alarm, "#c62828", "alarm");

    // polyline through the points
    svg << "<polyline fill=\"none\" stroke=\"#1565c0\" stroke-width=\"1\" points=\"";
    for (long i = 0; i < n; ++i)
        svg << x_of(i) << ',' << axis.y_of(values[static_cast<std::size_t>(i)]) << ' ';
    svg << "\"/>\n";

    for (long i = 0; i < n; ++i) {
        const auto status = statuses[static_cast<std::size_t>(i)];
        svg << "<circle class=\"" << to_string(status) << "\" cx=\"" << x_of(i) << "\" cy=\""
            << axis.y_of(values[static_cast<std::size_t>(i)]) << "\" r=\"3.5\" fill=\""
            << reportdetail::status_color(status) << "\"><title>batch "
            << batch_index[static_cast<std::size_t>(i)] << "</title></circle>\n";
    }

    svg << "<text x=\"" << width / 2 << "\" y=\"" << height - 10
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" font-size=\"12\">batch</text>\n";
    svg << "</svg>\n";
    return svg.str();
}

/// Renders one SVG per statistic into out_dir; returns the file paths.
inline std::vector<std::string> render_report(const ChartDocument& doc,
                                              const std::string& out_dir) {
    if (doc.points.empty()) throw EmptyChart("no chart points");
    std::vector<long> index;
    std::vector<double> t2, spex;
    std::vector<ChartStatus> t2_status, spex_status;
    for (const auto& p : doc.points) {
        index.push_back(p.batch_index);
        t2.push_back(p.t2);
        spex.push_back(p.spex);
        t2_status.push_back(p.t2_status);
        spex_status.push_back(p.spex_status);
    }
    std::vector<std::string> paths;
    const auto write_svg = [&](const std::string& name, const std::string& content) {
        const std::string path = out_dir + "/" + name;
        std::ofstream out(path, std::ios::trunc);
        if (!out) throw IoFailure("cannot open for writing: " + path);
        out << content;
        if (!out) throw IoFailure("write failed: " + path);
        paths.push_back(path);
    };
    write_svg("t2_chart.svg", render_chart_svg("Hotelling T2", index, t2, t2_status,
                                               doc.limits.t2_warning, doc.limits.t2_alarm));
    write_svg("spex_chart.svg", render_chart_svg("SPEx", index, spex, spex_status,
                                                 doc.limits.spex_warning, doc.limits.spex_alarm));
    return paths;
}

}  // namespace mspc
