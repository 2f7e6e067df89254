// mspc/signal.hpp - vibration signal series, CSV ingestion, dataset manifests
#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "mspc/errors.hpp"

namespace mspc {

enum class FaultLocation { Ball, Inner, Outer };

/// Health label attached to a signal. Either `Normal` or a fault with a
/// location and diameter, mirroring the manifest grammar
/// `normal` | `fault:<ball|inner|outer>:<diameter>`.
struct Label {
    enum class Kind { Normal, Fault };

    Kind kind = Kind::Normal;
    FaultLocation location = FaultLocation::Ball;  // meaningful only for Kind::Fault
    double diameter_in = 0.0;                      // meaningful only for Kind::Fault

    static Label normal() { return {}; }
    static Label fault(FaultLocation loc, double diameter) {
        Label l;
        l.kind = Kind::Fault;
        l.location = loc;
        l.diameter_in = diameter;
        return l;
    }

    bool is_normal() const { return kind == Kind::Normal; }

    friend bool operator==(const Label& a, const Label& b) {
        if (a.kind != b.kind) return false;
        if (a.kind == Kind::Normal) return true;
        return a.location == b.location && a.diameter_in == b.diameter_in;
    }
};

inline std::string to_string(FaultLocation loc) {
    switch (loc) {
        case FaultLocation::Ball: return "ball";
        case FaultLocation::Inner: return "inner";
        case FaultLocation::Outer: return "outer";
    }
    return "ball";
}

inline std::string format_label(const Label& label) {
    if (label.is_normal()) return "normal";
    std::ostringstream out;
    out << "fault:" << to_string(label.location) << ':' << label.diameter_in;
    return out.str();
}

inline Label parse_label(std::string_view text) {
    if (text == "normal") return Label::normal();
    constexpr std::string_view prefix = "fault:";
    if (text.substr(0, prefix.size()) != prefix)
        throw ManifestError("unrecognized label '" + std::string(text) + "'");
    std::string_view rest = text.substr(prefix.size());
    auto colon = rest.find(':');
    if (colon == std::string_view::npos)
        throw ManifestError("fault label missing diameter: '" + std::string(text) + "'");
    std::string_view loc_text = rest.substr(0, colon);
    std::string_view diam_text = rest.substr(colon + 1);
    FaultLocation loc;
    if (loc_text == "ball") loc = FaultLocation::Ball;
    else if (loc_text == "inner") loc = FaultLocation::Inner;
    else if (loc_text == "outer") loc = FaultLocation::Outer;
    else throw ManifestError("unknown fault location '" + std::string(loc_text) + "'");
    double diameter = 0.0;
    auto [ptr, ec] = std::from_chars(diam_text.data(), diam_text.data() + diam_text.size(), diameter);
    if (ec != std::errc{} || ptr != diam_text.data() + diam_text.size())
        throw ManifestError("bad fault diameter '" + std::string(diam_text) + "'");
    return Label::fault(loc, diameter);
}

/// A univariate vibration record: ordered acceleration samples plus the
/// metadata needed to interpret them.
struct SignalSeries {
    std::vector<double> samples;
    double sampling_rate_hz = 0.0;
    Label label;
    std::string source_id;

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / sampling_rate_hz; }
};

struct ManifestEntry {
    std::string path;
    Label label;
    double sampling_rate_hz = 0.0;
    std::string source_id;
};

struct DatasetManifest {
    std::vector<ManifestEntry> entries;

    const ManifestEntry* find(std::string_view path) const {
        for (const auto& e : entries)
            if (e.path == path) return &e;
        return nullptr;
    }
};

namespace detail {

inline std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

inline std::optional<double> parse_finite(std::string_view token) {
    token = trim(token);
    if (token.empty()) return std::nullopt;
    if (token.front() == '+') token.remove_prefix(1);  // from_chars rejects leading '+'
    double value = 0.0;
    auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
    if (ec != std::errc{} || ptr != token.data() + token.size()) return std::nullopt;
    if (!std::isfinite(value)) return std::nullopt;  // nan/inf tokens are rejected
    return value;
}

inline std::vector<std::string> split_csv_line(std::string_view line) {
    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
        auto comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.emplace_back(trim(line.substr(start)));
            break;
        }
        fields.emplace_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

}  // namespace detail

/// Reads a one-value-per-line signal CSV. An optional single header line is
/// skipped; every other line must parse as a finite decimal value.
inline SignalSeries load_signal(const std::string& path, const ManifestEntry& entry) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path);

    SignalSeries series;
    series.sampling_rate_hz = entry.sampling_rate_hz;
    series.label = entry.label;
    series.source_id = entry.source_id;

    std::string line;
    long line_number = 0;
    bool header_allowed = true;
    while (std::getline(in, line)) {
        ++line_number;
        std::string_view token = detail::trim(line);
        if (token.empty()) {
            // a blank final line comes from the trailing newline; anything else is bad data
            if (in.peek() == std::ifstream::traits_type::eof()) break;
            throw NonNumericSample(line_number, "");
        }
        auto value = detail::parse_finite(token);
        if (!value) {
            if (header_allowed) {
                header_allowed = false;
                continue;
            }
            throw NonNumericSample(line_number, std::string(token));
        }
        header_allowed = false;
        series.samples.push_back(*value);
    }
    if (series.samples.empty()) throw EmptyFile(path);
    if (series.sampling_rate_hz <= 0.0)
        throw ManifestError("sampling rate must be positive for " + path);
    return series;
}

/// Writes one sample per line with 17 significant digits so that
/// load_signal(write_signal(s)) reproduces the samples bit-identically.
inline void write_signal(const SignalSeries& series, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open for writing: " + path);
    char buf[64];
    for (double v : series.samples) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << buf << '\n';
    }
    out.flush();
    if (!out) throw IoFailure("write failed: " + path);
}

inline constexpr const char* kManifestHeader = "path,label,sampling_rate_hz,source_id";

inline DatasetManifest load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw MissingFile(path);
    std::string line;
    if (!std::getline(in, line)) throw ManifestError("empty manifest: " + path);
    if (std::string(detail::trim(line)) != kManifestHeader)
        throw ManifestError("expected header '" + std::string(kManifestHeader) + "' in " + path);

    DatasetManifest manifest;
    long line_number = 1;
    while (std::getline(in, line)) {
        ++line_number;
        if (detail::trim(line).empty()) continue;
        auto fields = detail::split_csv_line(line);
        if (fields.size() != 4)
            throw ManifestError("line " + std::to_string(line_number) + ": expected 4 fields");
        ManifestEntry entry;
        entry.path = fields[0];
        entry.label = parse_label(fields[1]);
        auto rate = detail::parse_finite(fields[2]);
        if (!rate || *rate <= 0.0)
            throw ManifestError("line " + std::to_string(line_number) + ": bad sampling rate");
        entry.sampling_rate_hz = *rate;
        entry.source_id = fields[3];
        for (const auto& existing : manifest.entries)
            if (existing.path == entry.path)
                throw ManifestError("duplicate path '" + entry.path + "'");
        manifest.entries.push_back(std::move(entry));
    }
    return manifest;
}

inline void write_manifest(const DatasetManifest& manifest, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open for writing: " + path);
    out << kManifestHeader << '\n';
    char buf[64];
    for (const auto& e : manifest.entries) {
        std::snprintf(buf, sizeof(buf), "%.17g", e.sampling_rate_hz);
        out << e.path << ',' << format_label(e.label) << ',' << buf << ',' << e.source_id << '\n';
    }
    out.flush();
    if (!out) throw IoFailure("write failed: " + path);
}

/// Convenience for loading a manifest entry relative to the manifest's directory.
inline SignalSeries load_entry(const std::string& manifest_path, const ManifestEntry& entry) {
    std::filesystem::path base = std::filesystem::path(manifest_path).parent_path();
    return load_signal((base / entry.path).string(), entry);
}

}  // namespace mspc
