#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <regex>

#include "mspc/report.hpp"

using namespace mspc;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const auto dir = fs::temp_directory_path() / "mspc_report_tests";
    fs::create_directories(dir);
    return dir;
}

ChartDocument sample_document() {
    ChartDocument doc;
    doc.limits.t2_warning = 8.0;
    doc.limits.t2_alarm = 11.0;
    doc.limits.spex_warning = 4.0;
    doc.limits.spex_alarm = 6.0;
    doc.column_names = {"FT1_mag", "resid_var"};
    for (long i = 0; i < 5; ++i) {
        ChartPoint p;
        p.batch_index = i;
        p.t2 = 1.0 + i;
        p.spex = 0.5 * (i + 1);
        p.t2_status = ChartStatus::InControl;
        p.spex_status = ChartStatus::InControl;
        p.t2_contrib = Eigen::VectorXd::Constant(2, 0.25 * i);
        p.spex_contrib = Eigen::VectorXd::Constant(2, 0.1 * i);
        doc.points.push_back(p);
    }
    doc.points.back().t2 = 50.0;
    doc.points.back().t2_status = ChartStatus::Alarm;
    return doc;
}

double attr_value(const std::string& tag, const std::string& attr) {
    const std::regex re(attr + "=\"([-0-9.eE]+)\"");
    std::smatch m;
    REQUIRE(std::regex_search(tag, m, re));
    return std::stod(m[1]);
}

}  // namespace

TEST_CASE("chart CSV round-trips points, limits and contributions") {
    const auto doc = sample_document();
    const auto path = (temp_dir() / "chart.csv").string();
    write_chart_csv(doc, path);
    const auto loaded = read_chart_csv(path);

    REQUIRE(loaded.limits.t2_alarm == doc.limits.t2_alarm);
    REQUIRE(loaded.limits.spex_warning == doc.limits.spex_warning);
    REQUIRE(loaded.column_names == doc.column_names);
    REQUIRE(loaded.points.size() == doc.points.size());
    for (std::size_t i = 0; i < doc.points.size(); ++i) {
        REQUIRE(loaded.points[i].t2 == doc.points[i].t2);
        REQUIRE(loaded.points[i].spex == doc.points[i].spex);
        REQUIRE(loaded.points[i].t2_status == doc.points[i].t2_status);
        REQUIRE(loaded.points[i].t2_contrib == doc.points[i].t2_contrib);
        REQUIRE(loaded.points[i].spex_contrib == doc.points[i].spex_contrib);
    }
}

TEST_CASE("status counts sum to the batch count") {
    const auto doc = sample_document();
    const auto t2 = count_statuses(doc.points, true);
    REQUIRE(t2.total() == static_cast<long>(doc.points.size()));
    REQUIRE(t2.alarm == 1);
    const auto spex = count_statuses(doc.points, false);
    REQUIRE(spex.total() == static_cast<long>(doc.points.size()));
    REQUIRE(spex.alarm == 0);
}

TEST_CASE("an alarm point is drawn above the alarm rule") {
    const auto doc = sample_document();
    std::vector<long> index;
    std::vector<double> values;
    std::vector<ChartStatus> statuses;
    for (const auto& p : doc.points) {
        index.push_back(p.batch_index);
        values.push_back(p.t2);
        statuses.push_back(p.t2_status);
    }
    const auto svg = render_chart_svg("Hotelling T2", index, values, statuses,
                                      doc.limits.t2_warning, doc.limits.t2_alarm);

    const auto rule_pos = svg.find("class=\"alarm-rule\"");
    REQUIRE(rule_pos != std::string::npos);
    const auto rule_tag = svg.substr(rule_pos, svg.find('>', rule_pos) - rule_pos);
    const double rule_y = attr_value(rule_tag, "y1");

    const auto marker_pos = svg.find("circle class=\"alarm\"");
    REQUIRE(marker_pos != std::string::npos);
    const auto marker_tag = svg.substr(marker_pos, svg.find('>', marker_pos) - marker_pos);
    // SVG y grows downward, so "above the rule" means a smaller cy
    REQUIRE(attr_value(marker_tag, "cy") < rule_y);
}

TEST_CASE("wide value ranges get one tick per decade") {
    std::vector<long> index;
    std::vector<double> values;
    std::vector<ChartStatus> statuses;
    for (int i = 0; i <= 6; ++i) {
        index.push_back(i);
        values.push_back(std::pow(10.0, i));
        statuses.push_back(ChartStatus::InControl);
    }
    const auto svg = render_chart_svg("SPEx", index, values, statuses, 10.0, 100.0);
    int ticks = 0;
    for (std::size_t pos = svg.find("class=\"tick\""); pos != std::string::npos;
         pos = svg.find("class=\"tick\"", pos + 1))
        ++ticks;
    REQUIRE(ticks >= 7);
    for (int d = 0; d <= 6; ++d)
        REQUIRE(svg.find(">1e" + std::to_string(d) + "<") != std::string::npos);
}

TEST_CASE("empty charts are rejected") {
    const auto path = (temp_dir() / "empty.csv").string();
    std::ofstream(path, std::ios::trunc) << "";
    REQUIRE_THROWS_AS(read_chart_csv(path), EmptyChart);

    std::ofstream(path, std::ios::trunc)
        << "# t2_warning=1\nbatch_index,t2,t2_status,spex,spex_status\n";
    REQUIRE_THROWS_AS(read_chart_csv(path), EmptyChart);

    REQUIRE_THROWS_AS(render_chart_svg("empty", {}, {}, {}, 1.0, 2.0), EmptyChart);
}

TEST_CASE("render_report writes one SVG per statistic") {
    const auto doc = sample_document();
    const auto dir = (temp_dir() / "svg_out");
    fs::create_directories(dir);
    const auto paths = render_report(doc, dir.string());
    REQUIRE(paths.size() == 2);
    for (const auto& p : paths) {
        REQUIRE(fs::exists(p));
        REQUIRE(fs::file_size(p) > 500);
    }
}
