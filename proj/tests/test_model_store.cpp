#include <catch2/catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>

#include "mspc/model_store.hpp"
#include "support/fixtures.hpp"

using namespace mspc;
namespace fs = std::filesystem;

namespace {

fs::path temp_file(const std::string& name) {
    const auto dir = fs::temp_directory_path() / "mspc_store_tests";
    fs::create_directories(dir);
    return dir / name;
}

}  // namespace

TEST_CASE("a reloaded model monitors identically") {
    const auto bundle = fixtures::calibrated_bundle();
    const auto path = temp_file("model.json");
    save_model(bundle, path.string());
    const auto reloaded = load_model(path.string());

    REQUIRE(reloaded.config.batch_len == bundle.config.batch_len);
    REQUIRE(reloaded.config.selected_columns == bundle.config.selected_columns);
    REQUIRE(reloaded.pca.n_pcs == bundle.pca.n_pcs);

    const auto held = fixtures::healthy_held_out();
    const auto before = monitor(bundle, held);
    const auto after = monitor(reloaded, held);
    REQUIRE(before.size() == after.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
        REQUIRE(std::abs(before[i].t2 - after[i].t2) <= 1e-12);
        REQUIRE(std::abs(before[i].spex - after[i].spex) <= 1e-12);
        REQUIRE(before[i].t2_status == after[i].t2_status);
        REQUIRE(before[i].spex_status == after[i].spex_status);
    }
}

TEST_CASE("truncated model files are corrupt") {
    const auto bundle = fixtures::calibrated_bundle();
    const auto path = temp_file("truncated.json");
    save_model(bundle, path.string());
    std::string text;
    {
        std::ifstream in(path);
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    std::ofstream(path, std::ios::trunc) << text.substr(0, text.size() / 2);
    REQUIRE_THROWS_AS(load_model(path.string()), CorruptModel);
}

TEST_CASE("future format versions are refused") {
    const auto bundle = fixtures::calibrated_bundle();
    const auto path = temp_file("future.json");
    save_model(bundle, path.string());
    nlohmann::json doc;
    {
        std::ifstream in(path);
        in >> doc;
    }
    doc["format_version"] = kModelFormatVersion + 1;
    std::ofstream(path, std::ios::trunc) << doc.dump(2);
    REQUIRE_THROWS_AS(load_model(path.string()), VersionMismatch);
}

TEST_CASE("dimension inconsistencies are corrupt") {
    const auto bundle = fixtures::calibrated_bundle();
    const auto path = temp_file("inconsistent.json");
    save_model(bundle, path.string());
    nlohmann::json doc;
    {
        std::ifstream in(path);
        in >> doc;
    }
    doc["scaler"]["means"].erase(0);
    std::ofstream(path, std::ios::trunc) << doc.dump(2);
    REQUIRE_THROWS_AS(load_model(path.string()), CorruptModel);

    save_model(bundle, path.string());
    {
        std::ifstream in(path);
        in >> doc;
    }
    doc["config"].erase("batch_len");
    std::ofstream(path, std::ios::trunc) << doc.dump(2);
    REQUIRE_THROWS_AS(load_model(path.string()), CorruptModel);
}

TEST_CASE("missing model file") {
    REQUIRE_THROWS_AS(load_model("/nonexistent/model.json"), MissingFile);
}
