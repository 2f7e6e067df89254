// mspc/model_store.hpp - versioned JSON persistence of a fitted ModelBundle
//
// The document is self-describing: named numeric arrays with explicit
// dimensions. Numbers round-trip exactly (shortest-representation decimal
// serialization), so a reloaded bundle monitors bit-identically.
#pragma once

#include <Eigen/Dense>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "mspc/charts.hpp"
#include "mspc/errors.hpp"

namespace mspc {

inline constexpr int kModelFormatVersion = 1;

namespace storedetail {

using nlohmann::json;

inline json vector_to_json(const Eigen::VectorXd& v) {
    json array = json::array();
    for (long i = 0; i < v.size(); ++i) array.push_back(v[i]);
    return array;
}

inline Eigen::VectorXd vector_from_json(const json& array, const char* name) {
    if (!array.is_array()) throw CorruptModel(std::string(name) + " is not an array");
    Eigen::VectorXd v(array.size());
    for (std::size_t i = 0; i < array.size(); ++i) {
        if (!array[i].is_number()) throw CorruptModel(std::string(name) + " has non-numeric entry");
        v[static_cast<long>(i)] = array[i].get<double>();
    }
    return v;
}

inline json matrix_to_json(const Eigen::MatrixXd& m) {
    json data = json::array();
    for (long i = 0; i < m.rows(); ++i)
        for (long j = 0; j < m.cols(); ++j) data.push_back(m(i, j));
    return json{{"rows", m.rows()}, {"cols", m.cols()}, {"data", data}};
}

inline Eigen::MatrixXd matrix_from_json(const json& obj, const char* name) {
    if (!obj.is_object() || !obj.contains("rows") || !obj.contains("cols") || !obj.contains("data"))
        throw CorruptModel(std::string(name) + " missing rows/cols/data");
    const long rows = obj["rows"].get<long>();
    const long cols = obj["cols"].get<long>();
    const auto& data = obj["data"];
    if (rows < 0 || cols < 0 || data.size() != static_cast<std::size_t>(rows * cols))
        throw CorruptModel(std::string(name) + " dimension/data size inconsistency");
    Eigen::MatrixXd m(rows, cols);
    std::size_t idx = 0;
    for (long i = 0; i < rows; ++i)
        for (long j = 0; j < cols; ++j) m(i, j) = data[idx++].get<double>();
    return m;
}

}  // namespace storedetail

inline void save_model(const ModelBundle& bundle, const std::string& path) {
    using nlohmann::json;
    json doc;
    doc["format_version"] = kModelFormatVersion;
    doc["config"] = {
        {"batch_len", bundle.config.batch_len},
        {"n_components", bundle.config.n_components},
        {"sampling_rate_hz", bundle.config.sampling_rate_hz},
        {"selected_columns", bundle.config.selected_columns},
        {"t2_contribution_form",
         bundle.config.t2_form == T2ContributionForm::PaperResidual ? "paper" : "conventional"},
    };
    doc["scaler"] = {
        {"means", storedetail::vector_to_json(bundle.scaler.means)},
        {"stds", storedetail::vector_to_json(bundle.scaler.stds)},
    };
    doc["pca"] = {
        {"n_pcs", bundle.pca.n_pcs},
        {"calibration_rows", bundle.pca.calibration_rows},
        {"loadings", storedetail::matrix_to_json(bundle.pca.loadings)},
        {"score_variances", storedetail::vector_to_json(bundle.pca.score_variances)},
        {"explained_variance_ratio",
         storedetail::vector_to_json(bundle.pca.explained_variance_ratio)},
    };
    doc["limits"] = {
        {"t2_warning", bundle.limits.t2_warning},
        {"t2_alarm", bundle.limits.t2_alarm},
        {"spex_warning", bundle.limits.spex_warning},
        {"spex_alarm", bundle.limits.spex_alarm},
        {"t2_mean", bundle.limits.t2_basis.mean},
        {"t2_std", bundle.limits.t2_basis.std},
        {"spex_mean", bundle.limits.spex_basis.mean},
        {"spex_std", bundle.limits.spex_basis.std},
    };

    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open for writing: " + path);
    out << doc.dump(2) << '\n';
    if (!out) throw IoFailure("write failed: " + path);
}

inline ModelBundle load_model(const std::string& path) {
    using nlohmann::json;
    std::ifstream in(path);
    if (!in) throw MissingFile(path);
    json doc;
    try {
        in >> doc;
    } catch (const json::exception& e) {
        throw CorruptModel(e.what());
    }

    try {
        if (!doc.contains("format_version") || !doc["format_version"].is_number_integer())
            throw CorruptModel("missing format_version");
        const int version = doc["format_version"].get<int>();
        if (version != kModelFormatVersion)
            throw VersionMismatch("model format " + std::to_string(version) + ", supported " +
                                  std::to_string(kModelFormatVersion));

        ModelBundle bundle;
        const auto& config = doc.at("config");
        bundle.config.batch_len = config.at("batch_len").get<long>();
        bundle.config.n_components = config.at("n_components").get<int>();
        bundle.config.sampling_rate_hz = config.at("sampling_rate_hz").get<double>();
        bundle.config.selected_columns =
            config.at("selected_columns").get<std::vector<std::string>>();
        const std::string form = config.at("t2_contribution_form").get<std::string>();
        if (form == "paper") bundle.config.t2_form = T2ContributionForm::PaperResidual;
        else if (form == "conventional") bundle.config.t2_form = T2ContributionForm::Conventional;
        else throw CorruptModel("unknown t2_contribution_form '" + form + "'");

        const auto& scaler = doc.at("scaler");
        bundle.scaler.means = storedetail::vector_from_json(scaler.at("means"), "scaler.means");
        bundle.scaler.stds = storedetail::vector_from_json(scaler.at("stds"), "scaler.stds");

        const auto& pca = doc.at("pca");
        bundle.pca.n_pcs = pca.at("n_pcs").get<int>();
        bundle.pca.calibration_rows = pca.at("calibration_rows").get<long>();
        bundle.pca.loadings = storedetail::matrix_from_json(pca.at("loadings"), "pca.loadings");
        bundle.pca.score_variances =
            storedetail::vector_from_json(pca.at("score_variances"), "pca.score_variances");
        bundle.pca.explained_variance_ratio = storedetail::vector_from_json(
            pca.at("explained_variance_ratio"), "pca.explained_variance_ratio");

        const auto& limits = doc.at("limits");
        bundle.limits.t2_warning = limits.at("t2_warning").get<double>();
        bundle.limits.t2_alarm = limits.at("t2_alarm").get<double>();
        bundle.limits.spex_warning = limits.at("spex_warning").get<double>();
        bundle.limits.spex_alarm = limits.at("spex_alarm").get<double>();
        bundle.limits.t2_basis = {limits.at("t2_mean").get<double>(),
                                  limits.at("t2_std").get<double>()};
        bundle.limits.spex_basis = {limits.at("spex_mean").get<double>(),
                                    limits.at("spex_std").get<double>()};

        // consistency checks
        const long q = static_cast<long>(bundle.config.selected_columns.size());
        if (q < 1) throw CorruptModel("no selected columns");
        if (bundle.scaler.means.size() != q || bundle.scaler.stds.size() != q)
            throw CorruptModel("scaler dimensions do not match selected columns");
        if (bundle.pca.loadings.rows() != q || bundle.pca.loadings.cols() != bundle.pca.n_pcs)
            throw CorruptModel("loading dimensions inconsistent");
        if (bundle.pca.score_variances.size() != bundle.pca.n_pcs)
            throw CorruptModel("score variance length inconsistent");
        if (bundle.config.batch_len < 8 || bundle.config.n_components < 1 ||
            bundle.config.sampling_rate_hz <= 0.0)
            throw CorruptModel("implausible config values");
        // selected columns must exist in the canonical feature list
        const auto all_names = feature_column_names(bundle.config.n_components);
        for (const auto& name : bundle.config.selected_columns)
            if (std::find(all_names.begin(), all_names.end(), name) == all_names.end())
                throw CorruptModel("column '" + name + "' not produced by a " +
                                   std::to_string(bundle.config.n_components) +
                                   "-component decomposition");
        return bundle;
    } catch (const json::exception& e) {
        throw CorruptModel(e.what());
    }
}

}  // namespace mspc
