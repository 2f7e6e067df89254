// mspc/charts.hpp - Hotelling T^2 / SPEx statistics, control limits,
// offline calibration and online monitoring
#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "mspc/errors.hpp"
#include "mspc/features.hpp"
#include "mspc/pca.hpp"
#include "mspc/signal.hpp"
#include "mspc/spectral.hpp"

namespace mspc {

enum class ChartStatus { InControl, Warning, Alarm };

inline const char* to_string(ChartStatus s) {
    switch (s) {
        case ChartStatus::InControl: return "in-control";
        case ChartStatus::Warning: return "warning";
        case ChartStatus::Alarm: return "alarm";
    }
    return "in-control";
}

/// T^2 contribution formula. PaperResidual multiplies the loading-weighted
/// score term by the reconstruction residual (z_i - zhat_i); Conventional
/// multiplies by z_i instead. Note the residual form sums to zero over
/// features, not to T^2, because the residual is orthogonal to the loadings.
enum class T2ContributionForm { PaperResidual, Conventional };

struct StatBasis {
    double mean = 0.0;
    double std = 0.0;  // population
};

/// Warning = mean + 2 sigma (95%), alarm = mean + 3 sigma (99.8%), computed
/// over the healthy calibration batches.
struct ControlLimits {
    double t2_warning = 0.0;
    double t2_alarm = 0.0;
    double spex_warning = 0.0;
    double spex_alarm = 0.0;
    StatBasis t2_basis;
    StatBasis spex_basis;
};

struct ChartPoint {
    long batch_index = 0;
    double t2 = 0.0;
    double spex = 0.0;
    ChartStatus t2_status = ChartStatus::InControl;
    ChartStatus spex_status = ChartStatus::InControl;
    Eigen::VectorXd t2_contrib;
    Eigen::VectorXd spex_contrib;
};

struct BundleConfig {
    long batch_len = 0;
    int n_components = 0;
    std::vector<std::string> selected_columns;  // subset of feature_column_names(n_components)
    double sampling_rate_hz = 0.0;
    T2ContributionForm t2_form = T2ContributionForm::PaperResidual;
};

/// Everything the online phase needs: scaling, loadings, limits, config.
/// Immutable after calibration.
struct ModelBundle {
    ScalingParams scaler;
    PcaModel pca;
    ControlLimits limits;
    BundleConfig config;
};

// ---- statistics -------------------------------------------------------------

inline double t2_score(const PcaModel& model, const Eigen::VectorXd& z) {
    const Eigen::VectorXd t = project(model, z);
    return (t.array().square() / model.score_variances.array()).sum();
}

inline double spex_score(const PcaModel& model, const Eigen::VectorXd& z) {
    const Eigen::VectorXd residual = z - reconstruct(model, project(model, z));
    return residual.squaredNorm();
}

inline Eigen::VectorXd t2_contributions(const PcaModel& model, const Eigen::VectorXd& z,
                                        T2ContributionForm form = T2ContributionForm::PaperResidual) {
    const Eigen::VectorXd t = project(model, z);
    const Eigen::VectorXd weights = model.loadings * (t.array() / model.score_variances.array()).matrix();
    if (form == T2ContributionForm::Conventional) return weights.cwiseProduct(z);
    const Eigen::VectorXd residual = z - reconstruct(model, t);
    return weights.cwiseProduct(residual);
}

inline Eigen::VectorXd spex_contributions(const PcaModel& model, const Eigen::VectorXd& z) {
    const Eigen::VectorXd residual = z - reconstruct(model, project(model, z));
    return residual.array().square().matrix();
}

// ---- limits -----------------------------------------------------------------

namespace chartdetail {

inline StatBasis basis_of(const std::vector<double>& values) {
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double accum = 0.0;
    for (double v : values) accum += (v - mean) * (v - mean);
    return {mean, std::sqrt(accum / n)};
}

inline ChartStatus status_of(double value, double warning, double alarm) {
    if (value > alarm) return ChartStatus::Alarm;
    if (value > warning) return ChartStatus::Warning;
    return ChartStatus::InControl;
}

}  // namespace chartdetail

inline ControlLimits calibrate_limits(const std::vector<double>& t2_values,
                                      const std::vector<double>& spex_values) {
    if (t2_values.size() < 2 || spex_values.size() < 2)
        throw TooFewBatches("control limits need at least 2 calibration batches");
    ControlLimits limits;
    limits.t2_basis = chartdetail::basis_of(t2_values);
    limits.spex_basis = chartdetail::basis_of(spex_values);
    const auto check = [](const StatBasis& b, const char* name) {
        if (b.std <= 1e-12 * std::max(1.0, std::abs(b.mean)))
            throw DegenerateSpread(std::string(name) + " has zero spread over calibration");
    };
    check(limits.t2_basis, "T2");
    check(limits.spex_basis, "SPEx");
    limits.t2_warning = limits.t2_basis.mean + 2.0 * limits.t2_basis.std;
    limits.t2_alarm = limits.t2_basis.mean + 3.0 * limits.t2_basis.std;
    limits.spex_warning = limits.spex_basis.mean + 2.0 * limits.spex_basis.std;
    limits.spex_alarm = limits.spex_basis.mean + 3.0 * limits.spex_basis.std;
    return limits;
}

// ---- offline calibration ----------------------------------------------------

struct CalibrateOptions {
    T2ContributionForm t2_form = T2ContributionForm::PaperResidual;
    // When set, restricts the model to exactly these columns instead of
    // "all non-degenerate columns". Used by variable selection.
    std::vector<std::string> column_override;
};

namespace chartdetail {

inline std::vector<long> indices_of(const std::vector<std::string>& all,
                                    const std::vector<std::string>& wanted) {
    std::vector<long> indices;
    indices.reserve(wanted.size());
    for (const auto& name : wanted) {
        long found = -1;
        for (std::size_t j = 0; j < all.size(); ++j)
            if (all[j] == name) {
                found = static_cast<long>(j);
                break;
            }
        if (found < 0) throw CorruptModel("unknown feature column '" + name + "'");
        indices.push_back(found);
    }
    return indices;
}

}  // namespace chartdetail

/// Fits scaler, PCA (PC count by the Kaiser rule) and control limits on a
/// healthy feature matrix whose degenerate columns have not yet been removed.
inline ModelBundle calibrate_from_matrix(const FeatureMatrix& matrix,
                                         const CalibrateOptions& options = {}) {
    FeatureMatrix reduced;
    if (!options.column_override.empty()) {
        reduced = select_columns(
            matrix, chartdetail::indices_of(matrix.column_names, options.column_override));
    } else {
        const auto degenerate = find_degenerate_columns(matrix);
        std::vector<long> keep;
        for (long j = 0; j < matrix.cols(); ++j)
            if (std::find(degenerate.begin(), degenerate.end(), j) == degenerate.end())
                keep.push_back(j);
        if (keep.empty())
            throw DegenerateColumn(matrix.column_names.empty() ? "<all>" : matrix.column_names[0]);
        reduced = select_columns(matrix, keep);
    }

    ModelBundle bundle;
    bundle.scaler = fit_scaler(reduced);
    const Eigen::MatrixXd z = apply_scaler(reduced.values, bundle.scaler);

    const Eigen::VectorXd eigenvalues = correlation_eigenvalues(z);
    const long max_pcs = std::min<long>(z.rows() - 1, z.cols());
    const int n_pcs = static_cast<int>(std::min<long>(select_n_pcs(eigenvalues), max_pcs));
    bundle.pca = fit_pca(z, n_pcs);

    std::vector<double> t2_values, spex_values;
    t2_values.reserve(static_cast<std::size_t>(z.rows()));
    spex_values.reserve(static_cast<std::size_t>(z.rows()));
    for (long t = 0; t < z.rows(); ++t) {
        const Eigen::VectorXd row = z.row(t).transpose();
        t2_values.push_back(t2_score(bundle.pca, row));
        spex_values.push_back(spex_score(bundle.pca, row));
    }
    bundle.limits = calibrate_limits(t2_values, spex_values);

    bundle.config.batch_len = matrix.batch_len;
    bundle.config.n_components = matrix.n_components;
    bundle.config.selected_columns = reduced.column_names;
    bundle.config.sampling_rate_hz = matrix.sampling_rate_hz;
    bundle.config.t2_form = options.t2_form;
    return bundle;
}

/// Full offline phase on a healthy signal: segment, decompose, extract,
/// standardize, fit PCA, set limits.
inline ModelBundle calibrate_bundle(const SignalSeries& signal, long batch_len, int n_components,
                                    const CalibrateOptions& options = {}) {
    if (!signal.label.is_normal())
        throw LabelError("calibration requires healthy data, got '" + format_label(signal.label) +
                         "' from " + signal.source_id);
    const auto batches = segment(signal, batch_len);
    const auto matrix = build_matrix(batches, n_components, signal.sampling_rate_hz);
    return calibrate_from_matrix(matrix, options);
}

// ---- online monitoring ------------------------------------------------------

namespace chartdetail {

inline ChartPoint score_row(const ModelBundle& bundle, long batch_index,
                            const Eigen::VectorXd& selected_row) {
    ChartPoint point;
    point.batch_index = batch_index;
    const Eigen::VectorXd z = apply_scaler(selected_row, bundle.scaler);
    point.t2 = t2_score(bundle.pca, z);
    point.spex = spex_score(bundle.pca, z);
    point.t2_contrib = t2_contributions(bundle.pca, z, bundle.config.t2_form);
    point.spex_contrib = spex_contributions(bundle.pca, z);
    point.t2_status = status_of(point.t2, bundle.limits.t2_warning, bundle.limits.t2_alarm);
    point.spex_status = status_of(point.spex, bundle.limits.spex_warning, bundle.limits.spex_alarm);
    return point;
}

}  // namespace chartdetail

/// Projects new data against the calibrated model, one chart point per batch.
inline std::vector<ChartPoint> monitor(const ModelBundle& bundle, const SignalSeries& signal) {
    const double fs = bundle.config.sampling_rate_hz;
    if (std::abs(signal.sampling_rate_hz - fs) > 1e-9 * std::max(1.0, fs))
        throw ConfigMismatch("signal sampled at " + std::to_string(signal.sampling_rate_hz) +
                             " Hz, model calibrated at " + std::to_string(fs) + " Hz");

    const auto batches = segment(signal, bundle.config.batch_len);
    const auto all_names = feature_column_names(bundle.config.n_components);
    const auto selected = chartdetail::indices_of(all_names, bundle.config.selected_columns);

    std::vector<ChartPoint> points;
    points.reserve(batches.size());
    for (const auto& batch : batches) {
        const auto decomposition = decompose(batch, bundle.config.n_components, fs);
        const Eigen::VectorXd full_row = extract_row(decomposition);
        Eigen::VectorXd selected_row(static_cast<long>(selected.size()));
        for (std::size_t j = 0; j < selected.size(); ++j) selected_row[static_cast<long>(j)] = full_row[selected[j]];
        points.push_back(chartdetail::score_row(bundle, batch.index_t, selected_row));
    }
    return points;
}

}  // namespace mspc
