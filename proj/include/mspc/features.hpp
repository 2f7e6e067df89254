// mspc/features.hpp - per-batch feature rows and standardization
//
// Each batch contributes one row: for every ranked component its amplitude,
// frequency and waveform standard deviation, plus the residual standard
// deviation. Population (1/T) standard deviations are used throughout.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <string>
#include <vector>

#include "mspc/errors.hpp"
#include "mspc/spectral.hpp"

namespace mspc {

struct FeatureMatrix {
    Eigen::MatrixXd values;  // T x q, q = 3n + 1
    std::vector<std::string> column_names;
    long batch_len = 0;
    int n_components = 0;
    double sampling_rate_hz = 0.0;

    long rows() const { return values.rows(); }
    long cols() const { return values.cols(); }
};

/// Calibration-time column means and population standard deviations.
struct ScalingParams {
    Eigen::VectorXd means;
    Eigen::VectorXd stds;
};

inline std::vector<std::string> feature_column_names(int n_components) {
    std::vector<std::string> names;
    names.reserve(static_cast<std::size_t>(3 * n_components + 1));
    for (int i = 1; i <= n_components; ++i) {
        const std::string base = "FT" + std::to_string(i);
        names.push_back(base + "_mag");
        names.push_back(base + "_freq");
        names.push_back(base + "_var");
    }
    names.push_back("resid_var");
    return names;
}

namespace detail {

inline double population_std(const std::vector<double>& values) {
    const double n = static_cast<double>(values.size());
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= n;
    double accum = 0.0;
    for (double v : values) {
        const double d = v - mean;
        accum += d * d;
    }
    return std::sqrt(accum / n);
}

}  // namespace detail

inline Eigen::VectorXd extract_row(const FtDecomposition& d) {
    const auto n = static_cast<int>(d.components.size());
    Eigen::VectorXd row(3 * n + 1);
    for (int i = 0; i < n; ++i) {
        const auto& comp = d.components[static_cast<std::size_t>(i)];
        row[3 * i + 0] = comp.amplitude;
        row[3 * i + 1] = comp.frequency_hz;
        row[3 * i + 2] = detail::population_std(comp.waveform);
    }
    row[3 * n] = detail::population_std(d.residual);
    return row;
}

/// Row t of the result is the feature vector of batch t.
inline FeatureMatrix build_matrix(const std::vector<Batch>& batches, int n_components,
                                  double sampling_rate_hz) {
    if (batches.size() < 2)
        throw TooFewBatches(std::to_string(batches.size()) + " batches, need at least 2");
    FeatureMatrix matrix;
    matrix.column_names = feature_column_names(n_components);
    matrix.batch_len = static_cast<long>(batches.front().samples.size());
    matrix.n_components = n_components;
    matrix.sampling_rate_hz = sampling_rate_hz;
    matrix.values.resize(static_cast<long>(batches.size()), 3 * n_components + 1);
    for (std::size_t t = 0; t < batches.size(); ++t) {
        const auto decomposition = decompose(batches[t], n_components, sampling_rate_hz);
        matrix.values.row(static_cast<long>(t)) = extract_row(decomposition).transpose();
    }
    return matrix;
}

inline Eigen::VectorXd column_population_stds(const Eigen::MatrixXd& values) {
    const double t = static_cast<double>(values.rows());
    const Eigen::RowVectorXd means = values.colwise().mean();
    Eigen::VectorXd stds(values.cols());
    for (long j = 0; j < values.cols(); ++j)
        stds[j] = std::sqrt((values.col(j).array() - means[j]).square().sum() / t);
    return stds;
}

/// Indices of columns whose spread is too small to standardize. Frequency
/// features lock to a constant bin on clean periodic signals and show up
/// here; calibration drops them before fitting.
inline std::vector<long> find_degenerate_columns(const FeatureMatrix& matrix,
                                                 double threshold = 1e-12) {
    const Eigen::VectorXd stds = column_population_stds(matrix.values);
    std::vector<long> degenerate;
    for (long j = 0; j < stds.size(); ++j)
        if (stds[j] <= threshold) degenerate.push_back(j);
    return degenerate;
}

inline FeatureMatrix select_columns(const FeatureMatrix& matrix, const std::vector<long>& keep) {
    FeatureMatrix out;
    out.batch_len = matrix.batch_len;
    out.n_components = matrix.n_components;
    out.sampling_rate_hz = matrix.sampling_rate_hz;
    out.values.resize(matrix.rows(), static_cast<long>(keep.size()));
    out.column_names.reserve(keep.size());
    for (std::size_t j = 0; j < keep.size(); ++j) {
        out.values.col(static_cast<long>(j)) = matrix.values.col(keep[j]);
        out.column_names.push_back(matrix.column_names[static_cast<std::size_t>(keep[j])]);
    }
    return out;
}

inline ScalingParams fit_scaler(const FeatureMatrix& matrix) {
    ScalingParams params;
    params.means = matrix.values.colwise().mean();
    params.stds = column_population_stds(matrix.values);
    for (long j = 0; j < params.stds.size(); ++j)
        if (params.stds[j] <= 1e-12)
            throw DegenerateColumn(matrix.column_names[static_cast<std::size_t>(j)]);
    return params;
}

/// Z = (X - mean) / std, always with the calibration-time parameters.
inline Eigen::MatrixXd apply_scaler(const Eigen::MatrixXd& values, const ScalingParams& params) {
    if (values.cols() != params.means.size())
        throw DimensionMismatch("matrix has " + std::to_string(values.cols()) +
                                " columns, scaler expects " + std::to_string(params.means.size()));
    return (values.rowwise() - params.means.transpose()).array().rowwise() /
           params.stds.transpose().array();
}

inline Eigen::VectorXd apply_scaler(const Eigen::VectorXd& row, const ScalingParams& params) {
    if (row.size() != params.means.size())
        throw DimensionMismatch("row has " + std::to_string(row.size()) +
                                " entries, scaler expects " + std::to_string(params.means.size()));
    return (row - params.means).cwiseQuotient(params.stds);
}

/// FeatureMatrix CSV: header row of column names, one row per batch.
inline void write_feature_csv(const FeatureMatrix& matrix, const std::string& path) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw IoFailure("cannot open for writing: " + path);
    for (std::size_t j = 0; j < matrix.column_names.size(); ++j)
        out << (j ? "," : "") << matrix.column_names[j];
    out << '\n';
    char buf[64];
    for (long t = 0; t < matrix.rows(); ++t) {
        for (long j = 0; j < matrix.cols(); ++j) {
            std::snprintf(buf, sizeof(buf), "%.17g", matrix.values(t, j));
            out << (j ? "," : "") << buf;
        }
        out << '\n';
    }
    if (!out) throw IoFailure("write failed: " + path);
}

}  // namespace mspc
