// mspc/pca.hpp - principal component model fitted by singular value decomposition
#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <string>
#include <vector>

#include "mspc/errors.hpp"

namespace mspc {

/// PCA of column-standardized data. Loadings are the leading right singular
/// vectors; score variances are population variances of the calibration
/// scores, so the mean calibration T-squared equals n_pcs exactly.
struct PcaModel {
    Eigen::MatrixXd loadings;                  // q x n_pcs, orthonormal columns
    Eigen::VectorXd score_variances;           // lambda_j = s_j^2 / T, descending
    int n_pcs = 0;
    Eigen::VectorXd explained_variance_ratio;  // all q PCs, descending, sums to 1
    long calibration_rows = 0;
};

namespace pcadetail {

// Largest-magnitude entry of each loading column is made positive; SVD signs
// are otherwise arbitrary and would break reproducibility.
inline void apply_sign_convention(Eigen::MatrixXd& loadings) {
    for (long j = 0; j < loadings.cols(); ++j) {
        long max_row = 0;
        double max_abs = -1.0;
        for (long i = 0; i < loadings.rows(); ++i) {
            const double a = std::abs(loadings(i, j));
            if (a > max_abs) {
                max_abs = a;
                max_row = i;
            }
        }
        if (loadings(max_row, j) < 0.0) loadings.col(j) = -loadings.col(j);
    }
}

}  // namespace pcadetail

inline PcaModel fit_pca(const Eigen::MatrixXd& z, int n_pcs) {
    const long t = z.rows();
    const long q = z.cols();
    if (t < 2 || q < 1) throw BadDimensions("need at least 2 rows and 1 column");
    const long max_pcs = std::min<long>(t - 1, q);
    if (n_pcs < 1 || n_pcs > max_pcs)
        throw BadDimensions("n_pcs=" + std::to_string(n_pcs) + " outside [1, " +
                            std::to_string(max_pcs) + "]");

    Eigen::JacobiSVD<Eigen::MatrixXd> svd(z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::VectorXd& singular = svd.singularValues();
    if (singular[n_pcs - 1] < 1e-12)
        throw RankDeficient("singular value " + std::to_string(n_pcs) + " below 1e-12");

    PcaModel model;
    model.n_pcs = n_pcs;
    model.calibration_rows = t;
    model.loadings = svd.matrixV().leftCols(n_pcs);
    pcadetail::apply_sign_convention(model.loadings);

    model.score_variances.resize(n_pcs);
    for (int j = 0; j < n_pcs; ++j)
        model.score_variances[j] = singular[j] * singular[j] / static_cast<double>(t);

    const double total = singular.array().square().sum();
    model.explained_variance_ratio = Eigen::VectorXd::Zero(q);
    for (long j = 0; j < singular.size(); ++j)
        model.explained_variance_ratio[j] = singular[j] * singular[j] / total;
    return model;
}

/// Eigenvalues of the correlation matrix of standardized data, descending.
/// For population-standardized columns these sum to q.
inline Eigen::VectorXd correlation_eigenvalues(const Eigen::MatrixXd& z) {
    if (z.rows() < 2 || z.cols() < 1) throw BadDimensions("need at least 2 rows and 1 column");
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(z);
    Eigen::VectorXd eigenvalues = Eigen::VectorXd::Zero(z.cols());
    const Eigen::VectorXd& singular = svd.singularValues();
    for (long j = 0; j < singular.size(); ++j)
        eigenvalues[j] = singular[j] * singular[j] / static_cast<double>(z.rows());
    return eigenvalues;
}

/// Kaiser rule: retain PCs whose correlation-matrix eigenvalue is at least 1,
/// and never fewer than one.
inline int select_n_pcs(const Eigen::VectorXd& eigenvalues_descending) {
    int count = 0;
    for (long j = 0; j < eigenvalues_descending.size(); ++j)
        if (eigenvalues_descending[j] >= 1.0) ++count;
        else break;
    return std::max(count, 1);
}

inline Eigen::VectorXd project(const PcaModel& model, const Eigen::VectorXd& z) {
    if (z.size() != model.loadings.rows())
        throw DimensionMismatch("vector has " + std::to_string(z.size()) + " entries, model has " +
                                std::to_string(model.loadings.rows()) + " features");
    return model.loadings.transpose() * z;
}

inline Eigen::VectorXd reconstruct(const PcaModel& model, const Eigen::VectorXd& scores) {
    if (scores.size() != model.n_pcs)
        throw DimensionMismatch("score vector has " + std::to_string(scores.size()) +
                                " entries, model retains " + std::to_string(model.n_pcs) + " PCs");
    return model.loadings * scores;
}

}  // namespace mspc
