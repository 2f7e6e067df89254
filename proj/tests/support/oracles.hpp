// Independent reference implementations used only by tests. These stay
// deliberately naive so they cannot share a failure mode with the library.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

namespace oracles {

/// Direct O(N^2) evaluation of FT_k = sum_n x_n exp(-i 2 pi k n / N).
/// Twiddles are indexed by (k*n) mod N so the angles stay exact.
inline std::vector<std::complex<double>> naive_dft(const std::vector<double>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> twiddle(n);
    for (std::size_t m = 0; m < n; ++m) {
        const double angle = -2.0 * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
        twiddle[m] = {std::cos(angle), std::sin(angle)};
    }
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t i = 0; i < n; ++i) acc += x[i] * twiddle[(k * i) % n];
        out[k] = acc;
    }
    return out;
}

struct EigenDecomposition {
    Eigen::VectorXd values;   // descending
    Eigen::MatrixXd vectors;  // columns aligned with values
};

/// Cyclic Jacobi eigendecomposition of a symmetric matrix. Quadratically
/// convergent; plenty for the small covariance matrices in these tests.
inline EigenDecomposition jacobi_eigen_sym(Eigen::MatrixXd a) {
    const long n = a.rows();
    Eigen::MatrixXd v = Eigen::MatrixXd::Identity(n, n);
    for (int sweep = 0; sweep < 100; ++sweep) {
        double off = 0.0;
        for (long p = 0; p < n; ++p)
            for (long q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
        if (off < 1e-26) break;
        for (long p = 0; p < n; ++p) {
            for (long q = p + 1; q < n; ++q) {
                if (std::abs(a(p, q)) < 1e-300) continue;
                const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
                const double t = (theta >= 0 ? 1.0 : -1.0) /
                                 (std::abs(theta) + std::sqrt(theta * theta + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;
                for (long i = 0; i < n; ++i) {
                    const double aip = a(i, p), aiq = a(i, q);
                    a(i, p) = c * aip - s * aiq;
                    a(i, q) = s * aip + c * aiq;
                }
                for (long i = 0; i < n; ++i) {
                    const double api = a(p, i), aqi = a(q, i);
                    a(p, i) = c * api - s * aqi;
                    a(q, i) = s * api + c * aqi;
                }
                for (long i = 0; i < n; ++i) {
                    const double vip = v(i, p), viq = v(i, q);
                    v(i, p) = c * vip - s * viq;
                    v(i, q) = s * vip + c * viq;
                }
            }
        }
    }
    std::vector<long> order(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
    std::sort(order.begin(), order.end(), [&a](long x, long y) { return a(x, x) > a(y, y); });
    EigenDecomposition result;
    result.values.resize(n);
    result.vectors.resize(n, n);
    for (long j = 0; j < n; ++j) {
        result.values[j] = a(order[static_cast<std::size_t>(j)], order[static_cast<std::size_t>(j)]);
        result.vectors.col(j) = v.col(order[static_cast<std::size_t>(j)]);
    }
    return result;
}

}  // namespace oracles
