// mspc/spectral.hpp - batching and Fourier decomposition of vibration signals
//
// dft/idft follow the unnormalized forward convention
//   FT_k = sum_n x_n exp(-i 2 pi k n / N)
// with the 1/N factor applied on the inverse so the round trip is the
// identity. Arbitrary lengths are handled in O(N log N): powers of two by
// an iterative radix-2 transform, everything else via Bluestein's chirp-z
// reformulation.
#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <string>
#include <vector>

#include "mspc/errors.hpp"
#include "mspc/signal.hpp"

namespace mspc {

struct Batch {
    std::vector<double> samples;
    long index_t = 0;       // 0-based batch ordinal
    long start_sample = 0;  // offset into the source signal
};

struct Spectrum {
    std::vector<std::complex<double>> coefficients;
    std::size_t size() const { return coefficients.size(); }
};

/// One ranked sinusoidal component of a batch, expanded from a conjugate
/// bin pair so its waveform is real.
struct FtComponent {
    int rank_i = 0;           // 1-based dominance rank
    int bin = 0;              // one-sided bin index, 1..floor(N/2)
    double frequency_hz = 0.0;
    double amplitude = 0.0;   // 2|FT_bin|/N, or |FT_bin|/N at Nyquist
    double phase = 0.0;       // radians
    std::vector<double> waveform;
};

struct FtDecomposition {
    double trend = 0.0;  // batch mean (DC / N)
    std::vector<FtComponent> components;
    std::vector<double> residual;
};

namespace fftdetail {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

// Iterative radix-2 Cooley-Tukey, in place. n must be a power of two.
inline void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double angle = (inverse ? 2.0 : -2.0) * std::numbers::pi / static_cast<double>(len);
        const std::complex<double> wlen(std::cos(angle), std::sin(angle));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t j = 0; j < len / 2; ++j) {
                const std::complex<double> u = a[i + j];
                const std::complex<double> v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
        }
    }
}

// Bluestein's algorithm: express the length-N DFT as a convolution and
// evaluate it with power-of-two FFTs. The chirp exponent is reduced
// modulo 2N before the trig call to keep the angle exact for large n.
inline std::vector<std::complex<double>> fft_bluestein(
    const std::vector<std::complex<double>>& x, bool inverse) {
    const std::size_t n = x.size();
    const double sign = inverse ? 1.0 : -1.0;

    std::vector<std::complex<double>> chirp(n);
    for (std::size_t k = 0; k < n; ++k) {
        const std::size_t m = static_cast<std::size_t>(
            (static_cast<unsigned long long>(k) * k) % (2 * n));
        const double angle = sign * std::numbers::pi * static_cast<double>(m) / static_cast<double>(n);
        chirp[k] = {std::cos(angle), std::sin(angle)};
    }

    std::size_t m = 1;
    while (m < 2 * n - 1) m <<= 1;

    std::vector<std::complex<double>> a(m, {0.0, 0.0});
    std::vector<std::complex<double>> b(m, {0.0, 0.0});
    for (std::size_t k = 0; k < n; ++k) a[k] = x[k] * chirp[k];
    for (std::size_t k = 0; k < n; ++k) {
        b[k] = std::conj(chirp[k]);
        if (k != 0) b[m - k] = std::conj(chirp[k]);
    }
    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t k = 0; k < m; ++k) a[k] *= b[k];
    fft_pow2(a, true);

    std::vector<std::complex<double>> result(n);
    const double scale = 1.0 / static_cast<double>(m);  // radix-2 inverse is unnormalized
    for (std::size_t k = 0; k < n; ++k) result[k] = a[k] * scale * chirp[k];
    return result;
}

// Unnormalized transform of arbitrary length.
inline std::vector<std::complex<double>> fft_any(const std::vector<std::complex<double>>& x,
                                                 bool inverse) {
    if (x.size() <= 1) return x;
    if (is_pow2(x.size())) {
        auto a = x;
        fft_pow2(a, inverse);
        return a;
    }
    return fft_bluestein(x, inverse);
}

}  // namespace fftdetail

/// Splits a signal into floor(len/k) contiguous non-overlapping batches;
/// the trailing remainder is discarded.
inline std::vector<Batch> segment(const SignalSeries& signal, long k) {
    if (k < 8) throw BatchLengthTooSmall("k=" + std::to_string(k) + ", minimum is 8");
    const long len = static_cast<long>(signal.samples.size());
    if (len < k)
        throw SignalTooShort(std::to_string(len) + " samples, batch length " + std::to_string(k));
    const long count = len / k;
    std::vector<Batch> batches;
    batches.reserve(static_cast<std::size_t>(count));
    for (long t = 0; t < count; ++t) {
        Batch b;
        b.index_t = t;
        b.start_sample = t * k;
        b.samples.assign(signal.samples.begin() + t * k, signal.samples.begin() + (t + 1) * k);
        batches.push_back(std::move(b));
    }
    return batches;
}

inline Spectrum dft(const std::vector<double>& x) {
    if (x.empty()) throw NonFiniteInput("empty input");
    std::vector<std::complex<double>> buffer(x.size());
    for (std::size_t n = 0; n < x.size(); ++n) {
        if (!std::isfinite(x[n])) throw NonFiniteInput("sample " + std::to_string(n));
        buffer[n] = {x[n], 0.0};
    }
    return Spectrum{fftdetail::fft_any(buffer, false)};
}

inline std::vector<double> idft(const Spectrum& s) {
    const std::size_t n = s.coefficients.size();
    if (n == 0) throw AsymmetricSpectrum("empty spectrum");
    double scale = 0.0;
    for (const auto& c : s.coefficients) scale = std::max(scale, std::abs(c));
    const double tol = 1e-9 * std::max(1.0, scale);
    for (std::size_t k = 0; k < n; ++k) {
        const auto expected = std::conj(s.coefficients[(n - k) % n]);
        if (std::abs(s.coefficients[k] - expected) > tol)
            throw AsymmetricSpectrum("bin " + std::to_string(k));
    }
    auto buffer = fftdetail::fft_any(s.coefficients, true);
    std::vector<double> x(n);
    const double inv_n = 1.0 / static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) x[i] = buffer[i].real() * inv_n;
    return x;
}

namespace fftdetail {

// One-sided bins ordered by reconstructed amplitude, most dominant first.
// Near-equal amplitudes (1e-9 relative) resolve toward the lower bin so
// the ranking is deterministic in the face of rounding.
inline std::vector<int> rank_bins(const Spectrum& spectrum) {
    const std::size_t n = spectrum.size();
    const int half = static_cast<int>(n / 2);
    struct Entry {
        int bin;
        double amplitude;
    };
    std::vector<Entry> entries;
    entries.reserve(static_cast<std::size_t>(half));
    for (int bin = 1; bin <= half; ++bin) {
        const double mag = std::abs(spectrum.coefficients[static_cast<std::size_t>(bin)]);
        const bool nyquist = (n % 2 == 0) && bin == half;
        entries.push_back({bin, (nyquist ? 1.0 : 2.0) * mag / static_cast<double>(n)});
    }
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
        if (a.amplitude != b.amplitude) return a.amplitude > b.amplitude;
        return a.bin < b.bin;
    });
    // group ties (relative to the group's leading amplitude) and order each by bin
    std::size_t i = 0;
    while (i < entries.size()) {
        std::size_t j = i + 1;
        const double lead = entries[i].amplitude;
        while (j < entries.size() && lead - entries[j].amplitude <= 1e-9 * std::max(lead, 1e-300))
            ++j;
        std::sort(entries.begin() + static_cast<long>(i), entries.begin() + static_cast<long>(j),
                  [](const Entry& a, const Entry& b) { return a.bin < b.bin; });
        i = j;
    }
    std::vector<int> bins;
    bins.reserve(entries.size());
    for (const auto& e : entries) bins.push_back(e.bin);
    return bins;
}

}  // namespace fftdetail

/// Decomposes a batch into trend (the mean), the n most dominant sinusoidal
/// components, and the residual, so that
/// trend + sum(waveforms) + residual == batch.
inline FtDecomposition decompose(const Batch& batch, int n, double sampling_rate_hz) {
    const auto k = static_cast<long>(batch.samples.size());
    const int half = static_cast<int>(k / 2);
    if (n < 1 || n > half)
        throw TooManyComponents("n=" + std::to_string(n) + " with batch length " +
                                std::to_string(k));

    const Spectrum spectrum = dft(batch.samples);
    const double n_d = static_cast<double>(k);

    FtDecomposition result;
    result.trend = spectrum.coefficients[0].real() / n_d;

    const auto ranked = fftdetail::rank_bins(spectrum);
    const double two_pi = 2.0 * std::numbers::pi;
    result.components.reserve(static_cast<std::size_t>(n));
    for (int rank = 0; rank < n; ++rank) {
        const int bin = ranked[static_cast<std::size_t>(rank)];
        const auto coeff = spectrum.coefficients[static_cast<std::size_t>(bin)];
        const bool nyquist = (k % 2 == 0) && bin == half;

        FtComponent comp;
        comp.rank_i = rank + 1;
        comp.bin = bin;
        comp.frequency_hz = bin * sampling_rate_hz / n_d;
        comp.amplitude = (nyquist ? 1.0 : 2.0) * std::abs(coeff) / n_d;
        comp.phase = std::arg(coeff);
        comp.waveform.resize(static_cast<std::size_t>(k));
        for (long t = 0; t < k; ++t)
            comp.waveform[static_cast<std::size_t>(t)] =
                comp.amplitude * std::cos(two_pi * bin * t / n_d + comp.phase);
        result.components.push_back(std::move(comp));
    }

    result.residual = batch.samples;
    for (auto& v : result.residual) v -= result.trend;
    for (const auto& comp : result.components)
        for (std::size_t t = 0; t < result.residual.size(); ++t)
            result.residual[t] -= comp.waveform[t];
    return result;
}

}  // namespace mspc
