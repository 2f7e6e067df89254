// mspc/synth.hpp - synthetic healthy / faulty vibration signal generators
#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mspc/errors.hpp"
#include "mspc/signal.hpp"

namespace mspc {

/// Parameters of the healthy baseline: a sum of shaft harmonics plus
/// white Gaussian noise, sampled at a fixed rate.
struct SynthParams {
    double sampling_rate_hz = 12000.0;
    double duration_s = 10.0;
    double shaft_hz = 29.95;  // ~1797 rpm
    std::vector<std::pair<int, double>> harmonic_amps = {{1, 0.10}, {2, 0.04}, {3, 0.02}};
    double noise_sigma = 0.02;
    std::uint64_t seed = 1;
};

/// A periodic impulse train, each impulse ringing a decaying resonance.
/// This is the classic localized-defect signature shape.
struct FaultSpec {
    double impulse_rate_hz = 160.0;
    double impulse_amp = 1.6;
    double resonance_hz = 3200.0;
    double decay = 800.0;  // 1/s
};

namespace detail {

inline void validate(const SynthParams& p) {
    if (p.sampling_rate_hz <= 0.0) throw InvalidParams("sampling_rate_hz must be > 0");
    if (p.duration_s <= 0.0) throw InvalidParams("duration_s must be > 0");
    if (p.shaft_hz <= 0.0) throw InvalidParams("shaft_hz must be > 0");
    if (p.noise_sigma < 0.0) throw InvalidParams("noise_sigma must be >= 0");
    if (p.harmonic_amps.empty()) throw InvalidParams("at least one harmonic required");
    std::set<int> multiples;
    bool any_positive = false;
    for (const auto& [multiple, amplitude] : p.harmonic_amps) {
        if (multiple < 1) throw InvalidParams("harmonic multiple must be >= 1");
        if (amplitude < 0.0) throw InvalidParams("harmonic amplitude must be >= 0");
        if (!multiples.insert(multiple).second)
            throw InvalidParams("harmonic multiples must be distinct");
        any_positive = any_positive || amplitude > 0.0;
    }
    if (!any_positive) throw InvalidParams("at least one harmonic amplitude must be > 0");
}

inline void validate(const SynthParams& p, const FaultSpec& f) {
    if (f.impulse_rate_hz <= 0.0) throw InvalidParams("impulse_rate_hz must be > 0");
    if (f.impulse_rate_hz >= p.sampling_rate_hz / 2.0)
        throw InvalidParams("impulse_rate_hz must be below the Nyquist rate");
    if (f.impulse_amp < 0.0) throw InvalidParams("impulse_amp must be >= 0");
    if (f.resonance_hz <= 0.0 || f.resonance_hz >= p.sampling_rate_hz / 2.0)
        throw InvalidParams("resonance_hz must lie in (0, fs/2)");
    if (f.decay <= 0.0) throw InvalidParams("decay must be > 0");
}

inline std::vector<double> harmonic_plus_noise(const SynthParams& p) {
    const auto n_samples = static_cast<std::size_t>(std::llround(p.duration_s * p.sampling_rate_hz));
    std::vector<double> x(n_samples, 0.0);
    const double two_pi = 2.0 * std::numbers::pi;
    for (const auto& [multiple, amplitude] : p.harmonic_amps) {
        if (amplitude == 0.0) continue;
        const double w = two_pi * multiple * p.shaft_hz / p.sampling_rate_hz;
        for (std::size_t n = 0; n < n_samples; ++n) x[n] += amplitude * std::sin(w * n);
    }
    if (p.noise_sigma > 0.0) {
        std::mt19937_64 rng(p.seed);
        std::normal_distribution<double> gauss(0.0, p.noise_sigma);
        for (auto& v : x) v += gauss(rng);
    }
    return x;
}

}  // namespace detail

inline SignalSeries generate_normal(const SynthParams& p) {
    detail::validate(p);
    SignalSeries series;
    series.samples = detail::harmonic_plus_noise(p);
    series.sampling_rate_hz = p.sampling_rate_hz;
    series.label = Label::normal();
    std::ostringstream id;
    id << "synth:normal:seed=" << p.seed;
    series.source_id = id.str();
    return series;
}

/// Healthy baseline plus the impulse train. The noise stream is consumed
/// identically to generate_normal, so for a fixed seed the difference
/// between the two signals is exactly the impulse-response train.
inline SignalSeries generate_fault(const SynthParams& p, const FaultSpec& f,
                                   Label label = Label::fault(FaultLocation::Inner, 0.0)) {
    detail::validate(p);
    detail::validate(p, f);
    SignalSeries series;
    series.samples = detail::harmonic_plus_noise(p);
    series.sampling_rate_hz = p.sampling_rate_hz;

    const auto n_samples = static_cast<long>(series.samples.size());
    const double fs = p.sampling_rate_hz;
    const double two_pi = 2.0 * std::numbers::pi;
    // ring each impulse until the envelope is negligible
    const long ring_len = std::min<long>(
        n_samples, static_cast<long>(std::ceil(fs * 27.7 / f.decay)) + 1);
    for (long j = 0;; ++j) {
        const long onset = std::llround(j * fs / f.impulse_rate_hz);
        if (onset >= n_samples) break;
        const long end = std::min(n_samples, onset + ring_len);
        for (long n = onset; n < end; ++n) {
            const double tau = static_cast<double>(n - onset) / fs;
            series.samples[n] +=
                f.impulse_amp * std::exp(-f.decay * tau) * std::sin(two_pi * f.resonance_hz * tau);
        }
    }

    series.label = label;
    std::ostringstream id;
    id << "synth:fault:" << to_string(label.location) << ":amp=" << f.impulse_amp
       << ":seed=" << p.seed;
    series.source_id = id.str();
    return series;
}

// ---- desk-scale presets -----------------------------------------------------
//
// The defaults mirror a 12 kHz accelerometer on a shaft near 1800 rpm. The
// impulse rates divide the sampling rate so the trains are exactly periodic,
// and each resonance is a multiple of its impulse rate.

inline SynthParams standard_normal_params(std::uint64_t seed = 1) {
    SynthParams p;
    p.sampling_rate_hz = 12000.0;
    p.duration_s = 10.0;
    p.shaft_hz = 30.0;
    p.harmonic_amps = {{1, 0.10}, {2, 0.04}, {3, 0.02}};
    p.noise_sigma = 0.02;
    p.seed = seed;
    return p;
}

inline FaultSpec fault_preset(FaultLocation location, double impulse_amp = 1.6) {
    FaultSpec f;
    switch (location) {
        case FaultLocation::Inner:
            f.impulse_rate_hz = 160.0;  // 75-sample spacing at 12 kHz
            f.resonance_hz = 3200.0;
            f.decay = 800.0;
            break;
        case FaultLocation::Outer:
            f.impulse_rate_hz = 120.0;  // 100-sample spacing
            f.resonance_hz = 2400.0;
            f.decay = 600.0;
            break;
        case FaultLocation::Ball:
            f.impulse_rate_hz = 75.0;  // 160-sample spacing
            f.resonance_hz = 3000.0;
            f.decay = 1000.0;
            break;
    }
    f.impulse_amp = impulse_amp;
    return f;
}

}  // namespace mspc
