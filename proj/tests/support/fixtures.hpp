// Frozen desk-scale fixture shared by the unit and acceptance suites.
// Seeds and the (batch length, component count) pair were chosen once, with
// verified margins: the healthy calibration run stays inside its own alarm
// limits, a fresh 10 s healthy signal raises no false alarm, and every fault
// batch exceeds an alarm by several orders of magnitude.
#pragma once

#include <cstdint>
#include <vector>

#include "mspc/charts.hpp"
#include "mspc/signal.hpp"
#include "mspc/synth.hpp"

namespace fixtures {

inline constexpr long kBatchLen = 4950;
inline constexpr int kComponents = 4;
inline constexpr std::uint64_t kCalSeed = 38;
inline constexpr std::uint64_t kHeldOutSeed = 147;
inline constexpr std::uint64_t kFaultSeedBase = 200;  // 201..209
inline constexpr double kFaultAmps[] = {0.8, 1.6, 3.2};

inline mspc::SignalSeries healthy_calibration() {
    return mspc::generate_normal(mspc::standard_normal_params(kCalSeed));
}

inline mspc::SignalSeries healthy_held_out() {
    return mspc::generate_normal(mspc::standard_normal_params(kHeldOutSeed));
}

/// Nine fault signals: ball/inner/outer at three impulse amplitudes each.
inline std::vector<mspc::SignalSeries> fault_suite() {
    std::vector<mspc::SignalSeries> signals;
    std::uint64_t seed = kFaultSeedBase;
    for (auto location :
         {mspc::FaultLocation::Ball, mspc::FaultLocation::Inner, mspc::FaultLocation::Outer}) {
        for (double amp : kFaultAmps) {
            auto params = mspc::standard_normal_params(++seed);
            signals.push_back(mspc::generate_fault(params, mspc::fault_preset(location, amp),
                                                   mspc::Label::fault(location, 0.007)));
        }
    }
    return signals;
}

inline mspc::ModelBundle calibrated_bundle() {
    return mspc::calibrate_bundle(healthy_calibration(), kBatchLen, kComponents);
}

}  // namespace fixtures
