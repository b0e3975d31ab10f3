#pragma once

#include "histofeat/signal.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace histofeat {

enum class FaultState { healthy, inner_race, outer_race, ball };

std::string fault_state_name(FaultState state);
FaultState fault_state_from_name(const std::string& name);

// Recipe for one synthetic machine-health state: Gaussian background noise,
// plus (for fault states) a periodic train of exponentially decaying
// sinusoidal impulses at the state's characteristic rate.
struct FaultSpec {
    FaultState state = FaultState::healthy;
    double impulse_rate_hz = 50.0;
    double resonance_hz = 1000.0;
    double decay = 500.0; // 1/s
    double impulse_amp = 0.0;
    double noise_std = 1.0;
    double duration_s = 1.0;
    double sample_rate_hz = 12000.0;
};

// n Gaussian samples from the fixed, platform-stable generator.
SignalSeries gen_gaussian_signal(std::size_t n, double mean, double stddev, std::uint64_t seed);

// One labeled recording of round(duration * sample_rate) samples; healthy is
// noise only, fault states add the impulse train.
SignalSeries gen_bearing_state(const FaultSpec& spec, std::uint64_t seed);

// Four-class suite (healthy, inner race, outer race, ball) with distinct
// impulse rates, shared noise level, 12 kHz rate, one second each.
std::vector<FaultSpec> default_fault_suite();

} // namespace histofeat
