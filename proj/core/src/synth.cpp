#include "histofeat/synth.hpp"

#include "histofeat/errors.hpp"
#include "histofeat/rng.hpp"

#include <cmath>
#include <numbers>

namespace histofeat {

std::string fault_state_name(FaultState state) {
    switch (state) {
        case FaultState::healthy: return "healthy";
        case FaultState::inner_race: return "inner-race";
        case FaultState::outer_race: return "outer-race";
        case FaultState::ball: return "ball";
    }
    return "healthy";
}

FaultState fault_state_from_name(const std::string& name) {
    if (name == "healthy") return FaultState::healthy;
    if (name == "inner-race") return FaultState::inner_race;
    if (name == "outer-race") return FaultState::outer_race;
    if (name == "ball") return FaultState::ball;
    throw ConfigError("unknown fault state '" + name + "'");
}

SignalSeries gen_gaussian_signal(std::size_t n, double mean, double stddev, std::uint64_t seed) {
    if (n < 2) throw DataError("gen_gaussian_signal: need n >= 2");
    if (!(stddev > 0.0)) throw DataError("gen_gaussian_signal: stddev must be positive");
    SignalSeries series;
    series.values.resize(n);
    Rng rng(seed);
    for (double& v : series.values) v = mean + stddev * rng.next_gaussian();
    series.source_id = "synth:gaussian";
    return series;
}

SignalSeries gen_bearing_state(const FaultSpec& spec, std::uint64_t seed) {
    if (!(spec.noise_std > 0.0)) throw DataError("gen_bearing_state: noise_std must be positive");
    if (!(spec.duration_s > 0.0)) throw DataError("gen_bearing_state: duration must be positive");
    if (!(spec.sample_rate_hz > 0.0)) {
        throw DataError("gen_bearing_state: sample rate must be positive");
    }
    if (!(spec.impulse_rate_hz > 0.0)) {
        throw DataError("gen_bearing_state: impulse rate must be positive");
    }
    if (!(spec.resonance_hz > 0.0)) throw DataError("gen_bearing_state: resonance must be positive");
    if (!(spec.decay > 0.0)) throw DataError("gen_bearing_state: decay must be positive");
    if (!(spec.resonance_hz < spec.sample_rate_hz / 2.0)) {
        throw DataError("gen_bearing_state: resonance must stay below half the sample rate");
    }
    double n_real = spec.duration_s * spec.sample_rate_hz;
    if (!(n_real >= 1000.0)) {
        throw DataError("gen_bearing_state: duration * sample rate must be at least 1000");
    }
    const std::size_t n = static_cast<std::size_t>(std::llround(n_real));

    SignalSeries series;
    series.values.resize(n);
    Rng rng(seed);
    for (double& v : series.values) v = spec.noise_std * rng.next_gaussian();

    if (spec.state != FaultState::healthy) {
        // Each impulse rings until its envelope drops below 1e-4 of the peak.
        const double ring_s = std::log(1e4) / spec.decay;
        const double omega = 2.0 * std::numbers::pi * spec.resonance_hz;
        const double period_s = 1.0 / spec.impulse_rate_hz;
        for (std::size_t k = 0;; ++k) {
            double t0 = static_cast<double>(k) * period_s;
            if (t0 >= spec.duration_s) break;
            std::size_t first = static_cast<std::size_t>(std::ceil(t0 * spec.sample_rate_hz));
            for (std::size_t i = first; i < n; ++i) {
                double dt = static_cast<double>(i) / spec.sample_rate_hz - t0;
                if (dt > ring_s) break;
                series.values[i] += spec.impulse_amp * std::exp(-spec.decay * dt) *
                                    std::sin(omega * dt);
            }
        }
    }

    series.sample_rate_hz = spec.sample_rate_hz;
    series.state_label = fault_state_name(spec.state);
    series.source_id = "synth:" + series.state_label;
    return series;
}

std::vector<FaultSpec> default_fault_suite() {
    std::vector<FaultSpec> suite(4);

    suite[0].state = FaultState::healthy;
    suite[0].impulse_amp = 0.0;

    suite[1].state = FaultState::inner_race;
    suite[1].impulse_rate_hz = 160.0;
    suite[1].resonance_hz = 3100.0;
    suite[1].decay = 900.0;
    suite[1].impulse_amp = 3.0;

    suite[2].state = FaultState::outer_race;
    suite[2].impulse_rate_hz = 105.0;
    suite[2].resonance_hz = 2650.0;
    suite[2].decay = 700.0;
    suite[2].impulse_amp = 2.2;

    suite[3].state = FaultState::ball;
    suite[3].impulse_rate_hz = 70.0;
    suite[3].resonance_hz = 2200.0;
    suite[3].decay = 500.0;
    suite[3].impulse_amp = 1.5;

    for (FaultSpec& spec : suite) {
        spec.noise_std = 0.5;
        spec.duration_s = 1.0;
        spec.sample_rate_hz = 12000.0;
    }
    return suite;
}

} // namespace histofeat
