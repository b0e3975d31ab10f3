#pragma once

#include <string>
#include <vector>

namespace histofeat {

// One labeled 1D sensor recording. values are raw amplitudes in sensor units,
// non-empty and finite; sample_rate_hz > 0.
struct SignalSeries {
    std::vector<double> values;
    double sample_rate_hz = 1.0;
    std::string state_label;
    std::string source_id;
};

} // namespace histofeat
