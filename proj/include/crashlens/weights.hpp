#pragma once

#include <cmath>
#include <vector>

#include "crashlens/errors.hpp"

namespace crashlens {

enum class ThetaMode {
    fraction,  // decay = theta * window (default; theta 0.3 on a 24h window -> 7.2h)
    literal,   // decay = theta as given
};

// Exponential observation weights w_t = w0 * exp((t - window)/decay), t = 1..window,
// normalised so they sum to 1; strictly increasing, latest observation heaviest.
struct WeightScheme {
    int window = 0;
    double theta = 0.0;   // as supplied
    double decay = 0.0;   // effective decay in observations
    std::vector<double> weights;
};

inline WeightScheme make_weights(int window, double theta,
                                 ThetaMode mode = ThetaMode::fraction) {
    if (window < 2) throw InvalidParameter("weight window must be >= 2");
    if (!(theta > 0.0)) throw InvalidParameter("theta must be > 0");
    WeightScheme ws;
    ws.window = window;
    ws.theta = theta;
    ws.decay = (mode == ThetaMode::fraction) ? theta * window : theta;
    ws.weights.resize(static_cast<std::size_t>(window));
    double sum = 0.0;
    for (int t = 1; t <= window; ++t) {
        const double w = std::exp(static_cast<double>(t - window) / ws.decay);
        ws.weights[static_cast<std::size_t>(t - 1)] = w;
        sum += w;
    }
    for (double& w : ws.weights) w /= sum;
    return ws;
}

}  // namespace crashlens
