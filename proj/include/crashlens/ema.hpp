#pragma once

#include <vector>

#include "crashlens/errors.hpp"

namespace crashlens {

// s_1 = x_1; s_t = alpha*x_t + (1-alpha)*s_{t-1}
inline std::vector<double> ema(const std::vector<double>& x, double alpha = 0.3) {
    if (!(alpha > 0.0) || alpha > 1.0) throw InvalidParameter("ema alpha must be in (0,1]");
    std::vector<double> out;
    out.reserve(x.size());
    double s = 0.0;
    for (std::size_t t = 0; t < x.size(); ++t) {
        s = (t == 0) ? x[0] : alpha * x[t] + (1.0 - alpha) * s;
        out.push_back(s);
    }
    return out;
}

}  // namespace crashlens
