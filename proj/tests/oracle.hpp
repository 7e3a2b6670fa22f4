#pragma once

// Brute-force reference for the aggregation and hypothesis test. Plain
// sequential arithmetic, no shared code with the library kernels, so it can
// arbitrate their results.

#include <cmath>
#include <cstdint>
#include <map>

namespace oracle {

struct Result {
    double s_avg = 0.0;
    double sigma = 0.0;
    std::map<std::uint32_t, bool> accept;  // sender id -> accepted
    int rlt = 0;
};

inline Result run(const std::map<std::uint32_t, double>& speeds, double epsilon_sigma = 1e-6) {
    Result r;
    double sum = 0.0;
    for (const auto& [id, s] : speeds) {
        sum += s;
    }
    const auto n = static_cast<double>(speeds.size());
    r.s_avg = sum / n;
    double ss = 0.0;
    for (const auto& [id, s] : speeds) {
        ss += (s - r.s_avg) * (s - r.s_avg);
    }
    r.sigma = std::sqrt(ss / n);
    for (const auto& [id, s] : speeds) {
        const bool ok =
            r.sigma < epsilon_sigma || (r.s_avg - r.sigma < s && s < r.s_avg + r.sigma);
        r.accept[id] = ok;
        if (!ok) {
            r.rlt = 1;
        }
    }
    return r;
}

}  // namespace oracle
