#include "round/kernels.hpp"

#include <algorithm>
#include <cmath>

// Reference kernels. The four-accumulator layout in the reductions mirrors
// the SIMD lane assignment; see the contract note in kernels.hpp.

namespace roundsim::kernels {
namespace {

double sum_scalar(const double* x, std::size_t n) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        acc[i & 3] += x[i];
    }
    return ((acc[0] + acc[1]) + acc[2]) + acc[3];
}

double sum_sq_dev_scalar(const double* x, std::size_t n, double mean) {
    double acc[4] = {0.0, 0.0, 0.0, 0.0};
    for (std::size_t i = 0; i < n; ++i) {
        const double d = x[i] - mean;
        acc[i & 3] += d * d;
    }
    return ((acc[0] + acc[1]) + acc[2]) + acc[3];
}

void greenshield_scalar(const double* rho, std::size_t n, double s_max, double rho_max,
                        double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double s = s_max - (rho[i] / rho_max) * s_max;
        out[i] = std::min(s_max, std::max(0.0, s));
    }
}

inline double ring_dist_one(double p, double origin, double length) {
    const double d = std::fabs(p - origin);
    return std::min(d, length - d);
}

void ring_dist_scalar(const double* pos, std::size_t n, double origin, double length,
                      double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = ring_dist_one(pos[i], origin, length);
    }
}

std::size_t count_within_scalar(const double* pos, std::size_t n, double origin, double length,
                                double radius) {
    std::size_t count = 0;
    for (std::size_t i = 0; i < n; ++i) {
        count += ring_dist_one(pos[i], origin, length) <= radius ? 1 : 0;
    }
    return count;
}

void within_mask_scalar(const double* pos, std::size_t n, double origin, double length,
                        double radius, std::uint8_t* out) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = ring_dist_one(pos[i], origin, length) <= radius ? 1 : 0;
    }
}

void band_accept_scalar(const double* x, std::size_t n, double lo, double hi, std::uint8_t* out) {
    for (std::size_t i = 0; i < n; ++i) {
        out[i] = (lo < x[i] && x[i] < hi) ? 1 : 0;
    }
}

void dist2_scalar(const double* xs, const double* ys, std::size_t n, double cx, double cy,
                  double* out) {
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = xs[i] - cx;
        const double dy = ys[i] - cy;
        out[i] = dx * dx + dy * dy;
    }
}

constexpr Ops kScalarOps = {
    "scalar",        sum_scalar,         sum_sq_dev_scalar, greenshield_scalar,
    ring_dist_scalar, count_within_scalar, within_mask_scalar, band_accept_scalar,
    dist2_scalar,
};

}  // namespace

const Ops& scalar_ops() { return kScalarOps; }

}  // namespace roundsim::kernels
