#pragma once

#include <cstddef>
#include <cstdint>

namespace roundsim::kernels {

// Data-parallel primitives behind the simulator's inner loops: ring-distance
// range tests for delivery and density windows, the mean/sigma reductions of
// the speed aggregator, acceptance-band classification, and the squared
// distances used by guard election.
//
// Every implementation follows the same arithmetic contract so that scalar
// and SIMD variants produce bit-identical results:
//   * reductions keep four strided partial accumulators (lane j owns the
//     elements with index = j mod 4) and combine them left to right;
//   * element-wise operations evaluate the documented expression exactly as
//     written, with no fused multiply-add and no reassociation.
// The equivalence tests assert exact equality between variants, and runs are
// reproducible regardless of which variant the dispatcher picks.

struct Ops {
    const char* name;

    /// Sum of x[0..n). Four-lane strided accumulation.
    double (*sum)(const double* x, std::size_t n);

    /// Sum of (x[i] - mean)^2 over x[0..n). Four-lane strided accumulation.
    double (*sum_sq_dev)(const double* x, std::size_t n, double mean);

    /// out[i] = clamp(s_max - (rho[i] / rho_max) * s_max, 0, s_max).
    void (*greenshield)(const double* rho, std::size_t n, double s_max, double rho_max,
                        double* out);

    /// out[i] = min(|pos[i] - origin|, length - |pos[i] - origin|).
    void (*ring_dist)(const double* pos, std::size_t n, double origin, double length,
                      double* out);

    /// Number of i with ring distance(pos[i], origin) <= radius.
    std::size_t (*count_within)(const double* pos, std::size_t n, double origin, double length,
                                double radius);

    /// out[i] = ring distance(pos[i], origin) <= radius ? 1 : 0.
    void (*within_mask)(const double* pos, std::size_t n, double origin, double length,
                        double radius, std::uint8_t* out);

    /// out[i] = (lo < x[i] && x[i] < hi) ? 1 : 0. Bounds are exclusive.
    void (*band_accept)(const double* x, std::size_t n, double lo, double hi, std::uint8_t* out);

    /// out[i] = (xs[i] - cx)^2 + (ys[i] - cy)^2.
    void (*dist2)(const double* xs, const double* ys, std::size_t n, double cx, double cy,
                  double* out);
};

enum class Impl { Auto, Scalar, Avx2 };

/// Portable reference implementation. Always available.
const Ops& scalar_ops();

/// AVX2 implementation, or nullptr when the CPU (or build) lacks AVX2.
const Ops* avx2_ops();

/// Currently dispatched table. Defaults to the best available variant;
/// the ROUND_SIMD environment variable (auto|scalar|avx2) overrides.
const Ops& active();

/// Select a variant explicitly. Throws InvalidParameter if unavailable.
void select(Impl impl);

Impl selected();

}  // namespace roundsim::kernels
