#include "round/kernels.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>

// AVX2 variants. Compiled with -mavx2 -mno-fma so that no multiply-add gets
// fused; every lane performs the same IEEE operations as the scalar kernels,
// which keeps the two variants bit-identical (asserted by the equivalence
// tests). Tails fold into the lane accumulators so the strided-reduction
// contract holds for any n.

namespace roundsim::kernels {
namespace {

inline __m256d abs_pd(__m256d v) {
    return _mm256_andnot_pd(_mm256_set1_pd(-0.0), v);
}

double sum_avx2(const double* x, std::size_t n) {
    __m256d vacc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        vacc = _mm256_add_pd(vacc, _mm256_loadu_pd(x + i));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vacc);
    for (std::size_t j = 0; i < n; ++i, ++j) {
        lanes[j] += x[i];
    }
    return ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
}

double sum_sq_dev_avx2(const double* x, std::size_t n, double mean) {
    const __m256d vmean = _mm256_set1_pd(mean);
    __m256d vacc = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = _mm256_sub_pd(_mm256_loadu_pd(x + i), vmean);
        vacc = _mm256_add_pd(vacc, _mm256_mul_pd(d, d));
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, vacc);
    for (std::size_t j = 0; i < n; ++i, ++j) {
        const double d = x[i] - mean;
        lanes[j] += d * d;
    }
    return ((lanes[0] + lanes[1]) + lanes[2]) + lanes[3];
}

void greenshield_avx2(const double* rho, std::size_t n, double s_max, double rho_max,
                      double* out) {
    const __m256d vsmax = _mm256_set1_pd(s_max);
    const __m256d vrhomax = _mm256_set1_pd(rho_max);
    const __m256d vzero = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d r = _mm256_loadu_pd(rho + i);
        __m256d s = _mm256_sub_pd(vsmax, _mm256_mul_pd(_mm256_div_pd(r, vrhomax), vsmax));
        s = _mm256_min_pd(vsmax, _mm256_max_pd(vzero, s));
        _mm256_storeu_pd(out + i, s);
    }
    for (; i < n; ++i) {
        const double s = s_max - (rho[i] / rho_max) * s_max;
        out[i] = std::min(s_max, std::max(0.0, s));
    }
}

inline __m256d ring_dist_pd(__m256d p, __m256d origin, __m256d length) {
    const __m256d d = abs_pd(_mm256_sub_pd(p, origin));
    return _mm256_min_pd(d, _mm256_sub_pd(length, d));
}

inline double ring_dist_one(double p, double origin, double length) {
    const double d = std::fabs(p - origin);
    return std::min(d, length - d);
}

void ring_dist_avx2(const double* pos, std::size_t n, double origin, double length, double* out) {
    const __m256d vo = _mm256_set1_pd(origin);
    const __m256d vl = _mm256_set1_pd(length);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        _mm256_storeu_pd(out + i, ring_dist_pd(_mm256_loadu_pd(pos + i), vo, vl));
    }
    for (; i < n; ++i) {
        out[i] = ring_dist_one(pos[i], origin, length);
    }
}

std::size_t count_within_avx2(const double* pos, std::size_t n, double origin, double length,
                              double radius) {
    const __m256d vo = _mm256_set1_pd(origin);
    const __m256d vl = _mm256_set1_pd(length);
    const __m256d vr = _mm256_set1_pd(radius);
    std::size_t count = 0;
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = ring_dist_pd(_mm256_loadu_pd(pos + i), vo, vl);
        const int bits = _mm256_movemask_pd(_mm256_cmp_pd(d, vr, _CMP_LE_OQ));
        count += static_cast<std::size_t>(__builtin_popcount(static_cast<unsigned>(bits)));
    }
    for (; i < n; ++i) {
        count += ring_dist_one(pos[i], origin, length) <= radius ? 1 : 0;
    }
    return count;
}

void within_mask_avx2(const double* pos, std::size_t n, double origin, double length,
                      double radius, std::uint8_t* out) {
    const __m256d vo = _mm256_set1_pd(origin);
    const __m256d vl = _mm256_set1_pd(length);
    const __m256d vr = _mm256_set1_pd(radius);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d = ring_dist_pd(_mm256_loadu_pd(pos + i), vo, vl);
        const int bits = _mm256_movemask_pd(_mm256_cmp_pd(d, vr, _CMP_LE_OQ));
        out[i + 0] = static_cast<std::uint8_t>(bits & 1);
        out[i + 1] = static_cast<std::uint8_t>((bits >> 1) & 1);
        out[i + 2] = static_cast<std::uint8_t>((bits >> 2) & 1);
        out[i + 3] = static_cast<std::uint8_t>((bits >> 3) & 1);
    }
    for (; i < n; ++i) {
        out[i] = ring_dist_one(pos[i], origin, length) <= radius ? 1 : 0;
    }
}

void band_accept_avx2(const double* x, std::size_t n, double lo, double hi, std::uint8_t* out) {
    const __m256d vlo = _mm256_set1_pd(lo);
    const __m256d vhi = _mm256_set1_pd(hi);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v = _mm256_loadu_pd(x + i);
        const __m256d m = _mm256_and_pd(_mm256_cmp_pd(vlo, v, _CMP_LT_OQ),
                                        _mm256_cmp_pd(v, vhi, _CMP_LT_OQ));
        const int bits = _mm256_movemask_pd(m);
        out[i + 0] = static_cast<std::uint8_t>(bits & 1);
        out[i + 1] = static_cast<std::uint8_t>((bits >> 1) & 1);
        out[i + 2] = static_cast<std::uint8_t>((bits >> 2) & 1);
        out[i + 3] = static_cast<std::uint8_t>((bits >> 3) & 1);
    }
    for (; i < n; ++i) {
        out[i] = (lo < x[i] && x[i] < hi) ? 1 : 0;
    }
}

void dist2_avx2(const double* xs, const double* ys, std::size_t n, double cx, double cy,
                double* out) {
    const __m256d vcx = _mm256_set1_pd(cx);
    const __m256d vcy = _mm256_set1_pd(cy);
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d dx = _mm256_sub_pd(_mm256_loadu_pd(xs + i), vcx);
        const __m256d dy = _mm256_sub_pd(_mm256_loadu_pd(ys + i), vcy);
        _mm256_storeu_pd(out + i, _mm256_add_pd(_mm256_mul_pd(dx, dx), _mm256_mul_pd(dy, dy)));
    }
    for (; i < n; ++i) {
        const double dx = xs[i] - cx;
        const double dy = ys[i] - cy;
        out[i] = dx * dx + dy * dy;
    }
}

constexpr Ops kAvx2Ops = {
    "avx2",        sum_avx2,         sum_sq_dev_avx2, greenshield_avx2, ring_dist_avx2,
    count_within_avx2, within_mask_avx2, band_accept_avx2, dist2_avx2,
};

}  // namespace

const Ops* avx2_ops() {
    return __builtin_cpu_supports("avx2") ? &kAvx2Ops : nullptr;
}

}  // namespace roundsim::kernels
