#include "jls/kernels.hpp"

#if defined(JLS_HAVE_NEON)

#include <arm_neon.h>

// Two doubles per iteration; same masked-accumulation scheme as the AVX2
// backend with float64x2 lanes.

namespace jls::kernels::detail {

namespace {

inline uint64x2_t lane_mask(const std::int8_t* geno, int group) {
    const uint64_t m0 = geno[0] == group ? ~0ULL : 0ULL;
    const uint64_t m1 = geno[1] == group ? ~0ULL : 0ULL;
    uint64x2_t m = vdupq_n_u64(m0);
    m = vsetq_lane_u64(m1, m, 1);
    return m;
}

inline float64x2_t masked(uint64x2_t mask, float64x2_t v) {
    return vreinterpretq_f64_u64(vandq_u64(mask, vreinterpretq_u64_f64(v)));
}

}  // namespace

GroupMoments grouped_moments_neon(const std::int8_t* geno, const double* y,
                                  std::size_t n) {
    GroupMoments m;
    float64x2_t sum[3] = {vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0)};
    float64x2_t sumsq[3] = {vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0)};

    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v = vld1q_f64(y + i);
        const float64x2_t v2 = vmulq_f64(v, v);
        for (int g = 0; g < 3; ++g) {
            const uint64x2_t mask = lane_mask(geno + i, g);
            sum[g] = vaddq_f64(sum[g], masked(mask, v));
            sumsq[g] = vaddq_f64(sumsq[g], masked(mask, v2));
            m.count[g] += (geno[i] == g) + (geno[i + 1] == g);
        }
    }
    for (int g = 0; g < 3; ++g) {
        m.sum[g] = vaddvq_f64(sum[g]);
        m.sumsq[g] = vaddvq_f64(sumsq[g]);
    }
    for (; i < n; ++i) {
        const int g = geno[i];
        const double v = y[i];
        ++m.count[g];
        m.sum[g] += v;
        m.sumsq[g] += v * v;
    }
    return m;
}

std::array<double, 3> grouped_absdev_neon(const std::int8_t* geno,
                                          const double* y,
                                          const double* center,
                                          std::size_t n) {
    float64x2_t acc[3] = {vdupq_n_f64(0.0), vdupq_n_f64(0.0), vdupq_n_f64(0.0)};

    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const float64x2_t v = vld1q_f64(y + i);
        float64x2_t c = vdupq_n_f64(center[geno[i]]);
        c = vsetq_lane_f64(center[geno[i + 1]], c, 1);
        const float64x2_t z = vabsq_f64(vsubq_f64(v, c));
        for (int g = 0; g < 3; ++g)
            acc[g] = vaddq_f64(acc[g], masked(lane_mask(geno + i, g), z));
    }
    std::array<double, 3> out{vaddvq_f64(acc[0]), vaddvq_f64(acc[1]), vaddvq_f64(acc[2])};
    for (; i < n; ++i) {
        const int g = geno[i];
        const double d = y[i] - center[g];
        out[g] += d < 0.0 ? -d : d;
    }
    return out;
}

}  // namespace jls::kernels::detail

#endif  // JLS_HAVE_NEON
