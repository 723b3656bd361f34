#include "jls/kernels.hpp"

#if defined(JLS_HAVE_AVX2)

#include <immintrin.h>

#include <cstring>

// Four doubles per iteration. Genotype codes are widened to 64-bit lane
// masks (g == k) and used to gate masked accumulation into per-group sums,
// so the loop stays branch-free over the sample vector.

namespace jls::kernels::detail {

namespace {

inline __m128i load_codes(const std::int8_t* geno) {
    int packed;
    std::memcpy(&packed, geno, sizeof packed);
    return _mm_cvtepi8_epi32(_mm_cvtsi32_si128(packed));
}

inline __m256d lane_mask(__m128i codes32, int group) {
    const __m128i eq = _mm_cmpeq_epi32(codes32, _mm_set1_epi32(group));
    return _mm256_castsi256_pd(_mm256_cvtepi32_epi64(eq));
}

inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d pair = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(pair, _mm_unpackhi_pd(pair, pair)));
}

}  // namespace

GroupMoments grouped_moments_avx2(const std::int8_t* geno, const double* y,
                                  std::size_t n) {
    GroupMoments m;
    __m256d sum[3] = {_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd()};
    __m256d sumsq[3] = {_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd()};
    std::int64_t count[3] = {0, 0, 0};

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m128i codes32 = load_codes(geno + i);
        const __m256d v = _mm256_loadu_pd(y + i);
        const __m256d v2 = _mm256_mul_pd(v, v);
        for (int g = 0; g < 3; ++g) {
            const __m256d mask = lane_mask(codes32, g);
            sum[g] = _mm256_add_pd(sum[g], _mm256_and_pd(mask, v));
            sumsq[g] = _mm256_add_pd(sumsq[g], _mm256_and_pd(mask, v2));
            count[g] += __builtin_popcount(static_cast<unsigned>(_mm256_movemask_pd(mask)));
        }
    }
    for (int g = 0; g < 3; ++g) {
        m.sum[g] = hsum(sum[g]);
        m.sumsq[g] = hsum(sumsq[g]);
        m.count[g] = count[g];
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

std::array<double, 3> grouped_absdev_avx2(const std::int8_t* geno,
                                          const double* y,
                                          const double* center,
                                          std::size_t n) {
    const __m256d abs_mask = _mm256_castsi256_pd(_mm256_set1_epi64x(0x7fffffffffffffffLL));
    const __m256d c0 = _mm256_set1_pd(center[0]);
    const __m256d c1 = _mm256_set1_pd(center[1]);
    const __m256d c2 = _mm256_set1_pd(center[2]);
    __m256d acc[3] = {_mm256_setzero_pd(), _mm256_setzero_pd(), _mm256_setzero_pd()};

    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m128i codes32 = load_codes(geno + i);
        const __m256d m0 = lane_mask(codes32, 0);
        const __m256d m1 = lane_mask(codes32, 1);
        const __m256d m2 = lane_mask(codes32, 2);
        const __m256d c = _mm256_or_pd(_mm256_or_pd(_mm256_and_pd(m0, c0), _mm256_and_pd(m1, c1)),
                                       _mm256_and_pd(m2, c2));
        const __m256d z = _mm256_and_pd(abs_mask, _mm256_sub_pd(_mm256_loadu_pd(y + i), c));
        acc[0] = _mm256_add_pd(acc[0], _mm256_and_pd(m0, z));
        acc[1] = _mm256_add_pd(acc[1], _mm256_and_pd(m1, z));
        acc[2] = _mm256_add_pd(acc[2], _mm256_and_pd(m2, z));
    }
    std::array<double, 3> out{hsum(acc[0]), hsum(acc[1]), hsum(acc[2])};
    for (; i < n; ++i) {
        const int g = geno[i];
        const double d = y[i] - center[g];
        out[g] += d < 0.0 ? -d : d;
    }
    return out;
}

}  // namespace jls::kernels::detail

#endif  // JLS_HAVE_AVX2
