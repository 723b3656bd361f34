#pragma once

#include <array>
#include <cstdint>
#include <span>

// Grouped-moment accumulation kernels: the arithmetic inner loop shared by
// every association test. One pass yields per-genotype-group counts, sums
// and sums of squares; a second pass yields absolute-deviation sums about
// given group centers (Levene). Scalar reference implementations plus SIMD
// variants selected at runtime; backends must agree to ~1e-12 relative.
//
// Genotype codes at this level are 0, 1 or 2 with no missing entries;
// complete-case filtering happens before the kernels run.

namespace jls::kernels {

struct GroupMoments {
    std::array<std::int64_t, 3> count{};
    std::array<double, 3> sum{};
    std::array<double, 3> sumsq{};
};

enum class Backend { scalar, avx2, neon };

const char* backend_name(Backend b);

// Backend chosen at startup: best supported SIMD level, overridable by the
// JLS_KERNELS environment variable (scalar | avx2 | neon).
Backend active_backend();

// Forces a backend; returns false (and leaves the state alone) if this
// build or CPU does not support it.
bool set_backend(Backend b);

GroupMoments grouped_moments(std::span<const std::int8_t> geno,
                             std::span<const double> y);

std::array<double, 3> grouped_absdev(std::span<const std::int8_t> geno,
                                     std::span<const double> y,
                                     const std::array<double, 3>& center);

namespace detail {

GroupMoments grouped_moments_scalar(const std::int8_t* geno, const double* y,
                                    std::size_t n);
std::array<double, 3> grouped_absdev_scalar(const std::int8_t* geno,
                                            const double* y,
                                            const double* center,
                                            std::size_t n);

#if defined(JLS_HAVE_AVX2)
GroupMoments grouped_moments_avx2(const std::int8_t* geno, const double* y,
                                  std::size_t n);
std::array<double, 3> grouped_absdev_avx2(const std::int8_t* geno,
                                          const double* y,
                                          const double* center,
                                          std::size_t n);
#endif

#if defined(JLS_HAVE_NEON)
GroupMoments grouped_moments_neon(const std::int8_t* geno, const double* y,
                                  std::size_t n);
std::array<double, 3> grouped_absdev_neon(const std::int8_t* geno,
                                          const double* y,
                                          const double* center,
                                          std::size_t n);
#endif

}  // namespace detail

}  // namespace jls::kernels
