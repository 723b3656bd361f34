#include "jls/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace jls::kernels {

namespace {

bool backend_supported(Backend b) {
    switch (b) {
        case Backend::scalar:
            return true;
        case Backend::avx2:
#if defined(JLS_HAVE_AVX2)
            return __builtin_cpu_supports("avx2");
#else
            return false;
#endif
        case Backend::neon:
#if defined(JLS_HAVE_NEON)
            return true;
#else
            return false;
#endif
    }
    return false;
}

Backend detect_backend() {
    if (const char* env = std::getenv("JLS_KERNELS")) {
        if (std::strcmp(env, "scalar") == 0) return Backend::scalar;
        if (std::strcmp(env, "avx2") == 0 && backend_supported(Backend::avx2))
            return Backend::avx2;
        if (std::strcmp(env, "neon") == 0 && backend_supported(Backend::neon))
            return Backend::neon;
    }
    if (backend_supported(Backend::avx2)) return Backend::avx2;
    if (backend_supported(Backend::neon)) return Backend::neon;
    return Backend::scalar;
}

Backend& current_backend() {
    static Backend backend = detect_backend();
    return backend;
}

}  // namespace

const char* backend_name(Backend b) {
    switch (b) {
        case Backend::scalar: return "scalar";
        case Backend::avx2: return "avx2";
        case Backend::neon: return "neon";
    }
    return "?";
}

Backend active_backend() { return current_backend(); }

bool set_backend(Backend b) {
    if (!backend_supported(b)) return false;
    current_backend() = b;
    return true;
}

GroupMoments grouped_moments(std::span<const std::int8_t> geno,
                             std::span<const double> y) {
    const std::size_t n = geno.size();
    switch (current_backend()) {
#if defined(JLS_HAVE_AVX2)
        case Backend::avx2:
            return detail::grouped_moments_avx2(geno.data(), y.data(), n);
#endif
#if defined(JLS_HAVE_NEON)
        case Backend::neon:
            return detail::grouped_moments_neon(geno.data(), y.data(), n);
#endif
        default:
            return detail::grouped_moments_scalar(geno.data(), y.data(), n);
    }
}

std::array<double, 3> grouped_absdev(std::span<const std::int8_t> geno,
                                     std::span<const double> y,
                                     const std::array<double, 3>& center) {
    const std::size_t n = geno.size();
    switch (current_backend()) {
#if defined(JLS_HAVE_AVX2)
        case Backend::avx2:
            return detail::grouped_absdev_avx2(geno.data(), y.data(), center.data(), n);
#endif
#if defined(JLS_HAVE_NEON)
        case Backend::neon:
            return detail::grouped_absdev_neon(geno.data(), y.data(), center.data(), n);
#endif
        default:
            return detail::grouped_absdev_scalar(geno.data(), y.data(), center.data(), n);
    }
}

}  // namespace jls::kernels
