#include "jls/kernels.hpp"

#include <cmath>

namespace jls::kernels::detail {

GroupMoments grouped_moments_scalar(const std::int8_t* geno, const double* y,
                                    std::size_t n) {
    GroupMoments m;
    for (std::size_t i = 0; i < n; ++i) {
        const int g = geno[i];
        const double v = y[i];
        ++m.count[g];
        m.sum[g] += v;
        m.sumsq[g] += v * v;
    }
    return m;
}

std::array<double, 3> grouped_absdev_scalar(const std::int8_t* geno,
                                            const double* y,
                                            const double* center,
                                            std::size_t n) {
    std::array<double, 3> acc{};
    for (std::size_t i = 0; i < n; ++i) {
        const int g = geno[i];
        acc[g] += std::fabs(y[i] - center[g]);
    }
    return acc;
}

}  // namespace jls::kernels::detail
