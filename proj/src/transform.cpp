#include "jls/transform.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "jls/prob.hpp"

namespace jls {

std::vector<double> inverse_normal_transform(std::span<const double> values,
                                             const IntOptions& opt) {
    if (!(opt.offset >= 0.0 && opt.offset < 1.0))
        throw std::invalid_argument("inverse_normal_transform: offset must lie in [0, 1)");

    std::vector<std::size_t> idx;
    idx.reserve(values.size());
    for (std::size_t i = 0; i < values.size(); ++i)
        if (std::isfinite(values[i])) idx.push_back(i);

    const std::size_t m = idx.size();
    if (m < 2)
        throw std::invalid_argument("inverse_normal_transform: need at least two values");

    std::sort(idx.begin(), idx.end(),
              [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
    if (values[idx.front()] == values[idx.back()])
        throw std::invalid_argument("inverse_normal_transform: all values are tied");

    std::vector<double> out(values.begin(), values.end());
    const double denom = static_cast<double>(m) - 2.0 * opt.offset + 1.0;

    // Walk runs of ties; every member of a run gets the average rank.
    std::size_t i = 0;
    while (i < m) {
        std::size_t j = i;
        while (j + 1 < m && values[idx[j + 1]] == values[idx[i]]) ++j;
        const double avg_rank = 0.5 * static_cast<double>(i + j) + 1.0;  // 1-based
        const double z = prob::normal_quantile((avg_rank - opt.offset) / denom);
        for (std::size_t k = i; k <= j; ++k) out[idx[k]] = z;
        i = j + 1;
    }
    return out;
}

}  // namespace jls
