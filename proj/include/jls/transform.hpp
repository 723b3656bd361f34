#pragma once

#include <span>
#include <vector>

namespace jls {

// Rank-based inverse normal transform: z_i = Phi^-1((r_i - offset) /
// (m - 2*offset + 1)) over the m non-missing values, ties averaged,
// missing (NaN) entries preserved in place. The default offset 3/8 is the
// Blom convention; 0.5 gives the (r - 1/2)/m variant.
struct IntOptions {
    double offset = 0.375;
};

std::vector<double> inverse_normal_transform(std::span<const double> values,
                                             const IntOptions& opt = {});

}  // namespace jls
