#pragma once

// Test-side oracles and Monte-Carlo helpers. Everything here is independent
// of the library's evaluation paths (closed forms, std::erfc, textbook
// formulas) so it can arbitrate correctness.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <numeric>
#include <span>
#include <string>
#include <vector>

#include "jls/rng.hpp"
#include "jls/types.hpp"

namespace testsupport {

// Correlated null SNPs for gene-set experiments: each haplotype allele is
// copied from the previous SNP with probability rho, refreshed from
// Bernoulli(maf) otherwise.
inline std::vector<jls::GenotypeVector> ld_block(std::size_t n, int j, double maf,
                                                 double rho, std::uint64_t seed) {
    jls::rng::Xoshiro256pp gen(seed);
    std::vector<std::vector<std::int8_t>> hap1(j), hap2(j);
    for (int s = 0; s < j; ++s) {
        hap1[s].resize(n);
        hap2[s].resize(n);
    }
    for (std::size_t i = 0; i < n; ++i) {
        for (int s = 0; s < j; ++s) {
            const bool copy1 = s > 0 && jls::rng::uniform01(gen) < rho;
            const bool copy2 = s > 0 && jls::rng::uniform01(gen) < rho;
            hap1[s][i] = copy1 ? hap1[s - 1][i] : (jls::rng::uniform01(gen) < maf ? 1 : 0);
            hap2[s][i] = copy2 ? hap2[s - 1][i] : (jls::rng::uniform01(gen) < maf ? 1 : 0);
        }
    }
    std::vector<jls::GenotypeVector> out(j);
    for (int s = 0; s < j; ++s) {
        out[s].variant_id = "snp" + std::to_string(s);
        out[s].chrom = "1";
        out[s].codes.resize(n);
        for (std::size_t i = 0; i < n; ++i)
            out[s].codes[i] = static_cast<std::int8_t>(hap1[s][i] + hap2[s][i]);
    }
    return out;
}

// Student t survival for df = 4 in closed form.
inline double t4_sf(double t) {
    const double u = t / std::sqrt(t * t + 4.0);
    return 0.5 - 0.75 * (u - u * u * u / 3.0);
}

// Chi-square df = 4 survival in closed form.
inline double chi2_4_sf(double x) { return std::exp(-0.5 * x) * (1.0 + 0.5 * x); }

// Standard normal CDF via the libm error function.
inline double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

inline double mean(std::span<const double> xs) {
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

inline double variance(std::span<const double> xs) {
    const double m = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return acc / static_cast<double>(xs.size() - 1);
}

inline double pearson(std::span<const double> a, std::span<const double> b) {
    const double ma = mean(a), mb = mean(b);
    double sab = 0.0, saa = 0.0, sbb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        sab += (a[i] - ma) * (b[i] - mb);
        saa += (a[i] - ma) * (a[i] - ma);
        sbb += (b[i] - mb) * (b[i] - mb);
    }
    return sab / std::sqrt(saa * sbb);
}

// Kolmogorov-Smirnov distance of a sample against a CDF.
inline double ks_distance(std::vector<double> xs, const std::function<double(double)>& cdf) {
    std::sort(xs.begin(), xs.end());
    const double n = static_cast<double>(xs.size());
    double d = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double f = cdf(xs[i]);
        d = std::max(d, f - static_cast<double>(i) / n);
        d = std::max(d, static_cast<double>(i + 1) / n - f);
    }
    return d;
}

// Asymptotic Kolmogorov distribution tail (the KS test p-value).
inline double ks_pvalue(double d, std::size_t n) {
    const double sn = std::sqrt(static_cast<double>(n));
    const double lambda = (sn + 0.12 + 0.11 / sn) * d;
    double sum = 0.0;
    for (int k = 1; k <= 100; ++k) {
        const double term = 2.0 * std::pow(-1.0, k - 1) * std::exp(-2.0 * k * k * lambda * lambda);
        sum += term;
        if (std::fabs(term) < 1e-12) break;
    }
    return std::min(std::max(sum, 0.0), 1.0);
}

}  // namespace testsupport
