#pragma once

#include <cstdint>
#include <span>
#include <string>

#include "jls/assoc.hpp"
#include "jls/types.hpp"

// Joint location-scale combination of the individual tests: Fisher's method
// referenced to chi-square(4), minP referenced to Beta(1, 2), and generic
// phenotype-permutation p-values.

namespace jls::joint {

// p = 0 inputs to Fisher are clamped here before taking logs; component
// tests computed in upper-tail form only reach 0 by underflow.
inline constexpr double kPFloor = 1e-300;

struct Combined {
    double statistic = std::numeric_limits<double>::quiet_NaN();
    double p = std::numeric_limits<double>::quiet_NaN();
    bool valid = false;
    bool clamped = false;
};

// W_F = -2 ln p_L - 2 ln p_S, upper tail of chi-square with 4 df.
Combined fisher_combine(double p_location, double p_scale);

// W_M = min(p_L, p_S), p = 1 - (1 - W_M)^2.
Combined minp_combine(double p_location, double p_scale);

enum class LocationTest { ols, anova };

struct TestConfig {
    LocationTest location = LocationTest::ols;
    assoc::Options scale;  // Levene center + minimum group size (shared with the LRT)
    bool run_lrt = false;
};

struct JlsResult {
    std::string variant_id;
    std::string chrom;
    std::int64_t n_used = 0;
    TestOutcome location;
    TestOutcome scale;
    TestOutcome lrt;  // left degenerate when not requested
    Combined fisher;
    Combined minp;

    bool degenerate() const { return !(location.ok() && scale.ok()); }
};

JlsResult jls_single_variant(std::span<const std::int8_t> geno,
                             std::span<const double> y,
                             const TestConfig& config);
JlsResult jls_single_variant(const GenotypeVector& geno, const PhenotypeVector& pheno,
                             const TestConfig& config);

enum class PermConvention { add_one, paper_strict };

// add_one: (#{rep >= obs} + 1) / (K + 1); paper_strict: #{rep > obs} / K.
// Replicate statistics are oriented so that larger means more extreme.
double permutation_pvalue(double observed, std::span<const double> replicates,
                          PermConvention convention);

struct PermutationPlan {
    std::int64_t replicates = 1000;
    std::uint64_t seed = 0;
    PermConvention convention = PermConvention::add_one;
    int threads = 1;
};

struct PermutationResult {
    double p_fisher = std::numeric_limits<double>::quiet_NaN();
    double p_minp = std::numeric_limits<double>::quiet_NaN();
    double p_lrt = std::numeric_limits<double>::quiet_NaN();
    std::int64_t replicates_used = 0;  // non-degenerate replicates
    bool high_degeneracy = false;      // more than 5% of replicates degenerate
};

// Permutes the phenotype K times (replicate k is seeded from
// mix64(plan.seed, k), so results are independent of threading) and
// re-scores the joint statistics against the observed values. The span
// overload shuffles exactly the vector it receives (complete cases); the
// vector overload shuffles the phenotype-complete samples and gathers
// through the variant's missingness mask, matching the gene-set engine so
// a one-SNP set reduces to it exactly.
PermutationResult permute_and_rescore(std::span<const std::int8_t> geno,
                                      std::span<const double> y,
                                      const PermutationPlan& plan,
                                      const TestConfig& config);
PermutationResult permute_and_rescore(const GenotypeVector& geno,
                                      const PhenotypeVector& pheno,
                                      const PermutationPlan& plan,
                                      const TestConfig& config);

}  // namespace jls::joint
