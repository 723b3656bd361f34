#pragma once

#include <span>
#include <vector>

#include "jls/types.hpp"

// Individual location-only and scale-only tests on (genotype, phenotype)
// pairs, plus the joint mean-variance LRT comparison baseline. The span
// overloads expect complete cases (codes 0/1/2, finite phenotype values);
// the GenotypeVector/PhenotypeVector overloads drop incomplete samples
// per variant first.

namespace jls::assoc {

enum class LeveneCenter { mean, median };

struct Options {
    LeveneCenter center = LeveneCenter::mean;
    // Groups smaller than this are left out of the scale test and the LRT
    // (not the location tests); if fewer than two groups remain the test
    // is degenerate.
    int min_group_size = 2;
};

// Slope t-test of the additive regression, two-sided p on N-2 df.
TestOutcome ols_location(std::span<const std::int8_t> geno,
                         std::span<const double> y);

// Genotypic one-way ANOVA, F on (k-1, N-k) df.
TestOutcome anova_location(std::span<const std::int8_t> geno,
                           std::span<const double> y);

// Levene's variance-heterogeneity test: one-way ANOVA on absolute
// deviations from the group center (mean by default, median for the
// Brown-Forsythe variant).
TestOutcome levene_scale(std::span<const std::int8_t> geno,
                         std::span<const double> y,
                         const Options& opt = {});

// Likelihood ratio test of equal means and variances against group-specific
// normal means and variances (MLE); chi-square on 2(k-1) df.
TestOutcome lrt_joint(std::span<const std::int8_t> geno,
                      std::span<const double> y,
                      const Options& opt = {});

// Complete-case wrappers.
TestOutcome ols_location_test(const GenotypeVector& geno, const PhenotypeVector& pheno);
TestOutcome anova_location_test(const GenotypeVector& geno, const PhenotypeVector& pheno);
TestOutcome levene_scale_test(const GenotypeVector& geno, const PhenotypeVector& pheno,
                              const Options& opt = {});
TestOutcome lrt_joint_test(const GenotypeVector& geno, const PhenotypeVector& pheno,
                           const Options& opt = {});

// Samples with a valid genotype call and a finite phenotype value.
struct CompleteCases {
    std::vector<std::int8_t> geno;
    std::vector<double> y;
};
CompleteCases complete_cases(const GenotypeVector& geno, const PhenotypeVector& pheno);

}  // namespace jls::assoc
