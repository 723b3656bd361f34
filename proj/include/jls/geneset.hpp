#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "jls/joint.hpp"
#include "jls/types.hpp"

// Multi-variant gene-set association: per-SNP JLS statistics aggregated by
// the sum statistic and evaluated by phenotype permutation. One shuffled
// phenotype per replicate is scored against every SNP of the set, which
// preserves inter-SNP LD.

namespace jls::geneset {

struct GeneSet {
    std::string set_id;
    std::string description;
    std::vector<std::string> variant_ids;  // unique, J >= 1
};

enum class SnpStatistic { fisher_w, minp_log };  // W_F or -2 ln(p_minP) per SNP

struct Config {
    joint::TestConfig tests;
    SnpStatistic statistic = SnpStatistic::fisher_w;
};

struct Result {
    std::string set_id;
    std::int64_t j_total = 0;     // SNPs scored
    std::int64_t j_used = 0;      // SNPs contributing to the sum
    std::int64_t j_degenerate = 0;
    double observed_sum = std::numeric_limits<double>::quiet_NaN();
    std::int64_t replicates = 0;
    std::int64_t replicates_used = 0;
    double empirical_p = std::numeric_limits<double>::quiet_NaN();
    bool high_degeneracy = false;
    std::vector<joint::JlsResult> per_snp;
};

// Sum over non-degenerate entries; throws if every entry is degenerate.
double sum_statistic(std::span<const joint::JlsResult> results, SnpStatistic stat);

// SNPs degenerate in the observed data are excluded from both the observed
// and the permuted sums.
Result permutation_test(std::span<const GenotypeVector* const> snps,
                        const PhenotypeVector& pheno,
                        const joint::PermutationPlan& plan, const Config& config);

}  // namespace jls::geneset
