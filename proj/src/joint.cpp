#include "jls/joint.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "jls/parallel.hpp"
#include "jls/prob.hpp"
#include "jls/rng.hpp"

namespace jls::joint {

Combined fisher_combine(double p_location, double p_scale) {
    Combined out;
    if (!std::isfinite(p_location) || !std::isfinite(p_scale)) return out;
    if (p_location < 0.0 || p_location > 1.0 || p_scale < 0.0 || p_scale > 1.0)
        throw std::domain_error("fisher_combine: p-values must lie in [0, 1]");
    if (p_location <= 0.0) {
        p_location = kPFloor;
        out.clamped = true;
    }
    if (p_scale <= 0.0) {
        p_scale = kPFloor;
        out.clamped = true;
    }
    out.statistic = -2.0 * std::log(p_location) - 2.0 * std::log(p_scale);
    out.p = prob::chi2_sf(out.statistic, 4.0);
    out.valid = true;
    return out;
}

Combined minp_combine(double p_location, double p_scale) {
    Combined out;
    if (!std::isfinite(p_location) || !std::isfinite(p_scale)) return out;
    if (p_location < 0.0 || p_location > 1.0 || p_scale < 0.0 || p_scale > 1.0)
        throw std::domain_error("minp_combine: p-values must lie in [0, 1]");
    const double w = std::min(p_location, p_scale);
    out.statistic = w;
    out.p = w * (2.0 - w);  // 1 - (1 - w)^2 without cancellation
    out.valid = true;
    return out;
}

JlsResult jls_single_variant(std::span<const std::int8_t> geno,
                             std::span<const double> y,
                             const TestConfig& config) {
    JlsResult r;
    r.location = config.location == LocationTest::ols ? assoc::ols_location(geno, y)
                                                      : assoc::anova_location(geno, y);
    r.scale = assoc::levene_scale(geno, y, config.scale);
    if (config.run_lrt) r.lrt = assoc::lrt_joint(geno, y, config.scale);
    r.n_used = static_cast<std::int64_t>(geno.size());
    if (r.location.ok() && r.scale.ok()) {
        r.fisher = fisher_combine(r.location.p, r.scale.p);
        r.minp = minp_combine(r.location.p, r.scale.p);
    }
    return r;
}

JlsResult jls_single_variant(const GenotypeVector& geno, const PhenotypeVector& pheno,
                             const TestConfig& config) {
    const assoc::CompleteCases cc = assoc::complete_cases(geno, pheno);
    JlsResult r = jls_single_variant(cc.geno, cc.y, config);
    r.variant_id = geno.variant_id;
    r.chrom = geno.chrom;
    return r;
}

double permutation_pvalue(double observed, std::span<const double> replicates,
                          PermConvention convention) {
    if (replicates.empty())
        throw std::invalid_argument("permutation_pvalue: no replicate statistics");
    const double k = static_cast<double>(replicates.size());
    std::int64_t count = 0;
    if (convention == PermConvention::paper_strict) {
        for (double rep : replicates) count += rep > observed;
        return static_cast<double>(count) / k;
    }
    for (double rep : replicates) count += rep >= observed;
    return static_cast<double>(count + 1) / (k + 1.0);
}

namespace {

struct ReplicateStats {
    double w_fisher = std::numeric_limits<double>::quiet_NaN();
    double w_minp = std::numeric_limits<double>::quiet_NaN();
    double lrt = std::numeric_limits<double>::quiet_NaN();
    bool valid = false;
    bool lrt_valid = false;
};

ReplicateStats score(std::span<const std::int8_t> geno, std::span<const double> y,
                     const TestConfig& config) {
    ReplicateStats s;
    const JlsResult r = jls_single_variant(geno, y, config);
    if (r.fisher.valid) {
        s.w_fisher = r.fisher.statistic;
        s.w_minp = r.minp.statistic;
        s.valid = true;
    }
    if (config.run_lrt && r.lrt.ok()) {
        s.lrt = r.lrt.statistic;
        s.lrt_valid = true;
    }
    return s;
}

}  // namespace

PermutationResult permute_and_rescore(std::span<const std::int8_t> geno,
                                      std::span<const double> y,
                                      const PermutationPlan& plan,
                                      const TestConfig& config) {
    if (plan.replicates < 1)
        throw std::invalid_argument("permute_and_rescore: need at least one replicate");

    PermutationResult out;
    const ReplicateStats observed = score(geno, y, config);
    if (!observed.valid && !observed.lrt_valid) return out;

    const std::int64_t k_total = plan.replicates;
    std::vector<ReplicateStats> reps(static_cast<std::size_t>(k_total));

    par::parallel_chunks(k_total, plan.threads, [&](std::int64_t begin, std::int64_t end, int) {
        std::vector<double> perm(y.begin(), y.end());
        for (std::int64_t k = begin; k < end; ++k) {
            std::copy(y.begin(), y.end(), perm.begin());
            rng::Xoshiro256pp gen(rng::mix64(plan.seed, static_cast<std::uint64_t>(k)));
            rng::shuffle(std::span<double>(perm), gen);
            reps[static_cast<std::size_t>(k)] = score(geno, perm, config);
        }
    });

    std::vector<double> fisher_stats, minp_neg, lrt_stats;
    fisher_stats.reserve(reps.size());
    minp_neg.reserve(reps.size());
    lrt_stats.reserve(reps.size());
    for (const auto& rep : reps) {
        if (rep.valid) {
            fisher_stats.push_back(rep.w_fisher);
            minp_neg.push_back(-rep.w_minp);  // smaller min-p is more extreme
        }
        if (rep.lrt_valid) lrt_stats.push_back(rep.lrt);
    }

    out.replicates_used = static_cast<std::int64_t>(fisher_stats.size());
    const std::int64_t degenerate = k_total - out.replicates_used;
    out.high_degeneracy = degenerate * 20 > k_total;  // >5%

    if (observed.valid && !fisher_stats.empty()) {
        out.p_fisher = permutation_pvalue(observed.w_fisher, fisher_stats, plan.convention);
        out.p_minp = permutation_pvalue(-observed.w_minp, minp_neg, plan.convention);
    }
    if (observed.lrt_valid && !lrt_stats.empty())
        out.p_lrt = permutation_pvalue(observed.lrt, lrt_stats, plan.convention);
    return out;
}

PermutationResult permute_and_rescore(const GenotypeVector& geno,
                                      const PhenotypeVector& pheno,
                                      const PermutationPlan& plan,
                                      const TestConfig& config) {
    if (geno.codes.size() != pheno.values.size())
        throw std::invalid_argument("permute_and_rescore: genotype and phenotype lengths differ");
    if (plan.replicates < 1)
        throw std::invalid_argument("permute_and_rescore: need at least one replicate");

    // Same universe convention as the gene-set engine: shuffle over
    // phenotype-complete samples, gather through the genotype mask.
    std::vector<double> y_base;
    std::vector<std::int8_t> codes;
    std::vector<std::uint32_t> gather;
    for (std::size_t i = 0; i < pheno.values.size(); ++i) {
        if (!std::isfinite(pheno.values[i])) continue;
        if (geno.codes[i] != kMissing) {
            codes.push_back(geno.codes[i]);
            gather.push_back(static_cast<std::uint32_t>(y_base.size()));
        }
        y_base.push_back(pheno.values[i]);
    }

    PermutationResult out;
    std::vector<double> y_obs(codes.size());
    for (std::size_t j = 0; j < gather.size(); ++j) y_obs[j] = y_base[gather[j]];
    const ReplicateStats observed = score(codes, y_obs, config);
    if (!observed.valid && !observed.lrt_valid) return out;

    const std::int64_t k_total = plan.replicates;
    std::vector<ReplicateStats> reps(static_cast<std::size_t>(k_total));
    par::parallel_chunks(k_total, plan.threads, [&](std::int64_t begin, std::int64_t end, int) {
        std::vector<double> perm(y_base.size());
        std::vector<double> sub(codes.size());
        for (std::int64_t k = begin; k < end; ++k) {
            std::copy(y_base.begin(), y_base.end(), perm.begin());
            rng::Xoshiro256pp gen(rng::mix64(plan.seed, static_cast<std::uint64_t>(k)));
            rng::shuffle(std::span<double>(perm), gen);
            for (std::size_t j = 0; j < gather.size(); ++j) sub[j] = perm[gather[j]];
            reps[static_cast<std::size_t>(k)] = score(codes, sub, config);
        }
    });

    std::vector<double> fisher_stats, minp_neg, lrt_stats;
    for (const auto& rep : reps) {
        if (rep.valid) {
            fisher_stats.push_back(rep.w_fisher);
            minp_neg.push_back(-rep.w_minp);
        }
        if (rep.lrt_valid) lrt_stats.push_back(rep.lrt);
    }
    out.replicates_used = static_cast<std::int64_t>(fisher_stats.size());
    out.high_degeneracy = (k_total - out.replicates_used) * 20 > k_total;
    if (observed.valid && !fisher_stats.empty()) {
        out.p_fisher = permutation_pvalue(observed.w_fisher, fisher_stats, plan.convention);
        out.p_minp = permutation_pvalue(-observed.w_minp, minp_neg, plan.convention);
    }
    if (observed.lrt_valid && !lrt_stats.empty())
        out.p_lrt = permutation_pvalue(observed.lrt, lrt_stats, plan.convention);
    return out;
}

}  // namespace jls::joint
