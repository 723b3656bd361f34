#include "jls/geneset.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "jls/parallel.hpp"
#include "jls/rng.hpp"

namespace jls::geneset {

namespace {

double snp_statistic(const joint::JlsResult& r, SnpStatistic stat) {
    if (stat == SnpStatistic::fisher_w) return r.fisher.statistic;
    return -2.0 * std::log(std::max(r.minp.p, joint::kPFloor));
}

}  // namespace

double sum_statistic(std::span<const joint::JlsResult> results, SnpStatistic stat) {
    double sum = 0.0;
    std::int64_t used = 0;
    for (const auto& r : results) {
        if (r.degenerate()) continue;
        sum += snp_statistic(r, stat);
        ++used;
    }
    if (used == 0)
        throw std::runtime_error("gene-set sum statistic: every SNP is degenerate");
    return sum;
}

Result permutation_test(std::span<const GenotypeVector* const> snps,
                        const PhenotypeVector& pheno,
                        const joint::PermutationPlan& plan, const Config& config) {
    if (plan.replicates < 1)
        throw std::invalid_argument("gene-set permutation: need at least one replicate");
    if (snps.empty())
        throw std::invalid_argument("gene-set permutation: empty SNP list");

    // Analysis samples are those with an observed phenotype; genotype
    // missingness stays a fixed per-SNP mask over this set.
    std::vector<std::size_t> sample_pos;
    std::vector<double> y_base;
    for (std::size_t i = 0; i < pheno.values.size(); ++i) {
        if (!std::isfinite(pheno.values[i])) continue;
        sample_pos.push_back(i);
        y_base.push_back(pheno.values[i]);
    }

    struct SnpView {
        std::vector<std::int8_t> codes;      // complete-case genotype codes
        std::vector<std::uint32_t> gather;   // positions into the analysis vector
    };

    Result out;
    out.j_total = static_cast<std::int64_t>(snps.size());
    out.replicates = plan.replicates;

    std::vector<SnpView> views;
    views.reserve(snps.size());
    for (const GenotypeVector* snp : snps) {
        if (snp->codes.size() != pheno.values.size())
            throw std::invalid_argument("gene-set permutation: sample count mismatch for " +
                                        snp->variant_id);
        SnpView v;
        for (std::size_t j = 0; j < sample_pos.size(); ++j) {
            const std::int8_t code = snp->codes[sample_pos[j]];
            if (code == kMissing) continue;
            v.codes.push_back(code);
            v.gather.push_back(static_cast<std::uint32_t>(j));
        }
        views.push_back(std::move(v));
    }

    // Observed scores fix which SNPs participate in every sum.
    std::vector<double> y_sub;
    std::vector<char> included(snps.size(), 0);
    for (std::size_t s = 0; s < snps.size(); ++s) {
        const SnpView& v = views[s];
        y_sub.resize(v.codes.size());
        for (std::size_t j = 0; j < v.gather.size(); ++j) y_sub[j] = y_base[v.gather[j]];
        joint::JlsResult r = joint::jls_single_variant(v.codes, y_sub, config.tests);
        r.variant_id = snps[s]->variant_id;
        r.chrom = snps[s]->chrom;
        included[s] = !r.degenerate();
        out.per_snp.push_back(std::move(r));
    }
    out.j_used = std::count(included.begin(), included.end(), 1);
    out.j_degenerate = out.j_total - out.j_used;
    if (out.j_used == 0)
        throw std::runtime_error("gene-set permutation: every SNP is degenerate");

    double observed = 0.0;
    for (std::size_t s = 0; s < snps.size(); ++s)
        if (included[s]) observed += snp_statistic(out.per_snp[s], config.statistic);
    out.observed_sum = observed;

    const std::int64_t k_total = plan.replicates;
    std::vector<double> sums(static_cast<std::size_t>(k_total),
                             std::numeric_limits<double>::quiet_NaN());

    par::parallel_chunks(k_total, plan.threads, [&](std::int64_t begin, std::int64_t end, int) {
        std::vector<double> perm(y_base.size());
        std::vector<double> sub;
        for (std::int64_t k = begin; k < end; ++k) {
            std::copy(y_base.begin(), y_base.end(), perm.begin());
            rng::Xoshiro256pp gen(rng::mix64(plan.seed, static_cast<std::uint64_t>(k)));
            rng::shuffle(std::span<double>(perm), gen);
            double sum = 0.0;
            bool valid = true;
            for (std::size_t s = 0; s < views.size() && valid; ++s) {
                if (!included[s]) continue;
                const SnpView& v = views[s];
                sub.resize(v.codes.size());
                for (std::size_t j = 0; j < v.gather.size(); ++j) sub[j] = perm[v.gather[j]];
                const joint::JlsResult r = joint::jls_single_variant(v.codes, sub, config.tests);
                if (r.degenerate())
                    valid = false;
                else
                    sum += snp_statistic(r, config.statistic);
            }
            if (valid) sums[static_cast<std::size_t>(k)] = sum;
        }
    });

    std::vector<double> kept;
    kept.reserve(sums.size());
    for (double s : sums)
        if (std::isfinite(s)) kept.push_back(s);
    out.replicates_used = static_cast<std::int64_t>(kept.size());
    out.high_degeneracy = (k_total - out.replicates_used) * 20 > k_total;
    if (!kept.empty())
        out.empirical_p = joint::permutation_pvalue(observed, kept, plan.convention);
    return out;
}

}  // namespace jls::geneset
