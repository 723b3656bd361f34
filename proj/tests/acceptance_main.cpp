// Acceptance suite: one self-contained experiment per criterion, each
// printing PASS/FAIL lines with the measured value and the pinned band.
// Usage: jls_acceptance [1-8]   (no argument runs everything)

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <vector>

#include "jls/assoc.hpp"
#include "jls/geneset.hpp"
#include "jls/joint.hpp"
#include "jls/parallel.hpp"
#include "jls/prob.hpp"
#include "jls/rng.hpp"
#include "jls/simulate.hpp"
#include "jls/transform.hpp"
#include "support.hpp"

using namespace jls;

namespace {

int g_failures = 0;

void check(bool ok, const std::string& label, const std::string& detail) {
    std::printf("%s  %s: %s\n", ok ? "PASS" : "FAIL", label.c_str(), detail.c_str());
    if (!ok) ++g_failures;
}

void check_band(double value, double lo, double hi, const std::string& label) {
    char detail[160];
    std::snprintf(detail, sizeof detail, "value %.5f, band [%.5f, %.5f]", value, lo, hi);
    check(value >= lo && value <= hi, label, detail);
}

int threads() { return par::resolve_threads(0); }

double rate_of(const std::vector<sim::RateRow>& rows, const std::string& test,
               const std::string& mode, double alpha) {
    for (const auto& r : rows)
        if (r.test == test && r.mode == mode && r.alpha == alpha) return r.rate();
    return std::numeric_limits<double>::quiet_NaN();
}

// ---------------------------------------------------------------- 1

void criterion1() {
    std::puts("criterion 1: null calibration, MAF 0.3, n = 2000, alpha 0.05");
    const auto t0 = std::chrono::steady_clock::now();

    sim::ExperimentGrid grid;
    sim::SimulationSpec spec;
    spec.model = sim::Model::none;
    spec.n = 2000;
    spec.maf = 0.3;
    grid.cells.push_back(spec);
    grid.replicates = 20000;
    grid.alphas = {0.05};
    grid.config.run_lrt = false;
    grid.tests.lrt = false;
    grid.seed = 20250101;
    grid.threads = threads();
    const auto rows = sim::run_type1_grid(grid);

    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    for (const char* test : {"reg", "levene", "fisher", "minp"})
        check_band(rate_of(rows, test, "asymptotic", 0.05), 0.05 - 0.0046, 0.05 + 0.0046,
                   std::string("type-1 rate of ") + test);
    char detail[120];
    std::snprintf(detail, sizeof detail, "%.1f s (target: well under 2 minutes on 4 cores)",
                  elapsed);
    check(elapsed < 240.0, "runtime", detail);
}

// ---------------------------------------------------------------- 2

void criterion2() {
    std::puts("criterion 2: small-group LRT inflation, sizes (1882,116,2), alpha 0.005");
    sim::ExperimentGrid grid;
    sim::SimulationSpec spec;
    spec.model = sim::Model::none;
    spec.n = 2000;
    spec.sizes = {{1882, 116, 2}};
    grid.cells.push_back(spec);
    grid.replicates = 20000;
    grid.alphas = {0.005};
    grid.config.run_lrt = true;
    grid.seed = 20250202;
    grid.threads = threads();
    const auto rows = sim::run_type1_grid(grid);

    const double lrt = rate_of(rows, "lrt", "asymptotic", 0.005);
    const double fisher = rate_of(rows, "fisher", "asymptotic", 0.005);
    char detail[120];
    std::snprintf(detail, sizeof detail, "lrt rate %.5f (needs > 0.015)", lrt);
    check(lrt > 0.015, "LRT inflation", detail);
    std::snprintf(detail, sizeof detail, "fisher rate %.5f (needs < 0.012)", fisher);
    check(fisher < 0.012, "JLS-Fisher stays calibrated", detail);
}

// ---------------------------------------------------------------- 3

void criterion3() {
    std::puts("criterion 3: power, model (i): bG=0.01 bE1=0.3 bGE1=0.6, n=2000, alpha 5e-8");
    sim::ExperimentGrid grid;
    sim::SimulationSpec spec;
    spec.model = sim::Model::i;
    spec.n = 2000;
    spec.maf = 0.3;
    spec.beta_g = 0.01;
    spec.beta_e1 = 0.3;
    spec.beta_ge1 = 0.6;
    spec.f1 = 0.3;
    grid.cells.push_back(spec);
    grid.replicates = 500;
    grid.alphas = {5e-8};
    grid.config.run_lrt = false;
    grid.tests.lrt = false;
    grid.seed = 20250303;
    grid.threads = threads();
    const auto rows = sim::run_power_grid(grid);

    check_band(rate_of(rows, "reg", "asymptotic", 5e-8), 0.19, 0.31, "location power");
    check_band(rate_of(rows, "levene", "asymptotic", 5e-8), 0.01, 0.09, "scale power");
    check_band(rate_of(rows, "minp", "asymptotic", 5e-8), 0.18, 0.30, "JLS-minP power");
    check_band(rate_of(rows, "fisher", "asymptotic", 5e-8), 0.59, 0.73, "JLS-Fisher power");
}

// ---------------------------------------------------------------- 4

void criterion4() {
    std::puts("criterion 4: power, model (iii) row 1: f1=0.05 bGE1=2, n=4000, alpha 5e-8");
    sim::ExperimentGrid grid;
    sim::SimulationSpec spec;
    spec.model = sim::Model::iii;
    spec.n = 4000;
    spec.maf = 0.3;
    spec.beta_ge1 = 2.0;
    spec.f1 = 0.05;
    grid.cells.push_back(spec);
    grid.replicates = 500;
    grid.alphas = {5e-8};
    grid.config.run_lrt = true;
    grid.seed = 20250404;
    grid.threads = threads();
    const auto rows = sim::run_power_grid(grid);

    // 3 binomial SE at R=500 around the golden values.
    check_band(rate_of(rows, "reg", "asymptotic", 5e-8), 0.0, 0.010 + 0.01335, "Reg power");
    check_band(rate_of(rows, "levene", "asymptotic", 5e-8), 0.110 - 0.04198, 0.110 + 0.04198,
               "Levene power");
    check_band(rate_of(rows, "fisher", "asymptotic", 5e-8), 0.406 - 0.06589, 0.406 + 0.06589,
               "JLS-Fisher power");
    check_band(rate_of(rows, "minp", "asymptotic", 5e-8), 0.090 - 0.03839, 0.090 + 0.03839,
               "JLS-minP power");
    check_band(rate_of(rows, "lrt", "asymptotic", 5e-8), 0.996 - 0.05, 1.0, "LRT power");
}

// ---------------------------------------------------------------- 5

void criterion5() {
    std::puts("criterion 5: asymptotic vs permutation power gap, n=1000, alpha 0.01");
    sim::ExperimentGrid grid;
    sim::SimulationSpec spec;
    spec.model = sim::Model::iii;
    spec.n = 1000;
    spec.maf = 0.3;
    spec.beta_ge1 = 2.0;
    spec.f1 = 0.05;
    grid.cells.push_back(spec);
    grid.replicates = 200;
    grid.alphas = {0.01};
    grid.config.run_lrt = true;
    grid.perm_replicates = 2000;
    grid.seed = 20250505;
    grid.threads = threads();
    const auto rows = sim::run_power_grid(grid);

    const double lrt_gap = rate_of(rows, "lrt", "asymptotic", 0.01) -
                           rate_of(rows, "lrt", "permutation", 0.01);
    const double fisher_gap = rate_of(rows, "fisher", "asymptotic", 0.01) -
                              rate_of(rows, "fisher", "permutation", 0.01);
    char detail[200];
    std::snprintf(detail, sizeof detail,
                  "asym %.3f, perm %.3f, gap %.3f (needs > 0.15)",
                  rate_of(rows, "lrt", "asymptotic", 0.01),
                  rate_of(rows, "lrt", "permutation", 0.01), lrt_gap);
    check(lrt_gap > 0.15, "LRT anticonservative gap", detail);
    std::snprintf(detail, sizeof detail,
                  "asym %.3f, perm %.3f, gap %.3f (needs < 0.08)",
                  rate_of(rows, "fisher", "asymptotic", 0.01),
                  rate_of(rows, "fisher", "permutation", 0.01), fisher_gap);
    check(fisher_gap < 0.08, "JLS-Fisher robustness gap", detail);
}

// ---------------------------------------------------------------- 6

void criterion6() {
    std::puts("criterion 6: independence suite, 10000 null datasets, n=2000, MAF 0.3");
    const std::int64_t datasets = 10000;
    std::vector<double> wf(datasets), wm(datasets), l2l(datasets), l2s(datasets);

    par::parallel_chunks(datasets, threads(), [&](std::int64_t b, std::int64_t e, int) {
        joint::TestConfig config;
        for (std::int64_t d = b; d < e; ++d) {
            sim::SimulationSpec spec;
            spec.model = sim::Model::none;
            spec.n = 2000;
            spec.maf = 0.3;
            spec.seed = rng::mix64(20250606, static_cast<std::uint64_t>(d));
            const sim::Dataset data = sim::simulate_dataset(spec);
            const joint::JlsResult r = joint::jls_single_variant(data.geno, data.y, config);
            wf[d] = r.fisher.statistic;
            wm[d] = r.minp.statistic;
            l2l[d] = -2.0 * std::log(r.location.p);
            l2s[d] = -2.0 * std::log(r.scale.p);
        }
    });

    const double d_wf = testsupport::ks_distance(
        wf, [](double x) { return 1.0 - testsupport::chi2_4_sf(x); });
    const double d_wm =
        testsupport::ks_distance(wm, [](double w) { return w * (2.0 - w); });
    const double corr = testsupport::pearson(l2l, l2s);

    char detail[120];
    std::snprintf(detail, sizeof detail, "KS distance %.5f (needs < 0.015)", d_wf);
    check(d_wf < 0.015, "W_F against chi-square(4)", detail);
    std::snprintf(detail, sizeof detail, "|corr| %.5f (needs < 0.03)", std::fabs(corr));
    check(std::fabs(corr) < 0.03, "independence of -2ln(p_L) and -2ln(p_S)", detail);
    std::snprintf(detail, sizeof detail, "KS distance %.5f (needs < 0.015)", d_wm);
    check(d_wm < 0.015, "W_M against Beta(1,2)", detail);
}

// ---------------------------------------------------------------- 7

void criterion7() {
    std::puts("criterion 7: gene-set validity, 500 null sets, n=500, J=10, K=999");
    const int datasets = 500;
    std::vector<double> ps(datasets);

    par::parallel_chunks(datasets, threads(), [&](std::int64_t b, std::int64_t e, int) {
        for (std::int64_t d = b; d < e; ++d) {
            const auto snps = testsupport::ld_block(
                500, 10, 0.3, 0.7, rng::mix64(20250707, static_cast<std::uint64_t>(d)));
            PhenotypeVector pheno;
            pheno.values.resize(500);
            rng::Xoshiro256pp gen(rng::mix64(20250708, static_cast<std::uint64_t>(d)));
            rng::fill_normal(pheno.values, gen);

            std::vector<const GenotypeVector*> ptrs;
            for (const auto& s : snps) ptrs.push_back(&s);
            joint::PermutationPlan plan;
            plan.replicates = 999;
            plan.seed = rng::mix64(20250709, static_cast<std::uint64_t>(d));
            plan.threads = 1;
            geneset::Config cfg;
            ps[d] = geneset::permutation_test(ptrs, pheno, plan, cfg).empirical_p;
        }
    });

    const double d_unif = testsupport::ks_distance(ps, [](double x) { return x; });
    const double pval = testsupport::ks_pvalue(d_unif, ps.size());
    char detail[120];
    std::snprintf(detail, sizeof detail, "KS uniformity p %.4f (needs > 0.01)", pval);
    check(pval > 0.01, "empirical p uniform under the null", detail);

    // Determinism: same seed, different worker counts.
    const auto snps = testsupport::ld_block(500, 10, 0.3, 0.7, 4711);
    PhenotypeVector pheno;
    pheno.values.resize(500);
    rng::Xoshiro256pp gen(4712);
    rng::fill_normal(pheno.values, gen);
    std::vector<const GenotypeVector*> ptrs;
    for (const auto& s : snps) ptrs.push_back(&s);
    joint::PermutationPlan plan;
    plan.replicates = 999;
    plan.seed = 4713;
    geneset::Config cfg;
    plan.threads = 1;
    const double p1 = geneset::permutation_test(ptrs, pheno, plan, cfg).empirical_p;
    plan.threads = 3;
    const double p3 = geneset::permutation_test(ptrs, pheno, plan, cfg).empirical_p;
    char det2[120];
    std::snprintf(det2, sizeof det2, "p(1 thread) %.6f vs p(3 threads) %.6f", p1, p3);
    check(p1 == p3, "worker-count determinism", det2);
}

// ---------------------------------------------------------------- 8

void criterion8() {
    std::puts("criterion 8: numeric oracle suite");

    // chi-square(4) closed form on [0, 80]
    double worst = 0.0;
    for (double x = 0.0; x <= 80.0; x += 0.003125) {
        const double ref = testsupport::chi2_4_sf(x);
        worst = std::max(worst, std::fabs(prob::chi2_sf(x, 4.0) - ref) / std::max(ref, 1e-300));
    }
    char detail[160];
    std::snprintf(detail, sizeof detail, "max relative error %.3e (needs <= 1e-12)", worst);
    check(worst <= 1e-12, "chi2_sf(.,4) closed form", detail);

    // f/t consistency identity
    rng::Xoshiro256pp gen(808);
    worst = 0.0;
    for (int i = 0; i < 2000; ++i) {
        const double t = 10.0 * (rng::uniform01(gen) - 0.5);
        const double df = 0.5 + 50.0 * rng::uniform01(gen);
        worst = std::max(worst, std::fabs(prob::f_sf(t * t, 1.0, df) -
                                          2.0 * prob::student_t_sf(std::fabs(t), df)));
    }
    std::snprintf(detail, sizeof detail, "max abs deviation %.3e (needs <= 1e-10)", worst);
    check(worst <= 1e-10, "f_sf/t_sf consistency", detail);

    // Derived constants recomputed by their stated oracles.
    auto close = [](double a, double b, double tol) { return std::fabs(a - b) <= tol; };

    check(close(prob::ln_gamma(0.5), 0.5 * std::log(M_PI), 1e-12), "ln_gamma(1/2) = ln sqrt(pi)",
          "closed form");
    check(close(prob::ln_gamma(5.0), std::log(24.0), 1e-12), "ln_gamma(5) = ln 24", "closed form");
    check(close(prob::reg_gamma_upper(1.0, 1.0), std::exp(-1.0), 1e-13), "Q(1,1) = e^-1",
          "closed form");
    check(close(prob::reg_gamma_upper(2.0, 2.0), 3.0 * std::exp(-2.0), 1e-13), "Q(2,2) = 3 e^-2",
          "closed form");
    check(close(prob::reg_beta(1.0, 2.0, 0.1), 0.19, 1e-13), "I_0.1(1,2) = 0.19", "closed form");
    check(close(prob::chi2_sf(9.4877, 4.0), 0.0500, 1e-4), "chi2 0.95 quantile at df 4",
          "survival of 9.4877 ~ 0.05");
    check(close(prob::student_t_sf(1.0, 1.0), 0.25, 1e-13), "t_sf(1,1) Cauchy closed form",
          "0.5 - atan(1)/pi");
    const double t_hand = 1.0 / std::sqrt(0.375 / 4.0);
    check(close(prob::student_t_sf(t_hand, 4.0), testsupport::t4_sf(t_hand), 1e-13),
          "t_sf(3.26599,4) df-4 antiderivative", "0.5 - 0.75(u - u^3/3)");
    check(close(prob::f_sf(0.8, 1.0, 4.0), 2.0 * testsupport::t4_sf(std::sqrt(0.8)), 1e-13),
          "f_sf(0.8,1,4) via t relation", "2 t_sf(sqrt(0.8), 4)");
    check(close(prob::normal_quantile(0.975), 1.959963984540054, 1e-9),
          "normal quantile 0.975", "1.9599640");

    // Worked data example: the composed single-variant result.
    const std::vector<std::int8_t> g{0, 0, 1, 1, 2, 2};
    const std::vector<double> y{0, 1, 1, 2, 2, 3};
    joint::TestConfig config;
    const joint::JlsResult r = joint::jls_single_variant(g, y, config);
    const double p_loc_oracle = 2.0 * testsupport::t4_sf(t_hand);
    check(close(r.location.p, p_loc_oracle, 1e-12), "worked example location p",
          "hand OLS + df-4 closed form");
    check(close(r.scale.p, 1.0, 0.0), "worked example scale p = 1", "all |dev| equal");
    const double wf_oracle = -2.0 * std::log(p_loc_oracle);
    check(close(r.fisher.statistic, wf_oracle, 1e-10), "worked example W_F", "-2 ln p_L");
    check(close(r.fisher.p, testsupport::chi2_4_sf(wf_oracle), 1e-12), "worked example p_fisher",
          "chi-square(4) closed form");
    check(close(r.minp.p, p_loc_oracle * (2.0 - p_loc_oracle), 1e-12), "worked example p_minP",
          "Beta(1,2) closed form");

    // Inverse normal transform worked example.
    const auto z = inverse_normal_transform(std::vector<double>{5, 1, 9});
    check(close(z[0], 0.0, 1e-12) && close(z[1], -0.8694237732888861, 1e-9) &&
              close(z[2], 0.8694237732888861, 1e-9),
          "INT worked example", "Blom offsets + normal quantile");
}

}  // namespace

int main(int argc, char** argv) {
    const int which = argc > 1 ? std::atoi(argv[1]) : 0;
    using Fn = void (*)();
    const Fn criteria[] = {criterion1, criterion2, criterion3, criterion4,
                           criterion5, criterion6, criterion7, criterion8};
    if (which < 0 || which > 8) {
        std::fprintf(stderr, "usage: %s [1-8]\n", argv[0]);
        return 1;
    }
    if (which == 0) {
        for (Fn fn : criteria) fn();
    } else {
        criteria[which - 1]();
    }
    if (g_failures > 0) {
        std::printf("ACCEPTANCE: %d check(s) failed\n", g_failures);
        return 1;
    }
    std::puts("ACCEPTANCE: all checks passed");
    return 0;
}
